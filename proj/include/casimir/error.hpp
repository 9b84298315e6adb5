#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace casimir {

/// Argument outside the mathematical domain of an operation (e.g. kappa <= 0).
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Request beyond an implementation limit (e.g. Bessel order above the cap).
class CapabilityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A truncation, quadrature, extrapolation or ODE loop failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
  public:
    explicit ConvergenceError(const std::string& what, std::optional<double> last_radius = {})
        : std::runtime_error(what), last_radius_(last_radius) {}

    /// Last radius accepted by the variable-phase integrator, when applicable.
    std::optional<double> last_radius() const { return last_radius_; }

  private:
    std::optional<double> last_radius_;
};

/// A round-trip mode product left the open unit interval.
class ContractionError : public std::runtime_error {
  public:
    ContractionError(const std::string& what, double product)
        : std::runtime_error(what), product_(product) {}
    double product() const { return product_; }

  private:
    double product_;
};

/// The two pressure routes disagree beyond the cross-validation threshold.
class CrossValidationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Sign class of the pair is undefined and the caller did not override it.
class UndefinedSignError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Configuration problems; carries every message found, not only the first.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(std::vector<std::string> messages)
        : std::runtime_error(join(messages)), messages_(std::move(messages)) {}

    const std::vector<std::string>& messages() const { return messages_; }

  private:
    static std::string join(const std::vector<std::string>& m) {
        std::string out;
        for (const auto& s : m) {
            if (!out.empty()) out += "\n";
            out += s;
        }
        return out;
    }
    std::vector<std::string> messages_;
};

}  // namespace casimir
