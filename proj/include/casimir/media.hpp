#pragma once

// Electromagnetic response on the imaginary-frequency axis.
//
// Units are natural (hbar = c = eps0 = mu0 = 1); kappa is an inverse length.

#include <span>
#include <string>
#include <variant>
#include <vector>

namespace casimir {

enum class ModelKind { constant, drude, lorentz_oscillator, radial_profile, tabulated };

struct ConstantModel {
    double eps = 1.0;
};

/// eps(i kappa) = 1 + wp^2 / (kappa (kappa + gamma))
struct DrudeModel {
    double plasma_frequency = 0.0;
    double damping = 0.0;
};

/// eps(i kappa) = 1 + (eps_static - 1) / (1 + kappa^2 / w0^2)
struct LorentzModel {
    double eps_static = 1.0;
    double resonance = 1.0;
};

/// User-supplied eps(i kappa) samples, interpolated linearly in (log kappa, log eps)
/// and held constant beyond the first and last sample.
struct TabulatedModel {
    std::vector<double> kappa;
    std::vector<double> eps;
};

/// Non-dispersive radially varying permittivity on [0, support_radius()].
///
/// Node k covers (radii[k-1], radii[k]]. With piecewise_constant each node is a
/// layer of permittivity eps[k]; with piecewise_linear eps is interpolated
/// between (0, eps[0]) and the nodes, i.e. radii[0] must then be 0.
struct RadialProfile {
    enum class Interpolation { piecewise_constant, piecewise_linear };

    std::vector<double> radii;
    std::vector<double> eps;
    Interpolation interpolation = Interpolation::piecewise_constant;

    double support_radius() const { return radii.back(); }
    /// Value at r, clamped to the surface value for r beyond the support.
    double value(double r) const;
    /// Radii where the profile is not smooth (layer interfaces), excluding 0 and the surface.
    std::vector<double> breakpoints() const;
    double min_eps() const;
    double max_eps() const;
};

class ResponseModel {
  public:
    using Spec = std::variant<ConstantModel, DrudeModel, LorentzModel, RadialProfile, TabulatedModel>;

    ResponseModel() = default;

    static ResponseModel constant(double eps, double mu = 1.0);
    static ResponseModel drude(double plasma_frequency, double damping, double mu = 1.0);
    static ResponseModel lorentz(double eps_static, double resonance, double mu = 1.0);
    static ResponseModel tabulated(std::vector<double> kappa, std::vector<double> eps, double mu = 1.0);
    /// Concentric layers; outer_radii increasing, the last one is the sphere surface.
    static ResponseModel layered(std::vector<double> outer_radii, std::vector<double> eps);
    /// eps varies linearly from eps_center at r = 0 to eps_surface at r = radius.
    static ResponseModel linear_profile(double radius, double eps_center, double eps_surface);

    ModelKind kind() const;
    const Spec& spec() const { return spec_; }
    /// Constant permeability mu(i kappa); 1 for nonmagnetic media.
    double mu() const { return mu_; }
    bool homogeneous() const { return kind() != ModelKind::radial_profile; }
    const RadialProfile* profile() const { return std::get_if<RadialProfile>(&spec_); }

    std::string kind_name() const;
    /// Compact "name=value;..." rendering used in CSV rows.
    std::string params_string() const;

  private:
    ResponseModel(Spec spec, double mu);
    Spec spec_ = ConstantModel{};
    double mu_ = 1.0;
};

/// eps(i kappa). For radial profiles this is the surface value.
double permittivity_at(const ResponseModel& model, double kappa);

/// eps(i kappa, r) for a radial profile, r in [0, support radius].
double permittivity_profile_at(const ResponseModel& model, double kappa, double r);

enum class Sign { plus, minus, undefined };

int sign_to_int(Sign s);
Sign sign_product(Sign a, Sign b);
Sign flip(Sign s);

struct SignWitness {
    double kappa;
    double r;
};

/// Sign of the scattering potential of one body relative to the medium, certified on a grid.
struct SignClass {
    Sign value = Sign::undefined;
    std::vector<SignWitness> witnesses;
};

struct SignGrid {
    std::vector<double> kappa;
    std::vector<double> r;
};

/// 64 log-spaced kappa in [1e-3, 1e3] / (r2 - r1); 32 uniform radii per profile layer
/// (a single r = 0 point for homogeneous bodies).
SignGrid default_sign_grid(const ResponseModel& body, double r1, double r2);

/// plus when eps_body > eps_medium and mu_body <= mu_medium at every grid point,
/// minus for the reversed ordering, undefined otherwise (including any equality of eps).
SignClass classify_sign(const ResponseModel& body, const ResponseModel& medium,
                        std::span<const double> kappa_grid, std::span<const double> r_grid);

}  // namespace casimir
