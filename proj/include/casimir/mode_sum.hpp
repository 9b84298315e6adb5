#pragma once

// Tabulation of the mode summands (2l+1) ln(1 - A_l B_l) over a set of imaginary
// frequencies, l = 1..l_max and both polarisations, together with their r1-slopes.
//
// Two implementations share one contract:
//   mode_table            OpenMP over frequency nodes; one Bessel ladder per argument.
//   mode_table_reference  serial; every entry goes through the per-mode public API
//                         (mie_exterior, mie_interior_cavity, variable_phase_T,
//                         t_radius_derivative). Kept as the test oracle for the fast path.
// Entries are written to fixed slots, so the table does not depend on the thread count.

#include <cstddef>
#include <vector>

#include "casimir/media.hpp"
#include "casimir/scattering.hpp"

namespace casimir {

struct ModeSumInput {
    double r1 = 0.0;
    double r2 = 0.0;
    const ResponseModel* sphere = nullptr;
    const ResponseModel* wall = nullptr;
    const ResponseModel* gap = nullptr;
    std::vector<double> kappa;
    int l_max = 1;
    bool slopes = false;
    VariablePhaseOptions vp;
};

class ModeTable {
  public:
    ModeTable() = default;
    ModeTable(std::size_t nodes, int l_max, bool slopes);

    std::size_t nodes() const { return nodes_; }
    int l_max() const { return l_max_; }
    bool has_slopes() const { return !slope_.empty(); }

    double& value(std::size_t node, int l, Polarization p) { return value_[index(node, l, p)]; }
    double value(std::size_t node, int l, Polarization p) const { return value_[index(node, l, p)]; }
    /// d/dr1 of the summand (surface dilation of the sphere, r2 fixed).
    double& slope(std::size_t node, int l, Polarization p) { return slope_[index(node, l, p)]; }
    double slope(std::size_t node, int l, Polarization p) const { return slope_[index(node, l, p)]; }
    /// First-order term -(2l+1) A B of the logarithm.
    double& first_order(std::size_t node, int l, Polarization p) { return first_order_[index(node, l, p)]; }
    double first_order(std::size_t node, int l, Polarization p) const { return first_order_[index(node, l, p)]; }

    /// Largest |A B| encountered.
    double max_product = 0.0;

  private:
    std::size_t index(std::size_t node, int l, Polarization p) const {
        return (node * static_cast<std::size_t>(l_max_) + static_cast<std::size_t>(l - 1)) * 2 +
               (p == Polarization::TE ? 0 : 1);
    }
    std::size_t nodes_ = 0;
    int l_max_ = 0;
    std::vector<double> value_, slope_, first_order_;
};

ModeTable mode_table(const ModeSumInput& in);
ModeTable mode_table_reference(const ModeSumInput& in);

namespace detail {

/// Beyond this 2 xi (r2 - r1) every product underflows and the node contributes nothing.
inline constexpr double kScreeningExponent = 1400.0;

}  // namespace detail

}  // namespace casimir
