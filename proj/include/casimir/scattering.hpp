#pragma once

// Per-mode scattering amplitudes on the imaginary-frequency axis for a sphere
// (radius r1) and a spherical cavity wall (inner radius r2) separated by a
// homogeneous medium of permittivity eps_M, wavenumber xi = kappa sqrt(eps_M).
//
// Normalisation. Outside the sphere the radial function of mode (l, P) is
// i_l(xi r) + A k_l(xi r); inside the cavity it is k_l(xi r) + B i_l(xi r). For TE
// the radial function is that of E, for TM that of H. The published amplitudes are
//
//     T1 = sigma_P A / xi,     T2 = sigma_P xi B,     sigma_TE = -1, sigma_TM = +1,
//
// so that s_i T_i > 0 for a body of sign class s_i and the round-trip product that
// enters the mode summand is T1 T2 = A B, with no extra mode-dependent factor.
// T1 is the normalisation in which the surface-derivative formula of
// t_radius_derivative holds.
//
// Both A and B span hundreds of decades across (l, kappa r); they are held as
// sign plus log-magnitude. The O(1) "shape factors" F_A = A k_l(x)/i_l(x) and
// F_B = B i_l(y)/k_l(y) carry all the material dependence.

#include <cmath>
#include <limits>

#include "casimir/media.hpp"
#include "casimir/specfun.hpp"

namespace casimir {

enum class Polarization { TE, TM };

struct Mode {
    int l = 1;
    Polarization pol = Polarization::TE;
};

const char* polarization_name(Polarization p);

/// Real number as sign * exp(log_abs); sign == 0 encodes an exact zero.
struct LogReal {
    int sign = 0;
    double log_abs = -std::numeric_limits<double>::infinity();

    double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
};

struct ExteriorAmplitude {
    Mode mode;
    double kappa = 0.0;
    double radius = 0.0;
    LogReal t;                  ///< T1 in the normalisation above
    double shape_factor = 0.0;  ///< F_A
    double value() const { return t.value(); }
};

struct InteriorAmplitude {
    Mode mode;
    double kappa = 0.0;
    double radius = 0.0;
    LogReal t;                  ///< T2 in the normalisation above
    double shape_factor = 0.0;  ///< F_B
    double value() const { return t.value(); }
};

/// Closed-form Mie amplitude of a homogeneous nonmagnetic sphere.
ExteriorAmplitude mie_exterior(Mode mode, double kappa, double r1, double eps1, double eps_m);

/// Interior amplitude of a homogeneous wall (eps2, mu2) filling r > r2.
/// Tends to the perfect-conductor ratio -k_l/i_l (TE) as eps2 -> infinity.
InteriorAmplitude mie_interior_cavity(Mode mode, double kappa, double r2, double eps2, double mu2, double eps_m);

struct VariablePhaseOptions {
    double rel_tol = 1e-10;
    /// The TE factor scales like (kappa r)^2, so an absolute floor would swamp it at small kappa.
    double abs_tol = 0.0;
    long max_steps = 200000;
};

/// Exterior amplitude of a radially inhomogeneous sphere by integrating the
/// variable-phase (Calogero) equation from the origin to r1. Beyond the profile
/// support the surface permittivity is continued, which is the virtual dilation
/// used for surface pressures. Throws ConvergenceError carrying the last accepted radius.
ExteriorAmplitude variable_phase_T(const ResponseModel& profile, Mode mode, double kappa, double r1,
                                   double eps_m, const VariablePhaseOptions& opts = {});

/// dT1/dr1 from the closed form in terms of T1 itself:
///   TE: (eps1 - eps_M) a1^2 xi r1 / (2 pi eps_M)
///   TM: (eps1 - eps_M) [a2^2 l(l+1) + a3^2 eps1/eps_M] / (2 pi xi r1 eps1)
/// with a1, a2, a3 built from I_{l+1/2}, I_{l+3/2}, K_{l+1/2}, K_{l+3/2} at xi r1.
/// Uses unscaled Bessel values, so it is meant for xi r1 below ~300.
double t_radius_derivative(Mode mode, double kappa, double r1, double t, double eps_surface, double eps_m);

namespace detail {

inline constexpr double kSigmaTE = -1.0;
inline constexpr double kSigmaTM = 1.0;
inline double sigma(Polarization p) { return p == Polarization::TE ? kSigmaTE : kSigmaTM; }

/// F_A for a homogeneous sphere: at_x holds ladders at x = xi r1, at_x1 at n1 kappa r1.
double sphere_factor(Polarization pol, int l, double eps1, double eps_m, const BesselLadder& at_x,
                     const BesselLadder& at_x1);

/// F_B for a homogeneous wall: at_y at y = xi r2, at_x2 at n2 kappa r2 with n2 = sqrt(eps2 mu2).
double cavity_factor(Polarization pol, int l, double eps2, double mu2, double eps_m, const BesselLadder& at_y,
                     const BesselLadder& at_x2);

/// G = H psi_l(x) chi_l(x), where dA/dr1 = xi H psi_l(x)^2 with the surface permittivity.
/// Then d(A B)/dr1 = xi G F_B i_l(x) k_l(y) / (k_l(x) i_l(y)) and dF_A/dr = xi (G - F_A / psi chi).
double surface_slope(Polarization pol, int l, double eps_surface, double eps_m, double shape_factor, double z,
                     double ratio_i, double ratio_k, double psi_chi);

/// F_A of an inhomogeneous sphere by the variable-phase ODE.
double variable_phase_factor(const RadialProfile& profile, Polarization pol, int l, double kappa, double r1,
                             double eps_m, const VariablePhaseOptions& opts);

}  // namespace detail

}  // namespace casimir
