#pragma once

// Modified spherical Bessel functions
//
//   i_l(z) = sqrt(pi / 2z) I_{l+1/2}(z),   k_l(z) = sqrt(2 / pi z) K_{l+1/2}(z),
//
// so that i_0(z) = sinh(z)/z, k_0(z) = exp(-z)/z and i_l k_l' - i_l' k_l = -1/z^2.
//
// Values are carried as logarithms plus neighbour ratios. The exponentially scaled
// values i_l e^{-z}, k_l e^{z} are derived from them; at very small z and large l
// those scaled values leave the double range while the logarithms stay exact.

#include <vector>

namespace casimir {

inline constexpr int kMaxBesselOrder = 10000;

struct BesselPair {
    int l = 0;
    double z = 0.0;
    double i_scaled = 0.0;   ///< i_l(z) e^{-z}
    double k_scaled = 0.0;   ///< k_l(z) e^{z}
    double di_scaled = 0.0;  ///< i_l'(z) e^{-z}
    double dk_scaled = 0.0;  ///< k_l'(z) e^{z}
    double log_i = 0.0;      ///< ln i_l(z)
    double log_k = 0.0;      ///< ln k_l(z)
    double dlog_i = 0.0;     ///< i_l'(z) / i_l(z)
    double dlog_k = 0.0;     ///< k_l'(z) / k_l(z)
    double ratio_i = 0.0;    ///< i_{l+1}(z) / i_l(z)
    double ratio_k = 0.0;    ///< k_{l-1}(z) / k_l(z), with k_{-1} = k_0
};

/// All orders 0..lmax at one argument. O(lmax) plus one continued fraction at the top order.
class BesselLadder {
  public:
    BesselLadder(int lmax, double z);

    int lmax() const { return lmax_; }
    double z() const { return z_; }

    double log_i(int l) const { return log_i_[l]; }
    double log_k(int l) const { return log_k_[l]; }
    double ratio_i(int l) const { return ratio_i_[l]; }
    double ratio_k(int l) const { return ratio_k_[l]; }
    double dlog_i(int l) const { return l / z_ + ratio_i_[l]; }
    double dlog_k(int l) const { return -(l + 1) / z_ - ratio_k_[l]; }

    /// psi_l = z i_l (Riccati form): psi'/psi = (l+1)/z + i_{l+1}/i_l.
    double dlog_psi(int l) const { return (l + 1) / z_ + ratio_i_[l]; }
    /// chi_l = z k_l: chi'/chi = -l/z - k_{l-1}/k_l.
    double dlog_chi(int l) const { return -l / z_ - ratio_k_[l]; }
    /// psi_l(z) chi_l(z) = z^2 i_l k_l; bounded, ~ z/(2l+1) for small z and -> 1/2 for large z.
    double psi_chi(int l) const;

    BesselPair at(int l) const;

  private:
    int lmax_;
    double z_;
    std::vector<double> log_i_, log_k_, ratio_i_, ratio_k_;
};

/// Single-order evaluation. z > 0, 0 <= l <= kMaxBesselOrder.
BesselPair bessel_eval(int l, double z);

enum class BesselFamily { regular, outgoing };

/// The three radial entries of the regular (i_l) or outgoing (k_l) diagonal blocks at
/// radius r and medium wavenumber xi: f(xi r), d/dr f(xi r), f(xi r)/r. The common
/// 1/r prefactor of the blocks is left to the caller.
struct RadialEntries {
    double value = 0.0;
    double radial_derivative = 0.0;
    double over_radius = 0.0;
};

RadialEntries bessel_derivative_combo(int l, double xi, double r, BesselFamily which);

namespace detail {

/// Allocation-free single-order ratios for inner loops (ODE right-hand sides).
struct BesselRatios {
    double ratio_i;   ///< i_{l+1}/i_l
    double ratio_k;   ///< k_{l-1}/k_l
    double psi_chi;   ///< z^2 i_l k_l
};

BesselRatios bessel_ratios(int l, double z);

}  // namespace detail

}  // namespace casimir
