#include "casimir/specfun.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "casimir/error.hpp"

namespace casimir {

namespace {

void check_args(int l, double z) {
    if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("modified spherical Bessel: z must be positive");
    if (l < 0) throw DomainError("modified spherical Bessel: negative order");
    if (l > kMaxBesselOrder)
        throw CapabilityError("modified spherical Bessel: order " + std::to_string(l) + " exceeds cap " +
                              std::to_string(kMaxBesselOrder));
}

// i_{l+1}/i_l from the backward recurrence written as a continued fraction
// (modified Lentz). Converges for all z; needs O(z) terms when z >> l.
double top_ratio_i(int l, double z) {
    constexpr double tiny = 1e-300;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr long max_terms = 100'000'000;
    double f = tiny, c = tiny, d = 0.0;
    for (long j = 1; j <= max_terms; ++j) {
        const double b = (2.0 * l + 2.0 * j + 1.0) / z;
        d = b + d;
        if (d == 0.0) d = tiny;
        c = b + 1.0 / c;
        if (c == 0.0) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < eps) return f;
    }
    throw ConvergenceError("modified spherical Bessel: continued fraction did not converge");
}

}  // namespace

BesselLadder::BesselLadder(int lmax, double z) : lmax_(lmax), z_(z) {
    check_args(lmax, z);
    const auto n = static_cast<std::size_t>(lmax) + 1;
    log_i_.resize(n);
    log_k_.resize(n);
    ratio_i_.resize(n);
    ratio_k_.resize(n);

    // k is dominant: forward recurrence k_{l+1} = k_{l-1} + (2l+1)/z k_l in ratio form.
    ratio_k_[0] = 1.0;
    log_k_[0] = -z - std::log(z);
    for (int l = 0; l < lmax; ++l) {
        const double up = ratio_k_[l] + (2.0 * l + 1.0) / z;  // k_{l+1}/k_l
        ratio_k_[l + 1] = 1.0 / up;
        log_k_[l + 1] = log_k_[l] + std::log(up);
    }

    // i is minimal: backward recurrence for the ratios.
    ratio_i_[lmax] = top_ratio_i(lmax, z);
    for (int l = lmax; l > 0; --l) ratio_i_[l - 1] = 1.0 / ((2.0 * l + 1.0) / z + ratio_i_[l]);

    // Wronskian normalisation: i_l k_l (i'/i - k'/k) = 1/z^2.
    const double log_z2 = 2.0 * std::log(z);
    for (int l = 0; l <= lmax; ++l) {
        const double spread = (2.0 * l + 1.0) / z + ratio_i_[l] + ratio_k_[l];
        log_i_[l] = -log_z2 - log_k_[l] - std::log(spread);
    }
}

double BesselLadder::psi_chi(int l) const {
    const double spread = (2.0 * l + 1.0) / z_ + ratio_i_[l] + ratio_k_[l];
    return 1.0 / spread;
}

BesselPair BesselLadder::at(int l) const {
    BesselPair p;
    p.l = l;
    p.z = z_;
    p.log_i = log_i_[l];
    p.log_k = log_k_[l];
    p.ratio_i = ratio_i_[l];
    p.ratio_k = ratio_k_[l];
    p.dlog_i = dlog_i(l);
    p.dlog_k = dlog_k(l);
    p.i_scaled = std::exp(p.log_i - z_);
    p.k_scaled = std::exp(p.log_k + z_);
    p.di_scaled = p.dlog_i * p.i_scaled;
    p.dk_scaled = p.dlog_k * p.k_scaled;
    return p;
}

BesselPair bessel_eval(int l, double z) {
    check_args(l, z);
    return BesselLadder(l, z).at(l);
}

namespace detail {

BesselRatios bessel_ratios(int l, double z) {
    check_args(l, z);
    double rk = 1.0;
    for (int n = 0; n < l; ++n) rk = 1.0 / (rk + (2.0 * n + 1.0) / z);
    const double ri = top_ratio_i(l, z);
    return {ri, rk, 1.0 / ((2.0 * l + 1.0) / z + ri + rk)};
}

}  // namespace detail

RadialEntries bessel_derivative_combo(int l, double xi, double r, BesselFamily which) {
    if (!(xi > 0.0) || !(r > 0.0)) throw DomainError("bessel_derivative_combo: xi and r must be positive");
    const BesselPair p = bessel_eval(l, xi * r);
    const double f = which == BesselFamily::regular ? std::exp(p.log_i) : std::exp(p.log_k);
    const double dlog = which == BesselFamily::regular ? p.dlog_i : p.dlog_k;
    return {f, xi * dlog * f, f / r};
}

}  // namespace casimir
