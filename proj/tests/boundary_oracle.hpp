#pragma once

// Independent oracle for tests: direct boundary matching with 50-digit Bessel functions.
// Fields are Debye-type radial functions f; across an interface f and
// (1/w) d/dr[r f] are continuous, with w = mu for TE and w = eps for TM.

#include <utility>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "casimir/scattering.hpp"

namespace casimir::oracle {

using Big = boost::multiprecision::cpp_bin_float_50;

inline Big sph_i(int l, const Big& z) {
    return boost::math::cyl_bessel_i(Big(l) + Big(0.5), z) * sqrt(boost::math::constants::pi<Big>() / (2 * z));
}
inline Big sph_k(int l, const Big& z) {
    return boost::math::cyl_bessel_k(Big(l) + Big(0.5), z) * sqrt(2 / (boost::math::constants::pi<Big>() * z));
}

struct Radial {
    Big f;  // f(r)
    Big p;  // d/dr [r f(r)]
};

// i_l(alpha r) or k_l(alpha r), with d/dr[r f] from the neighbour recurrences.
inline Radial radial(bool regular, int l, const Big& alpha, const Big& r) {
    const Big z = alpha * r;
    if (regular) {
        const Big f = sph_i(l, z);
        const Big df = sph_i(l + 1, z) + Big(l) / z * f;  // i_l'
        return {f, f + z * df};
    }
    const Big f = sph_k(l, z);
    const Big df = -sph_k(l + 1, z) + Big(l) / z * f;  // k_l'
    return {f, f + z * df};
}

// A for layers listed from the centre outward: (outer radius, eps) pairs, nonmagnetic.
inline double exterior_A(Mode mode, double kappa, const std::vector<std::pair<double, double>>& layers,
                         double eps_m) {
    const bool tm = mode.pol == Polarization::TM;
    const int l = mode.l;
    // Interior solution as a combination (c_i, c_k) of i_l and k_l in each layer.
    Big ci = 1, ck = 0;
    for (std::size_t j = 0; j + 1 < layers.size(); ++j) {
        const Big r = layers[j].first;
        const Big n_in = sqrt(Big(layers[j].second)), n_out = sqrt(Big(layers[j + 1].second));
        const Big w_in = tm ? Big(layers[j].second) : Big(1), w_out = tm ? Big(layers[j + 1].second) : Big(1);
        const Radial ui = radial(true, l, n_in * kappa, r), uk = radial(false, l, n_in * kappa, r);
        const Big f = ci * ui.f + ck * uk.f;
        const Big p = (ci * ui.p + ck * uk.p) / w_in;
        const Radial vi = radial(true, l, n_out * kappa, r), vk = radial(false, l, n_out * kappa, r);
        // Solve a vi.f + b vk.f = f, (a vi.p + b vk.p)/w_out = p.
        const Big det = vi.f * vk.p - vk.f * vi.p;
        ci = (f * vk.p - vk.f * p * w_out) / det;
        ck = (vi.f * p * w_out - f * vi.p) / det;
    }
    const Big r = layers.back().first;
    const Big n_s = sqrt(Big(layers.back().second));
    const Big w_s = tm ? Big(layers.back().second) : Big(1);
    const Radial ui = radial(true, l, n_s * kappa, r), uk = radial(false, l, n_s * kappa, r);
    const Big u = ci * ui.f + ck * uk.f;
    const Big up = (ci * ui.p + ck * uk.p) / w_s;
    const Big xi = kappa * sqrt(Big(eps_m));
    const Big w_m = tm ? Big(eps_m) : Big(1);
    const Radial oi = radial(true, l, xi, r), ok = radial(false, l, xi, r);
    // alpha u = oi + A ok, alpha up = (oi.p + A ok.p)/w_m
    const Big a = (oi.p / w_m * u - oi.f * up) / (ok.f * up - ok.p / w_m * u);
    return static_cast<double>(a);
}

inline double interior_B(Mode mode, double kappa, double r2, double eps2, double mu2, double eps_m) {
    const bool tm = mode.pol == Polarization::TM;
    const int l = mode.l;
    const Big n2 = sqrt(Big(eps2) * Big(mu2));
    const Big xi = kappa * sqrt(Big(eps_m));
    const Radial w = radial(false, l, n2 * kappa, r2);
    const Big wp = w.p / (tm ? Big(eps2) : Big(mu2));
    const Big w_m = tm ? Big(eps_m) : Big(1);
    const Radial ci = radial(true, l, xi, r2), ck = radial(false, l, xi, r2);
    // alpha w = ck + B ci, alpha wp = (ck.p + B ci.p)/w_m
    const Big b = (ck.p / w_m * w.f - ck.f * wp) / (ci.f * wp - ci.p / w_m * w.f);
    return static_cast<double>(b);
}

}  // namespace casimir::oracle
