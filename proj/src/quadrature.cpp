#include "casimir/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "casimir/error.hpp"

namespace casimir {

QuadratureRule gauss_legendre(int n, double a, double b) {
    if (n < 1) throw DomainError("gauss_legendre: need at least one node");
    QuadratureRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const double mid = 0.5 * (b + a);
    const double half = 0.5 * (b - a);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[static_cast<std::size_t>(i)] = mid - half * x;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = mid + half * x;
        rule.weights[static_cast<std::size_t>(i)] = half * w;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = half * w;
    }
    return rule;
}

QuadratureRule semi_infinite_rule(int n, double scale) {
    if (!(scale > 0.0)) throw DomainError("semi_infinite_rule: scale must be positive");
    QuadratureRule unit = gauss_legendre(n, 0.0, 1.0);
    for (std::size_t j = 0; j < unit.nodes.size(); ++j) {
        const double u = unit.nodes[j];
        const double v = 1.0 - u;
        unit.nodes[j] = scale * u / v;
        unit.weights[j] *= scale / (v * v);
    }
    return unit;
}

}  // namespace casimir
