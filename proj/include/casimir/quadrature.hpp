#pragma once

#include <vector>

namespace casimir {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [a, b].
QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// Gauss-Legendre on (0, inf) through kappa = scale * u / (1 - u), u in (0, 1).
/// Weights include the Jacobian scale / (1 - u)^2.
QuadratureRule semi_infinite_rule(int n, double scale);

}  // namespace casimir
