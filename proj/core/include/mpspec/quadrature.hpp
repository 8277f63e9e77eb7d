#pragma once

#include <vector>

namespace mpspec {

/// Gauss-Legendre rule on the reference interval [0, 1]; weights sum to one.
struct QuadratureRule {
    std::vector<double> points;
    std::vector<double> weights;

    [[nodiscard]] std::size_t size() const { return points.size(); }
};

/// Gauss-Legendre rule with n_points nodes, 1 <= n_points <= 16.
/// Exact for polynomials up to degree 2 * n_points - 1.
QuadratureRule gauss_rule(int n_points);

} // namespace mpspec
