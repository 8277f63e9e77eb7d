#include "mpspec/quadrature.hpp"

#include "mpspec/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace mpspec {

namespace {

// Legendre polynomial P_n and its derivative at x in [-1, 1].
void legendre(int n, double x, double& value, double& derivative)
{
    double p0 = 1.0;
    double p1 = x;
    if (n == 0) {
        value = 1.0;
        derivative = 0.0;
        return;
    }
    for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
    }
    value = p1;
    derivative = n * (x * p1 - p0) / (x * x - 1.0);
}

} // namespace

QuadratureRule gauss_rule(int n_points)
{
    if (n_points < 1 || n_points > 16) {
        throw ArgumentError("gauss_rule: n_points must lie in [1, 16], got " + std::to_string(n_points));
    }
    QuadratureRule rule;
    rule.points.resize(n_points);
    rule.weights.resize(n_points);

    const int half = (n_points + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Chebyshev-like initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n_points + 0.5));
        double value = 0.0;
        double derivative = 1.0;
        for (int it = 0; it < 100; ++it) {
            legendre(n_points, x, value, derivative);
            const double dx = value / derivative;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        legendre(n_points, x, value, derivative);
        const double w = 2.0 / ((1.0 - x * x) * derivative * derivative);

        // Map [-1, 1] -> [0, 1]; symmetric pair.
        rule.points[i] = 0.5 * (1.0 - x);
        rule.points[n_points - 1 - i] = 0.5 * (1.0 + x);
        rule.weights[i] = 0.5 * w;
        rule.weights[n_points - 1 - i] = 0.5 * w;
    }
    if (n_points % 2 == 1) {
        rule.points[n_points / 2] = 0.5;
    }
    return rule;
}

} // namespace mpspec
