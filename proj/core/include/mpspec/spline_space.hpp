#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <vector>

namespace mpspec {

/// Which one-sided limit to take when evaluating exactly at a breakpoint.
enum class Side { left, right };

/// The p+1 possibly-nonzero basis values (or derivatives) at a point.
struct BasisValues {
    std::size_t first = 0;  ///< global index of values[0]
    Eigen::VectorXd values; ///< length p+1
};

/// All derivatives 0..max_order of the p+1 active functions.
/// Row d holds the d-th derivatives.
struct BasisDerivatives {
    std::size_t first = 0;
    Eigen::MatrixXd values; ///< (max_order+1) x (p+1)
};

/// Univariate B-spline space on a uniform open knot vector.
///
/// Interior breakpoints carry multiplicity p - k, where k is the interior
/// smoothness, so the dimension is n_elements * (p - k) + k + 1. The space is
/// always built from an element count; raw knot vectors are not accepted.
class SplineSpace1D {
public:
    /// smoothness defaults to p - 1 (maximal smoothness).
    SplineSpace1D(int degree, int n_elements, double x0 = 0.0, double x1 = 1.0,
                  std::optional<int> smoothness = std::nullopt);

    [[nodiscard]] int degree() const { return degree_; }
    [[nodiscard]] int n_elements() const { return n_elements_; }
    [[nodiscard]] int smoothness() const { return smoothness_; }
    [[nodiscard]] double x0() const { return x0_; }
    [[nodiscard]] double x1() const { return x1_; }
    [[nodiscard]] double element_size() const { return (x1_ - x0_) / n_elements_; }
    [[nodiscard]] std::size_t dimension() const;

    [[nodiscard]] const std::vector<double>& knots() const { return knots_; }
    [[nodiscard]] const std::vector<double>& breakpoints() const { return breakpoints_; }
    [[nodiscard]] std::vector<double> greville() const;

    /// Element index containing x; at a breakpoint the side picks the element.
    [[nodiscard]] int element_of(double x, Side side) const;

    /// Global index of the first basis function supported on element e.
    [[nodiscard]] std::size_t first_active(int element) const;

    /// deriv_order-th derivatives of the active functions at x.
    /// Default side is right, except at x1 where only the left limit exists.
    [[nodiscard]] BasisValues eval_basis(double x, int deriv_order,
                                         std::optional<Side> side = std::nullopt) const;

    /// Derivatives 0..max_order in one pass.
    [[nodiscard]] BasisDerivatives eval_derivatives(double x, int max_order,
                                                    std::optional<Side> side = std::nullopt) const;

private:
    [[nodiscard]] Side resolve_side(double x, std::optional<Side> side) const;

    int degree_;
    int n_elements_;
    int smoothness_;
    double x0_;
    double x1_;
    std::vector<double> breakpoints_;
    std::vector<double> knots_;
};

} // namespace mpspec
