#include "mpspec/spline_space.hpp"

#include "mpspec/errors.hpp"

#include <algorithm>
#include <string>

namespace mpspec {

SplineSpace1D::SplineSpace1D(int degree, int n_elements, double x0, double x1, std::optional<int> smoothness)
    : degree_(degree)
    , n_elements_(n_elements)
    , smoothness_(smoothness.value_or(degree - 1))
    , x0_(x0)
    , x1_(x1)
{
    if (degree_ < 1) {
        throw ArgumentError("SplineSpace1D: degree must be >= 1");
    }
    if (n_elements_ < 1) {
        throw ArgumentError("SplineSpace1D: n_elements must be >= 1");
    }
    if (smoothness_ < 0 || smoothness_ > degree_ - 1) {
        throw ArgumentError("SplineSpace1D: smoothness must lie in [0, p-1], got " + std::to_string(smoothness_));
    }
    if (!(x1_ > x0_)) {
        throw ArgumentError("SplineSpace1D: empty domain");
    }

    breakpoints_.resize(n_elements_ + 1);
    for (int i = 0; i <= n_elements_; ++i) {
        breakpoints_[i] = x0_ + (x1_ - x0_) * static_cast<double>(i) / n_elements_;
    }
    breakpoints_.back() = x1_;

    const int multiplicity = degree_ - smoothness_;
    knots_.assign(degree_ + 1, x0_);
    for (int i = 1; i < n_elements_; ++i) {
        knots_.insert(knots_.end(), multiplicity, breakpoints_[i]);
    }
    knots_.insert(knots_.end(), degree_ + 1, x1_);
}

std::size_t SplineSpace1D::dimension() const
{
    return static_cast<std::size_t>(n_elements_ * (degree_ - smoothness_) + smoothness_ + 1);
}

std::vector<double> SplineSpace1D::greville() const
{
    std::vector<double> g(dimension());
    for (std::size_t i = 0; i < g.size(); ++i) {
        double sum = 0.0;
        for (int j = 1; j <= degree_; ++j) {
            sum += knots_[i + j];
        }
        g[i] = sum / degree_;
    }
    return g;
}

int SplineSpace1D::element_of(double x, Side side) const
{
    std::ptrdiff_t e = 0;
    if (side == Side::right) {
        e = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x) - breakpoints_.begin() - 1;
    } else {
        e = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x) - breakpoints_.begin() - 1;
    }
    return static_cast<int>(std::clamp<std::ptrdiff_t>(e, 0, n_elements_ - 1));
}

std::size_t SplineSpace1D::first_active(int element) const
{
    return static_cast<std::size_t>(element * (degree_ - smoothness_));
}

Side SplineSpace1D::resolve_side(double x, std::optional<Side> side) const
{
    if (x == x1_) {
        return Side::left;
    }
    if (x == x0_) {
        return Side::right;
    }
    return side.value_or(Side::right);
}

BasisValues SplineSpace1D::eval_basis(double x, int deriv_order, std::optional<Side> side) const
{
    BasisDerivatives all = eval_derivatives(x, deriv_order, side);
    return {all.first, all.values.row(deriv_order).transpose()};
}

BasisDerivatives SplineSpace1D::eval_derivatives(double x, int max_order, std::optional<Side> side) const
{
    if (x < x0_ || x > x1_) {
        throw DomainError("eval_basis: x = " + std::to_string(x) + " outside [" + std::to_string(x0_) + ", " +
                          std::to_string(x1_) + "]");
    }
    if (max_order < 0 || max_order > degree_) {
        throw ArgumentError("eval_basis: derivative order must lie in [0, p], got " + std::to_string(max_order));
    }

    const int p = degree_;
    const int element = element_of(x, resolve_side(x, side));
    const std::size_t first = first_active(element);
    const std::size_t span = first + static_cast<std::size_t>(p);
    const auto& u = knots_;

    // Triangular table of basis values and knot differences (Piegl & Tiller A2.3).
    Eigen::MatrixXd ndu(p + 1, p + 1);
    Eigen::VectorXd left(p + 1);
    Eigen::VectorXd right(p + 1);
    ndu(0, 0) = 1.0;
    for (int j = 1; j <= p; ++j) {
        left(j) = x - u[span + 1 - j];
        right(j) = u[span + j] - x;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu(j, r) = right(r + 1) + left(j - r);
            const double temp = ndu(r, j - 1) / ndu(j, r);
            ndu(r, j) = saved + right(r + 1) * temp;
            saved = left(j - r) * temp;
        }
        ndu(j, j) = saved;
    }

    Eigen::MatrixXd ders = Eigen::MatrixXd::Zero(max_order + 1, p + 1);
    for (int j = 0; j <= p; ++j) {
        ders(0, j) = ndu(j, p);
    }

    Eigen::MatrixXd a(2, p + 1);
    for (int r = 0; r <= p; ++r) {
        int s1 = 0;
        int s2 = 1;
        a.setZero();
        a(0, 0) = 1.0;
        for (int k = 1; k <= max_order; ++k) {
            double d = 0.0;
            const int rk = r - k;
            const int pk = p - k;
            if (r >= k) {
                a(s2, 0) = a(s1, 0) / ndu(pk + 1, rk);
                d = a(s2, 0) * ndu(rk, pk);
            }
            const int j1 = (rk >= -1) ? 1 : -rk;
            const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
            for (int j = j1; j <= j2; ++j) {
                a(s2, j) = (a(s1, j) - a(s1, j - 1)) / ndu(pk + 1, rk + j);
                d += a(s2, j) * ndu(rk + j, pk);
            }
            if (r <= pk) {
                a(s2, k) = -a(s1, k - 1) / ndu(pk + 1, r);
                d += a(s2, k) * ndu(r, pk);
            }
            ders(k, r) = d;
            std::swap(s1, s2);
        }
    }

    double factor = p;
    for (int k = 1; k <= max_order; ++k) {
        ders.row(k) *= factor;
        factor *= (p - k);
    }
    return {first, std::move(ders)};
}

} // namespace mpspec
