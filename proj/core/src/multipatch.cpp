#include "mpspec/multipatch.hpp"

#include "mpspec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mpspec {

ProblemKind ProblemKind::fixed_bar()
{
    return {OperatorOrder::second, BoundaryCondition::dirichlet_fixed, BoundaryCondition::dirichlet_fixed, true};
}

ProblemKind ProblemKind::free_bar()
{
    return {OperatorOrder::second, BoundaryCondition::neumann_free, BoundaryCondition::neumann_free, false};
}

ProblemKind ProblemKind::simply_supported_beam()
{
    return {OperatorOrder::fourth, BoundaryCondition::simply_supported, BoundaryCondition::simply_supported, true};
}

std::vector<int> boundary_constraint_orders(const ProblemKind& kind, BoundaryCondition bc, int degree)
{
    std::vector<int> orders;
    int first_extra = 0;
    switch (bc) {
    case BoundaryCondition::dirichlet_fixed:
        if (kind.order != OperatorOrder::second) {
            throw ArgumentError("dirichlet_fixed boundaries are only supported for second-order problems");
        }
        orders.push_back(0);
        first_extra = 2;
        break;
    case BoundaryCondition::neumann_free:
        if (kind.order != OperatorOrder::second) {
            throw ArgumentError("neumann_free boundaries are only supported for second-order problems");
        }
        first_extra = 1;
        break;
    case BoundaryCondition::simply_supported:
        if (kind.order != OperatorOrder::fourth) {
            throw ArgumentError("simply_supported boundaries are only supported for fourth-order problems");
        }
        // u and u'' vanish for every sine mode.
        orders.push_back(0);
        orders.push_back(2);
        first_extra = 4;
        break;
    }
    if (kind.remove_boundary_outliers) {
        for (int d = first_extra; d <= degree - 1; d += 2) {
            orders.push_back(d);
        }
    }
    return orders;
}

namespace {

// Eliminates constraint rows one at a time from an identity basis. Each row
// touches only the columns supported near its point, so the basis stays local.
Eigen::MatrixXd eliminate_constraints(std::size_t raw_dim, const std::vector<Eigen::VectorXd>& rows)
{
    std::vector<Eigen::VectorXd> columns;
    columns.reserve(raw_dim);
    for (std::size_t i = 0; i < raw_dim; ++i) {
        columns.push_back(Eigen::VectorXd::Unit(static_cast<Eigen::Index>(raw_dim), static_cast<Eigen::Index>(i)));
    }

    for (const Eigen::VectorXd& raw_row : rows) {
        const double scale = raw_row.cwiseAbs().maxCoeff();
        if (scale == 0.0) {
            continue;
        }
        const Eigen::VectorXd row = raw_row / scale;

        std::vector<double> reduced(columns.size());
        std::size_t pivot = 0;
        double best = 0.0;
        for (std::size_t k = 0; k < columns.size(); ++k) {
            reduced[k] = row.dot(columns[k]);
            if (std::abs(reduced[k]) > best) {
                best = std::abs(reduced[k]);
                pivot = k;
            }
        }
        if (best <= 1e-12) {
            continue; // already implied by earlier constraints
        }
        for (std::size_t k = 0; k < columns.size(); ++k) {
            if (k != pivot && reduced[k] != 0.0) {
                columns[k] -= (reduced[k] / reduced[pivot]) * columns[pivot];
            }
        }
        columns.erase(columns.begin() + static_cast<std::ptrdiff_t>(pivot));
    }

    Eigen::MatrixXd e(static_cast<Eigen::Index>(raw_dim), static_cast<Eigen::Index>(columns.size()));
    for (std::size_t k = 0; k < columns.size(); ++k) {
        e.col(static_cast<Eigen::Index>(k)) = columns[k];
    }
    return e;
}

} // namespace

MultipatchLayout1D::MultipatchLayout1D(const ProblemKind& kind, int degree, int n_patches, int elements_per_patch,
                                       double x0, double x1)
    : kind_(kind)
    , degree_(degree)
    , x0_(x0)
    , x1_(x1)
{
    if (n_patches < 1 || elements_per_patch < 1) {
        throw ArgumentError("multipatch layout needs at least one patch and one element per patch");
    }
    if (kind.order == OperatorOrder::second && degree < 1) {
        throw ArgumentError("second-order problems need p >= 1");
    }
    if (kind.order == OperatorOrder::fourth && degree < 2) {
        throw ArgumentError("fourth-order problems need p >= 2 for C^1 patch coupling, got p = " +
                            std::to_string(degree));
    }

    const double patch_length = (x1 - x0) / n_patches;
    offsets_.push_back(0);
    for (int i = 0; i < n_patches; ++i) {
        const double a = x0 + patch_length * i;
        const double b = (i + 1 == n_patches) ? x1 : x0 + patch_length * (i + 1);
        patches_.emplace_back(degree, elements_per_patch, a, b);
        offsets_.push_back(offsets_.back() + patches_.back().dimension());
    }
    for (int i = 1; i < n_patches; ++i) {
        interfaces_.push_back({patches_[i].x0(), static_cast<std::size_t>(i - 1), static_cast<std::size_t>(i), 0});
    }

    std::vector<Eigen::VectorXd> rows;
    const int k = kind.coupling_smoothness();
    for (const Interface& iface : interfaces_) {
        for (int order = 0; order <= k; ++order) {
            // jump = right limit - left limit
            rows.push_back(raw_functional(iface.location, order, Side::right) -
                           raw_functional(iface.location, order, Side::left));
        }
    }
    for (int order : boundary_constraint_orders(kind, kind.left, degree)) {
        rows.push_back(raw_functional(x0, order, Side::right));
    }
    for (int order : boundary_constraint_orders(kind, kind.right, degree)) {
        rows.push_back(raw_functional(x1, order, Side::left));
    }

    const Eigen::MatrixXd e = eliminate_constraints(raw_dimension(), rows);
    extraction_ = e.sparseView(1.0, 1e-15);
    extraction_.makeCompressed();
}

std::size_t MultipatchLayout1D::patch_of(double x, Side side) const
{
    if (x < x0_ || x > x1_) {
        throw DomainError("multipatch evaluation point " + std::to_string(x) + " outside the domain");
    }
    for (std::size_t i = 0; i < patches_.size(); ++i) {
        const bool last = (i + 1 == patches_.size());
        const double b = patches_[i].x1();
        if (x < b || (x == b && (side == Side::left || last))) {
            return i;
        }
    }
    return patches_.size() - 1;
}

Eigen::VectorXd MultipatchLayout1D::raw_functional(double x, int deriv, Side side) const
{
    const std::size_t patch = patch_of(x, side);
    const BasisValues basis = patches_[patch].eval_basis(x, deriv, side);
    Eigen::VectorXd row = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(raw_dimension()));
    row.segment(static_cast<Eigen::Index>(offsets_[patch] + basis.first), basis.values.size()) = basis.values;
    return row;
}

Eigen::VectorXd MultipatchLayout1D::functional(double x, int deriv, Side side) const
{
    return extraction_.transpose() * raw_functional(x, deriv, side);
}

double MultipatchLayout1D::evaluate(const Eigen::VectorXd& reduced, double x, int deriv, Side side) const
{
    return functional(x, deriv, side).dot(reduced);
}

double MultipatchLayout1D::extraction_condition() const
{
    const Eigen::MatrixXd gram = Eigen::MatrixXd(extraction_.transpose() * extraction_);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
}

MultipatchSpace::MultipatchSpace(MultipatchLayout1D x)
{
    directions_.push_back(std::move(x));
}

MultipatchSpace::MultipatchSpace(MultipatchLayout1D x, MultipatchLayout1D y)
{
    directions_.push_back(std::move(x));
    directions_.push_back(std::move(y));
}

std::size_t MultipatchSpace::dimension() const
{
    std::size_t n = 1;
    for (const auto& d : directions_) {
        n *= d.dimension();
    }
    return n;
}

std::size_t MultipatchSpace::raw_dimension() const
{
    std::size_t n = 1;
    for (const auto& d : directions_) {
        n *= d.raw_dimension();
    }
    return n;
}

SparseMatrix MultipatchSpace::extraction() const
{
    if (directions_.size() == 1) {
        return directions_.front().extraction();
    }
    return kron(directions_[0].extraction(), directions_[1].extraction());
}

std::vector<Interface> MultipatchSpace::interfaces() const
{
    std::vector<Interface> all;
    for (std::size_t axis = 0; axis < directions_.size(); ++axis) {
        for (Interface iface : directions_[axis].interfaces()) {
            iface.normal_axis = static_cast<int>(axis);
            all.push_back(iface);
        }
    }
    return all;
}

double MultipatchSpace::evaluate(const Eigen::VectorXd& reduced, double x, double y, int dx, int dy, Side side_x,
                                 Side side_y) const
{
    if (static_cast<std::size_t>(reduced.size()) != dimension()) {
        throw ArgumentError("evaluate: coefficient vector has wrong length");
    }
    if (directions_.size() == 1) {
        return directions_[0].evaluate(reduced, x, dx, side_x);
    }
    const Eigen::VectorXd fx = directions_[0].functional(x, dx, side_x);
    const Eigen::VectorXd fy = directions_[1].functional(y, dy, side_y);
    const auto ny = static_cast<Eigen::Index>(directions_[1].dimension());
    const auto nx = static_cast<Eigen::Index>(directions_[0].dimension());
    // Row-major view: coefficient (ix, iy) sits at ix * ny + iy.
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> c(
        reduced.data(), nx, ny);
    return fx.dot(c * fy);
}

MultipatchSpace build_space_1d(const ProblemKind& kind, int degree, int n_patches, int elems_per_patch)
{
    return MultipatchSpace(MultipatchLayout1D(kind, degree, n_patches, elems_per_patch));
}

MultipatchSpace build_space_2d(const ProblemKind& kind, int degree, int n_patches_per_dir, int elems_per_patch_per_dir)
{
    return MultipatchSpace(MultipatchLayout1D(kind, degree, n_patches_per_dir, elems_per_patch_per_dir),
                           MultipatchLayout1D(kind, degree, n_patches_per_dir, elems_per_patch_per_dir));
}

int count_interior_outliers(const ProblemKind& kind, int degree, int n_patches)
{
    const int per_interface = (kind.order == OperatorOrder::second) ? degree - 1 : degree - 2;
    return std::max(0, n_patches - 1) * std::max(0, per_interface);
}

} // namespace mpspec
