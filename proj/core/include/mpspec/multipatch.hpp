#pragma once

#include "mpspec/sparse_utils.hpp"
#include "mpspec/spline_space.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace mpspec {

enum class OperatorOrder { second, fourth };

enum class BoundaryCondition { dirichlet_fixed, neumann_free, simply_supported };

/// Operator order and boundary data of a model problem.
///
/// Patches are glued with C^0 (second order) or C^1 (fourth order). With
/// remove_boundary_outliers set, extra derivative constraints of the same
/// parity as the essential data are imposed strongly at each boundary.
struct ProblemKind {
    OperatorOrder order = OperatorOrder::second;
    BoundaryCondition left = BoundaryCondition::dirichlet_fixed;
    BoundaryCondition right = BoundaryCondition::dirichlet_fixed;
    bool remove_boundary_outliers = true;

    [[nodiscard]] int coupling_smoothness() const { return order == OperatorOrder::second ? 0 : 1; }

    static ProblemKind fixed_bar();
    /// Standard basis (no boundary outlier removal).
    static ProblemKind free_bar();
    static ProblemKind simply_supported_beam();
};

/// Derivative orders constrained to vanish at a boundary with the given condition.
std::vector<int> boundary_constraint_orders(const ProblemKind& kind, BoundaryCondition bc, int degree);

/// A patch interface Gamma^e.
struct Interface {
    double location = 0.0;      ///< coordinate along normal_axis
    std::size_t left_patch = 0; ///< patch on the minus side
    std::size_t right_patch = 0;
    int normal_axis = 0;
};

/// Patches of one coordinate direction joined into a reduced space.
///
/// The raw space concatenates per-patch C^{p-1} spline coefficients; the
/// extraction matrix E (raw x reduced) spans the functions satisfying every
/// interface coupling and boundary constraint.
class MultipatchLayout1D {
public:
    MultipatchLayout1D(const ProblemKind& kind, int degree, int n_patches, int elements_per_patch,
                       double x0 = 0.0, double x1 = 1.0);

    [[nodiscard]] const ProblemKind& kind() const { return kind_; }
    [[nodiscard]] int degree() const { return degree_; }
    [[nodiscard]] int n_patches() const { return static_cast<int>(patches_.size()); }
    [[nodiscard]] int elements_per_patch() const { return patches_.front().n_elements(); }
    [[nodiscard]] int n_elements() const { return n_patches() * elements_per_patch(); }
    [[nodiscard]] double element_size() const { return patches_.front().element_size(); }
    [[nodiscard]] double x0() const { return x0_; }
    [[nodiscard]] double x1() const { return x1_; }

    [[nodiscard]] const std::vector<SplineSpace1D>& patches() const { return patches_; }
    [[nodiscard]] std::size_t patch_offset(std::size_t patch) const { return offsets_[patch]; }
    [[nodiscard]] const std::vector<Interface>& interfaces() const { return interfaces_; }

    [[nodiscard]] std::size_t raw_dimension() const { return offsets_.back(); }
    [[nodiscard]] std::size_t dimension() const { return static_cast<std::size_t>(extraction_.cols()); }
    [[nodiscard]] const SparseMatrix& extraction() const { return extraction_; }

    /// Patch evaluated at x; at an interface the side selects the patch.
    [[nodiscard]] std::size_t patch_of(double x, Side side) const;

    /// Raw-coefficient row of the functional u -> d^deriv u(x) (one-sided).
    [[nodiscard]] Eigen::VectorXd raw_functional(double x, int deriv, Side side) const;

    /// Same functional in reduced coordinates (E^T times the raw row).
    [[nodiscard]] Eigen::VectorXd functional(double x, int deriv, Side side) const;

    [[nodiscard]] double evaluate(const Eigen::VectorXd& reduced, double x, int deriv, Side side) const;

    /// 2-norm condition number of E^T E.
    [[nodiscard]] double extraction_condition() const;

private:
    ProblemKind kind_;
    int degree_;
    double x0_;
    double x1_;
    std::vector<SplineSpace1D> patches_;
    std::vector<std::size_t> offsets_;
    std::vector<Interface> interfaces_;
    SparseMatrix extraction_;
};

/// Global discrete space: one layout (1D) or a tensor product of two (2D).
///
/// Reduced 2D coefficients are ordered i_x * N_y + i_y, matching E = E_x (x) E_y.
class MultipatchSpace {
public:
    explicit MultipatchSpace(MultipatchLayout1D x);
    MultipatchSpace(MultipatchLayout1D x, MultipatchLayout1D y);

    [[nodiscard]] int spatial_dimension() const { return static_cast<int>(directions_.size()); }
    [[nodiscard]] const MultipatchLayout1D& direction(int axis) const { return directions_.at(axis); }
    [[nodiscard]] const ProblemKind& kind() const { return directions_.front().kind(); }
    [[nodiscard]] int degree() const { return directions_.front().degree(); }
    [[nodiscard]] double element_size() const { return directions_.front().element_size(); }

    [[nodiscard]] std::size_t dimension() const;
    [[nodiscard]] std::size_t raw_dimension() const;
    [[nodiscard]] SparseMatrix extraction() const;

    /// All interfaces; in 2D each is a full line x = c (axis 0) or y = c (axis 1).
    [[nodiscard]] std::vector<Interface> interfaces() const;

    /// Mixed derivative d^dx/dx d^dy/dy u at (x, y) with one-sided limits per axis.
    /// In 1D, y and its arguments are ignored.
    [[nodiscard]] double evaluate(const Eigen::VectorXd& reduced, double x, double y = 0.0, int dx = 0, int dy = 0,
                                  Side side_x = Side::right, Side side_y = Side::right) const;

private:
    std::vector<MultipatchLayout1D> directions_;
};

/// 1D space on [0, 1] with n_patches patches of elems_per_patch elements each.
MultipatchSpace build_space_1d(const ProblemKind& kind, int degree, int n_patches, int elems_per_patch);

/// Tensor-product space on the unit square.
MultipatchSpace build_space_2d(const ProblemKind& kind, int degree, int n_patches_per_dir, int elems_per_patch_per_dir);

/// Interior outlier count of a 1D multipatch discretization:
/// (Np-1)(p-1) for second order, (Np-1)(p-2) for fourth order.
int count_interior_outliers(const ProblemKind& kind, int degree, int n_patches);

} // namespace mpspec
