#pragma once

#include "mpspec/sparse_utils.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>

namespace mpspec {

enum class OperatorKind {
    mass,
    stiffness,
    interface_penalty,
    combined_penalty,
    perturbed_stiffness,
    perturbed_mass,
    generic,
};

/// Symmetric sparse matrix stored as its lower triangle (diagonal included).
///
/// Every accessor reads the lower triangle only, so symmetry is exact.
class SymmetricOperator {
public:
    SymmetricOperator() = default;

    /// Keeps the lower triangle of (a + a^T) / 2.
    SymmetricOperator(const SparseMatrix& a, OperatorKind kind, int level = 0);

    static SymmetricOperator zero(std::size_t n, OperatorKind kind, int level = 0);

    [[nodiscard]] std::size_t dimension() const { return static_cast<std::size_t>(lower_.rows()); }
    [[nodiscard]] OperatorKind kind() const { return kind_; }
    /// Constraint level l for interface penalties, 0 otherwise.
    [[nodiscard]] int level() const { return level_; }

    [[nodiscard]] const SparseMatrix& lower() const { return lower_; }
    [[nodiscard]] SparseMatrix full() const;
    [[nodiscard]] Eigen::MatrixXd dense() const;

    [[nodiscard]] Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
    [[nodiscard]] double quadratic_form(const Eigen::VectorXd& x) const;
    [[nodiscard]] double coeff(std::size_t i, std::size_t j) const;
    [[nodiscard]] double frobenius_norm() const;
    [[nodiscard]] bool is_zero() const;

    /// this + s * other, tagged with kind.
    [[nodiscard]] SymmetricOperator plus_scaled(double s, const SymmetricOperator& other, OperatorKind kind) const;

    /// s * this, keeping the tag.
    [[nodiscard]] SymmetricOperator scaled(double s) const;

private:
    SparseMatrix lower_;
    OperatorKind kind_ = OperatorKind::generic;
    int level_ = 0;
};

/// Matrix Market "coordinate real symmetric" dump of the lower triangle (1-based).
void write_matrix_market(std::ostream& os, const SymmetricOperator& op);

} // namespace mpspec
