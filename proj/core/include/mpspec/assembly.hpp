#pragma once

#include "mpspec/multipatch.hpp"
#include "mpspec/symmetric_operator.hpp"

#include <span>
#include <vector>

namespace mpspec {

/// Operators of the perturbed eigenproblem on one discrete space.
struct OperatorSet {
    SymmetricOperator mass;
    SymmetricOperator stiffness;
    /// penalties[l-1] is the level-l interface penalty, l = 1 .. p-1.
    std::vector<SymmetricOperator> penalties;
    /// sum_l h^(2l-2) penalties[l-1]
    SymmetricOperator combined;
    /// per_interface[l-1][e]: level-l penalty restricted to interface e.
    std::vector<std::vector<SymmetricOperator>> per_interface;
    double element_size = 0.0;
    int degree = 0;

    [[nodiscard]] std::size_t dimension() const { return mass.dimension(); }
};

/// Consistent mass matrix E^T M_raw E.
SymmetricOperator assemble_mass(const MultipatchSpace& space);

/// Gradient-gradient (second order) or Laplacian-Laplacian (fourth order)
/// stiffness. Fourth order requires a C^1-coupled space.
SymmetricOperator assemble_stiffness(const MultipatchSpace& space, OperatorOrder order);

/// Gram matrix of the jumps of the level-th normal derivative over all
/// interfaces, 1 <= level <= p-1. Levels at or below the coupling smoothness
/// vanish identically and yield an exact zero matrix.
SymmetricOperator assemble_interface_penalty(const MultipatchSpace& space, int level);

/// Same penalty split per interface (entries sum to assemble_interface_penalty).
std::vector<SymmetricOperator> assemble_interface_penalty_split(const MultipatchSpace& space, int level);

/// sum_l h^(2l-2) penalties[l-1].
SymmetricOperator combine_penalties(std::span<const SymmetricOperator> penalties, double h);

/// Mass, stiffness (order taken from the space's problem kind) and all penalties.
OperatorSet assemble_operators(const MultipatchSpace& space);

namespace detail {

/// Raw 1D matrix A[i, j] = integral of d^test_order B_i * d^trial_order B_j over
/// the layout, with n_points Gauss points per element (0: p + 1).
SparseMatrix raw_matrix_1d(const MultipatchLayout1D& layout, int test_order, int trial_order, int n_points = 0);

/// Reduced counterpart E^T A E.
SparseMatrix reduced_matrix_1d(const MultipatchLayout1D& layout, int test_order, int trial_order, int n_points = 0);

} // namespace detail

} // namespace mpspec
