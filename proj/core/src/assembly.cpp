#include "mpspec/assembly.hpp"

#include "mpspec/errors.hpp"
#include "mpspec/quadrature.hpp"

#include <cmath>
#include <string>

namespace mpspec {

namespace detail {

SparseMatrix raw_matrix_1d(const MultipatchLayout1D& layout, int test_order, int trial_order, int n_points)
{
    const int p = layout.degree();
    const QuadratureRule rule = gauss_rule(n_points > 0 ? n_points : p + 1);
    const int max_order = std::max(test_order, trial_order);

    std::vector<Eigen::Triplet<double>> triplets;
    for (std::size_t patch = 0; patch < layout.patches().size(); ++patch) {
        const SplineSpace1D& space = layout.patches()[patch];
        const std::size_t offset = layout.patch_offset(patch);
        const double h = space.element_size();
        for (int e = 0; e < space.n_elements(); ++e) {
            const double a = space.breakpoints()[e];
            Eigen::MatrixXd local = Eigen::MatrixXd::Zero(p + 1, p + 1);
            for (std::size_t q = 0; q < rule.size(); ++q) {
                const double x = a + h * rule.points[q];
                const BasisDerivatives d = space.eval_derivatives(x, max_order, Side::right);
                local.noalias() +=
                    (rule.weights[q] * h) * d.values.row(test_order).transpose() * d.values.row(trial_order);
            }
            const std::size_t first = space.first_active(e);
            for (int i = 0; i <= p; ++i) {
                for (int j = 0; j <= p; ++j) {
                    triplets.emplace_back(static_cast<int>(offset + first + i), static_cast<int>(offset + first + j),
                                          local(i, j));
                }
            }
        }
    }
    const auto n = static_cast<Eigen::Index>(layout.raw_dimension());
    SparseMatrix a(n, n);
    a.setFromTriplets(triplets.begin(), triplets.end());
    return a;
}

SparseMatrix reduced_matrix_1d(const MultipatchLayout1D& layout, int test_order, int trial_order, int n_points)
{
    const SparseMatrix& e = layout.extraction();
    SparseMatrix r = SparseMatrix(e.transpose()) * raw_matrix_1d(layout, test_order, trial_order, n_points) * e;
    r.prune(0.0);
    return r;
}

} // namespace detail

namespace {

void check_level(const MultipatchSpace& space, int level)
{
    if (level < 1 || level > space.degree() - 1) {
        throw ArgumentError("interface penalty level must lie in [1, p-1], got " + std::to_string(level));
    }
}

// Per-interface rank-one jump Gram matrices for one direction.
std::vector<SparseMatrix> jump_grams_1d(const MultipatchLayout1D& layout, int level)
{
    std::vector<SparseMatrix> grams;
    const auto n = static_cast<Eigen::Index>(layout.dimension());
    for (const Interface& iface : layout.interfaces()) {
        SparseMatrix g(n, n);
        if (level > layout.kind().coupling_smoothness()) {
            const Eigen::VectorXd jump =
                layout.functional(iface.location, level, Side::right) - layout.functional(iface.location, level, Side::left);
            const SparseMatrix d = jump.sparseView(1.0, 1e-14);
            g = d * SparseMatrix(d.transpose());
        }
        grams.push_back(std::move(g));
    }
    return grams;
}

} // namespace

SymmetricOperator assemble_mass(const MultipatchSpace& space)
{
    if (space.spatial_dimension() == 1) {
        return {detail::reduced_matrix_1d(space.direction(0), 0, 0), OperatorKind::mass};
    }
    const SparseMatrix mx = detail::reduced_matrix_1d(space.direction(0), 0, 0);
    const SparseMatrix my = detail::reduced_matrix_1d(space.direction(1), 0, 0);
    return {kron(mx, my), OperatorKind::mass};
}

SymmetricOperator assemble_stiffness(const MultipatchSpace& space, OperatorOrder order)
{
    if (order == OperatorOrder::fourth && space.kind().coupling_smoothness() < 1) {
        throw ArgumentError("fourth-order stiffness needs a C^1-coupled space; this space is only C^0 at interfaces");
    }
    const int d = (order == OperatorOrder::second) ? 1 : 2;
    const MultipatchLayout1D& lx = space.direction(0);
    if (space.spatial_dimension() == 1) {
        return {detail::reduced_matrix_1d(lx, d, d), OperatorKind::stiffness};
    }
    const MultipatchLayout1D& ly = space.direction(1);
    const SparseMatrix mx = detail::reduced_matrix_1d(lx, 0, 0);
    const SparseMatrix my = detail::reduced_matrix_1d(ly, 0, 0);
    const SparseMatrix kx = detail::reduced_matrix_1d(lx, d, d);
    const SparseMatrix ky = detail::reduced_matrix_1d(ly, d, d);
    SparseMatrix k = kron(kx, my) + kron(mx, ky);
    if (order == OperatorOrder::fourth) {
        // Cross terms of (u_xx + u_yy)(v_xx + v_yy); g[i, j] = int B_i B_j''.
        const SparseMatrix gx = detail::reduced_matrix_1d(lx, 0, 2);
        const SparseMatrix gy = detail::reduced_matrix_1d(ly, 0, 2);
        k += kron(gx, SparseMatrix(gy.transpose())) + kron(SparseMatrix(gx.transpose()), gy);
    }
    return {k, OperatorKind::stiffness};
}

std::vector<SymmetricOperator> assemble_interface_penalty_split(const MultipatchSpace& space, int level)
{
    check_level(space, level);
    std::vector<SymmetricOperator> out;
    if (space.spatial_dimension() == 1) {
        for (SparseMatrix& g : jump_grams_1d(space.direction(0), level)) {
            out.emplace_back(g, OperatorKind::interface_penalty, level);
        }
        return out;
    }
    // Interfaces are full lines: normal jump stencil (x) tangential mass.
    const MultipatchLayout1D& lx = space.direction(0);
    const MultipatchLayout1D& ly = space.direction(1);
    const SparseMatrix mx = detail::reduced_matrix_1d(lx, 0, 0);
    const SparseMatrix my = detail::reduced_matrix_1d(ly, 0, 0);
    for (const SparseMatrix& g : jump_grams_1d(lx, level)) {
        out.emplace_back(kron(g, my), OperatorKind::interface_penalty, level);
    }
    for (const SparseMatrix& g : jump_grams_1d(ly, level)) {
        out.emplace_back(kron(mx, g), OperatorKind::interface_penalty, level);
    }
    return out;
}

SymmetricOperator assemble_interface_penalty(const MultipatchSpace& space, int level)
{
    const std::vector<SymmetricOperator> parts = assemble_interface_penalty_split(space, level);
    SymmetricOperator total = SymmetricOperator::zero(space.dimension(), OperatorKind::interface_penalty, level);
    SparseMatrix sum = total.lower();
    for (const SymmetricOperator& part : parts) {
        sum += part.lower();
    }
    return {sum, OperatorKind::interface_penalty, level};
}

SymmetricOperator combine_penalties(std::span<const SymmetricOperator> penalties, double h)
{
    if (penalties.empty()) {
        throw ArgumentError("combine_penalties: no penalty levels");
    }
    SymmetricOperator combined = SymmetricOperator::zero(penalties.front().dimension(), OperatorKind::combined_penalty);
    for (std::size_t i = 0; i < penalties.size(); ++i) {
        const int l = static_cast<int>(i) + 1;
        combined = combined.plus_scaled(std::pow(h, 2 * l - 2), penalties[i], OperatorKind::combined_penalty);
    }
    return combined;
}

OperatorSet assemble_operators(const MultipatchSpace& space)
{
    OperatorSet ops;
    ops.mass = assemble_mass(space);
    ops.stiffness = assemble_stiffness(space, space.kind().order);
    ops.element_size = space.element_size();
    ops.degree = space.degree();
    for (int l = 1; l <= space.degree() - 1; ++l) {
        std::vector<SymmetricOperator> split = assemble_interface_penalty_split(space, l);
        SparseMatrix sum(static_cast<Eigen::Index>(space.dimension()), static_cast<Eigen::Index>(space.dimension()));
        for (const SymmetricOperator& part : split) {
            sum += part.full();
        }
        ops.penalties.emplace_back(sum, OperatorKind::interface_penalty, l);
        ops.per_interface.push_back(std::move(split));
    }
    if (ops.penalties.empty()) {
        ops.combined = SymmetricOperator::zero(space.dimension(), OperatorKind::combined_penalty);
    } else {
        ops.combined = combine_penalties(ops.penalties, ops.element_size);
    }
    return ops;
}

} // namespace mpspec
