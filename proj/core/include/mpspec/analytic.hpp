#pragma once

#include "mpspec/multipatch.hpp"

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace mpspec {

enum class ModelProblem { fixed_bar, free_bar, ss_beam, fixed_membrane, ss_plate };

[[nodiscard]] int spatial_dimension(ModelProblem problem);
[[nodiscard]] ProblemKind problem_kind(ModelProblem problem);
[[nodiscard]] std::string to_string(ModelProblem problem);
/// Inverse of to_string; throws ArgumentError listing the valid names.
[[nodiscard]] ModelProblem parse_model_problem(const std::string& name);

/// Closed-form modes on the unit interval or square.
///
///  fixed bar       omega = n pi,             U = sin(n pi x),   n >= 1
///  free bar        omega = n pi,             U = cos(n pi x),   n >= 0
///  s.s. beam       omega = (n pi)^2,         U = sin(n pi x)
///  fixed membrane  omega = pi sqrt(m^2+n^2), U = sin(m pi x) sin(n pi y)
///  s.s. plate      omega = pi^2 (m^2+n^2),   U = sin(m pi x) sin(n pi y)
///
/// 2D sets contain every pair from the box 1..n_per_direction, sorted by
/// frequency and then lexicographically.
class AnalyticModeSet {
public:
    AnalyticModeSet(ModelProblem problem, std::size_t n_per_direction);

    [[nodiscard]] ModelProblem problem() const { return problem_; }
    [[nodiscard]] int spatial_dimension() const { return mpspec::spatial_dimension(problem_); }
    [[nodiscard]] std::size_t size() const { return omega_.size(); }
    [[nodiscard]] double omega(std::size_t i) const { return omega_[i]; }
    [[nodiscard]] const std::vector<double>& omegas() const { return omega_; }
    /// Wave numbers (m, n); n is unused in 1D.
    [[nodiscard]] std::array<int, 2> index(std::size_t i) const { return index_[i]; }

    [[nodiscard]] double value(std::size_t i, double x, double y = 0.0) const;
    /// One factor of the separable mode along an axis.
    [[nodiscard]] double factor(std::size_t i, int axis, double t) const;
    /// order-th derivative of factor(i, axis, .) at t.
    [[nodiscard]] double factor_derivative(std::size_t i, int axis, double t, int order) const;
    [[nodiscard]] double l2_norm(std::size_t i) const;

    /// Ranges [begin, end) of modes with equal frequency (relative 1e-9).
    [[nodiscard]] std::vector<std::array<std::size_t, 2>> degenerate_groups() const;

private:
    ModelProblem problem_;
    std::vector<double> omega_;
    std::vector<std::array<int, 2>> index_;
};

} // namespace mpspec
