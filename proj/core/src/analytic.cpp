#include "mpspec/analytic.hpp"

#include "mpspec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mpspec {

int spatial_dimension(ModelProblem problem)
{
    return (problem == ModelProblem::fixed_membrane || problem == ModelProblem::ss_plate) ? 2 : 1;
}

ProblemKind problem_kind(ModelProblem problem)
{
    switch (problem) {
    case ModelProblem::fixed_bar:
    case ModelProblem::fixed_membrane:
        return ProblemKind::fixed_bar();
    case ModelProblem::free_bar:
        return ProblemKind::free_bar();
    case ModelProblem::ss_beam:
    case ModelProblem::ss_plate:
        return ProblemKind::simply_supported_beam();
    }
    throw ArgumentError("unknown model problem");
}

std::string to_string(ModelProblem problem)
{
    switch (problem) {
    case ModelProblem::fixed_bar:
        return "fixed_bar";
    case ModelProblem::free_bar:
        return "free_bar";
    case ModelProblem::ss_beam:
        return "ss_beam";
    case ModelProblem::fixed_membrane:
        return "fixed_membrane";
    case ModelProblem::ss_plate:
        return "ss_plate";
    }
    return "unknown";
}

ModelProblem parse_model_problem(const std::string& name)
{
    for (ModelProblem p : {ModelProblem::fixed_bar, ModelProblem::free_bar, ModelProblem::ss_beam,
                           ModelProblem::fixed_membrane, ModelProblem::ss_plate}) {
        if (to_string(p) == name) {
            return p;
        }
    }
    throw ArgumentError("unknown problem '" + name +
                        "'; valid: fixed_bar, free_bar, ss_beam, fixed_membrane, ss_plate");
}

AnalyticModeSet::AnalyticModeSet(ModelProblem problem, std::size_t n_per_direction)
    : problem_(problem)
{
    if (n_per_direction == 0) {
        throw ArgumentError("analytic mode set needs at least one mode per direction");
    }
    constexpr double pi = std::numbers::pi;
    const int n = static_cast<int>(n_per_direction);
    switch (problem) {
    case ModelProblem::fixed_bar:
        for (int i = 1; i <= n; ++i) {
            index_.push_back({i, 0});
            omega_.push_back(i * pi);
        }
        break;
    case ModelProblem::free_bar:
        for (int i = 0; i < n; ++i) {
            index_.push_back({i, 0});
            omega_.push_back(i * pi);
        }
        break;
    case ModelProblem::ss_beam:
        for (int i = 1; i <= n; ++i) {
            index_.push_back({i, 0});
            omega_.push_back(i * i * pi * pi);
        }
        break;
    case ModelProblem::fixed_membrane:
    case ModelProblem::ss_plate: {
        for (int i = 1; i <= n; ++i) {
            for (int j = 1; j <= n; ++j) {
                index_.push_back({i, j});
            }
        }
        std::stable_sort(index_.begin(), index_.end(), [](const auto& a, const auto& b) {
            return a[0] * a[0] + a[1] * a[1] < b[0] * b[0] + b[1] * b[1];
        });
        for (const auto& ij : index_) {
            const double s = ij[0] * ij[0] + ij[1] * ij[1];
            omega_.push_back(problem == ModelProblem::fixed_membrane ? pi * std::sqrt(s) : pi * pi * s);
        }
        break;
    }
    }
}

double AnalyticModeSet::factor(std::size_t i, int axis, double t) const
{
    const int k = index_[i][axis];
    if (problem_ == ModelProblem::free_bar) {
        return std::cos(k * std::numbers::pi * t);
    }
    return std::sin(k * std::numbers::pi * t);
}

double AnalyticModeSet::factor_derivative(std::size_t i, int axis, double t, int order) const
{
    const double k = index_[i][axis] * std::numbers::pi;
    const double phase = k * t + order * std::numbers::pi / 2.0;
    const double scale = std::pow(k, order);
    if (problem_ == ModelProblem::free_bar) {
        return order == 0 ? std::cos(k * t) : scale * std::cos(phase);
    }
    return order == 0 ? std::sin(k * t) : scale * std::sin(phase);
}

double AnalyticModeSet::value(std::size_t i, double x, double y) const
{
    const double fx = factor(i, 0, x);
    return spatial_dimension() == 1 ? fx : fx * factor(i, 1, y);
}

double AnalyticModeSet::l2_norm(std::size_t i) const
{
    if (spatial_dimension() == 2) {
        return 0.5;
    }
    if (problem_ == ModelProblem::free_bar && index_[i][0] == 0) {
        return 1.0;
    }
    return std::sqrt(0.5);
}

std::vector<std::array<std::size_t, 2>> AnalyticModeSet::degenerate_groups() const
{
    std::vector<std::array<std::size_t, 2>> groups;
    std::size_t begin = 0;
    for (std::size_t i = 1; i <= omega_.size(); ++i) {
        if (i == omega_.size() || std::abs(omega_[i] - omega_[begin]) > 1e-9 * std::abs(omega_[begin])) {
            groups.push_back({begin, i});
            begin = i;
        }
    }
    return groups;
}

} // namespace mpspec
