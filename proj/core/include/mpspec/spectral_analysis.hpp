#pragma once

#include "mpspec/analytic.hpp"
#include "mpspec/assembly.hpp"
#include "mpspec/eigensolve.hpp"
#include "mpspec/perturbation.hpp"

#include <functional>
#include <span>
#include <vector>

namespace mpspec {

/// Discrete spectrum reordered against ascending analytic frequencies.
struct MatchedSpectrum {
    /// permutation[n] = discrete mode index paired with analytic mode n.
    std::vector<Eigen::Index> permutation;
    std::vector<double> omega_exact;
    std::vector<double> omega_h;
    /// |<U_n, u_k>| / (||U_n|| ||u_k||) of each pair (subspace value inside degenerate groups).
    std::vector<double> cosine;
    /// Relative L2 error of the sign-aligned, norm-matched mode.
    std::vector<double> l2_error;
    std::vector<bool> outlier;
    /// Sign-aligned discrete modes in matched order (columns).
    Eigen::MatrixXd modes;

    [[nodiscard]] std::size_t size() const { return permutation.size(); }
};

/// Pairs every analytic mode with a discrete one.
///
/// Analytic degenerate groups are taken in ascending order. Each group claims
/// unassigned discrete modes one at a time, always the one whose projection
/// onto the group span adds the largest new direction; pairs inside a group
/// are then formed greedily by individual overlap. Norms use the unperturbed
/// mass matrix. MatchingError is raised when no candidate adds a direction
/// although some candidate still lies mostly (cosine >= 0.5) in the span.
/// `flags`, if non-empty, holds the outlier flag of every discrete mode and is
/// carried over to the pairing.
MatchedSpectrum match_modes(const Spectrum& spectrum, const AnalyticModeSet& analytic, const MultipatchSpace& space,
                            const SymmetricOperator& mass, const std::vector<bool>& flags = {});

/// omega_h / omega_exact per pair; NaN where the exact frequency is zero.
std::vector<double> normalized_frequencies(const MatchedSpectrum& matched);

/// Relative L2 errors of the matched modes.
std::vector<double> mode_l2_error(const MatchedSpectrum& matched);

/// Flags the top cluster of the interface Rayleigh quotient q = v^T K_G v / v^T M v.
///
/// Quotients are sorted in decreasing order and cut below the last ratio gap
/// of at least theta among values within a factor theta^2 of the largest one.
/// Modes that are antisymmetric about an interface have q = 0 exactly, so a
/// median-based threshold would be meaningless here.
std::vector<bool> flag_outliers(const Spectrum& spectrum, const OperatorSet& ops, double theta = 10.0);

/// Least-squares slope of log(error) against log(h); needs at least 3 levels.
double convergence_order(std::span<const double> h, std::span<const double> errors);

/// L2 projection of an analytic mode, in reduced coordinates.
Eigen::VectorXd project_mode(const AnalyticModeSet& analytic, std::size_t i, const MultipatchSpace& space,
                             const SymmetricOperator& mass);

/// Reduced load vector (integral of U_i times each basis function).
Eigen::VectorXd mode_load_vector(const AnalyticModeSet& analytic, std::size_t i, const MultipatchSpace& space);

/// Relative L2 distance ||s u_h - U|| / ||U|| with s chosen so ||s u_h|| = ||U||.
/// 1D only; evaluated by element quadrature without cancellation.
double mode_l2_distance_1d(const Eigen::VectorXd& reduced, const AnalyticModeSet& analytic, std::size_t i,
                           const MultipatchSpace& space);

/// ||u_h - g|| in L2, by Gauss quadrature with `points` nodes per element and direction.
/// Works pointwise, so small errors are not lost to cancellation. In 1D the
/// second argument of g is 0.
double l2_distance(const MultipatchSpace& space, const Eigen::VectorXd& reduced,
                   const std::function<double(double, double)>& g, int points = 8);

/// Relative frequency error omega_h / omega - 1 of a 1D discrete mode.
///
/// Uses lambda_h - lambda = a(e, e) - lambda b(e, e) for e = u_h - u with both
/// modes normalized in the (perturbed) mass form. The exact mode has no
/// derivative jumps, so the identity also holds for the perturbed pair.
/// Every term is a squared error integrated by element quadrature, which keeps
/// the result meaningful far below the accuracy of a computed eigenvalue.
double frequency_error_1d(const Eigen::VectorXd& reduced, const AnalyticModeSet& analytic, std::size_t i,
                          const MultipatchSpace& space, const OperatorSet& ops, const PerturbationParams& params = {});

} // namespace mpspec
