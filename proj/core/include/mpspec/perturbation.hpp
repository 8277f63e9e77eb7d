#pragma once

#include "mpspec/assembly.hpp"
#include "mpspec/eigensolve.hpp"
#include "mpspec/errors.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace mpspec {

/// Scaling of one interface at one level, replacing the global value there.
struct InterfaceOverride {
    int level = 1;
    std::size_t interface = 0;
    double alpha = 0.0;
    double beta = 0.0;
};

/// Scalings of the interface penalty on the stiffness (alpha) and mass (beta) side.
///
/// With alpha_levels empty the pair acts on the combined penalty:
/// K + alpha K_G, M + beta K_G. Otherwise level l uses alpha_levels[l-1],
/// beta_levels[l-1] on its own penalty matrix.
struct PerturbationParams {
    double f = 2.0;
    double c = 0.9;
    double alpha = 0.0;
    double beta = 0.0;
    std::vector<double> alpha_levels;
    std::vector<double> beta_levels;
    std::vector<InterfaceOverride> overrides;
    std::vector<IterationRecord> trace;
    /// Largest frequency of the unperturbed problem, when an estimator computed it.
    double omega_max_unperturbed = 0.0;

    [[nodiscard]] bool per_level() const { return !alpha_levels.empty(); }
};

struct PerturbedOperators {
    SymmetricOperator stiffness;
    SymmetricOperator mass;
};

/// Builds the perturbed pair. Zero scalings return exact copies of K and M.
PerturbedOperators perturb(const OperatorSet& ops, const PerturbationParams& params);

enum class Regime { f_zero, f_in_0_1, f_gt_1, mass_only };

struct RegimeSpec {
    Regime regime = Regime::f_zero;
    double f = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    /// f_gt_1 only: target top frequency (default 0.9 times the unperturbed maximum).
    std::optional<double> target;
};

struct RegimeResult {
    PerturbationParams params;
    Spectrum spectrum;
};

/// Spectrum of one parameter regime:
///  f_zero    alpha given, beta = 0
///  f_in_0_1  alpha given, beta = f alpha / omega_max^2 (unperturbed maximum)
///  f_gt_1    alpha from the first-order estimate for the target, beta = f alpha / target^2
///  mass_only alpha = 0, beta given
RegimeResult regime_probe(const OperatorSet& ops, const RegimeSpec& spec, bool compute_vectors = false);

struct ExactTargetOptions {
    int max_iters = 20;
    double tolerance = 1e-6; ///< max relative change of the level alphas
};

/// Multi-level estimation with known target frequencies, one per penalty
/// level l = 1..p-1 (entries for identically-zero levels are ignored).
/// Each iteration identifies the outlier of each level as the mode with the
/// largest level-l interface energy among those not yet taken, then solves
/// the coupled linear system for the level alphas.
PerturbationParams estimate_exact_target_1d(const OperatorSet& ops, double f, std::span<const double> targets,
                                            const ExactTargetOptions& options = {});

enum class TopEigenMethod { dense, power };

struct Algorithm1Options {
    int max_outer = 50;
    TopEigenMethod method = TopEigenMethod::dense;
    /// A pass that lowers the top frequency by less than this relative amount
    /// ends the loop and keeps its parameters.
    double stagnation = 1e-6;
};

/// Pragmatic estimation of a single (alpha, beta) pair on the combined penalty.
/// Each pass aims the top frequency at c times its current value; the loop
/// stops once the top frequency rises again and returns the previous pair,
/// or once it settles at a fixed point (see Algorithm1Options::stagnation).
PerturbationParams algorithm1_estimate(const OperatorSet& ops, double f = 2.0, double c = 0.9,
                                       const Algorithm1Options& options = {});

/// Largest eigenpair with the vector rescaled to unit norm in the given mass matrix.
Eigenpair top_mode(const PerturbedOperators& pair, const SymmetricOperator& normalize_with, TopEigenMethod method);

/// CSV rows: iteration, alpha, beta, omega_max, target.
void write_trace_csv(std::ostream& os, const std::vector<IterationRecord>& trace);

} // namespace mpspec
