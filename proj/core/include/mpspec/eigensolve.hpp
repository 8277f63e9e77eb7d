#pragma once

#include "mpspec/symmetric_operator.hpp"

#include <Eigen/Dense>

#include <optional>

namespace mpspec {

enum class Normalization { mass_orthonormal, none };

/// Generalized eigenpairs K v = lambda M v, ascending.
struct Spectrum {
    Eigen::VectorXd eigenvalues;  ///< lambda_n
    Eigen::VectorXd frequencies;  ///< omega_n = sqrt(max(lambda_n, 0))
    Eigen::MatrixXd eigenvectors; ///< columns v_n; empty if not requested
    Normalization normalization = Normalization::none;

    [[nodiscard]] Eigen::Index size() const { return eigenvalues.size(); }
    [[nodiscard]] bool has_vectors() const { return eigenvectors.cols() > 0; }
    [[nodiscard]] double max_frequency() const { return frequencies(frequencies.size() - 1); }
};

/// Full dense solve through Cholesky reduction of M. Eigenvectors are
/// M-orthonormal. Throws NotSpdError when M is not positive definite.
Spectrum solve_gevp(const Eigen::MatrixXd& k, const Eigen::MatrixXd& m, bool compute_vectors = true);
Spectrum solve_gevp(const SymmetricOperator& k, const SymmetricOperator& m, bool compute_vectors = true);

struct Eigenpair {
    double lambda = 0.0;
    double omega = 0.0;
    Eigen::VectorXd vector; ///< M-normalized
    int iterations = 0;
};

/// Largest eigenpair by power iteration on M^{-1} K with a sparse Cholesky
/// factor of M. Stops when the relative Rayleigh-quotient change is <= tol.
/// max_iters = 0 means 10 N. Throws ConvergenceError (carrying the last
/// iterate) when the budget is exhausted.
Eigenpair max_eigenpair(const SymmetricOperator& k, const SymmetricOperator& m, double tol = 1e-10,
                        int max_iters = 0);

/// Largest eigenpair. Up to 1500 unknowns: a dense eigenvalue-only solve
/// followed by shifted inverse iteration for the vector, which is insensitive
/// to clustering at the top. Larger systems go to lanczos_top_eigenpair.
Eigenpair top_eigenpair(const SymmetricOperator& k, const SymmetricOperator& m);

/// Restarted Lanczos on M^{-1} K in the M inner product with full
/// reorthogonalization. Converged when |beta_j y_j| <= tol |theta|.
Eigenpair lanczos_top_eigenpair(const SymmetricOperator& k, const SymmetricOperator& m, double tol = 1e-10,
                                int basis_size = 80, int max_restarts = 20);

/// Polishes an approximate eigenvector with shifted inverse iteration on the
/// sparse pair (LDL^T of K - sigma M, sigma just below the Rayleigh quotient).
/// A dense solve loses accuracy in interior eigenvectors once M is badly
/// conditioned; a few sparse steps recover it. Returns the M-normalized pair.
Eigenpair refine_eigenpair(const SymmetricOperator& k, const SymmetricOperator& m, const Eigen::VectorXd& start,
                           int steps = 3);

/// ||K v - lambda M v|| / (||K v|| + |lambda| ||M v||).
double relative_residual(const SymmetricOperator& k, const SymmetricOperator& m, double lambda,
                         const Eigen::VectorXd& v);

/// Largest |V^T M V - I| entry.
double orthonormality_defect(const SymmetricOperator& m, const Eigen::MatrixXd& vectors);

/// Largest relative residual over all pairs of a spectrum with vectors.
double max_relative_residual(const SymmetricOperator& k, const SymmetricOperator& m, const Spectrum& spectrum);

} // namespace mpspec
