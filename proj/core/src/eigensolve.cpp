#include "mpspec/eigensolve.hpp"

#include "mpspec/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <string>

namespace mpspec {

namespace {

Eigen::VectorXd to_frequencies(const Eigen::VectorXd& lambda)
{
    return lambda.unaryExpr([](double l) { return std::sqrt(std::max(l, 0.0)); });
}

Eigen::LLT<Eigen::MatrixXd> factor_mass(const Eigen::MatrixXd& m)
{
    if (m.rows() != m.cols()) {
        throw ArgumentError("mass matrix is not square");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) {
        throw NotSpdError("Cholesky factorization of the mass matrix failed");
    }
    return llt;
}

// C = L^{-1} K L^{-T}, symmetrized.
Eigen::MatrixXd reduce(const Eigen::LLT<Eigen::MatrixXd>& llt, const Eigen::MatrixXd& k)
{
    const auto l = llt.matrixL();
    Eigen::MatrixXd x = l.solve(k);
    Eigen::MatrixXd c = l.solve(x.transpose());
    return 0.5 * (c + c.transpose());
}

Eigen::VectorXd start_vector(Eigen::Index n)
{
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        // Index-dependent jitter keeps the start away from any invariant subspace.
        v(i) = 1.0 + 0.1 * std::sin(1.0 + 0.7 * static_cast<double>(i));
    }
    return v / v.norm();
}

} // namespace

Spectrum solve_gevp(const Eigen::MatrixXd& k, const Eigen::MatrixXd& m, bool compute_vectors)
{
    if (k.rows() != m.rows() || k.cols() != m.cols()) {
        throw ArgumentError("stiffness and mass dimensions differ");
    }
    const Eigen::LLT<Eigen::MatrixXd> llt = factor_mass(m);
    const Eigen::MatrixXd c = reduce(llt, k);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        c, compute_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceError("symmetric eigensolver did not converge");
    }

    Spectrum s;
    s.eigenvalues = solver.eigenvalues();
    s.frequencies = to_frequencies(s.eigenvalues);
    if (compute_vectors) {
        s.eigenvectors = llt.matrixU().solve(solver.eigenvectors());
        s.normalization = Normalization::mass_orthonormal;
    }
    return s;
}

Spectrum solve_gevp(const SymmetricOperator& k, const SymmetricOperator& m, bool compute_vectors)
{
    return solve_gevp(k.dense(), m.dense(), compute_vectors);
}

Eigenpair max_eigenpair(const SymmetricOperator& k, const SymmetricOperator& m, double tol, int max_iters)
{
    const auto n = static_cast<Eigen::Index>(m.dimension());
    if (k.dimension() != m.dimension()) {
        throw ArgumentError("stiffness and mass dimensions differ");
    }
    if (max_iters <= 0) {
        max_iters = static_cast<int>(10 * n);
    }
    Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower> llt(m.lower());
    if (llt.info() != Eigen::Success) {
        throw NotSpdError("sparse Cholesky factorization of the mass matrix failed");
    }

    Eigen::VectorXd v = start_vector(n);
    v /= std::sqrt(m.quadratic_form(v));
    double lambda = k.quadratic_form(v);
    for (int it = 1; it <= max_iters; ++it) {
        Eigen::VectorXd w = llt.solve(k.apply(v));
        const double norm = std::sqrt(m.quadratic_form(w));
        if (!(norm > 0.0)) {
            throw ConvergenceError("power iteration collapsed to the zero vector");
        }
        v = w / norm;
        const double next = k.quadratic_form(v);
        const double change = std::abs(next - lambda);
        lambda = next;
        if (change <= tol * std::abs(lambda)) {
            return {lambda, std::sqrt(std::max(lambda, 0.0)), v, it};
        }
    }
    throw ConvergenceError("power iteration did not converge in " + std::to_string(max_iters) + " iterations",
                           LastIterate{lambda, v});
}

namespace {

Eigenpair dense_top_eigenpair(const SymmetricOperator& k, const SymmetricOperator& m)
{
    const Eigen::LLT<Eigen::MatrixXd> llt = factor_mass(m.dense());
    const Eigen::MatrixXd c = reduce(llt, k.dense());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(c, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceError("symmetric eigensolver did not converge");
    }
    const Eigen::Index n = c.rows();
    const double lambda = solver.eigenvalues()(n - 1);
    const double scale = std::max(std::abs(lambda), solver.eigenvalues().cwiseAbs().maxCoeff());

    // Shifted inverse iteration on sigma I - C, which is positive definite.
    Eigen::MatrixXd shifted = -c;
    const double sigma = lambda + 1e-10 * scale + 1e-300;
    shifted.diagonal().array() += sigma;
    Eigen::LLT<Eigen::MatrixXd> inv(shifted);
    if (inv.info() != Eigen::Success) {
        throw ConvergenceError("shifted factorization failed in top eigenpair");
    }
    Eigen::VectorXd y = start_vector(n);
    int it = 0;
    for (; it < 4; ++it) {
        y = inv.solve(y);
        y /= y.norm();
    }
    Eigen::VectorXd v = llt.matrixU().solve(y);
    v /= std::sqrt(m.quadratic_form(v));
    return {lambda, std::sqrt(std::max(lambda, 0.0)), v, it};
}

constexpr std::size_t kDenseTopLimit = 1500;

} // namespace

Eigenpair lanczos_top_eigenpair(const SymmetricOperator& k, const SymmetricOperator& m, double tol, int basis_size,
                                int max_restarts)
{
    if (k.dimension() != m.dimension()) {
        throw ArgumentError("lanczos_top_eigenpair: K and M differ in size");
    }
    const auto n = static_cast<Eigen::Index>(m.dimension());
    Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower> llt(m.lower());
    if (llt.info() != Eigen::Success) {
        throw NotSpdError("Cholesky factorization of the mass matrix failed");
    }
    const Eigen::Index steps = std::min<Eigen::Index>(n, std::max(basis_size, 2));

    Eigen::MatrixXd q(n, steps);
    Eigen::MatrixXd mq(n, steps);
    Eigen::VectorXd start = start_vector(n);
    int total = 0;
    for (int restart = 0; restart <= max_restarts; ++restart) {
        start /= std::sqrt(m.quadratic_form(start));
        q.col(0) = start;
        mq.col(0) = m.apply(start);
        Eigen::VectorXd alpha(steps);
        Eigen::VectorXd beta(steps);
        Eigen::Index used = 0;
        double theta = 0.0;
        Eigen::VectorXd ritz;
        bool converged = false;
        for (Eigen::Index j = 0; j < steps; ++j) {
            ++total;
            Eigen::VectorXd w = llt.solve(k.apply(q.col(j)));
            alpha[j] = mq.col(j).dot(w);
            // Full reorthogonalization in the M inner product, applied twice.
            for (int pass = 0; pass < 2; ++pass) {
                w -= q.leftCols(j + 1) * (mq.leftCols(j + 1).transpose() * w);
            }
            const Eigen::VectorXd mw = m.apply(w);
            beta[j] = std::sqrt(std::max(w.dot(mw), 0.0));
            used = j + 1;

            Eigen::MatrixXd t = Eigen::MatrixXd::Zero(used, used);
            t.diagonal() = alpha.head(used);
            for (Eigen::Index i = 0; i + 1 < used; ++i) {
                t(i, i + 1) = t(i + 1, i) = beta[i];
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri(t);
            theta = tri.eigenvalues()(used - 1);
            ritz = tri.eigenvectors().col(used - 1);
            const double residual = std::abs(beta[j] * ritz(used - 1));
            if (residual <= tol * std::abs(theta) || beta[j] <= 1e-14 * std::abs(theta) || used == n) {
                converged = true;
                break;
            }
            if (j + 1 < steps) {
                q.col(j + 1) = w / beta[j];
                mq.col(j + 1) = mw / beta[j];
            }
        }
        Eigen::VectorXd v = q.leftCols(used) * ritz;
        v /= std::sqrt(m.quadratic_form(v));
        if (converged) {
            const double lambda = k.quadratic_form(v);
            return {lambda, std::sqrt(std::max(lambda, 0.0)), v, total};
        }
        start = v;
    }
    throw ConvergenceError("Lanczos iteration for the top eigenpair did not converge");
}

Eigenpair top_eigenpair(const SymmetricOperator& k, const SymmetricOperator& m)
{
    return k.dimension() <= kDenseTopLimit ? dense_top_eigenpair(k, m) : lanczos_top_eigenpair(k, m);
}

double relative_residual(const SymmetricOperator& k, const SymmetricOperator& m, double lambda,
                         const Eigen::VectorXd& v)
{
    const Eigen::VectorXd kv = k.apply(v);
    const Eigen::VectorXd mv = m.apply(v);
    const double denom = kv.norm() + std::abs(lambda) * mv.norm();
    return denom > 0.0 ? (kv - lambda * mv).norm() / denom : 0.0;
}

double orthonormality_defect(const SymmetricOperator& m, const Eigen::MatrixXd& vectors)
{
    const Eigen::MatrixXd g = vectors.transpose() * (m.full() * vectors);
    return (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

double max_relative_residual(const SymmetricOperator& k, const SymmetricOperator& m, const Spectrum& spectrum)
{
    if (!spectrum.has_vectors()) {
        throw ArgumentError("spectrum carries no eigenvectors");
    }
    const SparseMatrix kf = k.full();
    const SparseMatrix mf = m.full();
    const Eigen::MatrixXd kv = kf * spectrum.eigenvectors;
    const Eigen::MatrixXd mv = mf * spectrum.eigenvectors;
    double worst = 0.0;
    for (Eigen::Index j = 0; j < spectrum.size(); ++j) {
        const double lambda = spectrum.eigenvalues(j);
        const double denom = kv.col(j).norm() + std::abs(lambda) * mv.col(j).norm();
        if (denom > 0.0) {
            worst = std::max(worst, (kv.col(j) - lambda * mv.col(j)).norm() / denom);
        }
    }
    return worst;
}

Eigenpair refine_eigenpair(const SymmetricOperator& k, const SymmetricOperator& m, const Eigen::VectorXd& start,
                           int steps)
{
    if (start.size() != static_cast<Eigen::Index>(k.dimension()) || k.dimension() != m.dimension()) {
        throw ArgumentError("refine_eigenpair: size mismatch");
    }
    const SparseMatrix kf = k.full();
    const SparseMatrix mf = m.full();
    Eigen::VectorXd v = start;
    double lambda = v.dot(kf * v) / v.dot(mf * v);
    for (int it = 0; it < steps; ++it) {
        const SparseMatrix shifted = kf - (lambda * (1.0 - 1e-9)) * mf;
        Eigen::SimplicialLDLT<SparseMatrix> ldlt(shifted);
        if (ldlt.info() != Eigen::Success) {
            throw NotSpdError("refine_eigenpair: shifted factorization failed");
        }
        v = ldlt.solve(mf * v);
        v /= std::sqrt(v.dot(mf * v));
        lambda = v.dot(kf * v);
    }
    Eigenpair out;
    out.lambda = lambda;
    out.omega = std::sqrt(std::max(lambda, 0.0));
    out.vector = std::move(v);
    out.iterations = steps;
    return out;
}

} // namespace mpspec
