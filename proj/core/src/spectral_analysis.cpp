#include "mpspec/spectral_analysis.hpp"

#include "mpspec/errors.hpp"
#include "mpspec/quadrature.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace mpspec {

namespace {

constexpr int kLoadPoints = 16;

// Raw load vector of g on one layout.
Eigen::VectorXd raw_load_1d(const MultipatchLayout1D& layout, const std::function<double(double)>& g)
{
    const QuadratureRule rule = gauss_rule(kLoadPoints);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(layout.raw_dimension()));
    for (std::size_t patch = 0; patch < layout.patches().size(); ++patch) {
        const SplineSpace1D& s = layout.patches()[patch];
        const auto offset = static_cast<Eigen::Index>(layout.patch_offset(patch));
        const double h = s.element_size();
        for (int e = 0; e < s.n_elements(); ++e) {
            const double a = s.breakpoints()[e];
            const auto first = static_cast<Eigen::Index>(s.first_active(e));
            for (std::size_t q = 0; q < rule.size(); ++q) {
                const double x = a + h * rule.points[q];
                const BasisValues bv = s.eval_basis(x, 0, Side::right);
                b.segment(offset + first, bv.values.size()) += (rule.weights[q] * h * g(x)) * bv.values;
            }
        }
    }
    return b;
}

Eigen::VectorXd reduced_load_1d(const MultipatchLayout1D& layout, const std::function<double(double)>& g)
{
    return layout.extraction().transpose() * raw_load_1d(layout, g);
}

Eigen::VectorXd kron_vector(const Eigen::VectorXd& a, const Eigen::VectorXd& b)
{
    Eigen::VectorXd out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

// Load vectors of all analytic modes as columns; 2D reuses per-direction factors.
Eigen::MatrixXd load_matrix(const AnalyticModeSet& analytic, const MultipatchSpace& space, std::size_t count)
{
    Eigen::MatrixXd b(static_cast<Eigen::Index>(space.dimension()), static_cast<Eigen::Index>(count));
    if (space.spatial_dimension() == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            b.col(static_cast<Eigen::Index>(i)) = mode_load_vector(analytic, i, space);
        }
        return b;
    }
    std::vector<Eigen::VectorXd> fx;
    std::vector<Eigen::VectorXd> fy;
    auto cached = [&](std::vector<Eigen::VectorXd>& cache, int axis, std::size_t i) -> const Eigen::VectorXd& {
        const auto k = static_cast<std::size_t>(analytic.index(i)[axis]);
        if (cache.size() <= k) {
            cache.resize(k + 1);
        }
        if (cache[k].size() == 0) {
            cache[k] = reduced_load_1d(space.direction(axis), [&](double t) { return analytic.factor(i, axis, t); });
        }
        return cache[k];
    };
    for (std::size_t i = 0; i < count; ++i) {
        b.col(static_cast<Eigen::Index>(i)) = kron_vector(cached(fx, 0, i), cached(fy, 1, i));
    }
    return b;
}

} // namespace

Eigen::VectorXd mode_load_vector(const AnalyticModeSet& analytic, std::size_t i, const MultipatchSpace& space)
{
    if (analytic.spatial_dimension() != space.spatial_dimension()) {
        throw ArgumentError("analytic modes and space differ in spatial dimension");
    }
    const Eigen::VectorXd bx =
        reduced_load_1d(space.direction(0), [&](double t) { return analytic.factor(i, 0, t); });
    if (space.spatial_dimension() == 1) {
        return bx;
    }
    const Eigen::VectorXd by =
        reduced_load_1d(space.direction(1), [&](double t) { return analytic.factor(i, 1, t); });
    return kron_vector(bx, by);
}

Eigen::VectorXd project_mode(const AnalyticModeSet& analytic, std::size_t i, const MultipatchSpace& space,
                             const SymmetricOperator& mass)
{
    Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower> llt(mass.lower());
    if (llt.info() != Eigen::Success) {
        throw NotSpdError("mass matrix factorization failed in L2 projection");
    }
    return llt.solve(mode_load_vector(analytic, i, space));
}

double mode_l2_distance_1d(const Eigen::VectorXd& reduced, const AnalyticModeSet& analytic, std::size_t i,
                           const MultipatchSpace& space)
{
    if (space.spatial_dimension() != 1) {
        throw ArgumentError("mode_l2_distance_1d needs a 1D space");
    }
    const MultipatchLayout1D& layout = space.direction(0);
    const Eigen::VectorXd raw = layout.extraction() * reduced;
    const QuadratureRule rule = gauss_rule(kLoadPoints);

    std::vector<double> uh;
    std::vector<double> exact;
    std::vector<double> weight;
    for (std::size_t patch = 0; patch < layout.patches().size(); ++patch) {
        const SplineSpace1D& s = layout.patches()[patch];
        const auto offset = static_cast<Eigen::Index>(layout.patch_offset(patch));
        const double h = s.element_size();
        for (int e = 0; e < s.n_elements(); ++e) {
            const double a = s.breakpoints()[e];
            const auto first = static_cast<Eigen::Index>(s.first_active(e));
            for (std::size_t q = 0; q < rule.size(); ++q) {
                const double x = a + h * rule.points[q];
                const BasisValues bv = s.eval_basis(x, 0, Side::right);
                uh.push_back(raw.segment(offset + first, bv.values.size()).dot(bv.values));
                exact.push_back(analytic.value(i, x));
                weight.push_back(rule.weights[q] * h);
            }
        }
    }
    double uu = 0.0;
    double uv = 0.0;
    for (std::size_t q = 0; q < uh.size(); ++q) {
        uu += weight[q] * uh[q] * uh[q];
        uv += weight[q] * uh[q] * exact[q];
    }
    const double norm_exact = analytic.l2_norm(i);
    if (!(uu > 0.0)) {
        return 1.0;
    }
    const double s = std::copysign(norm_exact / std::sqrt(uu), uv == 0.0 ? 1.0 : uv);
    double err = 0.0;
    for (std::size_t q = 0; q < uh.size(); ++q) {
        const double d = s * uh[q] - exact[q];
        err += weight[q] * d * d;
    }
    return std::sqrt(err) / norm_exact;
}

namespace {

// u^T (K~ - K) u and u^T (M~ - M) u, summed term by term.
std::pair<double, double> penalty_energies(const OperatorSet& ops, const PerturbationParams& params,
                                           const Eigen::VectorXd& u)
{
    double ka = 0.0;
    double mb = 0.0;
    std::vector<double> base_alpha(ops.penalties.size());
    std::vector<double> base_beta(ops.penalties.size());
    for (std::size_t l = 0; l < ops.penalties.size(); ++l) {
        const double weight = std::pow(ops.element_size, 2.0 * static_cast<double>(l + 1) - 2.0);
        base_alpha[l] = params.per_level() ? params.alpha_levels.at(l) : params.alpha * weight;
        base_beta[l] = params.per_level() ? params.beta_levels.at(l) : params.beta * weight;
        if (base_alpha[l] != 0.0 || base_beta[l] != 0.0) {
            const double c = ops.penalties[l].quadratic_form(u);
            ka += base_alpha[l] * c;
            mb += base_beta[l] * c;
        }
    }
    for (const InterfaceOverride& o : params.overrides) {
        const auto l = static_cast<std::size_t>(o.level - 1);
        const double c = ops.per_interface.at(l).at(o.interface).quadratic_form(u);
        ka += (o.alpha - base_alpha[l]) * c;
        mb += (o.beta - base_beta[l]) * c;
    }
    return {ka, mb};
}

} // namespace

namespace {

struct Sampling1D {
    std::vector<double> x;
    std::vector<double> w;
    Eigen::MatrixXd values; ///< points x reduced dimension
};

Sampling1D sample_layout(const MultipatchLayout1D& layout, int points)
{
    const QuadratureRule rule = gauss_rule(points);
    std::vector<Eigen::Triplet<double>> entries;
    Sampling1D out;
    for (std::size_t patch = 0; patch < layout.patches().size(); ++patch) {
        const SplineSpace1D& s = layout.patches()[patch];
        const auto offset = static_cast<Eigen::Index>(layout.patch_offset(patch));
        const double h = s.element_size();
        for (int e = 0; e < s.n_elements(); ++e) {
            const double a = s.breakpoints()[e];
            const auto first = static_cast<Eigen::Index>(s.first_active(e));
            for (std::size_t q = 0; q < rule.size(); ++q) {
                const double x = a + h * rule.points[q];
                const BasisValues bv = s.eval_basis(x, 0, Side::right);
                const auto row = static_cast<Eigen::Index>(out.x.size());
                for (Eigen::Index k = 0; k < bv.values.size(); ++k) {
                    entries.emplace_back(row, offset + first + k, bv.values[k]);
                }
                out.x.push_back(x);
                out.w.push_back(rule.weights[q] * h);
            }
        }
    }
    SparseMatrix raw(static_cast<Eigen::Index>(out.x.size()), static_cast<Eigen::Index>(layout.raw_dimension()));
    raw.setFromTriplets(entries.begin(), entries.end());
    out.values = Eigen::MatrixXd(raw * layout.extraction());
    return out;
}

} // namespace

double l2_distance(const MultipatchSpace& space, const Eigen::VectorXd& reduced,
                   const std::function<double(double, double)>& g, int points)
{
    if (reduced.size() != static_cast<Eigen::Index>(space.dimension())) {
        throw ArgumentError("l2_distance: coefficient vector does not match the space");
    }
    const Sampling1D sx = sample_layout(space.direction(0), points);
    double sum = 0.0;
    if (space.spatial_dimension() == 1) {
        const Eigen::VectorXd v = sx.values * reduced;
        for (std::size_t i = 0; i < sx.x.size(); ++i) {
            const double d = v[static_cast<Eigen::Index>(i)] - g(sx.x[i], 0.0);
            sum += sx.w[i] * d * d;
        }
        return std::sqrt(sum);
    }
    const Sampling1D sy = sample_layout(space.direction(1), points);
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const RowMajor> c(reduced.data(), sx.values.cols(), sy.values.cols());
    const Eigen::MatrixXd v = sx.values * c * sy.values.transpose();
    for (std::size_t i = 0; i < sx.x.size(); ++i) {
        for (std::size_t j = 0; j < sy.x.size(); ++j) {
            const double d = v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - g(sx.x[i], sy.x[j]);
            sum += sx.w[i] * sy.w[j] * d * d;
        }
    }
    return std::sqrt(sum);
}

double frequency_error_1d(const Eigen::VectorXd& reduced, const AnalyticModeSet& analytic, std::size_t i,
                          const MultipatchSpace& space, const OperatorSet& ops, const PerturbationParams& params)
{
    if (space.spatial_dimension() != 1 || analytic.spatial_dimension() != 1) {
        throw ArgumentError("frequency_error_1d needs a 1D space and a 1D mode set");
    }
    const double lambda = analytic.omega(i) * analytic.omega(i);
    if (!(lambda > 0.0)) {
        throw ArgumentError("frequency_error_1d needs a nonzero exact frequency");
    }
    const int r = space.kind().order == OperatorOrder::second ? 1 : 2;
    const MultipatchLayout1D& layout = space.direction(0);
    const Eigen::VectorXd raw = layout.extraction() * reduced;
    const QuadratureRule rule = gauss_rule(kLoadPoints);

    struct Point {
        double w, uh, duh, u, du;
    };
    std::vector<Point> pts;
    for (std::size_t patch = 0; patch < layout.patches().size(); ++patch) {
        const SplineSpace1D& s = layout.patches()[patch];
        const auto offset = static_cast<Eigen::Index>(layout.patch_offset(patch));
        const double h = s.element_size();
        for (int e = 0; e < s.n_elements(); ++e) {
            const double a = s.breakpoints()[e];
            const auto first = static_cast<Eigen::Index>(s.first_active(e));
            for (std::size_t q = 0; q < rule.size(); ++q) {
                const double x = a + h * rule.points[q];
                const BasisDerivatives bd = s.eval_derivatives(x, r, Side::right);
                const auto local = raw.segment(offset + first, bd.values.cols());
                pts.push_back({rule.weights[q] * h, bd.values.row(0).dot(local), bd.values.row(r).dot(local),
                               analytic.factor_derivative(i, 0, x, 0), analytic.factor_derivative(i, 0, x, r)});
            }
        }
    }

    const auto [ka, mb] = penalty_energies(ops, params, reduced);
    double uu = 0.0;
    double uv = 0.0;
    for (const Point& p : pts) {
        uu += p.w * p.uh * p.uh;
        uv += p.w * p.uh * p.u;
    }
    const double norm2 = analytic.l2_norm(i) * analytic.l2_norm(i);
    const double mass_h = uu + mb;
    if (!(mass_h > 0.0)) {
        throw ArgumentError("frequency_error_1d got a mode with zero mass");
    }
    const double s = std::copysign(std::sqrt(norm2 / mass_h), uv == 0.0 ? 1.0 : uv);

    double aee = 0.0;
    double bee = 0.0;
    for (const Point& p : pts) {
        const double e0 = s * p.uh - p.u;
        const double e1 = s * p.duh - p.du;
        aee += p.w * e1 * e1;
        bee += p.w * e0 * e0;
    }
    aee += s * s * ka;
    bee += s * s * mb;
    const double delta = (aee - lambda * bee) / (norm2 * lambda);
    return delta / (1.0 + std::sqrt(1.0 + delta));
}

MatchedSpectrum match_modes(const Spectrum& spectrum, const AnalyticModeSet& analytic, const MultipatchSpace& space,
                            const SymmetricOperator& mass, const std::vector<bool>& flags)
{
    if (!spectrum.has_vectors()) {
        throw ArgumentError("mode matching needs eigenvectors");
    }
    if (!flags.empty() && flags.size() != static_cast<std::size_t>(spectrum.size())) {
        throw ArgumentError("outlier flag count differs from the number of modes");
    }
    const std::size_t n = std::min(analytic.size(), static_cast<std::size_t>(spectrum.size()));
    const Eigen::MatrixXd& v = spectrum.eigenvectors;
    const Eigen::MatrixXd b = load_matrix(analytic, space, n);

    // Normalized overlaps S(n, k) with sign kept.
    Eigen::MatrixXd s = b.transpose() * v;
    const Eigen::MatrixXd mv = mass.full() * v;
    for (Eigen::Index k = 0; k < v.cols(); ++k) {
        const double norm = std::sqrt(v.col(k).dot(mv.col(k)));
        s.col(k) /= norm;
    }
    for (std::size_t i = 0; i < n; ++i) {
        s.row(static_cast<Eigen::Index>(i)) /= analytic.l2_norm(i);
    }

    MatchedSpectrum out;
    out.permutation.assign(n, -1);
    out.cosine.assign(n, 0.0);
    std::vector<char> used(static_cast<std::size_t>(v.cols()), 0);

    for (const auto& group : analytic.degenerate_groups()) {
        const std::size_t begin = group[0];
        const std::size_t end = std::min(group[1], n);
        if (begin >= end) {
            break;
        }
        const std::size_t g = end - begin;

        // Rank-aware selection: each pick maximizes the part of its group
        // projection that is orthogonal to the projections already picked.
        const auto gi = static_cast<Eigen::Index>(g);
        std::vector<Eigen::Index> picked;
        Eigen::MatrixXd basis(gi, 0);
        for (std::size_t step = 0; step < g; ++step) {
            Eigen::Index best = -1;
            double best_residual = -1.0;
            Eigen::Index best_raw = -1;
            double best_score = -1.0;
            for (Eigen::Index k = 0; k < v.cols(); ++k) {
                if (used[static_cast<std::size_t>(k)] ||
                    std::find(picked.begin(), picked.end(), k) != picked.end()) {
                    continue;
                }
                const Eigen::VectorXd w = s.block(static_cast<Eigen::Index>(begin), k, gi, 1);
                const double residual = (w - basis * (basis.transpose() * w)).norm();
                if (residual > best_residual) {
                    best_residual = residual;
                    best = k;
                }
                if (w.norm() > best_score) {
                    best_score = w.norm();
                    best_raw = k;
                }
            }
            if (best_residual < 1e-12) {
                // No independent direction left. Spurious leftovers at the top of
                // the spectrum are orthogonal by parity and are paired by score.
                if (best_score >= 0.5) {
                    throw MatchingError("degenerate analytic group starting at mode " + std::to_string(begin) +
                                        " has a rank-deficient projection");
                }
                best = best_raw;
            } else {
                Eigen::VectorXd w = s.block(static_cast<Eigen::Index>(begin), best, gi, 1);
                w -= basis * (basis.transpose() * w);
                basis.conservativeResize(gi, basis.cols() + 1);
                basis.col(basis.cols() - 1) = w / w.norm();
            }
            picked.push_back(best);
        }

        // Individual pairing inside the group by largest overlap.
        std::vector<char> row_done(g, 0);
        std::vector<char> col_done(g, 0);
        for (std::size_t step = 0; step < g; ++step) {
            double best = -1.0;
            std::size_t bi = 0;
            std::size_t bj = 0;
            for (std::size_t i = 0; i < g; ++i) {
                for (std::size_t j = 0; j < g && !row_done[i]; ++j) {
                    if (col_done[j]) {
                        continue;
                    }
                    const double val = std::abs(s(static_cast<Eigen::Index>(begin + i), picked[j]));
                    if (val > best) {
                        best = val;
                        bi = i;
                        bj = j;
                    }
                }
            }
            row_done[bi] = 1;
            col_done[bj] = 1;
            const Eigen::Index k = picked[bj];
            used[static_cast<std::size_t>(k)] = 1;
            out.permutation[begin + bi] = k;
            out.cosine[begin + bi] =
                g > 1 ? s.block(static_cast<Eigen::Index>(begin), k, static_cast<Eigen::Index>(g), 1).norm()
                      : std::abs(s(static_cast<Eigen::Index>(begin + bi), k));
        }
    }

    out.modes.resize(v.rows(), static_cast<Eigen::Index>(n));
    out.omega_exact.resize(n);
    out.omega_h.resize(n);
    out.l2_error.resize(n);
    out.outlier.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Eigen::Index k = out.permutation[i];
        const double sign = s(static_cast<Eigen::Index>(i), k) < 0.0 ? -1.0 : 1.0;
        out.modes.col(static_cast<Eigen::Index>(i)) = sign * v.col(k);
        out.omega_exact[i] = analytic.omega(i);
        out.omega_h[i] = spectrum.frequencies(k);
        out.outlier[i] = flags.empty() ? false : bool(flags[static_cast<std::size_t>(k)]);
        if (space.spatial_dimension() == 1) {
            out.l2_error[i] = mode_l2_distance_1d(out.modes.col(static_cast<Eigen::Index>(i)), analytic, i, space);
        } else {
            out.l2_error[i] = std::sqrt(std::max(0.0, 2.0 - 2.0 * std::min(1.0, out.cosine[i])));
        }
    }
    return out;
}

std::vector<double> normalized_frequencies(const MatchedSpectrum& matched)
{
    std::vector<double> r(matched.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = matched.omega_exact[i] == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                                              : matched.omega_h[i] / matched.omega_exact[i];
    }
    return r;
}

std::vector<double> mode_l2_error(const MatchedSpectrum& matched)
{
    return matched.l2_error;
}

std::vector<bool> flag_outliers(const Spectrum& spectrum, const OperatorSet& ops, double theta)
{
    if (!spectrum.has_vectors()) {
        throw ArgumentError("outlier flagging needs eigenvectors");
    }
    const Eigen::MatrixXd& v = spectrum.eigenvectors;
    const Eigen::MatrixXd gv = ops.combined.full() * v;
    const Eigen::MatrixXd mv = ops.mass.full() * v;
    std::vector<double> q(static_cast<std::size_t>(v.cols()));
    for (Eigen::Index k = 0; k < v.cols(); ++k) {
        q[static_cast<std::size_t>(k)] = v.col(k).dot(gv.col(k)) / v.col(k).dot(mv.col(k));
    }
    std::vector<double> sorted = q;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    std::vector<bool> flags(q.size(), false);
    if (sorted.empty() || !(sorted.front() > 0.0)) {
        return flags;
    }
    // Cut below the last ratio gap >= theta inside the window [q_max / theta^2, q_max].
    const double floor = sorted.front() / (theta * theta);
    std::size_t cut = 0;
    for (std::size_t i = 0; i + 1 < sorted.size() && sorted[i] >= floor; ++i) {
        if (!(sorted[i + 1] > 0.0) || sorted[i] >= theta * sorted[i + 1]) {
            cut = i + 1;
        }
    }
    if (cut == 0) {
        return flags;
    }
    const double threshold = sorted[cut - 1];
    for (std::size_t k = 0; k < q.size(); ++k) {
        flags[k] = q[k] >= threshold;
    }
    return flags;
}

double convergence_order(std::span<const double> h, std::span<const double> errors)
{
    if (h.size() != errors.size()) {
        throw ArgumentError("mesh sizes and errors differ in length");
    }
    if (h.size() < 3) {
        throw ArgumentError("convergence order needs at least 3 refinement levels");
    }
    std::vector<double> x(h.size());
    std::vector<double> y(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (!(h[i] > 0.0) || !(errors[i] > 0.0)) {
            throw ArgumentError("convergence order needs positive mesh sizes and errors");
        }
        x[i] = std::log(h[i]);
        y[i] = std::log(errors[i]);
    }
    const auto n = static_cast<double>(h.size());
    double xm = 0.0;
    double ym = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        xm += x[i] / n;
        ym += y[i] / n;
    }
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - xm) * (x[i] - xm);
        sxy += (x[i] - xm) * (y[i] - ym);
    }
    return sxy / sxx;
}

} // namespace mpspec
