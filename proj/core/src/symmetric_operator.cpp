#include "mpspec/symmetric_operator.hpp"

#include "mpspec/errors.hpp"

#include <iomanip>
#include <ostream>

namespace mpspec {

SymmetricOperator::SymmetricOperator(const SparseMatrix& a, OperatorKind kind, int level)
    : kind_(kind)
    , level_(level)
{
    if (a.rows() != a.cols()) {
        throw ArgumentError("SymmetricOperator: matrix is not square");
    }
    const SparseMatrix at = a.transpose();
    const SparseMatrix sym = 0.5 * (a + at);
    lower_ = sym.triangularView<Eigen::Lower>();
    lower_.prune(0.0);
    lower_.makeCompressed();
}

SymmetricOperator SymmetricOperator::zero(std::size_t n, OperatorKind kind, int level)
{
    const auto size = static_cast<Eigen::Index>(n);
    return SymmetricOperator(SparseMatrix(size, size), kind, level);
}

SparseMatrix SymmetricOperator::full() const
{
    SparseMatrix f = lower_.selfadjointView<Eigen::Lower>();
    return f;
}

Eigen::MatrixXd SymmetricOperator::dense() const
{
    return Eigen::MatrixXd(full());
}

Eigen::VectorXd SymmetricOperator::apply(const Eigen::VectorXd& x) const
{
    return lower_.selfadjointView<Eigen::Lower>() * x;
}

double SymmetricOperator::quadratic_form(const Eigen::VectorXd& x) const
{
    return x.dot(apply(x));
}

double SymmetricOperator::coeff(std::size_t i, std::size_t j) const
{
    if (i < j) {
        std::swap(i, j);
    }
    return lower_.coeff(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

double SymmetricOperator::frobenius_norm() const
{
    return full().norm();
}

bool SymmetricOperator::is_zero() const
{
    return lower_.nonZeros() == 0;
}

SymmetricOperator SymmetricOperator::plus_scaled(double s, const SymmetricOperator& other, OperatorKind kind) const
{
    if (other.dimension() != dimension()) {
        throw ArgumentError("SymmetricOperator: dimension mismatch in linear combination");
    }
    SymmetricOperator out;
    out.kind_ = kind;
    out.level_ = 0;
    if (s == 0.0) {
        out.lower_ = lower_;
    } else {
        out.lower_ = lower_ + s * other.lower_;
        out.lower_.makeCompressed();
    }
    return out;
}

SymmetricOperator SymmetricOperator::scaled(double s) const
{
    SymmetricOperator out = *this;
    out.lower_ *= s;
    return out;
}

void write_matrix_market(std::ostream& os, const SymmetricOperator& op)
{
    const SparseMatrix& l = op.lower();
    os << "%%MatrixMarket matrix coordinate real symmetric\n";
    os << l.rows() << ' ' << l.cols() << ' ' << l.nonZeros() << '\n';
    os << std::setprecision(17);
    for (int c = 0; c < l.outerSize(); ++c) {
        for (SparseMatrix::InnerIterator it(l, c); it; ++it) {
            os << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
        }
    }
}

} // namespace mpspec
