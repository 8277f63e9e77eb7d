#include "mpspec/sparse_utils.hpp"

#include <vector>

namespace mpspec {

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b)
{
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(a.nonZeros()) * static_cast<std::size_t>(b.nonZeros()));
    for (int ca = 0; ca < a.outerSize(); ++ca) {
        for (SparseMatrix::InnerIterator ia(a, ca); ia; ++ia) {
            for (int cb = 0; cb < b.outerSize(); ++cb) {
                for (SparseMatrix::InnerIterator ib(b, cb); ib; ++ib) {
                    triplets.emplace_back(static_cast<int>(ia.row() * b.rows() + ib.row()),
                                          static_cast<int>(ia.col() * b.cols() + ib.col()), ia.value() * ib.value());
                }
            }
        }
    }
    SparseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    out.setFromTriplets(triplets.begin(), triplets.end());
    return out;
}

} // namespace mpspec
