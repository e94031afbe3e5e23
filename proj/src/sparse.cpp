#include "dicke/sparse.hpp"

#include <algorithm>
#include <stdexcept>

namespace dicke {

SparseOp::SparseOp(long rows, long cols, std::vector<Triplet> triplets) : rows_(rows), cols_(cols) {
    for (const auto& t : triplets) {
        if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
            throw std::out_of_range("SparseOp: triplet outside matrix");
    }
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    row_ptr_.assign(rows_ + 1, 0);
    col_.reserve(triplets.size());
    val_.reserve(triplets.size());
    std::size_t i = 0;
    while (i < triplets.size()) {
        long r = triplets[i].row, c = triplets[i].col;
        cplx v = triplets[i].val;
        for (++i; i < triplets.size() && triplets[i].row == r && triplets[i].col == c; ++i)
            v += triplets[i].val;
        if (v != cplx{0.0, 0.0}) {
            col_.push_back(c);
            val_.push_back(v);
            ++row_ptr_[r + 1];
        }
    }
    for (long r = 0; r < rows_; ++r) row_ptr_[r + 1] += row_ptr_[r];
}

void SparseOp::apply_serial(const cplx* x, cplx* y) const {
    for (long r = 0; r < rows_; ++r) {
        cplx acc{0.0, 0.0};
        for (long i = row_ptr_[r]; i < row_ptr_[r + 1]; ++i) acc += val_[i] * x[col_[i]];
        y[r] = acc;
    }
}

void SparseOp::apply(const cplx* x, cplx* y) const {
#pragma omp parallel for schedule(static)
    for (long r = 0; r < rows_; ++r) {
        cplx acc{0.0, 0.0};
        for (long i = row_ptr_[r]; i < row_ptr_[r + 1]; ++i) acc += val_[i] * x[col_[i]];
        y[r] = acc;
    }
}

Eigen::VectorXcd SparseOp::apply(const Eigen::VectorXcd& x) const {
    if (x.size() != cols_) throw std::invalid_argument("SparseOp::apply: size mismatch");
    Eigen::VectorXcd y(rows_);
    apply(x.data(), y.data());
    return y;
}

Eigen::VectorXcd SparseOp::apply_serial(const Eigen::VectorXcd& x) const {
    if (x.size() != cols_) throw std::invalid_argument("SparseOp::apply_serial: size mismatch");
    Eigen::VectorXcd y(rows_);
    apply_serial(x.data(), y.data());
    return y;
}

double SparseOp::norm_inf() const {
    double best = 0.0;
    for (long r = 0; r < rows_; ++r) {
        double s = 0.0;
        for (long i = row_ptr_[r]; i < row_ptr_[r + 1]; ++i) s += std::abs(val_[i]);
        best = std::max(best, s);
    }
    return best;
}

Eigen::SparseMatrix<cplx> SparseOp::to_eigen() const {
    std::vector<Eigen::Triplet<cplx>> ts;
    ts.reserve(val_.size());
    visit([&](long r, long c, cplx v) { ts.emplace_back(static_cast<int>(r), static_cast<int>(c), v); });
    Eigen::SparseMatrix<cplx> m(rows_, cols_);
    m.setFromTriplets(ts.begin(), ts.end());
    return m;
}

}  // namespace dicke
