#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace dicke {

using cplx = std::complex<double>;

struct Triplet {
    long row = 0;
    long col = 0;
    cplx val{0.0, 0.0};
};

// Compressed-row complex sparse matrix. apply() runs one OpenMP thread per
// chunk of rows; every row is accumulated by exactly one thread, so the
// result is bitwise identical to apply_serial() for any thread count.
class SparseOp {
public:
    SparseOp() = default;
    SparseOp(long rows, long cols, std::vector<Triplet> triplets);

    long rows() const { return rows_; }
    long cols() const { return cols_; }
    long nnz() const { return static_cast<long>(val_.size()); }

    void apply(const cplx* x, cplx* y) const;
    void apply_serial(const cplx* x, cplx* y) const;
    Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;
    Eigen::VectorXcd apply_serial(const Eigen::VectorXcd& x) const;

    // Largest row sum of absolute values (induced inf-norm).
    double norm_inf() const;

    Eigen::SparseMatrix<cplx> to_eigen() const;

    template <class F>  // f(row, col, value)
    void visit(F&& f) const {
        for (long r = 0; r < rows_; ++r)
            for (long i = row_ptr_[r]; i < row_ptr_[r + 1]; ++i) f(r, col_[i], val_[i]);
    }

private:
    long rows_ = 0;
    long cols_ = 0;
    std::vector<long> row_ptr_;
    std::vector<long> col_;
    std::vector<cplx> val_;
};

}  // namespace dicke
