#ifndef ELLSPIN_DENSE_HPP
#define ELLSPIN_DENSE_HPP

#include <complex>
#include <vector>

namespace ellspin {

// Row-major dense real matrix, just large enough for desk-scale sectors.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols),
          a_(static_cast<size_t>(rows) * static_cast<size_t>(cols), fill) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double& operator()(int i, int j) {
        return a_[static_cast<size_t>(i) * cols_ + j];
    }
    double operator()(int i, int j) const {
        return a_[static_cast<size_t>(i) * cols_ + j];
    }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

struct SymEigenResult {
    std::vector<double> values;  // ascending
    Matrix vectors;              // column j is the eigenvector of values[j]
};

// Full eigendecomposition of a real symmetric matrix: Householder
// tridiagonalization followed by implicit-shift QL.
SymEigenResult sym_eigen(const Matrix& a);

// Solve A x = b for a dense complex square system by LU with partial
// pivoting.  A and b are overwritten-safe copies.
std::vector<std::complex<double>> lu_solve(
    std::vector<std::complex<double>> a,  // row-major n*n
    std::vector<std::complex<double>> b);

}  // namespace ellspin

#endif
