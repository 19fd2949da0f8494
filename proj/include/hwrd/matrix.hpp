#pragma once

// Small dense / compressed-sparse-row matrix types used throughout the
// library.  Everything at the scales this solver targets (N up to a few
// thousand) is handled by straightforward loops; no external linear
// algebra dependency is pulled in.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hwrd {

using Vector = std::vector<double>;

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    double* row(std::size_t i) { return a_.data() + i * cols_; }
    const double* row(std::size_t i) const { return a_.data() + i * cols_; }

    double* data() { return a_.data(); }
    const double* data() const { return a_.data(); }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> a_;
};

inline Vector matvec(const Matrix& A, const Vector& x) {
    if (x.size() != A.cols()) throw std::invalid_argument("matvec: size mismatch");
    Vector y(A.rows(), 0.0);
    for (std::size_t i = 0; i < A.rows(); ++i) {
        const double* a = A.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < A.cols(); ++j) s += a[j] * x[j];
        y[i] = s;
    }
    return y;
}

inline Vector matvec_transpose(const Matrix& A, const Vector& x) {
    if (x.size() != A.rows()) throw std::invalid_argument("matvec_transpose: size mismatch");
    Vector y(A.cols(), 0.0);
    for (std::size_t i = 0; i < A.rows(); ++i) {
        const double* a = A.row(i);
        const double xi = x[i];
        for (std::size_t j = 0; j < A.cols(); ++j) y[j] += a[j] * xi;
    }
    return y;
}

// Row-compressed sparse storage.  Used for systems too large to hold
// densely; assembly must produce the same logical matrix either way.
struct CsrMatrix {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<std::size_t> row_ptr;  // size n_rows + 1
    std::vector<std::size_t> col_idx;
    std::vector<double> val;

    static CsrMatrix from_dense(const Matrix& A, double drop_tol = 0.0) {
        CsrMatrix m;
        m.n_rows = A.rows();
        m.n_cols = A.cols();
        m.row_ptr.assign(m.n_rows + 1, 0);
        for (std::size_t i = 0; i < A.rows(); ++i) {
            for (std::size_t j = 0; j < A.cols(); ++j) {
                const double v = A(i, j);
                if (v != 0.0 && std::abs(v) > drop_tol) {
                    m.col_idx.push_back(j);
                    m.val.push_back(v);
                }
            }
            m.row_ptr[i + 1] = m.col_idx.size();
        }
        return m;
    }

    Matrix to_dense() const {
        Matrix A(n_rows, n_cols);
        for (std::size_t i = 0; i < n_rows; ++i)
            for (std::size_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p)
                A(i, col_idx[p]) = val[p];
        return A;
    }

    Vector apply(const Vector& x) const {
        if (x.size() != n_cols) throw std::invalid_argument("csr apply: size mismatch");
        Vector y(n_rows, 0.0);
        for (std::size_t i = 0; i < n_rows; ++i) {
            double s = 0.0;
            for (std::size_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p)
                s += val[p] * x[col_idx[p]];
            y[i] = s;
        }
        return y;
    }

    Vector apply_transpose(const Vector& x) const {
        if (x.size() != n_rows) throw std::invalid_argument("csr apply_transpose: size mismatch");
        Vector y(n_cols, 0.0);
        for (std::size_t i = 0; i < n_rows; ++i)
            for (std::size_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p)
                y[col_idx[p]] += val[p] * x[i];
        return y;
    }
};

// -- small vector helpers ---------------------------------------------------

inline double dot(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vector& a) { return std::sqrt(dot(a, a)); }

inline double norm_inf(const Vector& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

// y += alpha * x
inline void axpy(double alpha, const Vector& x, Vector& y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

// y = alpha * x + beta * y
inline void axpby(double alpha, const Vector& x, double beta, Vector& y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = alpha * x[i] + beta * y[i];
}

inline void scale(Vector& x, double alpha) {
    for (double& v : x) v *= alpha;
}

}  // namespace hwrd
