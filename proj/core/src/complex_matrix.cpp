#include "scalekit/complex_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "scalekit/eigh.hpp"
#include "scalekit/errors.hpp"

namespace scalekit {

ComplexMatrix::ComplexMatrix(int rows, int cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != static_cast<size_t>(rows) * cols)
        throw Error("entry count does not match matrix shape");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = static_cast<int>(rows.size());
    cols_ = rows_ == 0 ? 0 : static_cast<int>(rows.begin()->size());
    data_.reserve(static_cast<size_t>(rows_) * cols_);
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != cols_) throw Error("ragged matrix initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

ComplexMatrix ComplexMatrix::identity(int n) {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix m(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix m(rows_, cols_);
    for (size_t k = 0; k < data_.size(); ++k) m.data_[k] = std::conj(data_[k]);
    return m;
}

Complex ComplexMatrix::trace() const {
    Complex t = 0.0;
    for (int i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const Complex& z : data_) s += std::norm(z);
    return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const Complex& z : data_) m = std::max(m, std::abs(z));
    return m;
}

bool ComplexMatrix::is_hermitian(double tol) const {
    if (rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i)
        for (int j = i; j < cols_; ++j)
            if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
    return true;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw Error("shape mismatch in +");
    for (size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw Error("shape mismatch in -");
    for (size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
    for (Complex& z : data_) z *= s;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw Error("shape mismatch in *");
    ComplexMatrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex(0.0)) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            const Complex aij = a(i, j);
            if (aij == Complex(0.0)) continue;
            for (int k = 0; k < b.rows(); ++k)
                for (int l = 0; l < b.cols(); ++l)
                    c(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return c;
}

Complex det(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) throw Error("det of non-square matrix");
    const int n = m.rows();
    ComplexMatrix a = m;
    Complex d = 1.0;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
        if (std::abs(a(pivot, col)) == 0.0) return 0.0;
        if (pivot != col) {
            for (int j = 0; j < n; ++j) std::swap(a(pivot, j), a(col, j));
            d = -d;
        }
        d *= a(col, col);
        for (int r = col + 1; r < n; ++r) {
            const Complex f = a(r, col) / a(col, col);
            if (f == Complex(0.0)) continue;
            for (int j = col; j < n; ++j) a(r, j) -= f * a(col, j);
        }
    }
    return d;
}

ComplexMatrix inverse(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) throw Error("inverse of non-square matrix");
    const int n = m.rows();
    ComplexMatrix a = m;
    ComplexMatrix inv = ComplexMatrix::identity(n);
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
        if (std::abs(a(pivot, col)) == 0.0) throw NearSingular("matrix not invertible");
        if (pivot != col)
            for (int j = 0; j < n; ++j) {
                std::swap(a(pivot, j), a(col, j));
                std::swap(inv(pivot, j), inv(col, j));
            }
        const Complex p = a(col, col);
        for (int j = 0; j < n; ++j) {
            a(col, j) /= p;
            inv(col, j) /= p;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const Complex f = a(r, col);
            if (f == Complex(0.0)) continue;
            for (int j = 0; j < n; ++j) {
                a(r, j) -= f * a(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

int rank(const ComplexMatrix& m, double tol) {
    ComplexMatrix a = m;
    const int rows = a.rows(), cols = a.cols();
    const double scale = std::max(a.max_abs(), 1.0);
    int r = 0;
    for (int col = 0; col < cols && r < rows; ++col) {
        int pivot = r;
        for (int i = r + 1; i < rows; ++i)
            if (std::abs(a(i, col)) > std::abs(a(pivot, col))) pivot = i;
        if (std::abs(a(pivot, col)) <= tol * scale) continue;
        if (pivot != r)
            for (int j = 0; j < cols; ++j) std::swap(a(pivot, j), a(r, j));
        for (int i = r + 1; i < rows; ++i) {
            const Complex f = a(i, col) / a(r, col);
            for (int j = col; j < cols; ++j) a(i, j) -= f * a(r, j);
        }
        ++r;
    }
    return r;
}

double condition_number(const ComplexMatrix& m) {
    const ComplexMatrix gram = m.adjoint() * m;
    const EighResult e = eigh(gram);
    const double lo = std::max(e.eigenvalues.front(), 0.0);
    const double hi = std::max(e.eigenvalues.back(), 0.0);
    if (lo <= 0.0) return std::numeric_limits<double>::infinity();
    return std::sqrt(hi / lo);
}

}  // namespace scalekit
