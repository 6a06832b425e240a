#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

namespace scalekit {

using Complex = std::complex<double>;

// Dense row-major complex matrix. Everything here is desk scale (dims <= 64),
// so no sparsity, no blocking, no allocator tricks.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {}
    ComplexMatrix(int rows, int cols, std::vector<Complex> entries);
    // row-major brace construction for tests/fixtures
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(int n);
    static ComplexMatrix zero(int rows, int cols) { return ComplexMatrix(rows, cols); }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    Complex& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    const Complex& operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

    const std::vector<Complex>& data() const { return data_; }
    std::vector<Complex>& data() { return data_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conjugate() const;
    Complex trace() const;
    double frobenius_norm() const;
    double max_abs() const;
    bool is_hermitian(double tol) const;

    ComplexMatrix& operator+=(const ComplexMatrix& rhs);
    ComplexMatrix& operator-=(const ComplexMatrix& rhs);
    ComplexMatrix& operator*=(Complex s);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Complex> data_;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// LU with partial pivoting.
Complex det(const ComplexMatrix& m);
ComplexMatrix inverse(const ComplexMatrix& m);

// Numerical rank via row elimination with a relative pivot threshold.
int rank(const ComplexMatrix& m, double tol = 1e-10);

// sigma_max / sigma_min computed from the Hermitian spectrum of m^dagger m.
double condition_number(const ComplexMatrix& m);

}  // namespace scalekit
