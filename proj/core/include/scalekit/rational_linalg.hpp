#pragma once

#include <vector>

#include "scalekit/complex_matrix.hpp"
#include "scalekit/rational.hpp"

namespace scalekit {

// Dense matrix of exact rationals. Used for certificate verification and
// rank decisions where a tolerance would undermine soundness.
class RatMatrix {
public:
    RatMatrix() = default;
    RatMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {}

    static RatMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Rational& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    const Rational& operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

    RatMatrix transpose() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Rational> data_;
};

int rank(const RatMatrix& m);

// Basis of the right kernel {x : M x = 0}, one column per basis vector.
RatMatrix kernel(const RatMatrix& m);

// Exact complex rational scalar, for determinant evaluation over Q(i).
struct GaussRational {
    Rational re, im;

    GaussRational() : re(0), im(0) {}
    GaussRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const { return re == 0 && im == 0; }

    GaussRational operator+(const GaussRational& o) const { return {re + o.re, im + o.im}; }
    GaussRational operator-(const GaussRational& o) const { return {re - o.re, im - o.im}; }
    GaussRational operator*(const GaussRational& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    GaussRational operator/(const GaussRational& o) const;
};

// Exact determinant of a square complex-rational matrix (row-major).
GaussRational gauss_det(std::vector<GaussRational> entries, int n);

// Exact rationalization of each complex entry.
std::vector<GaussRational> to_gauss(const ComplexMatrix& m);

}  // namespace scalekit
