#include "scalekit/rational_linalg.hpp"

#include "scalekit/errors.hpp"

namespace scalekit {

RatMatrix RatMatrix::identity(int n) {
    RatMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

RatMatrix RatMatrix::transpose() const {
    RatMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<int> rref(RatMatrix& a) {
    std::vector<int> pivots;
    int r = 0;
    for (int col = 0; col < a.cols() && r < a.rows(); ++col) {
        int pivot = -1;
        for (int i = r; i < a.rows(); ++i)
            if (a(i, col) != 0) {
                pivot = i;
                break;
            }
        if (pivot < 0) continue;
        if (pivot != r)
            for (int j = 0; j < a.cols(); ++j) swap(a(pivot, j), a(r, j));
        const Rational inv = 1 / a(r, col);
        for (int j = col; j < a.cols(); ++j) a(r, j) *= inv;
        for (int i = 0; i < a.rows(); ++i) {
            if (i == r || a(i, col) == 0) continue;
            const Rational f = a(i, col);
            for (int j = col; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
        }
        pivots.push_back(col);
        ++r;
    }
    return pivots;
}

}  // namespace

int rank(const RatMatrix& m) {
    RatMatrix a = m;
    return static_cast<int>(rref(a).size());
}

RatMatrix kernel(const RatMatrix& m) {
    RatMatrix a = m;
    const std::vector<int> pivots = rref(a);
    std::vector<bool> is_pivot(m.cols(), false);
    for (int p : pivots) is_pivot[p] = true;

    std::vector<int> free_cols;
    for (int j = 0; j < m.cols(); ++j)
        if (!is_pivot[j]) free_cols.push_back(j);

    RatMatrix basis(m.cols(), static_cast<int>(free_cols.size()));
    for (size_t k = 0; k < free_cols.size(); ++k) {
        const int fc = free_cols[k];
        basis(fc, static_cast<int>(k)) = 1;
        for (size_t r = 0; r < pivots.size(); ++r) basis(pivots[r], static_cast<int>(k)) = -a(static_cast<int>(r), fc);
    }
    return basis;
}

GaussRational GaussRational::operator/(const GaussRational& o) const {
    const Rational d = o.re * o.re + o.im * o.im;
    if (d == 0) throw Error("division by zero GaussRational");
    return {(re * o.re + im * o.im) / d, (im * o.re - re * o.im) / d};
}

GaussRational gauss_det(std::vector<GaussRational> a, int n) {
    if (static_cast<int>(a.size()) != n * n) throw Error("gauss_det: shape mismatch");
    auto at = [&](int i, int j) -> GaussRational& { return a[static_cast<size_t>(i) * n + j]; };
    GaussRational d(Rational(1), Rational(0));
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int i = col; i < n; ++i)
            if (!at(i, col).is_zero()) {
                pivot = i;
                break;
            }
        if (pivot < 0) return GaussRational();
        if (pivot != col) {
            for (int j = col; j < n; ++j) std::swap(at(pivot, j), at(col, j));
            d = GaussRational(Rational(-1), Rational(0)) * d;
        }
        d = d * at(col, col);
        for (int i = col + 1; i < n; ++i) {
            if (at(i, col).is_zero()) continue;
            const GaussRational f = at(i, col) / at(col, col);
            for (int j = col; j < n; ++j) at(i, j) = at(i, j) - f * at(col, j);
        }
    }
    return d;
}

std::vector<GaussRational> to_gauss(const ComplexMatrix& m) {
    std::vector<GaussRational> out;
    out.reserve(m.data().size());
    for (const Complex& z : m.data())
        out.emplace_back(rational_from_double(z.real()), rational_from_double(z.imag()));
    return out;
}

}  // namespace scalekit
