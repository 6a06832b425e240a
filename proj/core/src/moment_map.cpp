#include "scalekit/moment_map.hpp"

#include <cmath>

#include "scalekit/amgm.hpp"
#include "scalekit/eigh.hpp"
#include "scalekit/errors.hpp"

namespace scalekit {

double robust_amgm_bound(const std::vector<double>& x, double delta) {
    const int n = static_cast<int>(x.size());
    double sum = 0.0, dsq = 0.0, prod = 1.0;
    for (double xi : x) {
        if (xi <= 0.0) throw PreconditionViolated("robust_amgm_bound: entries must be positive");
        sum += xi;
        dsq += (xi - 1.0) * (xi - 1.0);
        prod *= xi;
    }
    if (std::abs(sum - n) > 1e-10) throw PreconditionViolated("robust_amgm_bound: sum must equal n");
    if (std::abs(dsq - delta) > 1e-8) throw PreconditionViolated("robust_amgm_bound: delta mismatch");
    if (delta > 1.0 + 1e-12) throw PreconditionViolated("robust_amgm_bound: delta must be <= 1");
    return prod;
}

MatrixMomentMap matrix_moment_map(const ComplexMatrix& m) {
    const int n = m.rows();
    MatrixMomentMap mu;
    mu.p.assign(n, 0.0);
    mu.q.assign(m.cols(), 0.0);
    double total = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m.cols(); ++j) {
            const double w = std::norm(m(i, j));
            mu.p[i] += w;
            mu.q[j] += w;
            total += w;
        }
    const double avg = total / n;
    for (double& v : mu.p) v = 2.0 * (v - avg);
    const double avg_c = total / m.cols();
    for (double& v : mu.q) v = 2.0 * (v - avg_c);
    return mu;
}

double matrix_fv(const ComplexMatrix& m, const std::vector<double>& d, const std::vector<double>& e,
                 double s) {
    if (static_cast<int>(d.size()) != m.rows() || static_cast<int>(e.size()) != m.cols())
        throw Error("direction length mismatch");
    double total = 0.0;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            total += std::norm(m(i, j)) * std::exp(2.0 * s * (d[i] + e[j]));
    return total;
}

LeftRightMomentMap left_right_moment_map(const std::vector<ComplexMatrix>& tuple) {
    if (tuple.empty()) throw Error("empty tuple");
    const int n = tuple.front().rows();
    ComplexMatrix left(n, n), right(n, n);
    double norm_sq = 0.0;
    for (const ComplexMatrix& a : tuple) {
        left += a * a.adjoint();
        right += a.adjoint() * a;
        norm_sq += a.frobenius_norm() * a.frobenius_norm();
    }
    const Complex shift(norm_sq / n, 0.0);
    LeftRightMomentMap mu;
    mu.p1 = left;
    mu.p2 = right.transpose();
    for (int i = 0; i < n; ++i) {
        mu.p1(i, i) -= shift;
        mu.p2(i, i) -= shift;
    }
    mu.p1 *= Complex(2.0, 0.0);
    mu.p2 *= Complex(2.0, 0.0);
    return mu;
}

double left_right_fv(const std::vector<ComplexMatrix>& tuple, const ComplexMatrix& q1,
                     const ComplexMatrix& q2, double s) {
    const ComplexMatrix g1 = expm_hermitian(q1, s);
    const ComplexMatrix g2 = expm_hermitian(q2.transpose(), s);
    double total = 0.0;
    for (const ComplexMatrix& a : tuple) {
        const double f = (g1 * a * g2).frobenius_norm();
        total += f * f;
    }
    return total;
}

}  // namespace scalekit
