#include "scalekit/eigh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "scalekit/errors.hpp"

namespace scalekit {

namespace {

double off_diagonal_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

}  // namespace

EighResult eigh(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) throw Error("eigh needs a square matrix");
    const int n = m.rows();
    if (!m.is_hermitian(1e-8 * std::max(1.0, m.max_abs())))
        throw Error("eigh needs a Hermitian matrix");

    ComplexMatrix a = m;
    // symmetrize away representation noise
    for (int i = 0; i < n; ++i) {
        a(i, i) = Complex(a(i, i).real(), 0.0);
        for (int j = i + 1; j < n; ++j) {
            const Complex avg = 0.5 * (a(i, j) + std::conj(a(j, i)));
            a(i, j) = avg;
            a(j, i) = std::conj(avg);
        }
    }
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double scale = std::max(a.max_abs(), 1e-300);
    const double stop = 1e-14 * scale * n;
    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps && off_diagonal_norm(a) > stop; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag <= 1e-300) continue;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const Complex phase = apq / mag;
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const Complex sp = s * phase;  // rotation: col_p' = c*col_p - conj(sp)*col_q ...

                for (int k = 0; k < n; ++k) {
                    const Complex akp = a(k, p);
                    const Complex akq = a(k, q);
                    a(k, p) = c * akp - std::conj(sp) * akq;
                    a(k, q) = sp * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const Complex apk = a(p, k);
                    const Complex aqk = a(q, k);
                    a(p, k) = c * apk - sp * aqk;
                    a(q, k) = std::conj(sp) * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const Complex vkp = v(k, p);
                    const Complex vkq = v(k, q);
                    v(k, p) = c * vkp - std::conj(sp) * vkq;
                    v(k, q) = sp * vkp + c * vkq;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = Complex(a(p, p).real(), 0.0);
                a(q, q) = Complex(a(q, q).real(), 0.0);
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

    EighResult res;
    res.eigenvalues.resize(n);
    res.vectors = ComplexMatrix(n, n);
    for (int j = 0; j < n; ++j) {
        res.eigenvalues[j] = a(order[j], order[j]).real();
        for (int i = 0; i < n; ++i) res.vectors(i, j) = v(i, order[j]);
    }
    return res;
}

ComplexMatrix inv_sqrt_psd(const ComplexMatrix& m, double tol) {
    const EighResult e = eigh(m);
    const int n = m.rows();
    const double lambda_max = e.eigenvalues.empty() ? 0.0 : e.eigenvalues.back();
    const double threshold = tol >= 0.0 ? tol : 1e-12 * lambda_max;
    for (double w : e.eigenvalues)
        if (w < threshold) {
            std::ostringstream msg;
            msg << "inv_sqrt_psd: eigenvalue " << w << " below threshold " << threshold;
            throw NearSingular(msg.str());
        }
    ComplexMatrix r(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Complex s = 0.0;
            for (int k = 0; k < n; ++k)
                s += e.vectors(i, k) * std::conj(e.vectors(j, k)) / std::sqrt(e.eigenvalues[k]);
            r(i, j) = s;
        }
    return r;
}

ComplexMatrix sqrt_psd(const ComplexMatrix& m) {
    const EighResult e = eigh(m);
    const int n = m.rows();
    ComplexMatrix r(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Complex s = 0.0;
            for (int k = 0; k < n; ++k)
                s += e.vectors(i, k) * std::conj(e.vectors(j, k)) * std::sqrt(std::max(e.eigenvalues[k], 0.0));
            r(i, j) = s;
        }
    return r;
}

ComplexMatrix expm_hermitian(const ComplexMatrix& q, double s) {
    const EighResult e = eigh(q);
    const int n = q.rows();
    ComplexMatrix r(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Complex acc = 0.0;
            for (int k = 0; k < n; ++k)
                acc += e.vectors(i, k) * std::conj(e.vectors(j, k)) * std::exp(s * e.eigenvalues[k]);
            r(i, j) = acc;
        }
    return r;
}

}  // namespace scalekit
