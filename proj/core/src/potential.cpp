#include "scalekit/potential.hpp"

#include <algorithm>
#include <cmath>

#include "scalekit/errors.hpp"

namespace scalekit {

double matching_monomial_potential(const std::vector<double>& entries, int n,
                                   const std::vector<int>& sigma) {
    if (static_cast<int>(sigma.size()) != n) throw Error("matching monomial: sigma size mismatch");
    double log_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = entries[static_cast<size_t>(i) * n + sigma[i]];
        if (v <= 0.0) return 0.0;
        log_sum += std::log(v);
    }
    return std::exp(log_sum / n);
}

double left_right_potential(const std::vector<ComplexMatrix>& tuple,
                            const std::vector<ComplexMatrix>& blocks, int k) {
    if (k < 1) throw Error("left-right potential: block size must be positive");
    if (tuple.size() != blocks.size()) throw Error("left-right potential: block count mismatch");
    if (tuple.empty()) throw Error("left-right potential: empty tuple");
    const int n = tuple.front().rows();
    ComplexMatrix acc(n * k, n * k);
    for (size_t i = 0; i < tuple.size(); ++i) acc += kron(blocks[i], tuple[i]);
    const double d = std::abs(det(acc));
    if (d == 0.0) return 0.0;
    return std::exp(std::log(d) / (static_cast<double>(n) * k));
}

std::vector<ComplexMatrix> sample_integer_blocks(int m, int k, int n, Rng& rng) {
    const long long bound = static_cast<long long>(n) * n;
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(m);
    for (int i = 0; i < m; ++i) {
        ComplexMatrix d(k, k);
        for (int r = 0; r < k; ++r)
            for (int c = 0; c < k; ++c)
                d(r, c) = Complex(static_cast<double>(rng.uniform_int(-bound, bound)), 0.0);
        blocks.push_back(std::move(d));
    }
    return blocks;
}

AnalysisBound matrix_analysis_bound(int n, int b, double eps) {
    AnalysisBound a;
    a.u = 1.0;
    a.ell = n;
    a.b = b;
    a.n_prime = n;
    a.k = 1;
    a.eps_prime = static_cast<double>(n) * n * eps / 2.0;
    a.eps_double_prime = n * eps;
    return a;
}

AnalysisBound operator_analysis_bound(int n, int b, double eps, int block_size) {
    AnalysisBound a;
    a.u = std::sqrt(static_cast<double>(n));
    a.ell = static_cast<long long>(n) * block_size;
    a.b = b;
    a.n_prime = n;
    a.k = 2;
    a.eps_prime = static_cast<double>(n) * n * eps / 2.0;
    a.eps_double_prime = n * eps;
    return a;
}

AnalysisBound tensor_analysis_bound(const std::vector<int>& shape, int b, double eps) {
    AnalysisBound a;
    double u = 1.0;
    int n_min = shape.empty() ? 1 : shape.front();
    for (int n : shape) {
        u *= n;
        n_min = std::min(n_min, n);
    }
    const int d = static_cast<int>(shape.size());
    a.u = u;
    a.ell = n_min;  // degree is only semi-explicit; the min-dimension factor drives the bound
    a.b = b;
    a.n_prime = n_min;
    a.k = 2;
    a.eps_prime = static_cast<double>(n_min) * n_min * eps / d;
    a.eps_double_prime = n_min * eps / d;
    return a;
}

long long template_budget(const AnalysisBound& bound, double constant) {
    const double t = constant * (std::log(std::max(bound.u, 1.0)) + bound.b) / bound.eps_double_prime;
    if (!(t > 0.0)) throw Error("template budget must be positive");
    if (t > 9e18) return 9000000000000000000LL;
    return static_cast<long long>(std::ceil(t));
}

}  // namespace scalekit
