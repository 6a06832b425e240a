#pragma once

#include <vector>

#include "scalekit/complex_matrix.hpp"
#include "scalekit/rng.hpp"

namespace scalekit {

enum class PotentialKind { Disabled, MatchingMonomial, LeftRightDeterminant };

// Witness data for the invariant-polynomial potential Phi = |P(.)|^{1/deg}.
// The witness is fixed before a run and never depends on the iterates.
struct PotentialTracker {
    PotentialKind kind = PotentialKind::Disabled;
    std::vector<int> sigma;               // matching monomial: P = prod_i A_{i, sigma(i)}
    std::vector<ComplexMatrix> blocks;    // left-right: P = det(sum D_i kron A_i)
    int block_size = 0;                   // k
    std::vector<double> values;           // Phi per recorded state

    bool enabled() const { return kind != PotentialKind::Disabled; }
};

// Phi = (prod_i entries[i*n + sigma(i)])^{1/n} for a non-negative matrix.
double matching_monomial_potential(const std::vector<double>& entries, int n,
                                   const std::vector<int>& sigma);

// Phi = |det(sum_i D_i kron A_i)|^{1/(n k)}, n the tuple dimension.
double left_right_potential(const std::vector<ComplexMatrix>& tuple,
                            const std::vector<ComplexMatrix>& blocks, int k);

// Integer witness blocks with entries uniform in {-n^2, ..., n^2}.
std::vector<ComplexMatrix> sample_integer_blocks(int m, int k, int n, Rng& rng);

// Parameters of the unified iteration bound. eps_prime and eps_double_prime
// are derived from eps per flavor; u is the invariant coefficient bound.
struct AnalysisBound {
    double u = 1.0;
    long long ell = 1;
    int b = 1;
    double eps_prime = 0.0;
    double eps_double_prime = 0.0;
    int n_prime = 1;
    int k = 1;
};

AnalysisBound matrix_analysis_bound(int n, int b, double eps);
AnalysisBound operator_analysis_bound(int n, int b, double eps, int block_size);
AnalysisBound tensor_analysis_bound(const std::vector<int>& shape, int b, double eps);

// T = ceil(C (log u + b) / eps_double_prime)
long long template_budget(const AnalysisBound& bound, double constant);

}  // namespace scalekit
