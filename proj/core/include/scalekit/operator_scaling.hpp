#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "scalekit/complex_matrix.hpp"
#include "scalekit/report.hpp"
#include "scalekit/rng.hpp"
#include "scalekit/template_engine.hpp"

namespace scalekit {

// Tuple (A_1, ..., A_m) of n x n complex matrices; the Kraus operators of
// the completely positive map T_A(X) = sum_i A_i X A_i^dagger.
struct MatrixTuple {
    int n = 0;
    std::vector<ComplexMatrix> matrices;

    MatrixTuple() = default;
    MatrixTuple(int dim, std::vector<ComplexMatrix> mats);

    int m() const { return static_cast<int>(matrices.size()); }
    double norm() const;  // sqrt(sum_i ||A_i||_F^2)
    int bit_complexity() const;
};

ComplexMatrix gram_left(const MatrixTuple& a);   // sum A_i A_i^dagger
ComplexMatrix gram_right(const MatrixTuple& a);  // sum A_i^dagger A_i
ComplexMatrix kraus_apply(const MatrixTuple& a, const ComplexMatrix& x);

// ||sum A A^dag - I||_F^2 + ||sum A^dag A - I||_F^2
double ds_op(const MatrixTuple& a);

// (B, C) . A = (B A_1 C, ..., B A_m C)
MatrixTuple scale_tuple(const MatrixTuple& a, const ComplexMatrix& b, const ComplexMatrix& c);

struct GurvitsOptions {
    double eps = 1e-6;
    double budget_constant = 10.0;
    long long budget_override = -1;
    double condition_limit = 1e12;  // scaler blow-up guard near the null cone
    bool track_potential = true;    // left-right determinant at block size n-1
    std::uint64_t witness_seed = 0;
};

long long gurvits_budget(int n, int b, double eps, double constant);

// Alternating left/right normalization. NotScalable on a singular gram sum
// (start) or theorem-budget exhaustion; Undetermined when the condition
// guard aborts the run early.
ScalingReport gurvits_scale(const MatrixTuple& a, const GurvitsOptions& opt = {});

struct DimDecision {
    bool nondecreasing = false;
    std::optional<ShrunkSubspaceWitness> witness;  // best effort when false
    ScalingReport run;
};

// Scaling-based polynomial-time decision at eps = 1/(n+1). Witness search
// covers coordinate subspaces, gram kernels and eigenvalue clusters of the
// final iterate; absence of a witness does not change the verdict.
DimDecision is_dim_nondecreasing(const MatrixTuple& a, bool want_witness = true);

// Residual check for a claimed witness: A_i V inside W for all i, within tol.
bool verify_shrunk_subspace(const MatrixTuple& a, const ShrunkSubspaceWitness& w, double tol = 1e-10);

// Best-effort witness search over coordinate subspaces, gram kernels, and
// eigenvalue clusters of the run's final iterate. Only verified witnesses
// are returned.
std::optional<ShrunkSubspaceWitness> find_shrunk_subspace(const MatrixTuple& a,
                                                          const ScalingReport& run);

struct DetPolyResult {
    bool nonzero = false;
    std::vector<ComplexMatrix> witness_blocks;
    double abs_det = 0.0;
    int trials_used = 0;
    bool exact_zero = true;  // all sampled determinants vanished identically
};

// Samples integer blocks D_i (entries in {-n^2..n^2}) and evaluates
// det(sum D_i kron A_i) exactly over Q(i). Nonzero needs the magnitude to
// clear 1e-10 * n^{nk/2} ||A||^{nk} so the test is scale-invariant.
DetPolyResult detpoly_oracle(const MatrixTuple& a, int k, int trials, std::uint64_t seed);

std::unique_ptr<ScalingAdapter> make_operator_adapter(const MatrixTuple& a);

// Left-right determinant tracker; resamples blocks on a degenerate witness
// up to max_resamples times, then returns a disabled tracker.
PotentialTracker make_left_right_tracker(const MatrixTuple& a, int k, Rng& rng,
                                         int max_resamples = 20);

}  // namespace scalekit
