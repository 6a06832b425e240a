#pragma once

#include <memory>
#include <vector>

#include "scalekit/report.hpp"
#include "scalekit/template_engine.hpp"
#include "scalekit/tensor_tuple.hpp"

namespace scalekit {

// rho_i = flatten(A, i) flatten(A, i)^dagger; tr rho_i = ||A||^2 for each i.
struct Marginals {
    std::vector<ComplexMatrix> rho;
};

Marginals marginals(const TensorTuple& a);

// sum_i || rho_i - I/n_i ||_F^2
double ds_tensor(const TensorTuple& a);

struct TensorScaleOptions {
    double eps = 1e-6;
    double budget_constant = 10.0;
    long long budget_override = -1;
    double condition_limit = 1e12;  // scaler blow-up guard near the null cone
};

// T = ceil(C d (b + ln(m n_1 ... n_d)) / (min_i n_i * eps))
long long tensor_budget(const std::vector<int>& shape, int m, int b, double eps, double constant);

// Alternating coordinate normalization g_i <- (n_i rho_i)^{-1/2} g_i on the
// axis with the largest violation. A singular marginal at the start is
// NotScalable; running out of budget is Undetermined (polynomially small eps
// does not decide tensor scalability).
ScalingReport tensor_scale(const TensorTuple& a, const TensorScaleOptions& opt = {});

struct DeficiencyResult {
    bool deficient = false;
    DeficiencyCertificate certificate;  // valid when deficient
    std::vector<Rational> lambda;       // convex witness over support tuples otherwise
};

// Exact LP on the support set with per-factor zero-sum weights. support holds
// 0-based index tuples; |support| <= 4096.
DeficiencyResult deficiency_check(const std::vector<int>& shape,
                                  const std::vector<std::vector<int>>& support);

// One slice-rank-one term v tensor_axis C (axis 1-based; lower carries the
// remaining axes in order, row-major).
struct SliceTerm {
    int axis = 1;
    std::vector<Complex> vec;
    std::vector<Complex> lower;
};

struct SliceDecomposition {
    std::vector<SliceTerm> terms;
};

enum class ProbeVerdict { Consistent, Inconsistent };

struct ProbeResult {
    ProbeVerdict verdict = ProbeVerdict::Inconsistent;
    std::string evidence;
    DeficiencyCertificate certificate;  // present when deficiency supplied the evidence
};

// Checks a claimed slice decomposition with fewer than n terms against the
// null-cone consequences: singular marginal, deficient support after a
// support-sparsifying basis change, or a stalled scaling run. Throws
// BadWitness when the decomposition does not reconstruct the tensor.
ProbeResult slicerank_nullcone_probe(const TensorTuple& a, const SliceDecomposition& witness);

std::unique_ptr<ScalingAdapter> make_tensor_adapter(const TensorTuple& a);

}  // namespace scalekit
