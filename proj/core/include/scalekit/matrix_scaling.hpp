#pragma once

#include <memory>
#include <vector>

#include "scalekit/errors.hpp"
#include "scalekit/nonneg_matrix.hpp"
#include "scalekit/report.hpp"
#include "scalekit/template_engine.hpp"

namespace scalekit {

// distance to doubly stochastic: sum (r_i - 1)^2 + sum (c_j - 1)^2
double ds(const NonNegMatrix& a);
double ds(const std::vector<double>& entries, int n);

struct SinkhornOptions {
    double eps = 1e-6;
    double budget_constant = 10.0;
    long long budget_override = -1;  // < 0 means use the theorem formula
    bool track_potential = true;
};

// T = ceil(C n (b + ln n) / eps)
long long sinkhorn_budget(int n, int b, double eps, double constant);

// Alternating row/column normalization. Converged(B, C) with
// ds(B A C) <= eps, a matching-based certificate when not scalable, or
// budget-exhausted when a caller-shortened budget ran out first.
ScalingReport sinkhorn(const NonNegMatrix& a, const SinkhornOptions& opt = {});

struct ScalabilityDecision {
    bool scalable = false;
    Certificate certificate;  // MatchingCertificate or HallViolator
};

// Exact decision via bipartite matching on the support.
ScalabilityDecision is_scalable(const NonNegMatrix& a);

// Scale to prescribed row/column marginals r, c (entropy-projection form).
// Throws MarginalMismatch when sum r != sum c, PreconditionViolated on
// non-positive targets.
ScalingReport sinkhorn_rc(const NonNegMatrix& a, const std::vector<double>& r,
                          const std::vector<double>& c, const SinkhornOptions& opt = {});

struct NotScalableError : Error {
    using Error::Error;
};

struct PermanentInterval {
    double lo = 0.0;
    double hi = 0.0;
    double slack = 0.0;  // delta_eps used for the interval
    ScalingReport scaling;
};

// Deterministic e^n-window sandwich for the permanent via scaling to nearly
// doubly stochastic. Throws NotScalableError when perm(A) = 0.
PermanentInterval permanent_approx(const NonNegMatrix& a, double eps = 1e-6,
                                   long long budget_override = -1);

// Unit-norm template adapter (marginals 1/n convention).
std::unique_ptr<ScalingAdapter> make_matrix_adapter(const NonNegMatrix& a);

// Matching-monomial tracker over a perfect matching of supp(A); disabled
// tracker when A is not scalable.
PotentialTracker make_matching_tracker(const NonNegMatrix& a);

}  // namespace scalekit
