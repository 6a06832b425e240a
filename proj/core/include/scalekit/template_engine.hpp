#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "scalekit/potential.hpp"
#include "scalekit/report.hpp"

namespace scalekit {

// Diagnostics of a single normalization step, enough to replay the
// potential-growth analysis: the non-identity factor h-hat satisfies
// tr[h-hat^{-k}] = n' and delta = tr[(h-hat^{-k} - I)^2].
struct StepInfo {
    std::string side;
    double delta = 0.0;
    double logdet_h = 0.0;
    int n_prime = 1;
};

// One scaling flavor plugged into the common alternating loop. Adapters own
// the current iterate, keep it at unit norm, and expose the projected norm
// used for capacity estimates.
class ScalingAdapter {
public:
    virtual ~ScalingAdapter() = default;

    virtual std::string flavor() const = 0;
    virtual int flavor_k() const = 0;

    // Start-of-run rejection (zero line, singular gram, singular marginal).
    virtual std::optional<std::string> trivial_check() = 0;

    virtual double ds_tilde() const = 0;
    virtual double norm() const = 0;

    // Applies one normalization chosen by the flavor rule for this eps.
    virtual StepInfo step(double eps) = 0;

    // ||g . v||^2 after projecting the accumulated scaling to determinant one.
    virtual double capacity_value() const = 0;

    virtual double eval_potential(const PotentialTracker& tracker) const = 0;

    virtual Scalers scalers() const = 0;
};

struct TemplateResult {
    ScalingStatus status = ScalingStatus::Error;
    long long iterations = 0;
    std::vector<double> ds_trace;
    std::vector<double> potential_trace;
    std::vector<double> norm_trace;
    std::vector<double> capacity_trace;
    std::vector<StepInfo> steps;
    std::string reason;
    Scalers scalers;
};

// Common alternating loop: while ds-tilde > eps and the budget allows, apply
// the adapter's normalization and record traces. tracker may be null.
TemplateResult run_template(ScalingAdapter& adapter, double eps, long long budget,
                            PotentialTracker* tracker = nullptr);

struct CapacityEstimate {
    double value = 0.0;
    std::vector<double> trace;
    bool null_cone_evidence = false;
    std::string note;
};

// Smallest projected norm seen along the trajectory: an upper bound on the
// capacity inf_g ||g . v||^2. A failed trivial check is definitive zero
// evidence (an explicit subgroup drives the norm to 0).
CapacityEstimate capacity_estimate(ScalingAdapter& adapter, double eps, long long budget);

}  // namespace scalekit
