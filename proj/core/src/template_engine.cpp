#include "scalekit/template_engine.hpp"

#include <algorithm>

#include "scalekit/errors.hpp"

namespace scalekit {

TemplateResult run_template(ScalingAdapter& adapter, double eps, long long budget,
                            PotentialTracker* tracker) {
    TemplateResult res;
    if (auto reason = adapter.trivial_check()) {
        res.status = ScalingStatus::NotScalable;
        res.reason = *reason;
        res.iterations = 0;
        res.ds_trace.push_back(adapter.ds_tilde());
        res.norm_trace.push_back(adapter.norm());
        res.capacity_trace.push_back(adapter.capacity_value());
        res.scalers = adapter.scalers();
        return res;
    }

    for (long long t = 0;; ++t) {
        const double ds = adapter.ds_tilde();
        res.ds_trace.push_back(ds);
        res.norm_trace.push_back(adapter.norm());
        res.capacity_trace.push_back(adapter.capacity_value());
        if (tracker && tracker->enabled()) {
            const double phi = adapter.eval_potential(*tracker);
            if (t == 0 && phi <= 0.0)
                throw WitnessDegenerate("potential witness vanishes on the start object; re-sample");
            tracker->values.push_back(phi);
            res.potential_trace.push_back(phi);
        }
        if (ds <= eps) {
            res.status = ScalingStatus::Converged;
            res.iterations = t;
            break;
        }
        if (t >= budget) {
            res.status = ScalingStatus::BudgetExhausted;
            res.iterations = t;
            break;
        }
        try {
            res.steps.push_back(adapter.step(eps));
        } catch (const NearSingular& e) {
            // a singular normalizer mid-run is not a flavor-level rejection;
            // stop with the annotation and let the caller interpret it
            res.status = ScalingStatus::BudgetExhausted;
            res.iterations = t;
            res.reason = std::string("near-singular normalization: ") + e.what();
            break;
        }
    }
    res.scalers = adapter.scalers();
    return res;
}

CapacityEstimate capacity_estimate(ScalingAdapter& adapter, double eps, long long budget) {
    CapacityEstimate est;
    const TemplateResult run = run_template(adapter, eps, budget, nullptr);
    if (run.status == ScalingStatus::NotScalable) {
        est.value = 0.0;
        est.null_cone_evidence = true;
        est.note = "trivial check failed (" + run.reason + "); an explicit one-parameter subgroup drives the norm to zero";
        est.trace = run.capacity_trace;
        return est;
    }
    est.trace = run.capacity_trace;
    est.value = *std::min_element(est.trace.begin(), est.trace.end());
    if (run.status == ScalingStatus::BudgetExhausted && est.trace.size() >= 2 &&
        est.trace.back() < 0.5 * est.trace.front())
        est.note = "projected norm still decreasing at budget";
    return est;
}

}  // namespace scalekit
