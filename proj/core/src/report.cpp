#include "scalekit/report.hpp"

namespace scalekit {

std::string to_string(ScalingStatus s) {
    switch (s) {
        case ScalingStatus::Converged: return "converged";
        case ScalingStatus::NotScalable: return "not-scalable";
        case ScalingStatus::BudgetExhausted: return "budget-exhausted";
        case ScalingStatus::Undetermined: return "undetermined";
        case ScalingStatus::Error: return "error";
    }
    return "error";
}

}  // namespace scalekit
