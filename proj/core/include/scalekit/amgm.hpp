#pragma once

#include <vector>

namespace scalekit {

// Robust AM-GM: for positive x with sum x_i = n and delta = sum (x_i - 1)^2
// at most 1, the product satisfies prod x_i <= exp(-delta/6). Returns the
// product; callers assert the bound. Throws PreconditionViolated when the
// sum or delta constraints fail (sum tolerance 1e-10).
double robust_amgm_bound(const std::vector<double>& x, double delta);

}  // namespace scalekit
