#pragma once

#include <vector>

#include "scalekit/complex_matrix.hpp"
#include "scalekit/rational.hpp"

namespace scalekit {

// Torus action data: the torus T(n) acts on C^m with weight omega^(j) on the
// j-th coordinate.
struct WeightSystem {
    int n = 0;
    std::vector<std::vector<long long>> omegas;  // m vectors in Z^n

    int m() const { return static_cast<int>(omegas.size()); }
};

struct TorusVector {
    std::vector<Complex> coefficients;

    std::vector<int> support() const {
        std::vector<int> s;
        for (int j = 0; j < static_cast<int>(coefficients.size()); ++j)
            if (coefficients[j] != Complex(0.0)) s.push_back(j);
        return s;
    }
};

// lambda(t) acts as t^{<a, omega^(j)>} per factor; zero_sum marks SL/ST-type
// factors whose exponents must sum to zero.
struct OneParamSubgroup {
    std::vector<std::vector<long long>> exponents;
    std::vector<bool> zero_sum;
};

struct TorusNullConeResult {
    bool in_null_cone = false;
    OneParamSubgroup subgroup;      // driving subgroup when in the null cone
    std::vector<Rational> lambda;   // convex weights (length m, zero off support) otherwise
};

// Exact decision via strict LP / transposition witness. Sizes n<=16, m<=64.
TorusNullConeResult torus_nullcone(const WeightSystem& ws, const TorusVector& v);

// mu(v) = 2 sum_j |v_j|^2 omega^(j)
std::vector<double> torus_moment_map(const WeightSystem& ws, const TorusVector& v);

// || exp(s b) . v ||^2 where exp(s b) = (e^{s b_1}, ..., e^{s b_n})
double torus_fv(const WeightSystem& ws, const TorusVector& v, const std::vector<double>& b, double s);

}  // namespace scalekit
