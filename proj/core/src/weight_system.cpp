#include "scalekit/weight_system.hpp"

#include <cmath>

#include "scalekit/errors.hpp"
#include "scalekit/lp.hpp"

namespace scalekit {

TorusNullConeResult torus_nullcone(const WeightSystem& ws, const TorusVector& v) {
    if (ws.n > 16 || ws.m() > 64) throw DimensionTooLarge("torus_nullcone is desk scale (n<=16, m<=64)");
    if (static_cast<int>(v.coefficients.size()) != ws.m())
        throw Error("vector length does not match weight count");

    TorusNullConeResult out;
    const std::vector<int> supp = v.support();

    if (supp.empty()) {
        // v = 0 is driven to zero by any subgroup
        out.in_null_cone = true;
        out.subgroup.exponents = {std::vector<long long>(ws.n, 0)};
        out.subgroup.zero_sum = {false};
        out.lambda.assign(ws.m(), Rational(0));
        return out;
    }

    StrictSystem sys;
    sys.num_vars = ws.n;
    for (int j : supp) {
        std::vector<Rational> row(ws.n);
        for (int i = 0; i < ws.n; ++i) row[i] = Rational(static_cast<long>(ws.omegas[j][i]));
        sys.strict.push_back(std::move(row));
    }

    const StrictFeasibility lp = lp_strict_feasible(sys);
    out.lambda.assign(ws.m(), Rational(0));
    if (lp.feasible) {
        out.in_null_cone = true;
        // clear denominators to get an integer exponent vector
        Integer lcm = 1;
        for (const Rational& q : lp.certificate.variables)
            mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.get_den().get_mpz_t());
        std::vector<long long> a(ws.n);
        for (int i = 0; i < ws.n; ++i) {
            const Rational scaled = lp.certificate.variables[i] * Rational(lcm);
            if (scaled.get_den() != 1) throw Error("integer scaling failed");
            a[i] = static_cast<long long>(mpz_get_si(scaled.get_num().get_mpz_t()));
        }
        // exact re-check of the integer witness
        for (int j : supp) {
            long long dot = 0;
            for (int i = 0; i < ws.n; ++i) dot += a[i] * ws.omegas[j][i];
            if (dot <= 0) throw Error("integer witness failed verification");
        }
        out.subgroup.exponents = {std::move(a)};
        out.subgroup.zero_sum = {false};
    } else {
        out.in_null_cone = false;
        for (size_t k = 0; k < supp.size(); ++k) out.lambda[supp[k]] = lp.witness.lambda[k];
    }
    return out;
}

std::vector<double> torus_moment_map(const WeightSystem& ws, const TorusVector& v) {
    std::vector<double> mu(ws.n, 0.0);
    for (int j = 0; j < ws.m(); ++j) {
        const double w = std::norm(v.coefficients[j]);
        if (w == 0.0) continue;
        for (int i = 0; i < ws.n; ++i) mu[i] += 2.0 * w * ws.omegas[j][i];
    }
    return mu;
}

double torus_fv(const WeightSystem& ws, const TorusVector& v, const std::vector<double>& b, double s) {
    if (static_cast<int>(b.size()) != ws.n) throw Error("direction length mismatch");
    double total = 0.0;
    for (int j = 0; j < ws.m(); ++j) {
        const double w = std::norm(v.coefficients[j]);
        if (w == 0.0) continue;
        double dot = 0.0;
        for (int i = 0; i < ws.n; ++i) dot += b[i] * ws.omegas[j][i];
        total += w * std::exp(2.0 * s * dot);
    }
    return total;
}

}  // namespace scalekit
