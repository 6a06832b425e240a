#pragma once

#include <vector>

#include "scalekit/rational.hpp"

namespace scalekit {

// Strict system: find x with <L_j, x> > 0 for every strict row and E x = 0.
struct StrictSystem {
    int num_vars = 0;
    std::vector<std::vector<Rational>> strict;
    std::vector<std::vector<Rational>> equalities;
};

struct LPCertificate {
    std::vector<Rational> variables;
    Rational margin;  // min_j <L_j, x>, strictly positive
};

// Transposition witness of infeasibility:
// lambda >= 0, sum lambda = 1, L^T lambda + E^T mu = 0.
struct InfeasibilityWitness {
    std::vector<Rational> lambda;
    std::vector<Rational> mu;
};

struct StrictFeasibility {
    bool feasible = false;
    LPCertificate certificate;
    InfeasibilityWitness witness;
};

// Decides the strict system exactly. The search runs as
//   maximize t  s.t.  L x >= t 1,  E x = 0,  -1 <= x <= 1,
// and t* > 0 iff the strict system is solvable; otherwise a phase-1 run on
// the transposed system produces the convex-combination witness. Both
// branches are verified in rational arithmetic before returning.
// Limits: num_vars <= 64, strict rows + equality rows <= 4096.
StrictFeasibility lp_strict_feasible(const StrictSystem& sys);

// Exact two-phase primal simplex with Bland's rule on
//   min c^T x  s.t.  A x = b,  x >= 0.
enum class SimplexStatus { Optimal, Infeasible, Unbounded };

struct SimplexResult {
    SimplexStatus status = SimplexStatus::Infeasible;
    std::vector<Rational> x;
    Rational objective;
};

SimplexResult simplex_solve(const std::vector<std::vector<Rational>>& a,
                            const std::vector<Rational>& b,
                            const std::vector<Rational>& c);

}  // namespace scalekit
