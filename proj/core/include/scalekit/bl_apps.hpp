#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scalekit/complex_matrix.hpp"
#include "scalekit/rational_linalg.hpp"
#include "scalekit/report.hpp"

namespace scalekit {

// Brascamp-Lieb datum: maps B_i in R^{n_i x n} with exponents p_i >= 0.
// Matrices are stored as real-valued ComplexMatrix entries.
struct BLDatum {
    int n = 0;
    std::vector<ComplexMatrix> blocks;
    std::vector<Rational> p;

    int m() const { return static_cast<int>(blocks.size()); }
    void validate() const;
};

struct GeometricityReport {
    double isotropy_residual = 0.0;              // ||sum p_i B_i^T B_i - I_n||_F
    std::vector<double> projection_residuals;    // ||B_i B_i^T - I_{n_i}||_F
    double max_projection_residual() const;
};

bool is_geometric(const BLDatum& datum, double tol, GeometricityReport* out = nullptr);

struct FeasibilityReport {
    bool passed = false;  // passed the necessary conditions (not a feasibility proof)
    std::string reason;   // why it failed, when it failed
    RatMatrix violating_subspace;  // basis columns of a violating V, when found
};

// Condition n = sum p_i n_i checked exactly; the subspace condition checked
// on kernels/row spaces of sub-collections up to size 3 plus seeded random
// subspaces. Sound for Infeasible, incomplete for feasible.
FeasibilityReport bl_feasibility_check(const BLDatum& datum, std::uint64_t seed = 0);

struct BLScaleResult {
    ScalingStatus status = ScalingStatus::Error;
    ComplexMatrix a;                   // right scaling in GL_n
    std::vector<ComplexMatrix> c;      // per-block left scalings
    std::vector<ComplexMatrix> scaled_blocks;
    GeometricityReport residuals;
    long long iterations = 0;
    std::string reason;
};

// Alternate the isotropy step A <- A (sum p_i B_i^T B_i)^{-1/2} with
// projection steps C_i <- (B_i B_i^T)^{-1/2} C_i, largest violation first.
// Zero-exponent blocks are dropped; a singular step matrix is Infeasible.
BLScaleResult bl_scale(const BLDatum& datum, double eps = 1e-8, long long budget = 100000);

struct ForsterResult {
    ScalingStatus status = ScalingStatus::Error;
    ComplexMatrix a;
    double residual = 0.0;
    long long iterations = 0;
};

// Radial isotropic position: returns A with
// sum (n/m) (A v_i)(A v_i)^T / ||A v_i||^2 close to I_n. Throws
// NotGeneralPosition (with the offending subset) when some n vectors are
// dependent; the check is exact for m <= 12 and sampled above that.
ForsterResult forster_scale(const std::vector<std::vector<double>>& vectors, double eps = 1e-8,
                            long long budget = 100000, std::uint64_t seed = 0);

struct MatroidPair {
    std::vector<std::vector<Rational>> v;
    std::vector<std::vector<Rational>> w;
};

enum class Membership { InPolytope, OutOfPolytope, Undetermined };

struct MembershipResult {
    Membership verdict = Membership::Undetermined;
    std::string reason;
    // On the sum(x) = n face the point corresponds to a Brascamp-Lieb datum
    // with the standard 2 x 2n blocks; the scaling run is attached there.
    std::optional<BLScaleResult> bl_evidence;
};

// Membership of x in the matroid intersection polytope, decided exactly via
// the rank inequalities x(S) <= rank_v(S), x(S) <= rank_w(S), x >= 0.
// Desk scale: m <= 16 elements, ambient dimension <= 8.
MembershipResult matroid_intersection_membership(const MatroidPair& pair,
                                                 const std::vector<Rational>& x,
                                                 double eps = 1e-8);

// The 2 x 2n Brascamp-Lieb blocks encoding a matroid pair.
BLDatum matroid_bl_datum(const MatroidPair& pair, const std::vector<Rational>& x);

}  // namespace scalekit
