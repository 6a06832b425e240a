#pragma once

#include <string>
#include <variant>
#include <vector>

#include "scalekit/complex_matrix.hpp"
#include "scalekit/rational.hpp"

namespace scalekit {

enum class ScalingStatus { Converged, NotScalable, BudgetExhausted, Undetermined, Error };

std::string to_string(ScalingStatus s);

// ---- scalers ------------------------------------------------------------

struct MatrixScalers {
    std::vector<double> row;  // B = diag(row)
    std::vector<double> col;  // C = diag(col)
};

struct OperatorScalers {
    ComplexMatrix left;   // B
    ComplexMatrix right;  // C
};

struct TensorScalers {
    std::vector<ComplexMatrix> factors;  // g_1 .. g_d
};

using Scalers = std::variant<std::monostate, MatrixScalers, OperatorScalers, TensorScalers>;

// ---- certificates --------------------------------------------------------

// sigma[i] = column matched to row i, supported on nonzero entries.
struct MatchingCertificate {
    std::vector<int> sigma;
};

// Row set S whose column neighborhood is smaller than S.
struct HallViolator {
    std::vector<int> rows;
    std::vector<int> neighbor_cols;
};

// Per-factor weights a_{i,j} with sum_j a_{i,j} = 0 and
// sum_i a_{i,j_i} > 0 on every support tuple; exact.
struct DeficiencyCertificate {
    std::vector<std::vector<Rational>> a;
};

// Subspace V with dim(sum_i A_i V) < dim V; columns are basis vectors.
struct ShrunkSubspaceWitness {
    ComplexMatrix v_basis;
    ComplexMatrix w_basis;
};

using Certificate = std::variant<std::monostate, MatchingCertificate, HallViolator,
                                 DeficiencyCertificate, ShrunkSubspaceWitness>;

// ---- run report ----------------------------------------------------------

struct ScalingReport {
    ScalingStatus status = ScalingStatus::Error;
    long long iterations = 0;
    long long budget = 0;
    int bit_complexity = 0;
    double epsilon = 0.0;
    double ds_initial = 0.0;
    double ds_final = 0.0;
    Scalers scalers;
    Certificate certificate;
    std::vector<double> ds_trace;         // length iterations + 1
    std::vector<double> potential_trace;  // empty when tracking disabled
    std::vector<double> norm_trace;
    std::vector<std::string> side_trace;  // "init", then the normalized side per step
    std::vector<std::string> notes;

    bool converged() const { return status == ScalingStatus::Converged; }
};

}  // namespace scalekit
