#pragma once

#include <vector>

#include "scalekit/complex_matrix.hpp"

namespace scalekit {

// robust_amgm_bound lives in amgm.hpp; moment maps for the three actions and
// the norm functions f_v they differentiate live here. Each moment map is the
// gradient of f_v along the group at the identity, so a central finite
// difference of the matching f is the natural cross-check.

// ST(n) x ST(n) on Mat_n(C): mu = (p, q), both zero-sum, with
// p = 2 (r - avg 1), q = 2 (c - avg 1), where r, c are row/column sums of
// |M_ij|^2.
struct MatrixMomentMap {
    std::vector<double> p, q;
};

MatrixMomentMap matrix_moment_map(const ComplexMatrix& m);

// ||(exp(s d), exp(s e)) . M||_F^2 for zero-sum directions d, e
double matrix_fv(const ComplexMatrix& m, const std::vector<double>& d, const std::vector<double>& e,
                 double s);

// SL(n) x SL(n) left-right action on tuples: mu = (P1, P2), Hermitian
// traceless, P1 = 2 (sum A_i A_i^dag - (||A||^2/n) I),
// P2 = 2 ((sum A_i^dag A_i)^T - (||A||^2/n) I).
struct LeftRightMomentMap {
    ComplexMatrix p1, p2;
};

LeftRightMomentMap left_right_moment_map(const std::vector<ComplexMatrix>& tuple);

// sum_i || exp(s Q1) A_i exp(s Q2^T) ||_F^2 for Hermitian traceless Q1, Q2
double left_right_fv(const std::vector<ComplexMatrix>& tuple, const ComplexMatrix& q1,
                     const ComplexMatrix& q2, double s);

}  // namespace scalekit
