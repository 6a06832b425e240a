#pragma once

#include <vector>

#include "scalekit/complex_matrix.hpp"

namespace scalekit {

// Hermitian eigendecomposition M = V diag(w) V^dagger, eigenvalues ascending.
struct EighResult {
    std::vector<double> eigenvalues;
    ComplexMatrix vectors;  // columns are eigenvectors
};

// Cyclic Jacobi rotations with a fixed sweep order, so results are
// reproducible bit-for-bit on a given platform. Dims <= 64 by intent.
EighResult eigh(const ComplexMatrix& m);

// M^{-1/2} for Hermitian PSD M. tol < 0 selects 1e-12 * max eigenvalue.
// Throws NearSingular when any eigenvalue falls below the threshold.
ComplexMatrix inv_sqrt_psd(const ComplexMatrix& m, double tol = -1.0);

// M^{1/2} for Hermitian PSD M (negative roundoff eigenvalues clamped to 0).
ComplexMatrix sqrt_psd(const ComplexMatrix& m);

// exp(s Q) for Hermitian Q.
ComplexMatrix expm_hermitian(const ComplexMatrix& q, double s);

}  // namespace scalekit
