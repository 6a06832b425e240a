#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "scalekit/eigh.hpp"
#include "scalekit/errors.hpp"
#include "scalekit/lp.hpp"
#include "scalekit/permanent.hpp"
#include "scalekit/rational.hpp"
#include "scalekit/rational_linalg.hpp"
#include "scalekit/tensor_tuple.hpp"
#include "test_support.hpp"

using namespace scalekit;
using namespace testsupport;

TEST_CASE("rational parsing") {
    CHECK(rational_from_string("3/4") == Rational(3, 4));
    CHECK(rational_from_string("-2/6") == Rational(-1, 3));
    CHECK(rational_from_string("0.125") == Rational(1, 8));
    CHECK(rational_from_string("-1.5") == Rational(-3, 2));
    CHECK(rational_from_string("25e-3") == Rational(1, 40));
    CHECK(rational_from_string("7") == Rational(7));
    CHECK_THROWS_AS(rational_from_string("1/0"), Error);
    CHECK_THROWS_AS(rational_from_string("abc"), Error);

    CHECK(rational_from_double(0.5) == Rational(1, 2));
    CHECK(rational_from_double(0.1) != Rational(1, 10));  // binary expansion, not decimal

    CHECK(bit_length(Rational(1)) == 1);
    CHECK(bit_length(Rational(255, 2)) == 8);
}

TEST_CASE("jacobi eigendecomposition reconstructs random Hermitian matrices") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + static_cast<int>(rng.uniform_int(0, 7));
        ComplexMatrix m = random_complex_matrix(rng, n, n);
        m = m + m.adjoint();
        const EighResult e = eigh(m);
        // residual M V = V diag(w)
        ComplexMatrix reconstructed(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Complex acc = 0.0;
                for (int k = 0; k < n; ++k)
                    acc += e.vectors(i, k) * e.eigenvalues[k] * std::conj(e.vectors(j, k));
                reconstructed(i, j) = acc;
            }
        CHECK((reconstructed - m).frobenius_norm() <= 1e-10 * std::max(1.0, m.frobenius_norm()));
        CHECK(std::is_sorted(e.eigenvalues.begin(), e.eigenvalues.end()));
        CHECK((e.vectors.adjoint() * e.vectors - ComplexMatrix::identity(n)).frobenius_norm() < 1e-10);
    }
}

TEST_CASE("inv_sqrt_psd identity and diagonal closed forms") {
    const ComplexMatrix i2 = ComplexMatrix::identity(2);
    CHECK((inv_sqrt_psd(i2, 1e-12) - i2).frobenius_norm() < 1e-12);

    ComplexMatrix d(2, 2);
    d(0, 0) = 4.0;
    d(1, 1) = 1.0;
    const ComplexMatrix r = inv_sqrt_psd(d);
    CHECK(std::abs(r(0, 0) - Complex(0.5, 0.0)) < 1e-12);
    CHECK(std::abs(r(1, 1) - Complex(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(r(0, 1)) < 1e-12);
}

TEST_CASE("inv_sqrt_psd residual on random Gram matrices") {
    Rng rng(12);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform_int(0, 4));
        ComplexMatrix g = random_gram(rng, n);
        // shift to keep the smallest eigenvalue comfortably positive
        for (int i = 0; i < n; ++i) g(i, i) += 1e-3;
        const ComplexMatrix r = inv_sqrt_psd(g);
        CHECK((r * g * r - ComplexMatrix::identity(n)).frobenius_norm() <= 1e-8);
    }
}

TEST_CASE("inv_sqrt_psd flags near-singular input") {
    ComplexMatrix d(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = 0.0;
    CHECK_THROWS_AS(inv_sqrt_psd(d), NearSingular);
    CHECK_THROWS_AS(inv_sqrt_psd(d, 1e-6), NearSingular);
}

TEST_CASE("kron identities") {
    const ComplexMatrix i2 = ComplexMatrix::identity(2);
    CHECK((kron(i2, i2) - ComplexMatrix::identity(4)).frobenius_norm() == 0.0);

    ComplexMatrix a(2, 2), b(2, 2);
    a(0, 0) = 2.0;
    a(1, 1) = 3.0;
    b(0, 0) = 5.0;
    b(1, 1) = 7.0;
    const ComplexMatrix k = kron(a, b);
    CHECK(k(0, 0) == Complex(10.0));
    CHECK(k(1, 1) == Complex(14.0));
    CHECK(k(2, 2) == Complex(15.0));
    CHECK(k(3, 3) == Complex(21.0));

    // e1 e2^T kron e2 e1^T has its single 1 at row 2, col 3 (1-indexed)
    ComplexMatrix e12(2, 2), e21(2, 2);
    e12(0, 1) = 1.0;
    e21(1, 0) = 1.0;
    const ComplexMatrix k2 = kron(e12, e21);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(k2(i, j) == ((i == 1 && j == 2) ? Complex(1.0) : Complex(0.0)));
}

TEST_CASE("kron determinant identity det(I_k kron B) = det(B)^k") {
    Rng rng(13);
    for (int k = 1; k <= 4; ++k)
        for (int n = 1; n <= 4; ++n) {
            const ComplexMatrix b = random_complex_matrix(rng, n, n);
            const Complex lhs = det(kron(ComplexMatrix::identity(k), b));
            const Complex rhs = std::pow(det(b), k);
            CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)));
        }
}

TEST_CASE("flatten basis tensor and norm preservation") {
    // single tensor e1 kron e1 in Ten(2,2)
    TensorTuple t({2, 2}, 1);
    t.set(0, {0, 0}, 1.0);
    const ComplexMatrix b = flatten(t, 1);
    CHECK(b.rows() == 2);
    CHECK(b.cols() == 2);
    CHECK(b(0, 0) == Complex(1.0));
    CHECK(b(0, 1) == Complex(0.0));
    CHECK(b(1, 0) == Complex(0.0));
    CHECK(b(1, 1) == Complex(0.0));
}

TEST_CASE("flatten GHZ positions under the declared column ordering") {
    // GHZ in Ten(2,2,2), m = 1: entries 1/sqrt(2) at (1,1,1) and (2,2,2).
    // Axis-1 flattening is 2 x 4; the nonzeros sit at (1,1) and (2,4)
    // (1-indexed) because columns run lexicographically over the remaining
    // axes.
    const double s = 1.0 / std::sqrt(2.0);
    TensorTuple ghz({2, 2, 2}, 1);
    ghz.set(0, {0, 0, 0}, s);
    ghz.set(0, {1, 1, 1}, s);
    const ComplexMatrix b = flatten(ghz, 1);
    CHECK(b.rows() == 2);
    CHECK(b.cols() == 4);
    CHECK(std::abs(b(0, 0) - Complex(s)) < 1e-15);
    CHECK(std::abs(b(1, 3) - Complex(s)) < 1e-15);
    int nonzeros = 0;
    for (const Complex& z : b.data())
        if (z != Complex(0.0)) ++nonzeros;
    CHECK(nonzeros == 2);
}

TEST_CASE("flatten preserves the tuple norm on every axis") {
    Rng rng(14);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<int> shape = {2, 3, 2};
        TensorTuple t(shape, 2);
        for (int i = 0; i < t.m(); ++i)
            for (Complex& z : t.tensor(i)) z = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
        const double norm_sq = t.norm() * t.norm();
        for (int axis = 1; axis <= 3; ++axis) {
            const ComplexMatrix b = flatten(t, axis);
            const Complex tr = (b * b.adjoint()).trace();
            CHECK(std::abs(tr.real() - norm_sq) <= 1e-10 * std::max(1.0, norm_sq));
            CHECK(std::abs(tr.imag()) <= 1e-12);
        }
    }
}

TEST_CASE("permanent closed forms") {
    CHECK(permanent_exact(NonNegMatrix::identity(3)) == Rational(1));

    NonNegMatrix a(2);
    a.set(0, 0, Rational(1));
    a.set(0, 1, Rational(2));
    a.set(1, 0, Rational(3));
    a.set(1, 1, Rational(4));
    CHECK(permanent_exact(a) == Rational(10));

    NonNegMatrix ones(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) ones.set(i, j, Rational(1));
    CHECK(permanent_exact(ones) == Rational(24));

    NonNegMatrix big(13);
    CHECK_THROWS_AS(permanent_exact(big), DimensionTooLarge);
}

TEST_CASE("permanent agrees with the n! oracle on random rational matrices") {
    Rng rng(15);
    for (int n = 1; n <= 5; ++n)
        for (int trial = 0; trial < 5; ++trial) {
            const NonNegMatrix a = random_positive_matrix(rng, n, 6);
            CHECK(permanent_exact(a) == permanent_bruteforce(a));
        }
}

TEST_CASE("strict LP: contradictory pair is infeasible") {
    StrictSystem sys;
    sys.num_vars = 1;
    sys.strict = {{Rational(1)}, {Rational(-1)}};
    const StrictFeasibility r = lp_strict_feasible(sys);
    CHECK_FALSE(r.feasible);
    CHECK(r.witness.lambda.size() == 2);
    CHECK(r.witness.lambda[0] == Rational(1, 2));
    CHECK(r.witness.lambda[1] == Rational(1, 2));
}

TEST_CASE("strict LP: single constraint certificate with margin") {
    StrictSystem sys;
    sys.num_vars = 2;
    sys.strict = {{Rational(1), Rational(1)}};
    const StrictFeasibility r = lp_strict_feasible(sys);
    REQUIRE(r.feasible);
    CHECK(r.certificate.margin > 0);
    // the box LP maximizes the margin, so x = (1,1), margin 2
    CHECK(r.certificate.margin == Rational(2));
    CHECK(r.certificate.variables[0] == Rational(1));
    CHECK(r.certificate.variables[1] == Rational(1));
}

TEST_CASE("strict LP: Farkas pair for the symmetric triple") {
    StrictSystem sys;
    sys.num_vars = 2;
    sys.strict = {{Rational(2), Rational(-1)}, {Rational(-1), Rational(2)}, {Rational(-1), Rational(-1)}};
    const StrictFeasibility r = lp_strict_feasible(sys);
    REQUIRE_FALSE(r.feasible);
    CHECK(r.witness.lambda[0] == Rational(1, 3));
    CHECK(r.witness.lambda[1] == Rational(1, 3));
    CHECK(r.witness.lambda[2] == Rational(1, 3));
}

TEST_CASE("strict LP: equality constraints are honored exactly") {
    // x1 + x2 > 0 with x1 + x2 = 0 forced: infeasible
    StrictSystem sys;
    sys.num_vars = 2;
    sys.strict = {{Rational(1), Rational(1)}};
    sys.equalities = {{Rational(1), Rational(1)}};
    const StrictFeasibility r = lp_strict_feasible(sys);
    CHECK_FALSE(r.feasible);
}

TEST_CASE("simplex handles unbounded and infeasible standard forms") {
    // min -x subject to x - y = 1, x,y >= 0 is unbounded
    SimplexResult r = simplex_solve({{Rational(1), Rational(-1)}}, {Rational(1)}, {Rational(-1), Rational(0)});
    CHECK(r.status == SimplexStatus::Unbounded);

    // x = -1 with x >= 0 is infeasible
    r = simplex_solve({{Rational(1)}}, {Rational(-1)}, {Rational(0)});
    CHECK(r.status == SimplexStatus::Infeasible);

    // min x+y subject to x+y = 2: optimum 2
    r = simplex_solve({{Rational(1), Rational(1)}}, {Rational(2)}, {Rational(1), Rational(1)});
    REQUIRE(r.status == SimplexStatus::Optimal);
    CHECK(r.objective == Rational(2));
}

TEST_CASE("exact rational rank and kernel") {
    RatMatrix m(2, 3);
    m(0, 0) = 1;
    m(0, 1) = 2;
    m(0, 2) = 3;
    m(1, 0) = 2;
    m(1, 1) = 4;
    m(1, 2) = 6;
    CHECK(rank(m) == 1);
    const RatMatrix k = kernel(m);
    CHECK(k.cols() == 2);
    for (int j = 0; j < k.cols(); ++j) {
        Rational acc(0);
        for (int c = 0; c < 3; ++c) acc += m(0, c) * k(c, j);
        CHECK(acc == 0);
    }
}

TEST_CASE("gauss_det matches the double determinant on integer matrices") {
    Rng rng(16);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform_int(0, 3));
        ComplexMatrix m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                m(i, j) = Complex(static_cast<double>(rng.uniform_int(-5, 5)),
                                  static_cast<double>(rng.uniform_int(-5, 5)));
        const GaussRational g = gauss_det(to_gauss(m), n);
        const Complex d = det(m);
        CHECK(std::abs(g.re.get_d() - d.real()) < 1e-6 * std::max(1.0, std::abs(d)));
        CHECK(std::abs(g.im.get_d() - d.imag()) < 1e-6 * std::max(1.0, std::abs(d)));
    }
}
