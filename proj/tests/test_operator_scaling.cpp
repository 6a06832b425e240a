#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "scalekit/eigh.hpp"
#include "scalekit/errors.hpp"
#include "scalekit/operator_scaling.hpp"
#include "test_support.hpp"

using namespace scalekit;
using namespace testsupport;

namespace {

// cross-product tuple: (A_v) w = v x w for v = e1, e2, e3
MatrixTuple cross_product_tuple() {
    ComplexMatrix a1(3, 3), a2(3, 3), a3(3, 3);
    a1(1, 2) = -1.0;
    a1(2, 1) = 1.0;
    a2(0, 2) = 1.0;
    a2(2, 0) = -1.0;
    a3(0, 1) = -1.0;
    a3(1, 0) = 1.0;
    return MatrixTuple(3, {a1, a2, a3});
}

// the 3x3 tuple with shrunk subspace span{e1, e2} -> span{e1}
MatrixTuple shrunk_tuple() {
    ComplexMatrix a1(3, 3), a2(3, 3);
    a1(0, 0) = 1.0;
    a1(1, 2) = 1.0;
    a2(0, 1) = 1.0;
    a2(2, 2) = 1.0;
    return MatrixTuple(3, {a1, a2});
}

}  // namespace

TEST_CASE("ds_op closed forms") {
    CHECK(ds_op(MatrixTuple(2, {ComplexMatrix::identity(2)})) == 0.0);

    ComplexMatrix e11(2, 2);
    e11(0, 0) = 1.0;
    CHECK(ds_op(MatrixTuple(2, {e11})) == doctest::Approx(2.0));

    // (diag(1,0), e2 e1^T): left gram diag(1,1), right gram diag(2,0)
    ComplexMatrix d(2, 2), e21(2, 2);
    d(0, 0) = 1.0;
    e21(1, 0) = 1.0;
    const MatrixTuple t(2, {d, e21});
    CHECK((gram_left(t) - ComplexMatrix::identity(2)).frobenius_norm() == doctest::Approx(0.0));
    CHECK(ds_op(t) == doctest::Approx(2.0));
}

TEST_CASE("gram sums and Kraus duality") {
    Rng rng(51);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform_int(0, 2));
        const int m = 1 + static_cast<int>(rng.uniform_int(0, 3));
        std::vector<ComplexMatrix> mats;
        for (int i = 0; i < m; ++i) mats.push_back(random_complex_matrix(rng, n, n));
        const MatrixTuple a(n, std::move(mats));
        const ComplexMatrix x = random_gram(rng, n);
        // tr(T_A(X)) = tr(X sum A^dag A)
        const Complex lhs = kraus_apply(a, x).trace();
        const Complex rhs = (x * gram_right(a)).trace();
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("scaling action composes contravariantly on the right") {
    Rng rng(52);
    const MatrixTuple a(3, {random_complex_matrix(rng, 3, 3), random_complex_matrix(rng, 3, 3)});
    const ComplexMatrix b1 = random_complex_matrix(rng, 3, 3), c1 = random_complex_matrix(rng, 3, 3);
    const ComplexMatrix b2 = random_complex_matrix(rng, 3, 3), c2 = random_complex_matrix(rng, 3, 3);
    const MatrixTuple lhs = scale_tuple(scale_tuple(a, b1, c1), b2, c2);
    const MatrixTuple rhs = scale_tuple(a, b2 * b1, c1 * c2);
    for (int i = 0; i < a.m(); ++i)
        CHECK((lhs.matrices[i] - rhs.matrices[i]).frobenius_norm() <= 1e-10);
}

TEST_CASE("gurvits: identity converges immediately") {
    const ScalingReport r = gurvits_scale(MatrixTuple(2, {ComplexMatrix::identity(2)}));
    CHECK(r.status == ScalingStatus::Converged);
    CHECK(r.iterations == 0);
}

TEST_CASE("gurvits: common left kernel is rejected by the trivial check") {
    ComplexMatrix e11(2, 2), e12(2, 2);
    e11(0, 0) = 1.0;
    e12(0, 1) = 1.0;
    const ScalingReport r = gurvits_scale(MatrixTuple(2, {e11, e12}));
    CHECK(r.status == ScalingStatus::NotScalable);
    CHECK(r.iterations == 0);
}

TEST_CASE("gurvits: cross-product tuple is scalable despite det(sum x_i A_i) = 0") {
    const MatrixTuple t = cross_product_tuple();
    // the linear-combination determinant vanishes identically (odd skew matrices)
    Rng rng(53);
    for (int trial = 0; trial < 5; ++trial) {
        ComplexMatrix lin(3, 3);
        for (int i = 0; i < 3; ++i) {
            ComplexMatrix term = t.matrices[i];
            term *= Complex(rng.uniform(-1, 1), 0.0);
            lin += term;
        }
        CHECK(std::abs(det(lin)) < 1e-12);
    }

    GurvitsOptions opt;
    opt.eps = 1.0 / 4.0;  // decision threshold 1/(n+1)
    const ScalingReport r = gurvits_scale(t, opt);
    CHECK(r.status == ScalingStatus::Converged);

    // yet the k = 2 invariant is nonzero
    const DetPolyResult dp = detpoly_oracle(t, 2, 50, 7);
    CHECK(dp.nonzero);
}

TEST_CASE("gurvits: left normalization postcondition") {
    Rng rng(54);
    const MatrixTuple t = random_integer_tuple(rng, 3, 3, 3);
    GurvitsOptions opt;
    opt.eps = 1e-9;
    const ScalingReport r = gurvits_scale(t, opt);
    REQUIRE(r.status == ScalingStatus::Converged);
    // replay the run: after each left step the left gram is the identity
    const auto& sc = std::get<OperatorScalers>(r.scalers);
    const MatrixTuple final_tuple = scale_tuple(t, sc.left, sc.right);
    CHECK(ds_op(final_tuple) <= opt.eps * (1 + 1e-9));

    MatrixTuple cur = t;
    for (size_t s = 1; s < r.side_trace.size(); ++s) {
        const ComplexMatrix gram = r.side_trace[s] == "left" ? gram_left(cur) : gram_right(cur);
        const ComplexMatrix h = inv_sqrt_psd(gram);
        cur = r.side_trace[s] == "left" ? scale_tuple(cur, h, ComplexMatrix::identity(3))
                                        : scale_tuple(cur, ComplexMatrix::identity(3), h);
        const ComplexMatrix check = r.side_trace[s] == "left" ? gram_left(cur) : gram_right(cur);
        CHECK((check - ComplexMatrix::identity(3)).frobenius_norm() <= 1e-10);
    }
}

TEST_CASE("gurvits: normalized left-right potential grows strictly while scaling") {
    Rng rng(59);
    const MatrixTuple t = random_integer_tuple(rng, 3, 3, 3);
    GurvitsOptions opt;
    opt.eps = 1e-8;
    opt.witness_seed = 5;
    const ScalingReport r = gurvits_scale(t, opt);
    REQUIRE(r.status == ScalingStatus::Converged);
    REQUIRE(r.potential_trace.size() == r.ds_trace.size());
    for (size_t s = 0; s + 1 < r.potential_trace.size(); ++s)
        CHECK(r.potential_trace[s + 1] > r.potential_trace[s]);
}

TEST_CASE("invariance identity under random scalings") {
    Rng rng(55);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform_int(0, 2));
        const int m = 1 + static_cast<int>(rng.uniform_int(0, 2));
        const int k = 1 + static_cast<int>(rng.uniform_int(0, 2));
        std::vector<ComplexMatrix> mats;
        for (int i = 0; i < m; ++i) mats.push_back(random_complex_matrix(rng, n, n));
        const MatrixTuple a(n, std::move(mats));
        Rng brng = rng.fork(100 + trial);
        const std::vector<ComplexMatrix> blocks = sample_integer_blocks(m, k, n, brng);
        const ComplexMatrix b = random_complex_matrix(rng, n, n);
        const ComplexMatrix c = random_complex_matrix(rng, n, n);

        ComplexMatrix before(n * k, n * k), after(n * k, n * k);
        for (int i = 0; i < m; ++i) {
            before += kron(blocks[i], a.matrices[i]);
            after += kron(blocks[i], b * a.matrices[i] * c);
        }
        const Complex expected = std::pow(det(b) * det(c), k) * det(before);
        CHECK(std::abs(det(after) - expected) <= 1e-8 * std::max(1.0, std::abs(expected)));
    }
}

TEST_CASE("is_dim_nondecreasing: identity tuple") {
    const DimDecision d = is_dim_nondecreasing(MatrixTuple(2, {ComplexMatrix::identity(2)}));
    CHECK(d.nondecreasing);
}

TEST_CASE("is_dim_nondecreasing: constructed shrunk subspace with witness") {
    const MatrixTuple t = shrunk_tuple();
    // both gram sums are invertible so the trivial check passes
    CHECK((gram_left(t) - ComplexMatrix({{2, 0, 0}, {0, 1, 0}, {0, 0, 1}})).frobenius_norm() < 1e-12);
    CHECK((gram_right(t) - ComplexMatrix({{1, 0, 0}, {0, 1, 0}, {0, 0, 2}})).frobenius_norm() < 1e-12);

    const DimDecision d = is_dim_nondecreasing(t);
    CHECK_FALSE(d.nondecreasing);
    REQUIRE(d.witness.has_value());
    CHECK(d.witness->v_basis.cols() == 2);
    CHECK(d.witness->w_basis.cols() < d.witness->v_basis.cols());
    CHECK(verify_shrunk_subspace(t, *d.witness));
}

TEST_CASE("is_dim_nondecreasing: random dense tuples are nondecreasing") {
    Rng rng(56);
    for (int trial = 0; trial < 3; ++trial) {
        const MatrixTuple t = random_integer_tuple(rng, 3, 4, 3);
        const DimDecision d = is_dim_nondecreasing(t, false);
        CHECK(d.nondecreasing);
        const DetPolyResult dp = detpoly_oracle(t, 3, 20, 900 + trial);
        CHECK(dp.nonzero);
    }
}

TEST_CASE("is_dim_nondecreasing: planted shrunk subspaces are detected") {
    Rng rng(57);
    for (int trial = 0; trial < 3; ++trial) {
        const MatrixTuple t = planted_shrunk_tuple(rng, 3, 4, 3, 2);
        const DimDecision d = is_dim_nondecreasing(t, false);
        CHECK_FALSE(d.nondecreasing);
    }
}

TEST_CASE("detpoly: identity tuple with scalar block") {
    const MatrixTuple t(2, {ComplexMatrix::identity(2)});
    const DetPolyResult r = detpoly_oracle(t, 1, 10, 3);
    CHECK(r.nonzero);
}

TEST_CASE("detpoly: shrunk tuple vanishes identically at every k") {
    const MatrixTuple t = shrunk_tuple();
    for (int k = 1; k <= 2; ++k) {
        const DetPolyResult r = detpoly_oracle(t, k, 50, 11);
        CHECK_FALSE(r.nonzero);
        CHECK(r.exact_zero);  // determinants vanish exactly, not merely below threshold
        CHECK(r.trials_used == 50);
    }
}

TEST_CASE("detpoly agrees with the scaling decision on 100 random and 10 constructed tuples") {
    Rng rng(58);
    std::vector<MatrixTuple> suite;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform_int(0, 2));
        suite.push_back(random_integer_tuple(rng, 1 + static_cast<int>(rng.uniform_int(0, 2)), n, 3));
    }
    suite.push_back(cross_product_tuple());
    suite.push_back(shrunk_tuple());
    for (int trial = 0; trial < 8; ++trial) {
        const int n = 3 + static_cast<int>(rng.uniform_int(0, 1));
        suite.push_back(planted_shrunk_tuple(rng, 3, n, n - 1, n - 2));
    }

    int idx = 0;
    for (const MatrixTuple& t : suite) {
        const DimDecision d = is_dim_nondecreasing(t, false);
        const DetPolyResult dp = detpoly_oracle(t, t.n - 1, 50, 1000 + idx);
        CHECK(d.nondecreasing == dp.nonzero);
        ++idx;
    }
}

TEST_CASE("detpoly rejects out-of-range block sizes") {
    const MatrixTuple t(2, {ComplexMatrix::identity(2)});
    CHECK_THROWS_AS(detpoly_oracle(t, 0, 5, 1), PreconditionViolated);
    CHECK_THROWS_AS(detpoly_oracle(t, 2, 5, 1), PreconditionViolated);
}
