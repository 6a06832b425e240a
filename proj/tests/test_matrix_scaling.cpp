#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "scalekit/matrix_scaling.hpp"
#include "scalekit/permanent.hpp"
#include "test_support.hpp"

using namespace scalekit;
using namespace testsupport;

namespace {

NonNegMatrix from_ints(const std::vector<std::vector<long>>& rows) {
    const int n = static_cast<int>(rows.size());
    NonNegMatrix a(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a.set(i, j, Rational(rows[i][j]));
    return a;
}

std::vector<double> apply_scaling(const NonNegMatrix& a, const MatrixScalers& s) {
    const int n = a.n();
    std::vector<double> x = a.double_view();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) x[static_cast<size_t>(i) * n + j] *= s.row[i] * s.col[j];
    return x;
}

}  // namespace

TEST_CASE("ds closed forms") {
    CHECK(ds(NonNegMatrix::identity(2)) == 0.0);
    CHECK(ds(from_ints({{1, 1}, {0, 1}})) == doctest::Approx(2.0));
    for (int n = 2; n <= 5; ++n) {
        NonNegMatrix ones(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) ones.set(i, j, Rational(1));
        CHECK(ds(ones) == doctest::Approx(2.0 * n * (n - 1) * (n - 1)));
    }
}

TEST_CASE("ds vanishes exactly on doubly stochastic matrices") {
    Rng rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform_int(0, 3));
        NonNegMatrix a = random_positive_matrix(rng, n, 6);
        if (ds(a) < 1e-12) continue;
        CHECK(ds(a) > 1e-12);
    }
    // random convex combination of permutation matrices is doubly stochastic
    NonNegMatrix ds3(3);
    ds3.set(0, 0, Rational(1, 2));
    ds3.set(1, 1, Rational(1, 2));
    ds3.set(2, 2, Rational(1, 2));
    ds3.set(0, 1, Rational(1, 2));
    ds3.set(1, 2, Rational(1, 2));
    ds3.set(2, 0, Rational(1, 2));
    CHECK(ds(ds3) <= 1e-12);
}

TEST_CASE("sinkhorn: zero column is rejected with a Hall violator") {
    const ScalingReport r = sinkhorn(from_ints({{0, 1}, {0, 1}}));
    CHECK(r.status == ScalingStatus::NotScalable);
    const auto* hv = std::get_if<HallViolator>(&r.certificate);
    REQUIRE(hv != nullptr);
    CHECK(hv->rows.size() > hv->neighbor_cols.size());
}

TEST_CASE("sinkhorn: 2x2 closed-form limit") {
    const NonNegMatrix a = from_ints({{1, 2}, {3, 4}});
    SinkhornOptions opt;
    opt.eps = 1e-8;
    const ScalingReport r = sinkhorn(a, opt);
    REQUIRE(r.status == ScalingStatus::Converged);

    const auto& s = std::get<MatrixScalers>(r.scalers);
    const std::vector<double> x = apply_scaling(a, s);
    // limit [[x, 1-x], [1-x, x]] with x/(1-x) = sqrt(a11 a22 / (a12 a21))
    const double ratio = std::sqrt((1.0 * 4.0) / (2.0 * 3.0));
    const double xv = ratio / (1.0 + ratio);
    CHECK(xv == doctest::Approx(0.4494897).epsilon(1e-5));
    CHECK(x[0] == doctest::Approx(xv).epsilon(1e-4));
    CHECK(x[3] == doctest::Approx(xv).epsilon(1e-4));
    CHECK(x[1] == doctest::Approx(1.0 - xv).epsilon(1e-4));
    CHECK(x[2] == doctest::Approx(1.0 - xv).epsilon(1e-4));
}

TEST_CASE("sinkhorn: triangular support converges, scalers stretch as eps shrinks") {
    const NonNegMatrix a = from_ints({{1, 1}, {0, 1}});
    SinkhornOptions coarse, fine;
    coarse.eps = 1e-3;
    fine.eps = 1e-6;
    const ScalingReport rc = sinkhorn(a, coarse);
    const ScalingReport rf = sinkhorn(a, fine);
    REQUIRE(rc.status == ScalingStatus::Converged);
    REQUIRE(rf.status == ScalingStatus::Converged);
    CHECK(rc.ds_final <= coarse.eps);
    CHECK(rf.ds_final <= fine.eps);

    auto dynamic_range = [](const MatrixScalers& s) {
        double lo = 1e300, hi = 0;
        for (double v : s.row) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        for (double v : s.col) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        return hi / lo;
    };
    CHECK(dynamic_range(std::get<MatrixScalers>(rf.scalers)) >
          dynamic_range(std::get<MatrixScalers>(rc.scalers)));
}

TEST_CASE("sinkhorn: row normalization postcondition and support invariance") {
    Rng rng(42);
    const NonNegMatrix a = random_positive_matrix(rng, 5, 8);
    SinkhornOptions opt;
    opt.eps = 1e-10;
    const ScalingReport r = sinkhorn(a, opt);
    REQUIRE(r.status == ScalingStatus::Converged);

    // replay: after each row step every row sum is 1 within 1e-12
    const int n = a.n();
    std::vector<double> x = a.double_view();
    for (size_t step = 1; step < r.side_trace.size(); ++step) {
        const bool row_side = r.side_trace[step] == "row";
        std::vector<double> sums(n, 0.0);
        if (row_side) {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) sums[i] += x[static_cast<size_t>(i) * n + j];
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) x[static_cast<size_t>(i) * n + j] /= sums[i];
            for (int i = 0; i < n; ++i) {
                double check = 0.0;
                for (int j = 0; j < n; ++j) check += x[static_cast<size_t>(i) * n + j];
                CHECK(std::abs(check - 1.0) <= 1e-12);
            }
        } else {
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) sums[j] += x[static_cast<size_t>(i) * n + j];
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) x[static_cast<size_t>(i) * n + j] /= sums[j];
        }
        // support never changes
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                CHECK((x[static_cast<size_t>(i) * n + j] != 0.0) == (a(i, j) != 0));
    }
}

TEST_CASE("is_scalable: identity and Hall violation") {
    const ScalabilityDecision id = is_scalable(NonNegMatrix::identity(3));
    REQUIRE(id.scalable);
    const auto& sigma = std::get<MatchingCertificate>(id.certificate).sigma;
    CHECK(sigma == std::vector<int>{0, 1, 2});

    const ScalabilityDecision bad = is_scalable(from_ints({{0, 1}, {0, 1}}));
    REQUIRE_FALSE(bad.scalable);
    const auto& hv = std::get<HallViolator>(bad.certificate);
    CHECK(hv.rows == std::vector<int>{0, 1});
    CHECK(hv.neighbor_cols == std::vector<int>{1});
}

TEST_CASE("is_scalable agrees with permutation brute force on all 3x3 supports") {
    for (unsigned mask = 0; mask < 512; ++mask) {
        NonNegMatrix a(3);
        std::vector<bool> support(9);
        for (int k = 0; k < 9; ++k)
            if ((mask >> k) & 1u) {
                a.set(k / 3, k % 3, Rational(1));
                support[k] = true;
            }
        CHECK(is_scalable(a).scalable == scalable_bruteforce(support, 3));
    }
}

TEST_CASE("sinkhorn at eps = 1/(n+1) decides scalability like the matching oracle") {
    Rng rng(43);
    // random sparse 5x5 instances
    for (int trial = 0; trial < 200; ++trial) {
        NonNegMatrix a(5);
        std::vector<bool> support(25, false);
        for (int k = 0; k < 25; ++k)
            if (rng.uniform() < 0.4) {
                a.set(k / 5, k % 5, random_small_rational(rng, 4));
                support[k] = true;
            }
        SinkhornOptions opt;
        opt.eps = 1.0 / 6.0;
        const ScalingReport r = sinkhorn(a, opt);
        const bool scal = scalable_bruteforce(support, 5);
        CHECK((r.status == ScalingStatus::Converged) == scal);
    }
}

TEST_CASE("sinkhorn potential is strictly increasing while unconverged") {
    Rng rng(44);
    const NonNegMatrix a = random_positive_matrix(rng, 6, 8);
    SinkhornOptions opt;
    opt.eps = 1e-8;
    const ScalingReport r = sinkhorn(a, opt);
    REQUIRE(r.status == ScalingStatus::Converged);
    REQUIRE(r.potential_trace.size() == r.ds_trace.size());
    for (size_t t = 0; t + 1 < r.potential_trace.size(); ++t)
        CHECK(r.potential_trace[t + 1] > r.potential_trace[t]);
}

TEST_CASE("sinkhorn_rc: identity already at uniform targets") {
    const ScalingReport r = sinkhorn_rc(NonNegMatrix::identity(2), {1.0, 1.0}, {1.0, 1.0});
    CHECK(r.status == ScalingStatus::Converged);
    CHECK(r.iterations == 0);
}

TEST_CASE("sinkhorn_rc: rank-one closed form") {
    NonNegMatrix ones(2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) ones.set(i, j, Rational(1));
    SinkhornOptions opt;
    opt.eps = 1e-12;
    const ScalingReport r = sinkhorn_rc(ones, {1.5, 0.5}, {1.0, 1.0}, opt);
    REQUIRE(r.status == ScalingStatus::Converged);
    const auto& s = std::get<MatrixScalers>(r.scalers);
    const std::vector<double> x = apply_scaling(ones, s);
    CHECK(x[0] == doctest::Approx(0.75));
    CHECK(x[1] == doctest::Approx(0.75));
    CHECK(x[2] == doctest::Approx(0.25));
    CHECK(x[3] == doctest::Approx(0.25));
}

TEST_CASE("sinkhorn_rc: target validation") {
    CHECK_THROWS_AS(sinkhorn_rc(NonNegMatrix::identity(2), {1.0, 1.0}, {2.0, 0.5}), MarginalMismatch);
    CHECK_THROWS_AS(sinkhorn_rc(NonNegMatrix::identity(2), {1.0, 1.0}, {2.0, 0.0}), PreconditionViolated);
}

TEST_CASE("permanent multiplicativity under diagonal scaling, exact") {
    Rng rng(45);
    for (int n = 2; n <= 6; ++n) {
        const NonNegMatrix a = random_positive_matrix(rng, n, 5);
        std::vector<Rational> b(n), c(n);
        Rational prod(1);
        for (int i = 0; i < n; ++i) {
            b[i] = random_small_rational(rng, 4);
            c[i] = random_small_rational(rng, 4);
            prod *= b[i] * c[i];
        }
        NonNegMatrix scaled(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) scaled.set(i, j, b[i] * a(i, j) * c[j]);
        CHECK(permanent_exact(scaled) == prod * permanent_exact(a));
    }
}

TEST_CASE("permanent_approx: 2x2 closed-form sandwich") {
    const NonNegMatrix a = from_ints({{1, 2}, {3, 4}});
    const PermanentInterval iv = permanent_approx(a, 1e-8);
    CHECK(iv.hi == doctest::Approx(19.8).epsilon(0.02));
    CHECK(iv.lo == doctest::Approx(9.9).epsilon(0.02));
    CHECK(iv.lo <= 10.0);
    CHECK(10.0 <= iv.hi);
}

TEST_CASE("permanent_approx: identity interval contains one") {
    for (int n = 2; n <= 5; ++n) {
        const PermanentInterval iv = permanent_approx(NonNegMatrix::identity(n), 1e-8);
        CHECK(iv.lo <= 1.0);
        CHECK(1.0 <= iv.hi);
        double log_vdw = 0.0;
        for (int i = 1; i <= n; ++i) log_vdw += std::log(static_cast<double>(i) / n);
        CHECK(iv.hi / iv.lo <= std::exp(-log_vdw) * 1.01);
    }
}

TEST_CASE("permanent_approx: random 7x7 interval contains the exact value") {
    Rng rng(46);
    const NonNegMatrix a = random_positive_matrix(rng, 7, 6);
    const PermanentInterval iv = permanent_approx(a, 1e-8);
    const double exact = permanent_exact(a).get_d();
    CHECK(iv.lo <= exact);
    CHECK(exact <= iv.hi);
}

TEST_CASE("permanent_approx: unscalable input raises") {
    CHECK_THROWS_AS(permanent_approx(from_ints({{0, 1}, {0, 1}})), NotScalableError);
}
