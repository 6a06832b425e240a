#include "scalekit/bl_apps.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "scalekit/eigh.hpp"
#include "scalekit/errors.hpp"
#include "scalekit/rng.hpp"

namespace scalekit {

void BLDatum::validate() const {
    if (blocks.size() != p.size()) throw Error("BL datum: block and exponent counts differ");
    for (const ComplexMatrix& b : blocks) {
        if (b.cols() != n) throw Error("BL datum: block column count must equal n");
        if (b.rows() < 1 || b.rows() > n) throw Error("BL datum: block row count out of range");
    }
    for (const Rational& q : p)
        if (q < 0) throw Error("BL datum: exponents must be non-negative");
}

double GeometricityReport::max_projection_residual() const {
    double m = 0.0;
    for (double v : projection_residuals) m = std::max(m, v);
    return m;
}

namespace {

ComplexMatrix isotropy_matrix(const std::vector<ComplexMatrix>& blocks, const std::vector<double>& p,
                              int n) {
    ComplexMatrix acc(n, n);
    for (size_t i = 0; i < blocks.size(); ++i) {
        ComplexMatrix term = blocks[i].transpose() * blocks[i];
        term *= Complex(p[i], 0.0);
        acc += term;
    }
    return acc;
}

GeometricityReport residuals_of(const std::vector<ComplexMatrix>& blocks, const std::vector<double>& p,
                                int n) {
    GeometricityReport rep;
    rep.isotropy_residual = (isotropy_matrix(blocks, p, n) - ComplexMatrix::identity(n)).frobenius_norm();
    for (const ComplexMatrix& b : blocks)
        rep.projection_residuals.push_back(
            (b * b.transpose() - ComplexMatrix::identity(b.rows())).frobenius_norm());
    return rep;
}

std::vector<double> to_doubles(const std::vector<Rational>& p) {
    std::vector<double> out;
    out.reserve(p.size());
    for (const Rational& q : p) out.push_back(q.get_d());
    return out;
}

bool psd_nearly_singular(const ComplexMatrix& m) {
    const EighResult e = eigh(m);
    const double top = std::max(e.eigenvalues.back(), 1e-300);
    return e.eigenvalues.front() < 1e-12 * top;
}

}  // namespace

bool is_geometric(const BLDatum& datum, double tol, GeometricityReport* out) {
    datum.validate();
    const GeometricityReport rep = residuals_of(datum.blocks, to_doubles(datum.p), datum.n);
    if (out) *out = rep;
    return rep.isotropy_residual <= tol && rep.max_projection_residual() <= tol;
}

// ---- feasibility: necessary conditions -----------------------------------------

namespace {

RatMatrix rationalize(const ComplexMatrix& m) {
    RatMatrix out(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out(i, j) = rational_from_double(m(i, j).real());
    return out;
}

// dim V <= sum p_i dim(B_i V) checked exactly; V given by basis columns
bool subspace_condition_holds(const BLDatum& datum, const std::vector<RatMatrix>& rat_blocks,
                              const RatMatrix& v_basis, Rational* lhs_out, Rational* rhs_out) {
    const int dim_v = rank(v_basis);
    if (dim_v == 0) return true;
    Rational rhs(0);
    for (int i = 0; i < datum.m(); ++i) {
        const RatMatrix& b = rat_blocks[i];
        RatMatrix image(b.rows(), v_basis.cols());
        for (int r = 0; r < b.rows(); ++r)
            for (int c = 0; c < v_basis.cols(); ++c) {
                Rational acc(0);
                for (int k = 0; k < b.cols(); ++k) acc += b(r, k) * v_basis(k, c);
                image(r, c) = acc;
            }
        rhs += datum.p[i] * rank(image);
    }
    if (lhs_out) *lhs_out = dim_v;
    if (rhs_out) *rhs_out = rhs;
    return Rational(dim_v) <= rhs;
}

}  // namespace

FeasibilityReport bl_feasibility_check(const BLDatum& datum, std::uint64_t seed) {
    datum.validate();
    FeasibilityReport rep;

    // condition 1: n = sum p_i n_i, exactly
    Rational weighted_dim(0);
    for (int i = 0; i < datum.m(); ++i) weighted_dim += datum.p[i] * datum.blocks[i].rows();
    if (weighted_dim != datum.n) {
        rep.passed = false;
        std::ostringstream msg;
        msg << "condition 1: sum p_i n_i = " << weighted_dim.get_str() << " but n = " << datum.n;
        rep.reason = msg.str();
        return rep;
    }

    std::vector<RatMatrix> rat_blocks;
    for (const ComplexMatrix& b : datum.blocks) rat_blocks.push_back(rationalize(b));

    std::vector<RatMatrix> candidates;
    candidates.push_back(RatMatrix::identity(datum.n));  // V = R^n

    // kernels and row spaces of sub-collections up to size 3
    const int m = datum.m();
    std::vector<std::vector<int>> subsets;
    for (int i = 0; i < m; ++i) subsets.push_back({i});
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) subsets.push_back({i, j});
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            for (int k = j + 1; k < m; ++k) subsets.push_back({i, j, k});

    for (const std::vector<int>& sub : subsets) {
        int rows = 0;
        for (int i : sub) rows += datum.blocks[i].rows();
        RatMatrix stacked(rows, datum.n);
        int at = 0;
        for (int i : sub) {
            for (int r = 0; r < datum.blocks[i].rows(); ++r, ++at)
                for (int c = 0; c < datum.n; ++c) stacked(at, c) = rat_blocks[i](r, c);
        }
        candidates.push_back(kernel(stacked));
        candidates.push_back(stacked.transpose());  // row space as columns
    }

    Rng rng(seed == 0 ? 0x5ca1ab1eULL : seed);
    for (int trial = 0; trial < 100; ++trial) {
        const int dim = static_cast<int>(rng.uniform_int(1, std::max(1, datum.n - 1)));
        RatMatrix v(datum.n, dim);
        for (int i = 0; i < datum.n; ++i)
            for (int j = 0; j < dim; ++j) v(i, j) = Rational(static_cast<long>(rng.uniform_int(-9, 9)));
        candidates.push_back(std::move(v));
    }

    for (const RatMatrix& v : candidates) {
        if (v.cols() == 0) continue;
        Rational lhs, rhs;
        if (!subspace_condition_holds(datum, rat_blocks, v, &lhs, &rhs)) {
            rep.passed = false;
            std::ostringstream msg;
            msg << "condition 2: dim V = " << lhs.get_str() << " exceeds sum p_i dim(B_i V) = "
                << rhs.get_str();
            rep.reason = msg.str();
            rep.violating_subspace = v;
            return rep;
        }
    }

    rep.passed = true;
    rep.reason = "necessary conditions hold on the tested family";
    return rep;
}

// ---- alternating scaling ---------------------------------------------------------

BLScaleResult bl_scale(const BLDatum& input, double eps, long long budget) {
    input.validate();
    BLScaleResult res;

    // drop zero exponents: they contribute nothing to isotropy
    BLDatum datum;
    datum.n = input.n;
    std::vector<int> kept;
    for (int i = 0; i < input.m(); ++i)
        if (input.p[i] > 0) {
            datum.blocks.push_back(input.blocks[i]);
            datum.p.push_back(input.p[i]);
            kept.push_back(i);
        }

    Rational weighted_dim(0);
    for (int i = 0; i < datum.m(); ++i) weighted_dim += datum.p[i] * datum.blocks[i].rows();
    if (weighted_dim != datum.n) {
        res.status = ScalingStatus::NotScalable;
        res.reason = "condition 1 fails: sum p_i n_i != n";
        return res;
    }
    if (datum.m() == 0) {
        res.status = ScalingStatus::NotScalable;
        res.reason = "no blocks with positive exponent";
        return res;
    }

    const std::vector<double> p = to_doubles(datum.p);
    std::vector<ComplexMatrix> cur = datum.blocks;
    res.a = ComplexMatrix::identity(datum.n);
    res.c.clear();
    for (const ComplexMatrix& b : cur) res.c.push_back(ComplexMatrix::identity(b.rows()));

    for (long long t = 0;; ++t) {
        const GeometricityReport rep = residuals_of(cur, p, datum.n);
        const double iso = rep.isotropy_residual;
        const double proj = rep.max_projection_residual();
        if (iso <= eps && proj <= eps) {
            res.status = ScalingStatus::Converged;
            res.iterations = t;
            res.residuals = rep;
            break;
        }
        if (t >= budget) {
            res.status = ScalingStatus::BudgetExhausted;
            res.iterations = t;
            res.residuals = rep;
            break;
        }

        if (iso >= proj) {
            const ComplexMatrix m = isotropy_matrix(cur, p, datum.n);
            if (psd_nearly_singular(m)) {
                res.status = ScalingStatus::NotScalable;
                res.reason = "isotropy matrix singular";
                res.iterations = t;
                res.residuals = rep;
                break;
            }
            const ComplexMatrix s = inv_sqrt_psd(m);
            res.a = res.a * s;
            for (ComplexMatrix& b : cur) b = b * s;
        } else {
            int worst = 0;
            for (int i = 1; i < datum.m(); ++i)
                if (rep.projection_residuals[i] > rep.projection_residuals[worst]) worst = i;
            const ComplexMatrix gram = cur[worst] * cur[worst].transpose();
            if (psd_nearly_singular(gram)) {
                res.status = ScalingStatus::NotScalable;
                res.reason = "projection gram singular: block lacks full row rank";
                res.iterations = t;
                res.residuals = rep;
                break;
            }
            const ComplexMatrix s = inv_sqrt_psd(gram);
            res.c[worst] = s * res.c[worst];
            cur[worst] = s * cur[worst];
        }
    }

    res.scaled_blocks = cur;
    return res;
}

// ---- Forster -----------------------------------------------------------------------

namespace {

// exact dependence test for the index subset
bool subset_dependent(const std::vector<std::vector<Rational>>& vecs, const std::vector<int>& subset) {
    const int n = static_cast<int>(vecs.front().size());
    RatMatrix m(n, static_cast<int>(subset.size()));
    for (size_t j = 0; j < subset.size(); ++j)
        for (int i = 0; i < n; ++i) m(i, static_cast<int>(j)) = vecs[subset[j]][i];
    return rank(m) < static_cast<int>(subset.size());
}

}  // namespace

ForsterResult forster_scale(const std::vector<std::vector<double>>& vectors, double eps,
                            long long budget, std::uint64_t seed) {
    const int m = static_cast<int>(vectors.size());
    if (m == 0) throw Error("forster_scale: no vectors");
    const int n = static_cast<int>(vectors.front().size());
    if (m < n) throw PreconditionViolated("forster_scale needs m >= n");

    std::vector<std::vector<Rational>> rat(m);
    for (int i = 0; i < m; ++i) {
        if (static_cast<int>(vectors[i].size()) != n) throw Error("vector length mismatch");
        for (double v : vectors[i]) rat[i].push_back(rational_from_double(v));
    }

    // general position: every n-subset independent
    if (m <= 12) {
        std::vector<int> subset(n);
        std::vector<int> idx(n);
        for (int i = 0; i < n; ++i) idx[i] = i;
        for (;;) {
            if (subset_dependent(rat, idx))
                throw NotGeneralPosition("dependent n-subset of vectors", idx);
            int pos = n - 1;
            while (pos >= 0 && idx[pos] == m - n + pos) --pos;
            if (pos < 0) break;
            ++idx[pos];
            for (int q = pos + 1; q < n; ++q) idx[q] = idx[q - 1] + 1;
        }
    } else {
        Rng rng(seed == 0 ? 0xf0e57e12ULL : seed);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<int> pool(m);
            for (int i = 0; i < m; ++i) pool[i] = i;
            for (int i = 0; i < n; ++i)
                std::swap(pool[i], pool[rng.uniform_int(i, m - 1)]);
            std::vector<int> idx(pool.begin(), pool.begin() + n);
            std::sort(idx.begin(), idx.end());
            if (subset_dependent(rat, idx))
                throw NotGeneralPosition("dependent n-subset of vectors", idx);
        }
    }

    ComplexMatrix a = ComplexMatrix::identity(n);
    ForsterResult res;
    for (long long t = 0;; ++t) {
        ComplexMatrix mmat(n, n);
        for (int i = 0; i < m; ++i) {
            std::vector<Complex> av(n, 0.0);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) av[r] += a(r, c) * vectors[i][c];
            double norm_sq = 0.0;
            for (const Complex& z : av) norm_sq += std::norm(z);
            const double w = static_cast<double>(n) / m / norm_sq;
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) mmat(r, c) += Complex(w, 0.0) * av[r] * std::conj(av[c]);
        }
        const double residual = (mmat - ComplexMatrix::identity(n)).frobenius_norm();
        if (residual <= eps) {
            res.status = ScalingStatus::Converged;
            res.residual = residual;
            res.iterations = t;
            break;
        }
        if (t >= budget) {
            res.status = ScalingStatus::BudgetExhausted;
            res.residual = residual;
            res.iterations = t;
            break;
        }
        a = inv_sqrt_psd(mmat) * a;
    }
    res.a = a;
    return res;
}

// ---- matroid intersection -----------------------------------------------------------

BLDatum matroid_bl_datum(const MatroidPair& pair, const std::vector<Rational>& x) {
    if (pair.v.size() != pair.w.size()) throw Error("matroid pair lists must have equal length");
    const int m = static_cast<int>(pair.v.size());
    if (static_cast<int>(x.size()) != m) throw Error("point length must match element count");
    const int n = static_cast<int>(pair.v.front().size());

    BLDatum datum;
    datum.n = 2 * n;
    for (int i = 0; i < m; ++i) {
        ComplexMatrix b(2, 2 * n);
        for (int j = 0; j < n; ++j) {
            b(0, n + j) = pair.v[i][j].get_d();
            b(1, j) = pair.w[i][j].get_d();
        }
        datum.blocks.push_back(std::move(b));
        datum.p.push_back(x[i]);
    }
    return datum;
}

MembershipResult matroid_intersection_membership(const MatroidPair& pair,
                                                 const std::vector<Rational>& x, double eps) {
    if (pair.v.size() != pair.w.size()) throw Error("matroid pair lists must have equal length");
    const int m = static_cast<int>(pair.v.size());
    if (m > 16) throw DimensionTooLarge("matroid membership is desk scale (m <= 16)");
    const int n = static_cast<int>(pair.v.front().size());
    if (n > 8) throw DimensionTooLarge("matroid membership is desk scale (n <= 8)");
    if (static_cast<int>(x.size()) != m) throw Error("point length must match element count");

    MembershipResult res;
    for (int i = 0; i < m; ++i)
        if (x[i] < 0) {
            res.verdict = Membership::OutOfPolytope;
            res.reason = "coordinate " + std::to_string(i + 1) + " is negative";
            return res;
        }

    // rank inequalities of both matroids, exact
    auto rank_of = [&](const std::vector<std::vector<Rational>>& vecs, unsigned mask) {
        std::vector<int> idx;
        for (int i = 0; i < m; ++i)
            if ((mask >> i) & 1u) idx.push_back(i);
        RatMatrix mat(n, static_cast<int>(idx.size()));
        for (size_t j = 0; j < idx.size(); ++j)
            for (int i = 0; i < n; ++i) mat(i, static_cast<int>(j)) = vecs[idx[j]][i];
        return rank(mat);
    };

    for (unsigned mask = 1; mask < (1u << m); ++mask) {
        Rational x_sum(0);
        for (int i = 0; i < m; ++i)
            if ((mask >> i) & 1u) x_sum += x[i];
        const int rv = rank_of(pair.v, mask);
        const int rw = rank_of(pair.w, mask);
        if (x_sum > rv || x_sum > rw) {
            res.verdict = Membership::OutOfPolytope;
            std::ostringstream msg;
            msg << "x(S) = " << x_sum.get_str() << " exceeds rank " << std::min(rv, rw)
                << " on a subset of size " << __builtin_popcount(mask);
            res.reason = msg.str();
            return res;
        }
    }
    res.verdict = Membership::InPolytope;
    res.reason = "all rank inequalities hold";

    // on the sum(x) = n face the point is a Brascamp-Lieb datum; attach the run
    Rational total(0);
    for (const Rational& q : x) total += q;
    if (total == n) {
        const BLDatum datum = matroid_bl_datum(pair, x);
        res.bl_evidence = bl_scale(datum, eps, 200000);
    }
    return res;
}

}  // namespace scalekit
