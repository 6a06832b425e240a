#include "scalekit/operator_scaling.hpp"

#include <algorithm>
#include <cmath>

#include "scalekit/eigh.hpp"
#include "scalekit/errors.hpp"
#include "scalekit/rational_linalg.hpp"

namespace scalekit {

MatrixTuple::MatrixTuple(int dim, std::vector<ComplexMatrix> mats) : n(dim), matrices(std::move(mats)) {
    for (const ComplexMatrix& a : matrices)
        if (a.rows() != n || a.cols() != n) throw Error("tuple members must all be n x n");
}

double MatrixTuple::norm() const {
    double s = 0.0;
    for (const ComplexMatrix& a : matrices) {
        const double f = a.frobenius_norm();
        s += f * f;
    }
    return std::sqrt(s);
}

int MatrixTuple::bit_complexity() const {
    int b = 1;
    for (const ComplexMatrix& a : matrices)
        for (const Complex& z : a.data()) {
            b = std::max(b, bit_length(rational_from_double(z.real())));
            b = std::max(b, bit_length(rational_from_double(z.imag())));
        }
    return b;
}

ComplexMatrix gram_left(const MatrixTuple& a) {
    ComplexMatrix g(a.n, a.n);
    for (const ComplexMatrix& m : a.matrices) g += m * m.adjoint();
    return g;
}

ComplexMatrix gram_right(const MatrixTuple& a) {
    ComplexMatrix g(a.n, a.n);
    for (const ComplexMatrix& m : a.matrices) g += m.adjoint() * m;
    return g;
}

ComplexMatrix kraus_apply(const MatrixTuple& a, const ComplexMatrix& x) {
    ComplexMatrix y(a.n, a.n);
    for (const ComplexMatrix& m : a.matrices) y += m * x * m.adjoint();
    return y;
}

double ds_op(const MatrixTuple& a) {
    const ComplexMatrix i = ComplexMatrix::identity(a.n);
    const double l = (gram_left(a) - i).frobenius_norm();
    const double r = (gram_right(a) - i).frobenius_norm();
    return l * l + r * r;
}

MatrixTuple scale_tuple(const MatrixTuple& a, const ComplexMatrix& b, const ComplexMatrix& c) {
    std::vector<ComplexMatrix> out;
    out.reserve(a.matrices.size());
    for (const ComplexMatrix& m : a.matrices) out.push_back(b * m * c);
    return MatrixTuple(a.n, std::move(out));
}

long long gurvits_budget(int n, int b, double eps, double constant) {
    const double t = constant * n * (b + std::log(static_cast<double>(n))) / eps;
    if (t > 9e18) return 9000000000000000000LL;
    return static_cast<long long>(std::ceil(t));
}

namespace {

bool nearly_singular(const ComplexMatrix& psd) {
    const EighResult e = eigh(psd);
    const double top = std::max(e.eigenvalues.back(), 0.0);
    return e.eigenvalues.front() < 1e-12 * std::max(top, 1e-300);
}

}  // namespace

ScalingReport gurvits_scale(const MatrixTuple& a, const GurvitsOptions& opt) {
    const int n = a.n;
    ScalingReport rep;
    rep.epsilon = opt.eps;
    rep.bit_complexity = a.bit_complexity();
    const long long formula_budget = gurvits_budget(n, rep.bit_complexity, opt.eps, opt.budget_constant);
    rep.budget = opt.budget_override >= 0 ? opt.budget_override : formula_budget;

    if (nearly_singular(gram_left(a)) || nearly_singular(gram_right(a))) {
        rep.status = ScalingStatus::NotScalable;
        rep.ds_initial = rep.ds_final = ds_op(a);
        rep.ds_trace.push_back(rep.ds_initial);
        rep.norm_trace.push_back(a.norm());
        rep.side_trace.push_back("init");
        rep.notes.push_back("singular gram sum");
        return rep;
    }

    ComplexMatrix b = ComplexMatrix::identity(n);
    ComplexMatrix c = ComplexMatrix::identity(n);
    MatrixTuple cur = a;
    const ComplexMatrix eye = ComplexMatrix::identity(n);

    PotentialTracker tracker;
    if (opt.track_potential && n >= 2) {
        Rng rng(opt.witness_seed ^ 0xB10C5EEDULL);
        tracker = make_left_right_tracker(a, n - 1, rng);
        if (!tracker.enabled()) rep.notes.push_back("potential unavailable: witness degenerate 20 times");
    }

    for (long long t = 0;; ++t) {
        const ComplexMatrix left = gram_left(cur);
        const ComplexMatrix right = gram_right(cur);
        const double left_dev = (left - eye).frobenius_norm() * (left - eye).frobenius_norm();
        const double right_dev = (right - eye).frobenius_norm() * (right - eye).frobenius_norm();
        const double d = left_dev + right_dev;
        rep.ds_trace.push_back(d);
        rep.norm_trace.push_back(cur.norm());
        if (t == 0) rep.side_trace.push_back("init");
        if (tracker.enabled())
            rep.potential_trace.push_back(
                left_right_potential(cur.matrices, tracker.blocks, tracker.block_size) / cur.norm());

        if (d <= opt.eps) {
            rep.status = ScalingStatus::Converged;
            rep.iterations = t;
            break;
        }
        if (t >= rep.budget) {
            rep.iterations = t;
            rep.status = rep.budget >= formula_budget ? ScalingStatus::NotScalable
                                                      : ScalingStatus::BudgetExhausted;
            break;
        }

        ComplexMatrix normalizer;
        try {
            normalizer = inv_sqrt_psd(left_dev > opt.eps / 2.0 ? left : right);
        } catch (const NearSingular&) {
            rep.iterations = t;
            rep.status = ScalingStatus::BudgetExhausted;
            rep.notes.push_back("near-singular gram sum during normalization");
            break;
        }
        if (left_dev > opt.eps / 2.0) {
            b = normalizer * b;
            cur = MatrixTuple(n, [&] {
                std::vector<ComplexMatrix> out;
                out.reserve(cur.matrices.size());
                for (const ComplexMatrix& m : cur.matrices) out.push_back(normalizer * m);
                return out;
            }());
            rep.side_trace.push_back("left");
        } else {
            c = c * normalizer;
            cur = MatrixTuple(n, [&] {
                std::vector<ComplexMatrix> out;
                out.reserve(cur.matrices.size());
                for (const ComplexMatrix& m : cur.matrices) out.push_back(m * normalizer);
                return out;
            }());
            rep.side_trace.push_back("right");
        }

        if (condition_number(b) > opt.condition_limit || condition_number(c) > opt.condition_limit) {
            rep.iterations = t + 1;
            rep.ds_trace.push_back(ds_op(cur));
            rep.norm_trace.push_back(cur.norm());
            rep.status = ScalingStatus::Undetermined;
            rep.notes.push_back("scaler condition number exceeded limit (null-cone boundary blow-up)");
            break;
        }
    }

    rep.ds_initial = rep.ds_trace.front();
    rep.ds_final = rep.ds_trace.back();
    rep.notes.push_back("cond(B) = " + std::to_string(condition_number(b)) +
                        ", cond(C) = " + std::to_string(condition_number(c)));
    rep.scalers = OperatorScalers{b, c};
    return rep;
}

// ---- dimension non-decreasing ------------------------------------------------

namespace {

// exact rank of the n x (m * cols_v) complex-rational matrix [A_1 V ... A_m V]
int exact_image_dim(const MatrixTuple& a, const ComplexMatrix& v_basis) {
    const int n = a.n;
    const int cols = v_basis.cols();
    // treat real and imaginary parts exactly; stack columns of all A_i V
    std::vector<GaussRational> entries;
    const int total_cols = a.m() * cols;
    entries.resize(static_cast<size_t>(n) * total_cols);
    int col_at = 0;
    for (const ComplexMatrix& mat : a.matrices) {
        const ComplexMatrix img = mat * v_basis;
        for (int j = 0; j < cols; ++j, ++col_at)
            for (int i = 0; i < n; ++i)
                entries[static_cast<size_t>(i) * total_cols + col_at] =
                    GaussRational(rational_from_double(img(i, j).real()),
                                  rational_from_double(img(i, j).imag()));
    }
    // Gaussian elimination over Q(i)
    int rank_count = 0;
    auto at = [&](int i, int j) -> GaussRational& { return entries[static_cast<size_t>(i) * total_cols + j]; };
    for (int col = 0; col < total_cols && rank_count < n; ++col) {
        int pivot = -1;
        for (int i = rank_count; i < n; ++i)
            if (!at(i, col).is_zero()) {
                pivot = i;
                break;
            }
        if (pivot < 0) continue;
        if (pivot != rank_count)
            for (int j = col; j < total_cols; ++j) std::swap(at(pivot, j), at(rank_count, j));
        for (int i = rank_count + 1; i < n; ++i) {
            if (at(i, col).is_zero()) continue;
            const GaussRational f = at(i, col) / at(rank_count, col);
            for (int j = col; j < total_cols; ++j) at(i, j) = at(i, j) - f * at(rank_count, j);
        }
        ++rank_count;
    }
    return rank_count;
}

// orthonormal basis of the column space by modified Gram-Schmidt
ComplexMatrix orthonormal_columns(const ComplexMatrix& stacked, double tol) {
    const int n = stacked.rows();
    const int total = stacked.cols();
    ComplexMatrix basis(n, total);
    int kept = 0;
    for (int j = 0; j < total; ++j) {
        std::vector<Complex> v(n);
        for (int i = 0; i < n; ++i) v[i] = stacked(i, j);
        for (int pass = 0; pass < 2; ++pass)
            for (int k = 0; k < kept; ++k) {
                Complex dot = 0.0;
                for (int i = 0; i < n; ++i) dot += std::conj(basis(i, k)) * v[i];
                for (int i = 0; i < n; ++i) v[i] -= dot * basis(i, k);
            }
        double norm = 0.0;
        for (const Complex& z : v) norm += std::norm(z);
        norm = std::sqrt(norm);
        if (norm <= tol) continue;
        for (int i = 0; i < n; ++i) basis(i, kept) = v[i] / norm;
        ++kept;
    }
    ComplexMatrix out(n, kept);
    for (int j = 0; j < kept; ++j)
        for (int i = 0; i < n; ++i) out(i, j) = basis(i, j);
    return out;
}

ComplexMatrix column_space_basis(const MatrixTuple& a, const ComplexMatrix& v_basis, double tol) {
    const int n = a.n;
    const int total = a.m() * v_basis.cols();
    ComplexMatrix stacked(n, total);
    int c = 0;
    for (const ComplexMatrix& mat : a.matrices) {
        const ComplexMatrix img = mat * v_basis;
        for (int j = 0; j < img.cols(); ++j, ++c)
            for (int i = 0; i < n; ++i) stacked(i, c) = img(i, j);
    }
    return orthonormal_columns(stacked, tol);
}

std::optional<ShrunkSubspaceWitness> make_witness(const MatrixTuple& a, const ComplexMatrix& v_basis) {
    if (v_basis.cols() == 0) return std::nullopt;
    const ComplexMatrix w = column_space_basis(a, v_basis, 1e-10);
    if (w.cols() >= v_basis.cols()) return std::nullopt;
    ShrunkSubspaceWitness witness{v_basis, w};
    if (!verify_shrunk_subspace(a, witness)) return std::nullopt;
    return witness;
}

std::optional<ShrunkSubspaceWitness> search_witness(const MatrixTuple& a, const ScalingReport& run) {
    const int n = a.n;

    // coordinate subspaces, exact ranks
    if (n <= 12) {
        for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
            const int dim_v = __builtin_popcount(mask);
            ComplexMatrix v(n, dim_v);
            int c = 0;
            for (int i = 0; i < n; ++i)
                if ((mask >> i) & 1u) v(i, c++) = 1.0;
            if (exact_image_dim(a, v) < dim_v)
                if (auto w = make_witness(a, v)) return w;
        }
    }

    // kernel of sum A^dag A: V with A_i V = 0
    {
        const EighResult e = eigh(gram_right(a));
        const double top = std::max(e.eigenvalues.back(), 1e-300);
        int dim = 0;
        while (dim < n && e.eigenvalues[dim] < 1e-10 * top) ++dim;
        if (dim > 0) {
            ComplexMatrix v(n, dim);
            for (int j = 0; j < dim; ++j)
                for (int i = 0; i < n; ++i) v(i, j) = e.vectors(i, j);
            if (auto w = make_witness(a, v)) return w;
        }
    }
    // kernel of sum A A^dag: the full space shrinks into its complement
    {
        const EighResult e = eigh(gram_left(a));
        const double top = std::max(e.eigenvalues.back(), 1e-300);
        int dim = 0;
        while (dim < n && e.eigenvalues[dim] < 1e-10 * top) ++dim;
        if (dim > 0)
            if (auto w = make_witness(a, ComplexMatrix::identity(n))) return w;
    }

    // eigenvalue clusters of the final iterate's right gram, mapped back by C
    if (const auto* sc = std::get_if<OperatorScalers>(&run.scalers)) {
        const MatrixTuple final_tuple = scale_tuple(a, sc->left, sc->right);
        const EighResult e = eigh(gram_right(final_tuple));
        for (int split = 1; split < n; ++split) {
            ComplexMatrix v_small(n, split);
            for (int j = 0; j < split; ++j)
                for (int i = 0; i < n; ++i) v_small(i, j) = e.vectors(i, j);
            const ComplexMatrix v = sc->right * v_small;  // back to input coordinates
            if (column_space_basis(a, v, 1e-8).cols() < split)
                if (auto w = make_witness(a, v)) return w;
        }
    }
    return std::nullopt;
}

}  // namespace

bool verify_shrunk_subspace(const MatrixTuple& a, const ShrunkSubspaceWitness& w, double tol) {
    if (w.w_basis.cols() >= w.v_basis.cols()) return false;
    // projector onto W (columns orthonormalized first)
    const ComplexMatrix wb = orthonormal_columns(w.w_basis, 1e-12);
    for (const ComplexMatrix& mat : a.matrices) {
        const ComplexMatrix img = mat * w.v_basis;
        const ComplexMatrix proj = wb * (wb.adjoint() * img);
        if ((img - proj).frobenius_norm() > tol * std::max(1.0, img.frobenius_norm())) return false;
    }
    return true;
}

std::optional<ShrunkSubspaceWitness> find_shrunk_subspace(const MatrixTuple& a,
                                                          const ScalingReport& run) {
    return search_witness(a, run);
}

DimDecision is_dim_nondecreasing(const MatrixTuple& a, bool want_witness) {
    GurvitsOptions opt;
    opt.eps = 1.0 / (a.n + 1);
    DimDecision out;
    out.run = gurvits_scale(a, opt);
    out.nondecreasing = out.run.status == ScalingStatus::Converged;
    if (!out.nondecreasing && want_witness) out.witness = search_witness(a, out.run);
    return out;
}

// ---- determinant polynomial oracle --------------------------------------------

DetPolyResult detpoly_oracle(const MatrixTuple& a, int k, int trials, std::uint64_t seed) {
    const int n = a.n;
    if (k < 1 || k > n - 1) throw PreconditionViolated("detpoly_oracle needs 1 <= k <= n-1");

    const double norm = a.norm();
    const double threshold =
        1e-10 * std::pow(static_cast<double>(n), 0.5 * n * k) * std::pow(std::max(norm, 1e-300), n * k);

    Rng rng(seed);
    DetPolyResult res;
    std::vector<std::vector<GaussRational>> gauss_members;
    gauss_members.reserve(a.matrices.size());
    for (const ComplexMatrix& m : a.matrices) gauss_members.push_back(to_gauss(m));

    for (int t = 0; t < trials; ++t) {
        Rng trial_rng = rng.fork(static_cast<std::uint64_t>(t));
        const std::vector<ComplexMatrix> blocks = sample_integer_blocks(a.m(), k, n, trial_rng);

        // exact sum D_i kron A_i over Q(i)
        const int dim = n * k;
        std::vector<GaussRational> acc(static_cast<size_t>(dim) * dim);
        for (int i = 0; i < a.m(); ++i)
            for (int br = 0; br < k; ++br)
                for (int bc = 0; bc < k; ++bc) {
                    const double dval = blocks[i](br, bc).real();
                    if (dval == 0.0) continue;
                    const Rational d = rational_from_double(dval);
                    for (int r = 0; r < n; ++r)
                        for (int c = 0; c < n; ++c) {
                            GaussRational& cell = acc[static_cast<size_t>(br * n + r) * dim + bc * n + c];
                            const GaussRational& av = gauss_members[i][static_cast<size_t>(r) * n + c];
                            cell.re += d * av.re;
                            cell.im += d * av.im;
                        }
                }
        const GaussRational d = gauss_det(std::move(acc), dim);
        res.trials_used = t + 1;
        if (!d.is_zero()) {
            res.exact_zero = false;
            const double mag = std::hypot(d.re.get_d(), d.im.get_d());
            if (mag > threshold) {
                res.nonzero = true;
                res.witness_blocks = blocks;
                res.abs_det = mag;
                return res;
            }
            res.abs_det = std::max(res.abs_det, mag);
        }
    }
    res.nonzero = false;
    return res;
}

// ---- template adapter ----------------------------------------------------------

namespace {

class OperatorAdapter final : public ScalingAdapter {
public:
    explicit OperatorAdapter(const MatrixTuple& a) : tuple_(a) {
        const double norm = tuple_.norm();
        if (norm <= 0.0) throw Error("cannot normalize the zero tuple");
        for (ComplexMatrix& m : tuple_.matrices) m *= Complex(1.0 / norm, 0.0);
        b_logdet_ = c_logdet_ = log_norm_factor_ = 0.0;
        b_ = ComplexMatrix::identity(tuple_.n);
        c_ = ComplexMatrix::identity(tuple_.n);
    }

    std::string flavor() const override { return "operator"; }
    int flavor_k() const override { return 2; }

    std::optional<std::string> trivial_check() override {
        if (nearly_singular(gram_left(tuple_)) || nearly_singular(gram_right(tuple_)))
            return "singular gram sum";
        return std::nullopt;
    }

    double ds_tilde() const override {
        const int n = tuple_.n;
        ComplexMatrix scaled_eye = ComplexMatrix::identity(n);
        scaled_eye *= Complex(1.0 / n, 0.0);
        const double l = (gram_left(tuple_) - scaled_eye).frobenius_norm();
        const double r = (gram_right(tuple_) - scaled_eye).frobenius_norm();
        return l * l + r * r;
    }

    double norm() const override { return tuple_.norm(); }

    StepInfo step(double eps) override {
        const int n = tuple_.n;
        ComplexMatrix scaled_eye = ComplexMatrix::identity(n);
        scaled_eye *= Complex(1.0 / n, 0.0);
        const ComplexMatrix left = gram_left(tuple_);
        const ComplexMatrix right = gram_right(tuple_);
        const double left_dev = std::pow((left - scaled_eye).frobenius_norm(), 2);

        const bool left_side = left_dev > eps / 2.0;
        const ComplexMatrix& gram = left_side ? left : right;
        ComplexMatrix scaled = gram;
        scaled *= Complex(static_cast<double>(n), 0.0);
        const EighResult e = eigh(scaled);

        StepInfo info;
        info.side = left_side ? "left" : "right";
        info.n_prime = n;
        for (double x : e.eigenvalues) {
            info.delta += (x - 1.0) * (x - 1.0);
            info.logdet_h -= 0.5 * std::log(x);
        }

        const ComplexMatrix h = inv_sqrt_psd(scaled);
        if (left_side) {
            b_ = h * b_;
            b_logdet_ += info.logdet_h;
            for (ComplexMatrix& m : tuple_.matrices) m = h * m;
        } else {
            c_ = c_ * h;
            c_logdet_ += info.logdet_h;
            for (ComplexMatrix& m : tuple_.matrices) m = m * h;
        }
        const double norm_after = tuple_.norm();
        log_norm_factor_ += std::log(norm_after);
        for (ComplexMatrix& m : tuple_.matrices) m *= Complex(1.0 / norm_after, 0.0);
        return info;
    }

    double capacity_value() const override {
        const int n = tuple_.n;
        return std::exp(2.0 * log_norm_factor_ - (2.0 / n) * (b_logdet_ + c_logdet_));
    }

    double eval_potential(const PotentialTracker& tracker) const override {
        if (tracker.kind != PotentialKind::LeftRightDeterminant)
            throw Error("operator adapter tracks the left-right determinant only");
        return left_right_potential(tuple_.matrices, tracker.blocks, tracker.block_size);
    }

    Scalers scalers() const override { return OperatorScalers{b_, c_}; }

private:
    MatrixTuple tuple_;  // unit Frobenius norm
    ComplexMatrix b_, c_;
    double b_logdet_ = 0.0, c_logdet_ = 0.0;
    double log_norm_factor_ = 0.0;
};

}  // namespace

std::unique_ptr<ScalingAdapter> make_operator_adapter(const MatrixTuple& a) {
    return std::make_unique<OperatorAdapter>(a);
}

PotentialTracker make_left_right_tracker(const MatrixTuple& a, int k, Rng& rng, int max_resamples) {
    PotentialTracker t;
    for (int attempt = 0; attempt < max_resamples; ++attempt) {
        const std::vector<ComplexMatrix> blocks = sample_integer_blocks(a.m(), k, a.n, rng);
        if (left_right_potential(a.matrices, blocks, k) > 0.0) {
            t.kind = PotentialKind::LeftRightDeterminant;
            t.blocks = blocks;
            t.block_size = k;
            return t;
        }
    }
    return t;  // disabled: potential unavailable, runs continue without tracking
}

}  // namespace scalekit
