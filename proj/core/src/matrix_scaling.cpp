#include "scalekit/matrix_scaling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "scalekit/errors.hpp"

namespace scalekit {

// ---- NonNegMatrix ---------------------------------------------------------

NonNegMatrix::NonNegMatrix(int n, std::vector<Rational> entries) : n_(n), entries_(std::move(entries)) {
    if (entries_.size() != static_cast<size_t>(n) * n) throw Error("entry count does not match n");
    for (const Rational& q : entries_)
        if (q < 0) throw Error("negative entry in NonNegMatrix");
}

NonNegMatrix NonNegMatrix::from_doubles(const std::vector<std::vector<double>>& rows) {
    const int n = static_cast<int>(rows.size());
    std::vector<Rational> entries;
    entries.reserve(static_cast<size_t>(n) * n);
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != n) throw Error("matrix not square");
        for (double v : r) entries.push_back(rational_from_double(v));
    }
    return NonNegMatrix(n, std::move(entries));
}

NonNegMatrix NonNegMatrix::identity(int n) {
    NonNegMatrix m(n);
    for (int i = 0; i < n; ++i) m.set(i, i, Rational(1));
    return m;
}

void NonNegMatrix::set(int i, int j, Rational v) {
    if (v < 0) throw Error("negative entry in NonNegMatrix");
    entries_[static_cast<size_t>(i) * n_ + j] = std::move(v);
}

std::vector<double> NonNegMatrix::double_view() const {
    std::vector<double> out(entries_.size());
    for (size_t k = 0; k < entries_.size(); ++k) out[k] = entries_[k].get_d();
    return out;
}

int NonNegMatrix::bit_complexity() const { return scalekit::bit_complexity(entries_); }

bool NonNegMatrix::has_zero_row() const {
    for (int i = 0; i < n_; ++i) {
        bool all_zero = true;
        for (int j = 0; j < n_ && all_zero; ++j) all_zero = (*this)(i, j) == 0;
        if (all_zero) return true;
    }
    return false;
}

bool NonNegMatrix::has_zero_col() const {
    for (int j = 0; j < n_; ++j) {
        bool all_zero = true;
        for (int i = 0; i < n_ && all_zero; ++i) all_zero = (*this)(i, j) == 0;
        if (all_zero) return true;
    }
    return false;
}

std::vector<bool> NonNegMatrix::support() const {
    std::vector<bool> s(entries_.size());
    for (size_t k = 0; k < entries_.size(); ++k) s[k] = entries_[k] != 0;
    return s;
}

// ---- ds --------------------------------------------------------------------

double ds(const std::vector<double>& entries, int n) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        double r = 0.0;
        for (int j = 0; j < n; ++j) r += entries[static_cast<size_t>(i) * n + j];
        total += (r - 1.0) * (r - 1.0);
    }
    for (int j = 0; j < n; ++j) {
        double c = 0.0;
        for (int i = 0; i < n; ++i) c += entries[static_cast<size_t>(i) * n + j];
        total += (c - 1.0) * (c - 1.0);
    }
    return total;
}

double ds(const NonNegMatrix& a) { return ds(a.double_view(), a.n()); }

// ---- matching ---------------------------------------------------------------

namespace {

struct MatchingOutcome {
    std::vector<int> row_match;  // column matched to each row, -1 if none
    int size = 0;
};

bool try_augment(const std::vector<bool>& support, int n, int row, std::vector<int>& col_match,
                 std::vector<bool>& visited) {
    for (int j = 0; j < n; ++j) {
        if (!support[static_cast<size_t>(row) * n + j] || visited[j]) continue;
        visited[j] = true;
        if (col_match[j] < 0 || try_augment(support, n, col_match[j], col_match, visited)) {
            col_match[j] = row;
            return true;
        }
    }
    return false;
}

MatchingOutcome max_matching(const std::vector<bool>& support, int n) {
    std::vector<int> col_match(n, -1);
    MatchingOutcome out;
    for (int i = 0; i < n; ++i) {
        std::vector<bool> visited(n, false);
        if (try_augment(support, n, i, col_match, visited)) ++out.size;
    }
    out.row_match.assign(n, -1);
    for (int j = 0; j < n; ++j)
        if (col_match[j] >= 0) out.row_match[col_match[j]] = j;
    return out;
}

// Alternating reachability from an unmatched row yields S with |N(S)| < |S|.
HallViolator hall_violator(const std::vector<bool>& support, int n, const std::vector<int>& row_match) {
    int start = -1;
    for (int i = 0; i < n; ++i)
        if (row_match[i] < 0) start = i;
    if (start < 0) throw Error("hall_violator called on a perfect matching");

    std::vector<int> col_match(n, -1);
    for (int i = 0; i < n; ++i)
        if (row_match[i] >= 0) col_match[row_match[i]] = i;

    std::vector<bool> row_seen(n, false), col_seen(n, false);
    std::vector<int> stack = {start};
    row_seen[start] = true;
    while (!stack.empty()) {
        const int i = stack.back();
        stack.pop_back();
        for (int j = 0; j < n; ++j) {
            if (!support[static_cast<size_t>(i) * n + j] || col_seen[j]) continue;
            col_seen[j] = true;
            const int next = col_match[j];
            if (next >= 0 && !row_seen[next]) {
                row_seen[next] = true;
                stack.push_back(next);
            }
        }
    }

    HallViolator v;
    for (int i = 0; i < n; ++i)
        if (row_seen[i]) v.rows.push_back(i);
    for (int j = 0; j < n; ++j)
        if (col_seen[j]) v.neighbor_cols.push_back(j);
    if (v.neighbor_cols.size() >= v.rows.size()) throw Error("hall violator construction failed");
    // exact check: N(S) really is contained in the recorded neighborhood
    for (int i : v.rows)
        for (int j = 0; j < n; ++j)
            if (support[static_cast<size_t>(i) * n + j] && !col_seen[j])
                throw Error("hall violator neighborhood check failed");
    return v;
}

}  // namespace

ScalabilityDecision is_scalable(const NonNegMatrix& a) {
    const std::vector<bool> supp = a.support();
    const MatchingOutcome m = max_matching(supp, a.n());
    ScalabilityDecision out;
    if (m.size == a.n()) {
        out.scalable = true;
        out.certificate = MatchingCertificate{m.row_match};
    } else {
        out.scalable = false;
        out.certificate = hall_violator(supp, a.n(), m.row_match);
    }
    return out;
}

PotentialTracker make_matching_tracker(const NonNegMatrix& a) {
    PotentialTracker t;
    const ScalabilityDecision d = is_scalable(a);
    if (!d.scalable) return t;  // disabled
    t.kind = PotentialKind::MatchingMonomial;
    t.sigma = std::get<MatchingCertificate>(d.certificate).sigma;
    return t;
}

// ---- sinkhorn ----------------------------------------------------------------

long long sinkhorn_budget(int n, int b, double eps, double constant) {
    const double t = constant * n * (b + std::log(static_cast<double>(n))) / eps;
    if (t > 9e18) return 9000000000000000000LL;
    return static_cast<long long>(std::ceil(t));
}

namespace {

void row_sums(const std::vector<double>& x, int n, std::vector<double>& r) {
    r.assign(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r[i] += x[static_cast<size_t>(i) * n + j];
}

void col_sums(const std::vector<double>& x, int n, std::vector<double>& c) {
    c.assign(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c[j] += x[static_cast<size_t>(i) * n + j];
}

double sq_dev(const std::vector<double>& v, const std::vector<double>& target) {
    double s = 0.0;
    for (size_t i = 0; i < v.size(); ++i) s += (v[i] - target[i]) * (v[i] - target[i]);
    return s;
}

// Phi of the unit-sum normalized matrix
double normalized_potential(const std::vector<double>& x, int n, const PotentialTracker& t) {
    double total = std::accumulate(x.begin(), x.end(), 0.0);
    return matching_monomial_potential(x, n, t.sigma) / total;
}

}  // namespace

ScalingReport sinkhorn(const NonNegMatrix& a, const SinkhornOptions& opt) {
    const int n = a.n();
    ScalingReport rep;
    rep.epsilon = opt.eps;
    rep.bit_complexity = a.bit_complexity();
    const long long formula_budget = sinkhorn_budget(n, rep.bit_complexity, opt.eps, opt.budget_constant);
    rep.budget = opt.budget_override >= 0 ? opt.budget_override : formula_budget;

    if (a.has_zero_row() || a.has_zero_col()) {
        rep.status = ScalingStatus::NotScalable;
        rep.certificate = is_scalable(a).certificate;
        rep.ds_initial = rep.ds_final = ds(a);
        rep.ds_trace.push_back(rep.ds_initial);
        const std::vector<double> view = a.double_view();
        rep.norm_trace.push_back(std::accumulate(view.begin(), view.end(), 0.0));
        rep.side_trace.push_back("init");
        rep.notes.push_back("zero row or column");
        return rep;
    }

    PotentialTracker tracker = opt.track_potential ? make_matching_tracker(a) : PotentialTracker{};

    std::vector<double> x = a.double_view();
    std::vector<double> row_scale(n, 1.0), col_scale(n, 1.0);
    std::vector<double> r, c;
    const std::vector<double> ones(n, 1.0);

    for (long long t = 0;; ++t) {
        row_sums(x, n, r);
        col_sums(x, n, c);
        const double row_dev = sq_dev(r, ones);
        const double col_dev = sq_dev(c, ones);
        const double d = row_dev + col_dev;
        rep.ds_trace.push_back(d);
        rep.norm_trace.push_back(std::accumulate(x.begin(), x.end(), 0.0));
        if (t == 0) rep.side_trace.push_back("init");
        if (tracker.enabled()) rep.potential_trace.push_back(normalized_potential(x, n, tracker));

        if (d <= opt.eps) {
            rep.status = ScalingStatus::Converged;
            rep.iterations = t;
            break;
        }
        if (t >= rep.budget) {
            rep.iterations = t;
            if (rep.budget >= formula_budget) {
                rep.status = ScalingStatus::NotScalable;
                rep.certificate = is_scalable(a).certificate;
                if (std::holds_alternative<MatchingCertificate>(rep.certificate)) {
                    // theorem budget elapsed yet the support admits a matching;
                    // stay honest and report exhaustion instead
                    rep.status = ScalingStatus::BudgetExhausted;
                    rep.notes.push_back("budget exhausted although the support has a perfect matching");
                }
            } else {
                rep.status = ScalingStatus::BudgetExhausted;
            }
            break;
        }

        if (row_dev > opt.eps / 2.0) {
            for (int i = 0; i < n; ++i) {
                const double f = 1.0 / r[i];
                row_scale[i] *= f;
                for (int j = 0; j < n; ++j) x[static_cast<size_t>(i) * n + j] *= f;
            }
            rep.side_trace.push_back("row");
        } else {
            for (int j = 0; j < n; ++j) {
                const double f = 1.0 / c[j];
                col_scale[j] *= f;
                for (int i = 0; i < n; ++i) x[static_cast<size_t>(i) * n + j] *= f;
            }
            rep.side_trace.push_back("col");
        }
    }

    rep.ds_initial = rep.ds_trace.front();
    rep.ds_final = rep.ds_trace.back();
    rep.scalers = MatrixScalers{row_scale, col_scale};
    if (rep.status == ScalingStatus::Converged && tracker.enabled())
        rep.certificate = MatchingCertificate{tracker.sigma};
    return rep;
}

ScalingReport sinkhorn_rc(const NonNegMatrix& a, const std::vector<double>& r_target,
                          const std::vector<double>& c_target, const SinkhornOptions& opt) {
    const int n = a.n();
    if (static_cast<int>(r_target.size()) != n || static_cast<int>(c_target.size()) != n)
        throw Error("target marginal length mismatch");
    for (double v : r_target)
        if (v <= 0.0) throw PreconditionViolated("row targets must be positive");
    for (double v : c_target)
        if (v <= 0.0) throw PreconditionViolated("column targets must be positive");
    const double sr = std::accumulate(r_target.begin(), r_target.end(), 0.0);
    const double sc = std::accumulate(c_target.begin(), c_target.end(), 0.0);
    if (std::abs(sr - sc) > 1e-12 * std::max(1.0, std::abs(sr)))
        throw MarginalMismatch("sum of row targets differs from sum of column targets");

    ScalingReport rep;
    rep.epsilon = opt.eps;
    rep.bit_complexity = a.bit_complexity();
    const long long formula_budget = sinkhorn_budget(n, rep.bit_complexity, opt.eps, opt.budget_constant);
    rep.budget = opt.budget_override >= 0 ? opt.budget_override : formula_budget;

    if (a.has_zero_row() || a.has_zero_col()) {
        rep.status = ScalingStatus::NotScalable;
        std::vector<double> r0, c0;
        const std::vector<double> view = a.double_view();
        row_sums(view, n, r0);
        col_sums(view, n, c0);
        rep.ds_initial = rep.ds_final = sq_dev(r0, r_target) + sq_dev(c0, c_target);
        rep.ds_trace.push_back(rep.ds_initial);
        rep.norm_trace.push_back(std::accumulate(view.begin(), view.end(), 0.0));
        rep.side_trace.push_back("init");
        rep.notes.push_back("zero row or column cannot reach a positive marginal");
        return rep;
    }

    std::vector<double> x = a.double_view();
    std::vector<double> row_scale(n, 1.0), col_scale(n, 1.0);
    std::vector<double> r, c;

    for (long long t = 0;; ++t) {
        row_sums(x, n, r);
        col_sums(x, n, c);
        const double row_dev = sq_dev(r, r_target);
        const double col_dev = sq_dev(c, c_target);
        const double d = row_dev + col_dev;
        rep.ds_trace.push_back(d);
        rep.norm_trace.push_back(std::accumulate(x.begin(), x.end(), 0.0));
        if (t == 0) rep.side_trace.push_back("init");

        if (d <= opt.eps) {
            rep.status = ScalingStatus::Converged;
            rep.iterations = t;
            break;
        }
        if (t >= rep.budget) {
            rep.status = ScalingStatus::BudgetExhausted;
            rep.iterations = t;
            break;
        }

        if (row_dev > opt.eps / 2.0) {
            for (int i = 0; i < n; ++i) {
                const double f = r_target[i] / r[i];
                row_scale[i] *= f;
                for (int j = 0; j < n; ++j) x[static_cast<size_t>(i) * n + j] *= f;
            }
            rep.side_trace.push_back("row");
        } else {
            for (int j = 0; j < n; ++j) {
                const double f = c_target[j] / c[j];
                col_scale[j] *= f;
                for (int i = 0; i < n; ++i) x[static_cast<size_t>(i) * n + j] *= f;
            }
            rep.side_trace.push_back("col");
        }
    }

    rep.ds_initial = rep.ds_trace.front();
    rep.ds_final = rep.ds_trace.back();
    rep.scalers = MatrixScalers{row_scale, col_scale};
    return rep;
}

PermanentInterval permanent_approx(const NonNegMatrix& a, double eps, long long budget_override) {
    const ScalabilityDecision dec = is_scalable(a);
    if (!dec.scalable) throw NotScalableError("permanent is zero: support has no perfect matching");

    SinkhornOptions opt;
    opt.eps = eps;
    opt.budget_override = budget_override;
    ScalingReport run = sinkhorn(a, opt);
    if (run.status != ScalingStatus::Converged)
        throw Error("sinkhorn failed to converge for a scalable matrix");

    const auto& scalers = std::get<MatrixScalers>(run.scalers);
    double log_prod = 0.0;
    for (double v : scalers.row) log_prod += std::log(v);
    for (double v : scalers.col) log_prod += std::log(v);

    const int n = a.n();
    const double delta = n * std::sqrt(eps);
    double log_vdw = 0.0;  // log(n!/n^n)
    for (int i = 1; i <= n; ++i) log_vdw += std::log(static_cast<double>(i) / n);

    PermanentInterval out;
    out.slack = delta;
    out.hi = std::exp(-log_prod) * (1.0 + delta);
    out.lo = std::exp(-log_prod) * std::exp(log_vdw) * (1.0 - delta);
    out.scaling = std::move(run);
    return out;
}

// ---- template adapter ---------------------------------------------------------

namespace {

class MatrixAdapter final : public ScalingAdapter {
public:
    explicit MatrixAdapter(const NonNegMatrix& a) : n_(a.n()), x_(a.double_view()) {
        zero_line_ = a.has_zero_row() || a.has_zero_col();
        const double total = std::accumulate(x_.begin(), x_.end(), 0.0);
        if (total <= 0.0) throw Error("cannot normalize the zero matrix");
        for (double& v : x_) v /= total;
        row_scale_.assign(n_, 1.0);
        col_scale_.assign(n_, 1.0);
    }

    std::string flavor() const override { return "matrix"; }
    int flavor_k() const override { return 1; }

    std::optional<std::string> trivial_check() override {
        if (zero_line_) return "zero row or column";
        return std::nullopt;
    }

    double ds_tilde() const override {
        std::vector<double> r, c;
        row_sums(x_, n_, r);
        col_sums(x_, n_, c);
        double s = 0.0;
        for (double v : r) s += (v - 1.0 / n_) * (v - 1.0 / n_);
        for (double v : c) s += (v - 1.0 / n_) * (v - 1.0 / n_);
        return s;
    }

    double norm() const override { return std::accumulate(x_.begin(), x_.end(), 0.0); }

    StepInfo step(double eps) override {
        std::vector<double> r, c;
        row_sums(x_, n_, r);
        col_sums(x_, n_, c);
        double row_dev = 0.0, col_dev = 0.0;
        for (double v : r) row_dev += (v - 1.0 / n_) * (v - 1.0 / n_);
        for (double v : c) col_dev += (v - 1.0 / n_) * (v - 1.0 / n_);

        StepInfo info;
        info.n_prime = n_;
        const bool row_side = row_dev > eps / 2.0;
        const std::vector<double>& sums = row_side ? r : c;
        info.side = row_side ? "row" : "col";
        for (int i = 0; i < n_; ++i) {
            const double xi = n_ * sums[i];  // eigenvalue of h-hat^{-1}
            info.delta += (xi - 1.0) * (xi - 1.0);
            info.logdet_h -= std::log(xi);
        }
        if (row_side) {
            for (int i = 0; i < n_; ++i) {
                const double f = 1.0 / (n_ * r[i]);
                row_scale_[i] *= f;
                for (int j = 0; j < n_; ++j) x_[static_cast<size_t>(i) * n_ + j] *= f;
            }
        } else {
            for (int j = 0; j < n_; ++j) {
                const double f = 1.0 / (n_ * c[j]);
                col_scale_[j] *= f;
                for (int i = 0; i < n_; ++i) x_[static_cast<size_t>(i) * n_ + j] *= f;
            }
        }
        // keep the iterate at unit norm and fold the drift into the estimate
        const double total = std::accumulate(x_.begin(), x_.end(), 0.0);
        log_norm_factor_ += std::log(total);
        for (double& v : x_) v /= total;
        return info;
    }

    double capacity_value() const override {
        double logdet = 0.0;
        for (double v : row_scale_) logdet += std::log(v);
        for (double v : col_scale_) logdet += std::log(v);
        return std::exp(log_norm_factor_ - logdet / n_);
    }

    double eval_potential(const PotentialTracker& tracker) const override {
        if (tracker.kind != PotentialKind::MatchingMonomial)
            throw Error("matrix adapter tracks the matching monomial only");
        return matching_monomial_potential(x_, n_, tracker.sigma);
    }

    Scalers scalers() const override { return MatrixScalers{row_scale_, col_scale_}; }

private:
    int n_;
    std::vector<double> x_;  // unit entry-sum
    std::vector<double> row_scale_, col_scale_;
    double log_norm_factor_ = 0.0;
    bool zero_line_ = false;
};

}  // namespace

std::unique_ptr<ScalingAdapter> make_matrix_adapter(const NonNegMatrix& a) {
    return std::make_unique<MatrixAdapter>(a);
}

}  // namespace scalekit
