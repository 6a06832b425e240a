// scalekit command line: batch scaling runs, null-cone certificates,
// permanent bounds and Brascamp-Lieb utilities. JSON in, JSON report out,
// optional CSV iteration trace. Exit codes: 0 converged/decided,
// 2 not scalable / infeasible / out of polytope, 3 budget exhausted or
// undetermined, 1 error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "scalekit/bl_apps.hpp"
#include "scalekit/errors.hpp"
#include "scalekit/json_io.hpp"
#include "scalekit/matrix_scaling.hpp"
#include "scalekit/operator_scaling.hpp"
#include "scalekit/permanent.hpp"
#include "scalekit/tensor_scaling.hpp"
#include "scalekit/weight_system.hpp"

namespace {

using scalekit::JsonWriter;
using scalekit::Rational;
using scalekit::ScalingReport;
using scalekit::ScalingStatus;

struct CommonArgs {
    std::string input;
    std::string output;
    std::string trace;
    std::string flavor;
    std::string format = "json";
    double epsilon = 1e-6;
    double budget_constant = 10.0;
    long long budget = -1;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_flavor) {
    cmd->add_option("--input", args.input, "input JSON file")->required();
    cmd->add_option("--output", args.output, "report JSON file (default: stdout)");
    cmd->add_option("--trace", args.trace, "iteration trace CSV file");
    cmd->add_option("--epsilon", args.epsilon, "target distance epsilon");
    cmd->add_option("--budget-constant", args.budget_constant, "constant C in the iteration bound");
    cmd->add_option("--budget", args.budget, "iteration budget override");
    cmd->add_option("--seed", args.seed, "random seed (fallback: SCALEKIT_SEED)")
        ->each([&args](const std::string&) { args.seed_given = true; });
    cmd->add_option("--format", args.format, "output format (json)")
        ->check(CLI::IsMember({"json"}));
    if (with_flavor) cmd->add_option("--flavor", args.flavor, "input flavor override");
}

std::uint64_t resolve_seed(const CommonArgs& args) {
    if (args.seed_given) return args.seed;
    if (const char* env = std::getenv("SCALEKIT_SEED")) return std::strtoull(env, nullptr, 10);
    return 0;
}

void emit(const CommonArgs& args, const std::string& report) {
    if (args.output.empty())
        std::cout << report;
    else
        scalekit::write_file_atomic(args.output, report);
}

void emit_trace(const CommonArgs& args, const ScalingReport& report) {
    if (!args.trace.empty()) scalekit::write_file_atomic(args.trace, scalekit::report_to_trace_csv(report));
}

int status_exit_code(ScalingStatus status) {
    switch (status) {
        case ScalingStatus::Converged: return 0;
        case ScalingStatus::NotScalable: return 2;
        case ScalingStatus::BudgetExhausted: return 3;
        case ScalingStatus::Undetermined: return 3;
        case ScalingStatus::Error: return 1;
    }
    return 1;
}

nlohmann::json load_input(const std::string& path) {
    return nlohmann::json::parse(scalekit::read_file(path));
}

// ---- scale commands -----------------------------------------------------------

int cmd_scale_matrix(const CommonArgs& args) {
    const auto input = load_input(args.input);
    const scalekit::NonNegMatrix a = scalekit::parse_matrix_json(input);
    scalekit::SinkhornOptions opt;
    opt.eps = args.epsilon;
    opt.budget_constant = args.budget_constant;
    opt.budget_override = args.budget;
    const ScalingReport report = scalekit::sinkhorn(a, opt);
    emit(args, scalekit::report_to_json(report, "matrix", resolve_seed(args)));
    emit_trace(args, report);
    return status_exit_code(report.status);
}

int cmd_scale_operator(const CommonArgs& args) {
    const auto input = load_input(args.input);
    const scalekit::MatrixTuple a = scalekit::parse_tuple_json(input);
    scalekit::GurvitsOptions opt;
    opt.eps = args.epsilon;
    opt.budget_constant = args.budget_constant;
    opt.budget_override = args.budget;
    opt.witness_seed = resolve_seed(args);
    ScalingReport report = scalekit::gurvits_scale(a, opt);
    if (report.status != ScalingStatus::Converged && report.status != ScalingStatus::Error) {
        if (auto witness = scalekit::find_shrunk_subspace(a, report)) {
            report.certificate = *witness;
            if (report.status != ScalingStatus::NotScalable) {
                report.status = ScalingStatus::NotScalable;
                report.notes.push_back("verified shrunk-subspace witness upgrades the verdict");
            }
        }
    }
    emit(args, scalekit::report_to_json(report, "operator", resolve_seed(args)));
    emit_trace(args, report);
    return status_exit_code(report.status);
}

int cmd_scale_tensor(const CommonArgs& args) {
    const auto input = load_input(args.input);
    const scalekit::TensorTuple a = scalekit::parse_tensor_json(input);
    scalekit::TensorScaleOptions opt;
    opt.eps = args.epsilon;
    opt.budget_constant = args.budget_constant;
    opt.budget_override = args.budget;
    const ScalingReport report = scalekit::tensor_scale(a, opt);
    emit(args, scalekit::report_to_json(report, "tensor", resolve_seed(args)));
    emit_trace(args, report);
    return status_exit_code(report.status);
}

// ---- nullcone -------------------------------------------------------------------

void write_lambda(JsonWriter& w, const std::vector<Rational>& lambda) {
    w.key("convex_witness");
    w.begin_array();
    for (const Rational& q : lambda) w.value(q);
    w.end_array();
}

int cmd_nullcone(const CommonArgs& args) {
    const auto input = load_input(args.input);
    std::string flavor = args.flavor;
    if (flavor.empty()) flavor = input.value("flavor", "");
    if (flavor.empty()) throw scalekit::Error("nullcone needs a flavor (torus, matrix-support, tensor-support, operator)");

    JsonWriter w;
    w.begin_object();
    w.field("flavor", flavor);

    if (flavor == "torus") {
        scalekit::WeightSystem ws;
        ws.n = input.at("n").get<int>();
        for (const auto& row : input.at("omegas")) ws.omegas.push_back(row.get<std::vector<long long>>());
        scalekit::TorusVector v;
        if (input.contains("coefficients")) {
            for (const auto& cell : input.at("coefficients"))
                v.coefficients.push_back({cell[0].get<double>(), cell[1].get<double>()});
        } else {
            v.coefficients.assign(ws.m(), {1.0, 0.0});
        }
        const auto res = scalekit::torus_nullcone(ws, v);
        w.field("in_null_cone", res.in_null_cone);
        if (res.in_null_cone) {
            w.key("subgroup_exponents");
            w.begin_array();
            for (long long e : res.subgroup.exponents.front()) w.value(e);
            w.end_array();
        } else {
            write_lambda(w, res.lambda);
        }
        w.end_object();
        emit(args, w.render() + "\n");
        return 0;
    }

    if (flavor == "matrix-support" || flavor == "tensor-support") {
        std::vector<int> shape;
        if (flavor == "matrix-support") {
            const int n = input.at("n").get<int>();
            shape = {n, n};
        } else {
            shape = input.at("shape").get<std::vector<int>>();
        }
        std::vector<std::vector<int>> support;
        if (input.contains("support")) {
            for (const auto& tup : input.at("support")) support.push_back(tup.get<std::vector<int>>());
        } else if (input.contains("entries") && flavor == "matrix-support") {
            const scalekit::NonNegMatrix a = scalekit::parse_matrix_json(input);
            for (int i = 0; i < a.n(); ++i)
                for (int j = 0; j < a.n(); ++j)
                    if (a(i, j) != 0) support.push_back({i, j});
        } else {
            throw scalekit::Error("support flavor needs a support list");
        }

        const auto res = scalekit::deficiency_check(shape, support);
        // deficient support = Hilbert-Mumford witness = in the null cone
        w.field("in_null_cone", res.deficient);
        if (res.deficient) {
            w.key("deficiency");
            w.begin_array();
            for (const auto& factor : res.certificate.a) {
                w.begin_array();
                for (const Rational& q : factor) w.value(q);
                w.end_array();
            }
            w.end_array();
        } else {
            write_lambda(w, res.lambda);
            if (flavor == "matrix-support") {
                // attach the perfect matching that certifies scalability
                scalekit::NonNegMatrix a(shape[0]);
                for (const auto& tup : support) a.set(tup[0], tup[1], Rational(1));
                const auto decision = scalekit::is_scalable(a);
                if (const auto* mc = std::get_if<scalekit::MatchingCertificate>(&decision.certificate)) {
                    w.key("matching");
                    w.begin_array();
                    for (int s : mc->sigma) w.value(static_cast<long long>(s));
                    w.end_array();
                }
            }
        }
        w.end_object();
        emit(args, w.render() + "\n");
        return 0;
    }

    if (flavor == "operator") {
        const scalekit::MatrixTuple a = scalekit::parse_tuple_json(input);
        const auto decision = scalekit::is_dim_nondecreasing(a);
        w.field("in_null_cone", !decision.nondecreasing);
        w.field("scaling_status", to_string(decision.run.status));
        if (decision.witness) {
            w.field("witness_dim_v", static_cast<long long>(decision.witness->v_basis.cols()));
            w.field("witness_dim_w", static_cast<long long>(decision.witness->w_basis.cols()));
        }
        w.end_object();
        emit(args, w.render() + "\n");
        return 0;
    }

    throw scalekit::Error("unknown nullcone flavor: " + flavor);
}

// ---- permanent --------------------------------------------------------------------

int cmd_permanent(const CommonArgs& args) {
    const auto input = load_input(args.input);
    const scalekit::NonNegMatrix a = scalekit::parse_matrix_json(input);

    JsonWriter w;
    w.begin_object();
    try {
        const auto interval = scalekit::permanent_approx(a, args.epsilon, args.budget);
        w.field("status", "converged");
        w.field("lo", interval.lo);
        w.field("hi", interval.hi);
        w.field("slack", interval.slack);
        w.field("iterations", interval.scaling.iterations);
        if (a.n() <= 12) {
            const Rational exact = scalekit::permanent_exact(a);
            w.field("exact", exact);
            const double val = exact.get_d();
            w.field("contains_exact", interval.lo <= val && val <= interval.hi);
        }
        w.end_object();
        emit(args, w.render() + "\n");
        emit_trace(args, interval.scaling);
        return 0;
    } catch (const scalekit::NotScalableError& e) {
        w.field("status", "not-scalable");
        w.field("message", std::string(e.what()));
        if (a.n() <= 12) w.field("exact", scalekit::permanent_exact(a));
        w.end_object();
        emit(args, w.render() + "\n");
        return 2;
    }
}

// ---- bl ------------------------------------------------------------------------------

int cmd_bl(const CommonArgs& args) {
    const auto input = load_input(args.input);
    std::string flavor = args.flavor;
    if (flavor.empty()) flavor = input.value("flavor", "");
    if (flavor.empty()) throw scalekit::Error("bl needs a flavor (feasibility, scale, forster, matroid)");

    JsonWriter w;
    w.begin_object();
    w.field("flavor", flavor);

    if (flavor == "feasibility") {
        const scalekit::BLDatum datum = scalekit::parse_bl_json(input);
        const auto rep = scalekit::bl_feasibility_check(datum, resolve_seed(args));
        w.field("passed_necessary", rep.passed);
        w.field("reason", rep.reason);
        w.end_object();
        emit(args, w.render() + "\n");
        return rep.passed ? 0 : 2;
    }

    if (flavor == "scale") {
        const scalekit::BLDatum datum = scalekit::parse_bl_json(input);
        const auto res = scalekit::bl_scale(datum, args.epsilon,
                                            args.budget >= 0 ? args.budget : 100000);
        w.field("status", to_string(res.status));
        w.field("iterations", res.iterations);
        w.field("isotropy_residual", res.residuals.isotropy_residual);
        w.field("max_projection_residual", res.residuals.max_projection_residual());
        if (!res.reason.empty()) w.field("reason", res.reason);
        w.end_object();
        emit(args, w.render() + "\n");
        return status_exit_code(res.status);
    }

    if (flavor == "forster") {
        std::vector<std::vector<double>> vectors;
        for (const auto& row : input.at("vectors")) vectors.push_back(row.get<std::vector<double>>());
        try {
            const auto res = scalekit::forster_scale(vectors, args.epsilon,
                                                     args.budget >= 0 ? args.budget : 100000,
                                                     resolve_seed(args));
            w.field("status", to_string(res.status));
            w.field("residual", res.residual);
            w.field("iterations", res.iterations);
            w.key("a");
            w.begin_array();
            for (int i = 0; i < res.a.rows(); ++i) {
                w.begin_array();
                for (int j = 0; j < res.a.cols(); ++j) w.value(res.a(i, j).real());
                w.end_array();
            }
            w.end_array();
            w.end_object();
            emit(args, w.render() + "\n");
            return status_exit_code(res.status);
        } catch (const scalekit::NotGeneralPosition& e) {
            w.field("status", "not-scalable");
            w.field("message", std::string(e.what()));
            w.key("degenerate_subset");
            w.begin_array();
            for (int i : e.subset) w.value(static_cast<long long>(i));
            w.end_array();
            w.end_object();
            emit(args, w.render() + "\n");
            return 2;
        }
    }

    if (flavor == "matroid") {
        scalekit::MatroidPair pair;
        for (const auto& row : input.at("v")) {
            std::vector<Rational> vec;
            for (const auto& cell : row) vec.push_back(scalekit::parse_rational_json(cell));
            pair.v.push_back(std::move(vec));
        }
        for (const auto& row : input.at("w")) {
            std::vector<Rational> vec;
            for (const auto& cell : row) vec.push_back(scalekit::parse_rational_json(cell));
            pair.w.push_back(std::move(vec));
        }
        std::vector<Rational> x;
        for (const auto& cell : input.at("x")) x.push_back(scalekit::parse_rational_json(cell));

        const auto res = scalekit::matroid_intersection_membership(pair, x, args.epsilon);
        const char* verdict = res.verdict == scalekit::Membership::InPolytope ? "in-polytope"
                              : res.verdict == scalekit::Membership::OutOfPolytope ? "out-of-polytope"
                                                                                   : "undetermined";
        w.field("verdict", verdict);
        w.field("reason", res.reason);
        if (res.bl_evidence) {
            w.field("bl_status", to_string(res.bl_evidence->status));
            w.field("bl_isotropy_residual", res.bl_evidence->residuals.isotropy_residual);
        }
        w.end_object();
        emit(args, w.render() + "\n");
        if (res.verdict == scalekit::Membership::InPolytope) return 0;
        if (res.verdict == scalekit::Membership::OutOfPolytope) return 2;
        return 3;
    }

    throw scalekit::Error("unknown bl flavor: " + flavor);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"alternating-minimization scaling toolkit"};
    app.require_subcommand(1);

    CommonArgs scale_matrix_args, scale_operator_args, scale_tensor_args;
    CommonArgs nullcone_args, permanent_args, bl_args;

    add_common(app.add_subcommand("scale-matrix", "Sinkhorn matrix scaling"), scale_matrix_args, false);
    add_common(app.add_subcommand("scale-operator", "operator tuple scaling"), scale_operator_args, false);
    add_common(app.add_subcommand("scale-tensor", "tensor tuple scaling"), scale_tensor_args, false);
    add_common(app.add_subcommand("nullcone", "null-cone membership certificates"), nullcone_args, true);
    add_common(app.add_subcommand("permanent", "permanent sandwich via scaling"), permanent_args, false);
    add_common(app.add_subcommand("bl", "Brascamp-Lieb utilities"), bl_args, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("scale-matrix")) return cmd_scale_matrix(scale_matrix_args);
        if (app.got_subcommand("scale-operator")) return cmd_scale_operator(scale_operator_args);
        if (app.got_subcommand("scale-tensor")) return cmd_scale_tensor(scale_tensor_args);
        if (app.got_subcommand("nullcone")) return cmd_nullcone(nullcone_args);
        if (app.got_subcommand("permanent")) return cmd_permanent(permanent_args);
        if (app.got_subcommand("bl")) return cmd_bl(bl_args);
    } catch (const std::exception& e) {
        JsonWriter w;
        w.begin_object();
        w.field("status", "error");
        w.field("message", std::string(e.what()));
        w.end_object();
        std::cerr << w.render() << "\n";
        return 1;
    }
    return 1;
}
