#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "scalekit/json_io.hpp"

namespace {

const char* cli_path() { return SCALEKIT_CLI_PATH; }
const char* fixture_dir() { return SCALEKIT_FIXTURE_DIR; }

struct RunResult {
    int exit_code;
    std::string output_file;
};

std::string fixture(const std::string& name) { return std::string(fixture_dir()) + "/" + name; }

int run_cli(const std::string& args) {
    const std::string cmd = std::string(cli_path()) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string tmp_path(const std::string& name) { return "/tmp/scalekit_test_" + name; }

nlohmann::json run_and_load(const std::string& args, const std::string& out_name, int expected_exit) {
    const std::string out = tmp_path(out_name);
    const int code = run_cli(args + " --output " + out);
    CHECK(code == expected_exit);
    return nlohmann::json::parse(scalekit::read_file(out));
}

}  // namespace

TEST_CASE("scale-matrix: identity converges with exit 0 and zero iterations") {
    const auto rep = run_and_load("scale-matrix --input " + fixture("matrix_identity.json"), "id.json", 0);
    CHECK(rep["status"] == "converged");
    CHECK(rep["iterations"] == 0);
}

TEST_CASE("scale-matrix: zero column exits 2 with a Hall violator") {
    const auto rep =
        run_and_load("scale-matrix --input " + fixture("matrix_zero_column.json"), "zc.json", 2);
    CHECK(rep["status"] == "not-scalable");
    CHECK(rep["certificate"]["kind"] == "hall-violator");
}

TEST_CASE("scale-tensor: W state exits 3 undetermined") {
    const auto rep = run_and_load(
        "scale-tensor --input " + fixture("tensor_w.json") + " --epsilon 1e-2 --budget 2000",
        "w.json", 3);
    CHECK(rep["status"] == "undetermined");
}

TEST_CASE("scale-tensor: GHZ converges immediately") {
    const auto rep = run_and_load("scale-tensor --input " + fixture("tensor_ghz.json"), "ghz.json", 0);
    CHECK(rep["status"] == "converged");
    CHECK(rep["iterations"] == 0);
}

TEST_CASE("scale-operator: identity tuple") {
    const auto rep =
        run_and_load("scale-operator --input " + fixture("operator_identity.json"), "op.json", 0);
    CHECK(rep["status"] == "converged");
}

TEST_CASE("scale-operator: shrunk tuple exits 2 with a verified witness") {
    const auto rep = run_and_load(
        "scale-operator --input " + fixture("operator_shrunk.json") + " --epsilon 0.25", "ops.json", 2);
    CHECK(rep["status"] == "not-scalable");
    CHECK(rep["certificate"]["kind"] == "shrunk-subspace");
    CHECK(rep["certificate"]["dim_w"].get<int>() < rep["certificate"]["dim_v"].get<int>());
}

TEST_CASE("nullcone: torus orthant example") {
    const auto rep = run_and_load("nullcone --input " + fixture("nullcone_torus.json"), "nc.json", 0);
    CHECK(rep["in_null_cone"] == true);
    CHECK(rep["subgroup_exponents"].size() == 2);
    CHECK(rep["subgroup_exponents"][0].get<long long>() > 0);
}

TEST_CASE("nullcone: matrix support with a perfect matching") {
    const auto rep =
        run_and_load("nullcone --input " + fixture("nullcone_matrix_support.json"), "ms.json", 0);
    CHECK(rep["in_null_cone"] == false);
    CHECK(rep["matching"].size() == 3);
}

TEST_CASE("nullcone: W support deficiency certificate") {
    const auto rep =
        run_and_load("nullcone --input " + fixture("nullcone_w_support.json"), "wd.json", 0);
    CHECK(rep["in_null_cone"] == true);
    REQUIRE(rep["deficiency"].size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(rep["deficiency"][i][0] == "1");
        CHECK(rep["deficiency"][i][1] == "-1");
    }
}

TEST_CASE("permanent: identity and the 2x2 example") {
    const auto id = run_and_load("permanent --input " + fixture("matrix_identity4.json"), "p4.json", 0);
    CHECK(id["lo"].get<double>() <= 1.0);
    CHECK(id["hi"].get<double>() >= 1.0);
    CHECK(id["exact"] == "1");
    CHECK(id["contains_exact"] == true);

    const auto ex = run_and_load("permanent --input " + fixture("matrix_12_34.json"), "p2.json", 0);
    CHECK(ex["exact"] == "10");
    CHECK(ex["hi"].get<double>() == doctest::Approx(19.8).epsilon(0.05));
    CHECK(ex["contains_exact"] == true);

    const int code = run_cli("permanent --input " + fixture("matrix_zero_column.json"));
    CHECK(code == 2);
}

TEST_CASE("bl: geometric datum scales with exit 0") {
    const auto rep = run_and_load("bl --input " + fixture("bl_geometric.json"), "blg.json", 0);
    CHECK(rep["status"] == "converged");
}

TEST_CASE("bl: exponent-sum mismatch exits 2 citing condition 1") {
    const auto rep = run_and_load("bl --input " + fixture("bl_mismatch.json"), "blm.json", 2);
    CHECK(rep["passed_necessary"] == false);
    const std::string reason = rep["reason"].get<std::string>();
    CHECK(reason.find("condition 1") != std::string::npos);
}

TEST_CASE("bl: 45-degree Forster configuration returns the identity") {
    const auto rep = run_and_load("bl --input " + fixture("forster_45.json"), "blf.json", 0);
    CHECK(rep["residual"].get<double>() <= 1e-9);
    CHECK(rep["a"][0][0].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep["a"][0][1].get<double>() == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("bl: matroid membership verdicts") {
    const auto rep = run_and_load("bl --input " + fixture("matroid_square.json"), "blmat.json", 0);
    CHECK(rep["verdict"] == "in-polytope");
}

TEST_CASE("malformed input exits 1") {
    const std::string bad = tmp_path("bad.json");
    scalekit::write_file_atomic(bad, "{\"n\": 2, \"entries\": [[1]]}\n");
    CHECK(run_cli("scale-matrix --input " + bad) == 1);
    CHECK(run_cli("scale-matrix --input /nonexistent.json") == 1);
}

TEST_CASE("determinism: identical input and seed give byte-identical reports") {
    const std::string out1 = tmp_path("det1.json");
    const std::string out2 = tmp_path("det2.json");
    const std::string base = "scale-matrix --input " + fixture("matrix_12_34.json") + " --seed 42 --output ";
    CHECK(run_cli(base + out1) == 0);
    CHECK(run_cli(base + out2) == 0);
    CHECK(scalekit::read_file(out1) == scalekit::read_file(out2));
    CHECK(!scalekit::read_file(out1).empty());
}

TEST_CASE("trace CSV has iterations + 1 rows and consistent ds values") {
    const std::string out = tmp_path("tr.json");
    const std::string trace = tmp_path("tr.csv");
    CHECK(run_cli("scale-matrix --input " + fixture("matrix_12_34.json") + " --output " + out +
                  " --trace " + trace) == 0);
    const auto rep = nlohmann::json::parse(scalekit::read_file(out));
    const long long iterations = rep["iterations"].get<long long>();

    std::istringstream csv(scalekit::read_file(trace));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "iter,ds,potential,side,norm");
    long long rows = 0;
    double first_ds = -1.0, last_ds = -1.0;
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        const size_t c1 = line.find(',');
        const size_t c2 = line.find(',', c1 + 1);
        const double ds_val = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        if (rows == 0) first_ds = ds_val;
        last_ds = ds_val;
        ++rows;
    }
    CHECK(rows == iterations + 1);
    CHECK(first_ds == rep["ds_initial"].get<double>());
    CHECK(last_ds == rep["ds_final"].get<double>());
    // spot re-evaluation: for [[1,2],[3,4]] the row sums are (3,7) and the
    // column sums (4,6), so ds = 4 + 36 + 9 + 25 = 74
    CHECK(first_ds == 74.0);

    // a trivially rejected input still records its initial state
    const std::string out2 = tmp_path("trz.json");
    const std::string trace2 = tmp_path("trz.csv");
    CHECK(run_cli("scale-matrix --input " + fixture("matrix_zero_column.json") + " --output " + out2 +
                  " --trace " + trace2) == 2);
    std::istringstream csv2(scalekit::read_file(trace2));
    std::getline(csv2, line);
    long long rows2 = 0;
    while (std::getline(csv2, line))
        if (!line.empty()) ++rows2;
    CHECK(rows2 == 1);
}

TEST_CASE("SCALEKIT_SEED environment fallback is honored in the report") {
    const std::string out = tmp_path("env.json");
    const std::string cmd = std::string("SCALEKIT_SEED=777 ") + cli_path() + " scale-matrix --input " +
                            fixture("matrix_identity.json") + " --output " + out + " > /dev/null 2>&1";
    CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    const auto rep = nlohmann::json::parse(scalekit::read_file(out));
    CHECK(rep["seed"] == 777);
}
