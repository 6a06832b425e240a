#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "scalekit/bl_apps.hpp"
#include "scalekit/nonneg_matrix.hpp"
#include "scalekit/operator_scaling.hpp"
#include "scalekit/report.hpp"
#include "scalekit/tensor_tuple.hpp"

namespace scalekit {

// Input schemas. Rational entries may come as "p/q" / decimal strings
// (preserving bit complexity exactly) or as JSON numbers (rationalized from
// the binary double).
//
//   matrix: {"n": int, "entries": [[string-rational | number]]}
//   tuple:  {"m": int, "n": int, "matrices": [[[[re, im]]]]}
//   tensor: {"m": int, "shape": [n_1..n_d],
//            "entries": [[ [re, im] x (n_1*...*n_d) ] x m]}  (axis 1 slowest)
//   bl:     {"n": int, "blocks": [{"ni": int, "B": [[number]]}],
//            "p": [string-rational | number]}

NonNegMatrix parse_matrix_json(const nlohmann::json& j);
MatrixTuple parse_tuple_json(const nlohmann::json& j);
TensorTuple parse_tensor_json(const nlohmann::json& j);
BLDatum parse_bl_json(const nlohmann::json& j);
Rational parse_rational_json(const nlohmann::json& j);

// Deterministic writer: keys in insertion order, doubles rendered with 17
// significant digits so identical runs produce byte-identical reports.
class JsonWriter {
public:
    std::string render() const { return out_; }

    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(const std::string& name);
    JsonWriter& value(double v);
    JsonWriter& value(long long v);
    JsonWriter& value(int v) { return value(static_cast<long long>(v)); }
    JsonWriter& value(bool v);
    JsonWriter& value(const std::string& v);
    JsonWriter& value(const char* v) { return value(std::string(v)); }
    JsonWriter& value(const Rational& v) { return value(v.get_str()); }
    JsonWriter& null_value();

    template <typename T>
    JsonWriter& field(const std::string& name, const T& v) {
        key(name);
        return value(v);
    }

private:
    void separator();
    void value_string_raw(const std::string& v);
    std::string out_;
    std::vector<bool> needs_comma_;
    bool pending_key_ = false;
};

std::string format_double(double v);  // %.17g with nan/inf mapped to null

// Report serialization shared by the CLI and the tests.
std::string report_to_json(const ScalingReport& report, const std::string& flavor,
                           std::uint64_t seed);

// CSV trace: header iter,ds,potential,side,norm then one row per recorded
// state (iterations + 1 rows).
std::string report_to_trace_csv(const ScalingReport& report);

// write to a temp file in the same directory, then rename
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace scalekit
