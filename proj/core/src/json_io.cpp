#include "scalekit/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "scalekit/errors.hpp"

namespace scalekit {

Rational parse_rational_json(const nlohmann::json& j) {
    if (j.is_string()) return rational_from_string(j.get<std::string>());
    if (j.is_number_integer()) return Rational(static_cast<long>(j.get<long long>()));
    if (j.is_number()) return rational_from_double(j.get<double>());
    throw Error("expected a rational (string or number)");
}

NonNegMatrix parse_matrix_json(const nlohmann::json& j) {
    const int n = j.at("n").get<int>();
    const auto& entries = j.at("entries");
    if (static_cast<int>(entries.size()) != n) throw Error("matrix row count mismatch");
    std::vector<Rational> values;
    values.reserve(static_cast<size_t>(n) * n);
    for (const auto& row : entries) {
        if (static_cast<int>(row.size()) != n) throw Error("matrix column count mismatch");
        for (const auto& cell : row) values.push_back(parse_rational_json(cell));
    }
    return NonNegMatrix(n, std::move(values));
}

namespace {

Complex parse_complex(const nlohmann::json& j) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2) return Complex(j[0].get<double>(), j[1].get<double>());
    throw Error("expected a complex entry [re, im]");
}

}  // namespace

MatrixTuple parse_tuple_json(const nlohmann::json& j) {
    const int m = j.at("m").get<int>();
    const int n = j.at("n").get<int>();
    const auto& mats = j.at("matrices");
    if (static_cast<int>(mats.size()) != m) throw Error("tuple member count mismatch");
    std::vector<ComplexMatrix> matrices;
    for (const auto& mat : mats) {
        if (static_cast<int>(mat.size()) != n) throw Error("tuple member row count mismatch");
        ComplexMatrix cm(n, n);
        for (int r = 0; r < n; ++r) {
            if (static_cast<int>(mat[r].size()) != n) throw Error("tuple member column count mismatch");
            for (int c = 0; c < n; ++c) cm(r, c) = parse_complex(mat[r][c]);
        }
        matrices.push_back(std::move(cm));
    }
    return MatrixTuple(n, std::move(matrices));
}

TensorTuple parse_tensor_json(const nlohmann::json& j) {
    const int m = j.at("m").get<int>();
    std::vector<int> shape = j.at("shape").get<std::vector<int>>();
    long long size = 1;
    for (int s : shape) size *= s;
    const auto& entries = j.at("entries");
    if (static_cast<int>(entries.size()) != m) throw Error("tensor member count mismatch");
    std::vector<std::vector<Complex>> tensors;
    for (const auto& t : entries) {
        if (static_cast<long long>(t.size()) != size) throw Error("tensor entry count mismatch");
        std::vector<Complex> flat;
        flat.reserve(t.size());
        for (const auto& cell : t) flat.push_back(parse_complex(cell));
        tensors.push_back(std::move(flat));
    }
    return TensorTuple(std::move(shape), std::move(tensors));
}

BLDatum parse_bl_json(const nlohmann::json& j) {
    BLDatum datum;
    datum.n = j.at("n").get<int>();
    for (const auto& block : j.at("blocks")) {
        const int ni = block.at("ni").get<int>();
        const auto& rows = block.at("B");
        if (static_cast<int>(rows.size()) != ni) throw Error("BL block row count mismatch");
        ComplexMatrix b(ni, datum.n);
        for (int r = 0; r < ni; ++r) {
            if (static_cast<int>(rows[r].size()) != datum.n) throw Error("BL block column count mismatch");
            for (int c = 0; c < datum.n; ++c) b(r, c) = Complex(rows[r][c].get<double>(), 0.0);
        }
        datum.blocks.push_back(std::move(b));
    }
    for (const auto& q : j.at("p")) datum.p.push_back(parse_rational_json(q));
    datum.validate();
    return datum;
}

// ---- writer ---------------------------------------------------------------------

std::string format_double(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void JsonWriter::separator() {
    if (pending_key_) {
        pending_key_ = false;
        return;
    }
    if (!needs_comma_.empty()) {
        if (needs_comma_.back()) out_ += ',';
        needs_comma_.back() = true;
    }
}

JsonWriter& JsonWriter::begin_object() {
    separator();
    out_ += '{';
    needs_comma_.push_back(false);
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    out_ += '}';
    needs_comma_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    separator();
    out_ += '[';
    needs_comma_.push_back(false);
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    out_ += ']';
    needs_comma_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::key(const std::string& name) {
    separator();
    value_string_raw(name);
    out_ += ':';
    pending_key_ = true;
    return *this;
}

JsonWriter& JsonWriter::value(double v) {
    separator();
    out_ += format_double(v);
    return *this;
}

JsonWriter& JsonWriter::value(long long v) {
    separator();
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::value(bool v) {
    separator();
    out_ += v ? "true" : "false";
    return *this;
}

JsonWriter& JsonWriter::value(const std::string& v) {
    separator();
    value_string_raw(v);
    return *this;
}

JsonWriter& JsonWriter::null_value() {
    separator();
    out_ += "null";
    return *this;
}

void JsonWriter::value_string_raw(const std::string& v) {
    out_ += '"';
    for (char c : v) {
        switch (c) {
            case '"': out_ += "\\\""; break;
            case '\\': out_ += "\\\\"; break;
            case '\n': out_ += "\\n"; break;
            case '\t': out_ += "\\t"; break;
            case '\r': out_ += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out_ += buf;
                } else {
                    out_ += c;
                }
        }
    }
    out_ += '"';
}

// ---- report serialization ----------------------------------------------------------

namespace {

void write_double_array(JsonWriter& w, const std::vector<double>& values) {
    w.begin_array();
    for (double v : values) w.value(v);
    w.end_array();
}

void write_complex_matrix(JsonWriter& w, const ComplexMatrix& m) {
    w.begin_array();
    for (int i = 0; i < m.rows(); ++i) {
        w.begin_array();
        for (int j = 0; j < m.cols(); ++j) {
            w.begin_array();
            w.value(m(i, j).real());
            w.value(m(i, j).imag());
            w.end_array();
        }
        w.end_array();
    }
    w.end_array();
}

void write_scalers(JsonWriter& w, const Scalers& scalers) {
    if (const auto* ms = std::get_if<MatrixScalers>(&scalers)) {
        w.begin_object();
        w.key("row");
        write_double_array(w, ms->row);
        w.key("col");
        write_double_array(w, ms->col);
        w.end_object();
    } else if (const auto* os = std::get_if<OperatorScalers>(&scalers)) {
        w.begin_object();
        w.key("left");
        write_complex_matrix(w, os->left);
        w.key("right");
        write_complex_matrix(w, os->right);
        w.end_object();
    } else if (const auto* ts = std::get_if<TensorScalers>(&scalers)) {
        w.begin_object();
        w.key("factors");
        w.begin_array();
        for (const ComplexMatrix& g : ts->factors) write_complex_matrix(w, g);
        w.end_array();
        w.end_object();
    } else {
        w.null_value();
    }
}

void write_certificate(JsonWriter& w, const Certificate& cert) {
    if (const auto* mc = std::get_if<MatchingCertificate>(&cert)) {
        w.begin_object();
        w.field("kind", "matching");
        w.key("sigma");
        w.begin_array();
        for (int v : mc->sigma) w.value(static_cast<long long>(v));
        w.end_array();
        w.end_object();
    } else if (const auto* hv = std::get_if<HallViolator>(&cert)) {
        w.begin_object();
        w.field("kind", "hall-violator");
        w.key("rows");
        w.begin_array();
        for (int v : hv->rows) w.value(static_cast<long long>(v));
        w.end_array();
        w.key("neighbor_cols");
        w.begin_array();
        for (int v : hv->neighbor_cols) w.value(static_cast<long long>(v));
        w.end_array();
        w.end_object();
    } else if (const auto* dc = std::get_if<DeficiencyCertificate>(&cert)) {
        w.begin_object();
        w.field("kind", "deficiency");
        w.key("a");
        w.begin_array();
        for (const auto& factor : dc->a) {
            w.begin_array();
            for (const Rational& q : factor) w.value(q);
            w.end_array();
        }
        w.end_array();
        w.end_object();
    } else if (const auto* sw = std::get_if<ShrunkSubspaceWitness>(&cert)) {
        w.begin_object();
        w.field("kind", "shrunk-subspace");
        w.field("dim_v", static_cast<long long>(sw->v_basis.cols()));
        w.field("dim_w", static_cast<long long>(sw->w_basis.cols()));
        w.key("v_basis");
        write_complex_matrix(w, sw->v_basis);
        w.key("w_basis");
        write_complex_matrix(w, sw->w_basis);
        w.end_object();
    } else {
        w.null_value();
    }
}

}  // namespace

std::string report_to_json(const ScalingReport& report, const std::string& flavor,
                           std::uint64_t seed) {
    JsonWriter w;
    w.begin_object();
    w.field("status", to_string(report.status));
    w.field("flavor", flavor);
    w.field("epsilon", report.epsilon);
    w.field("iterations", report.iterations);
    w.field("budget", report.budget);
    w.field("bit_complexity", static_cast<long long>(report.bit_complexity));
    w.field("seed", static_cast<long long>(seed));
    w.field("ds_initial", report.ds_initial);
    w.field("ds_final", report.ds_final);
    w.key("scalers");
    write_scalers(w, report.scalers);
    w.key("certificate");
    write_certificate(w, report.certificate);
    w.field("trace_len", static_cast<long long>(report.ds_trace.size()));
    w.key("notes");
    w.begin_array();
    for (const std::string& note : report.notes) w.value(note);
    w.end_array();
    w.end_object();
    return w.render() + "\n";
}

std::string report_to_trace_csv(const ScalingReport& report) {
    std::string out = "iter,ds,potential,side,norm\n";
    for (size_t i = 0; i < report.ds_trace.size(); ++i) {
        out += std::to_string(i);
        out += ',';
        out += format_double(report.ds_trace[i]);
        out += ',';
        if (i < report.potential_trace.size()) out += format_double(report.potential_trace[i]);
        out += ',';
        if (i < report.side_trace.size()) out += report.side_trace[i];
        out += ',';
        if (i < report.norm_trace.size()) out += format_double(report.norm_trace[i]);
        out += '\n';
    }
    return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error("cannot open " + tmp + " for writing");
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!f) throw Error("short write to " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw Error("rename failed for " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace scalekit
