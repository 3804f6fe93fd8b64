#include "mgsp/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "mgsp/error.hpp"

namespace mgsp::io {

namespace {

[[noreturn]] void fail_at(const fs::path& path, std::size_t line, const std::string& what)
{
    throw ValidationError(path.string() + ":" + std::to_string(line) + ": " + what);
}

std::string read_text(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError(path.string() + ": cannot open file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

// Rows of comma-separated fields with their 1-based line numbers.
std::vector<std::pair<std::size_t, std::vector<std::string>>> read_rows(const fs::path& path)
{
    std::istringstream in(read_text(path));
    std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::string body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        std::vector<std::string> fields;
        std::stringstream ss(body);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(trim(field));
        if (body.back() == ',') fields.emplace_back();
        rows.emplace_back(number, std::move(fields));
    }
    return rows;
}

double parse_double(const std::string& field, const fs::path& path, std::size_t line)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(field, &used);
    } catch (const std::exception&) {
        fail_at(path, line, "'" + field + "' is not a number");
    }
    if (used != field.size()) fail_at(path, line, "'" + field + "' is not a number");
    if (!std::isfinite(v)) fail_at(path, line, "non-finite value");
    return v;
}

long parse_long(const std::string& field, const fs::path& path, std::size_t line)
{
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(field, &used);
    } catch (const std::exception&) {
        fail_at(path, line, "'" + field + "' is not an integer");
    }
    if (used != field.size()) fail_at(path, line, "'" + field + "' is not an integer");
    return v;
}

json matrix_json(const Eigen::MatrixXd& m)
{
    json rows = json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json complex_matrix_json(const Eigen::MatrixXcd& m)
{
    return {{"re", matrix_json(m.real())}, {"im", matrix_json(m.imag())}};
}

const char* tensor_name(TensorKind kind) { return kind == TensorKind::Laplacian ? "laplacian" : "adjacency"; }

TensorKind tensor_from_name(const std::string& name, const std::string& origin)
{
    if (name == "adjacency") return TensorKind::Adjacency;
    if (name == "laplacian") return TensorKind::Laplacian;
    throw ValidationError(origin + ": tensor must be \"adjacency\" or \"laplacian\"");
}

Eigen::VectorXd vector_from_json(const json& doc, const std::string& origin, const char* key)
{
    if (!doc.contains(key) || !doc.at(key).is_array())
        throw ValidationError(origin + ": \"" + key + "\" must be an array of numbers");
    const auto& arr = doc.at(key);
    Eigen::VectorXd v(static_cast<Index>(arr.size()));
    for (std::size_t k = 0; k < arr.size(); ++k) {
        if (!arr[k].is_number()) throw ValidationError(origin + ": \"" + key + "\" must hold numbers");
        v(static_cast<Index>(k)) = arr[k].get<double>();
        if (!std::isfinite(v(static_cast<Index>(k)))) throw ValidationError(origin + ": non-finite entry");
    }
    return v;
}

} // namespace

void atomic_write(const fs::path& path, const std::string& content)
{
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError(path.string() + ": cannot open for writing");
        out << content;
        out.flush();
        if (!out) {
            std::error_code ignored;
            fs::remove(tmp, ignored);
            throw ValidationError(path.string() + ": write failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw ValidationError(path.string() + ": cannot move output into place");
    }
}

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json network_to_json(const MultilayerNetwork& net)
{
    json edges = json::array();
    for (const Edge& e : net.edges()) edges.push_back({{"a", e.a}, {"i", e.i}, {"b", e.b}, {"j", e.j}, {"w", e.w}});
    return {{"M", net.layers()}, {"N", net.entities()}, {"directed", net.directed()}, {"edges", std::move(edges)}};
}

MultilayerNetwork network_from_json(const json& doc, const std::string& origin)
{
    auto integer = [&](const json& obj, const char* key, const std::string& where) {
        if (!obj.is_object() || !obj.contains(key) || !obj.at(key).is_number_integer())
            throw ValidationError(where + ": \"" + key + "\" must be an integer");
        return obj.at(key).get<Index>();
    };
    const Index m = integer(doc, "M", origin);
    const Index n = integer(doc, "N", origin);
    if (!doc.contains("directed") || !doc.at("directed").is_boolean())
        throw ValidationError(origin + ": \"directed\" must be a boolean");
    if (!doc.contains("edges") || !doc.at("edges").is_array())
        throw ValidationError(origin + ": \"edges\" must be an array");
    require(m >= 1 && n >= 1, origin + ": M and N must be positive");
    std::vector<Edge> edges;
    std::size_t k = 0;
    for (const auto& e : doc.at("edges")) {
        const std::string where = origin + ": edge " + std::to_string(k++);
        Edge edge{integer(e, "a", where), integer(e, "i", where), integer(e, "b", where), integer(e, "j", where), 1.0};
        if (e.contains("w")) {
            if (!e.at("w").is_number()) throw ValidationError(where + ": \"w\" must be a number");
            edge.w = e.at("w").get<double>();
        }
        edges.push_back(edge);
    }
    try {
        return build_from_edges(m, n, doc.at("directed").get<bool>(), edges);
    } catch (const ValidationError& err) {
        throw ValidationError(origin + ": " + err.what());
    }
}

json read_json(const fs::path& path)
{
    try {
        return json::parse(read_text(path));
    } catch (const json::parse_error& err) {
        throw ValidationError(path.string() + ": byte " + std::to_string(err.byte) + ": malformed JSON");
    }
}

void write_json(const fs::path& path, const json& doc) { atomic_write(path, doc.dump(2) + "\n"); }

MultilayerNetwork read_network(const fs::path& path) { return network_from_json(read_json(path), path.string()); }

void write_network(const fs::path& path, const MultilayerNetwork& net) { write_json(path, network_to_json(net)); }

Eigen::MatrixXd read_matrix_csv(const fs::path& path)
{
    const auto rows = read_rows(path);
    if (rows.empty()) throw ValidationError(path.string() + ": no data rows");
    const std::size_t cols = rows.front().second.size();
    Eigen::MatrixXd m(static_cast<Index>(rows.size()), static_cast<Index>(cols));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& [line, fields] = rows[r];
        if (fields.size() != cols)
            fail_at(path, line, "expected " + std::to_string(cols) + " columns, found " + std::to_string(fields.size()));
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Index>(r), static_cast<Index>(c)) = parse_double(fields[c], path, line);
    }
    return m;
}

std::string matrix_to_csv(const Eigen::MatrixXd& m)
{
    std::string out;
    for (Index r = 0; r < m.rows(); ++r) {
        for (Index c = 0; c < m.cols(); ++c) {
            if (c > 0) out += ',';
            out += format_double(m(r, c));
        }
        out += '\n';
    }
    return out;
}

void write_matrix_csv(const fs::path& path, const Eigen::MatrixXd& m) { atomic_write(path, matrix_to_csv(m)); }

Signal read_signal(const fs::path& path, Index layers, Index entities)
{
    Signal s = read_matrix_csv(path);
    if (s.rows() != layers || s.cols() != entities)
        throw ValidationError(path.string() + ": signal is " + std::to_string(s.rows()) + "x" +
                              std::to_string(s.cols()) + ", network needs " + std::to_string(layers) + "x" +
                              std::to_string(entities));
    return s;
}

Eigen::VectorXd read_labels(const fs::path& path, Index entities)
{
    Eigen::VectorXd labels = Eigen::VectorXd::Zero(entities);
    std::vector<bool> seen(static_cast<std::size_t>(entities), false);
    for (const auto& [line, fields] : read_rows(path)) {
        if (fields.size() != 2) fail_at(path, line, "expected entity,label");
        const long e = parse_long(fields[0], path, line);
        const long y = parse_long(fields[1], path, line);
        if (e < 0 || e >= entities) fail_at(path, line, "entity " + std::to_string(e) + " out of range");
        if (y != -1 && y != 0 && y != 1) fail_at(path, line, "label must be -1, 0 or 1");
        if (seen[static_cast<std::size_t>(e)]) fail_at(path, line, "entity " + std::to_string(e) + " listed twice");
        seen[static_cast<std::size_t>(e)] = true;
        labels(e) = static_cast<double>(y);
    }
    return labels;
}

Frame read_frame(const fs::path& path)
{
    Frame frame;
    for (const auto& [line, fields] : read_rows(path)) {
        if (fields.size() != 4) fail_at(path, line, "expected label,x,y,z");
        frame.push_back({parse_long(fields[0], path, line), parse_double(fields[1], path, line),
                         parse_double(fields[2], path, line), parse_double(fields[3], path, line)});
    }
    return frame;
}

json filter_to_json(const FilterSpec& spec)
{
    if (spec.polynomial)
        return {{"type", "poly"}, {"tensor", tensor_name(spec.tensor)}, {"coefficients", spec.poly.coefficients}};
    return {{"type", "spectral"},
            {"tensor", tensor_name(spec.tensor)},
            {"basis", spec.mask.source == BasisSource::OrderWise ? "cp" : "hosvd"},
            {"layer_mask", vector_json(spec.mask.layer)},
            {"entity_mask", vector_json(spec.mask.entity)}};
}

FilterSpec filter_from_json(const json& doc, const std::string& origin)
{
    if (!doc.is_object() || !doc.contains("type") || !doc.at("type").is_string())
        throw ValidationError(origin + ": filter spec needs a \"type\"");
    FilterSpec spec;
    spec.tensor = tensor_from_name(doc.value("tensor", std::string("adjacency")), origin);
    const std::string type = doc.at("type").get<std::string>();
    if (type == "poly") {
        const Eigen::VectorXd a = vector_from_json(doc, origin, "coefficients");
        if (a.size() == 0) throw ValidationError(origin + ": no coefficients");
        spec.poly.coefficients.assign(a.data(), a.data() + a.size());
        spec.poly.kind = spec.tensor;
    } else if (type == "spectral") {
        spec.polynomial = false;
        const std::string basis = doc.value("basis", std::string("hosvd"));
        if (basis != "cp" && basis != "hosvd") throw ValidationError(origin + ": basis must be \"cp\" or \"hosvd\"");
        spec.mask.source = basis == "cp" ? BasisSource::OrderWise : BasisSource::Singular;
        spec.mask.layer = vector_from_json(doc, origin, "layer_mask");
        spec.mask.entity = vector_from_json(doc, origin, "entity_mask");
    } else {
        throw ValidationError(origin + ": filter type must be \"poly\" or \"spectral\"");
    }
    return spec;
}

json spectrum_to_json(const JointSpectrum& spec)
{
    json doc{{"kind", "joint"},
             {"M", spec.layers},
             {"N", spec.entities},
             {"directed", spec.directed},
             {"convention", spec.convention == Convention::LayerWise ? "layer-wise" : "entity-wise"},
             {"basis_layout", "layer-wise"}};
    if (!spec.directed) {
        doc["values"] = vector_json(spec.values);
        doc["vectors"] = matrix_json(spec.vectors);
    } else {
        doc["values"] = {{"re", vector_json(spec.complex_values.real())}, {"im", vector_json(spec.complex_values.imag())}};
        doc["right"] = complex_matrix_json(spec.right);
        doc["left"] = complex_matrix_json(spec.left);
    }
    return doc;
}

json spectrum_to_json(const OrderWiseSpectrum& spec)
{
    return {{"kind", "cp"},
            {"M", spec.layer_basis.rows()},
            {"N", spec.entity_basis.rows()},
            {"layer_basis", matrix_json(spec.layer_basis)},
            {"entity_basis", matrix_json(spec.entity_basis)},
            {"values", matrix_json(spec.values)},
            {"residual", spec.residual},
            {"iterations", spec.iterations},
            {"converged", spec.converged},
            {"residual_history", spec.residual_history}};
}

json spectrum_to_json(const SingularSpectrum& spec)
{
    json factors = json::array();
    json mode_values = json::array();
    for (std::size_t k = 0; k < 4; ++k) {
        factors.push_back(matrix_json(spec.factors[k]));
        mode_values.push_back(vector_json(spec.mode_values[k]));
    }
    return {{"kind", "hosvd"},
            {"M", spec.layer_basis().rows()},
            {"N", spec.entity_basis().rows()},
            {"directed", spec.directed},
            {"layer_basis", matrix_json(spec.layer_basis())},
            {"entity_basis", matrix_json(spec.entity_basis())},
            {"layer_values", vector_json(spec.layer_values())},
            {"entity_values", vector_json(spec.entity_values())},
            {"joint_values", matrix_json(spec.joint_values())},
            {"factors", std::move(factors)},
            {"mode_values", std::move(mode_values)},
            {"core_supra", matrix_json(spec.core.matrix())},
            {"residual", spec.residual}};
}

json spectrum_to_json(const TuckerResult& spec)
{
    json factors = json::array();
    json dims = json::array();
    for (std::size_t k = 0; k < 4; ++k) {
        factors.push_back(matrix_json(spec.factors[k]));
        dims.push_back(spec.core.dim(static_cast<int>(k)));
    }
    return {{"kind", "tucker"},
            {"ranks", std::move(dims)},
            {"factors", std::move(factors)},
            {"core_matrix", matrix_json(spec.core.matrix())},
            {"residual", spec.residual},
            {"residual_history", spec.residual_history},
            {"iterations", spec.iterations},
            {"converged", spec.converged}};
}

json ranking_to_json(const FrequencyRanking& ranking)
{
    return {{"norm", ranking.norm == Norm::L1 ? "l1" : "l2"},
            {"lambda_abs_max", ranking.lambda_abs_max},
            {"degenerate_scale", ranking.degenerate_scale},
            {"tv", ranking.tv},
            {"order", ranking.order},
            {"rank", ranking.rank}};
}

void write_manifest(const Manifest& manifest)
{
    require(!manifest.outputs.empty(), "write_manifest: no outputs");
    const json doc{{"subcommand", manifest.subcommand},
                   {"inputs", manifest.inputs},
                   {"parameters", manifest.parameters},
                   {"seed", manifest.seed},
                   {"version", kVersion},
                   {"outputs", manifest.outputs}};
    write_json(manifest.outputs.front() + ".manifest.json", doc);
}

} // namespace mgsp::io
