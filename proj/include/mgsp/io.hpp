#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mgsp/apps.hpp"
#include "mgsp/filters.hpp"
#include "mgsp/network.hpp"
#include "mgsp/spectral.hpp"

namespace mgsp::io {

namespace fs = std::filesystem;
using nlohmann::json;

/// Writes through a sibling temporary file and renames it into place.
void atomic_write(const fs::path& path, const std::string& content);

/// 17 significant digits.
std::string format_double(double v);

// Network JSON: {"M": int, "N": int, "directed": bool,
//                "edges": [{"a":, "i":, "b":, "j":, "w":}, ...]}
json network_to_json(const MultilayerNetwork& net);
MultilayerNetwork network_from_json(const json& doc, const std::string& origin);
MultilayerNetwork read_network(const fs::path& path);
void write_network(const fs::path& path, const MultilayerNetwork& net);

/// Numeric CSV without header; blank lines and lines starting with '#'
/// are skipped. Errors carry path:line.
Eigen::MatrixXd read_matrix_csv(const fs::path& path);
std::string matrix_to_csv(const Eigen::MatrixXd& m);
void write_matrix_csv(const fs::path& path, const Eigen::MatrixXd& m);

/// Signal CSV with exactly `layers` rows and `entities` columns.
Signal read_signal(const fs::path& path, Index layers, Index entities);

/// Rows `entity,label` with label in {-1, 0, +1}; returns one label per
/// entity (unlisted entities are 0).
Eigen::VectorXd read_labels(const fs::path& path, Index entities);

/// Rows `label,x,y,z`.
Frame read_frame(const fs::path& path);

json read_json(const fs::path& path);
void write_json(const fs::path& path, const json& doc);

/// Filter spec JSON:
///   {"type": "poly", "tensor": "adjacency"|"laplacian", "coefficients": [...]}
///   {"type": "spectral", "tensor": ..., "basis": "cp"|"hosvd",
///    "layer_mask": [...], "entity_mask": [...]}
struct FilterSpec {
    bool polynomial = true;
    TensorKind tensor = TensorKind::Adjacency;
    PolynomialFilter poly;
    SpectralMask mask;
};
json filter_to_json(const FilterSpec& spec);
FilterSpec filter_from_json(const json& doc, const std::string& origin);

json spectrum_to_json(const JointSpectrum& spec);
json spectrum_to_json(const OrderWiseSpectrum& spec);
json spectrum_to_json(const SingularSpectrum& spec);
json spectrum_to_json(const TuckerResult& spec);
json ranking_to_json(const FrequencyRanking& ranking);

struct Manifest {
    std::string subcommand;
    std::vector<std::string> inputs;
    json parameters = json::object();
    std::uint64_t seed = 0;
    std::vector<std::string> outputs;
};

inline constexpr const char* kVersion = "1.0.0";

/// Writes `<first output>.manifest.json`.
void write_manifest(const Manifest& manifest);

} // namespace mgsp::io
