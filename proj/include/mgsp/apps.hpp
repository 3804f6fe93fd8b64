#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mgsp/filters.hpp"
#include "mgsp/network.hpp"
#include "mgsp/spectral.hpp"

namespace mgsp {

// --- feature multiplex ---------------------------------------------------------

struct FeatureMultiplexOptions {
    /// Gaussian scale per layer; a single entry applies to every layer.
    std::vector<double> delta{1.0};
    /// Threshold per layer; a single entry applies to every layer.
    std::vector<GaussianThreshold> threshold{GaussianThreshold::mean()};
    double interlayer_weight = 1.0;
};

/// One layer per feature matrix (rows are entities). Intralayer weights
/// follow gaussian_weights; every node links to its counterparts in all
/// other layers with `interlayer_weight`.
MultilayerNetwork build_feature_multiplex(std::span<const Eigen::MatrixXd> layers,
                                          const FeatureMultiplexOptions& options = {});

// --- clustering ----------------------------------------------------------------

/// Number of leading values kept before the largest gap between consecutive
/// entries of a descending sequence; ties go to the smallest K.
Index largest_gap_k(std::span<const double> descending);

enum class ClusterBasis { Singular, OrderWiseCP };

struct ClusterResult {
    std::vector<int> labels;
    Index k = 1;
    Eigen::MatrixXd leading;              // N x K
    std::vector<double> ordering_values;  // descending, used by the gap rule
};

/// Entity components of the adjacency tensor ordered by descending
/// magnitude (entity singular values, or the CP entity importance
/// sqrt(sum_a lambda[a,i]^2)); k-means on the rows of the first K columns.
/// `k` empty selects K by the largest gap.
ClusterResult mln_spectral_cluster(const MultilayerNetwork& net, std::optional<Index> k,
                                   ClusterBasis basis = ClusterBasis::Singular, std::uint64_t seed = 1);

ClusterResult segment_from_features(std::span<const Eigen::MatrixXd> layers, const FeatureMultiplexOptions& options,
                                    std::optional<Index> k, ClusterBasis basis = ClusterBasis::Singular,
                                    std::uint64_t seed = 1);

double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

// --- semi-supervised classification ---------------------------------------------

enum class ClassifierKind { Adaptive, FixedPower };

struct ClassifyOptions {
    ClassifierKind kind = ClassifierKind::Adaptive;
    int order = 10;
    double delta = 1.0;
    GaussianThreshold threshold = GaussianThreshold::mean();
    TensorKind tensor = TensorKind::Adjacency;
    /// a_0 alone reproduces any training set, so the fit starts at order 1.
    AdaptiveFitOptions fit{.min_order = 1};
};

struct ClassifyResult {
    /// +1 / -1 per entity; labeled entities keep their training label; 0
    /// marks an unlabeled entity whose score sits exactly on the threshold.
    Eigen::VectorXd labels;
    Eigen::VectorXd scores;   // column means of the filtered signal
    double threshold = 0.0;
    std::optional<AdaptiveFit> fit;
};

/// Rows of `x` are features (one layer each), columns are entities.
/// `labels` holds +1 / -1 for training entities and 0 for the rest.
ClassifyResult classify_semisupervised(const Eigen::MatrixXd& x, const Eigen::VectorXd& labels,
                                       const ClassifyOptions& options = {});

/// Signal with each labeled entity's label repeated across all layers.
Signal label_signal(const Eigen::VectorXd& labels, Index layers);

// --- short-time M-GST -----------------------------------------------------------

struct FramePoint {
    long label = 0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};
using Frame = std::vector<FramePoint>;

enum class Channel { X, Y, Z, Norm };

struct ShortTimeOptions {
    Index window = 2;
    Index hop = 0;          // 0 means hop = window
    double tau = 1.0;       // squared-distance threshold for intralayer edges
    double sigma = 1.0;
    Channel channel = Channel::Norm;
};

struct Spectrogram {
    Index window = 0;
    Index hop = 0;
    std::vector<long> entity_labels;       // column order of every coefficient matrix
    std::vector<Index> starts;
    std::vector<Signal> coefficients;      // joint M-GST, window x N each

    /// Squared Frobenius norm of each window's coefficients.
    std::vector<double> energy() const;
};

/// Entities are the sorted union of point labels; a label missing from a
/// frame becomes an isolated node carrying a zero sample.
Spectrogram short_time_mgst(std::span<const Frame> frames, const ShortTimeOptions& options);

/// Network and signal of one window, exposed for inspection.
std::pair<MultilayerNetwork, Signal> window_network(std::span<const Frame> frames, std::span<const long> entity_labels,
                                                    const ShortTimeOptions& options);

// --- entity high-pass probe -------------------------------------------------------

/// Keeps the `keep` entity components with the smallest singular values of
/// the adjacency HOSVD and all layer components.
Signal highpass_entity_probe(const MultilayerNetwork& net, const Signal& s, Index keep);

} // namespace mgsp
