#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mgsp/tensor.hpp"

namespace mgsp {

/// Weighted edge from node (b, j) to node (a, i), 0-based.
struct Edge {
    Index a = 0;
    Index i = 0;
    Index b = 0;
    Index j = 0;
    double w = 1.0;
};

/// M layers x N entities with a dense M x N x M x N adjacency tensor.
/// Immutable once constructed; the constructor checks the invariants.
class MultilayerNetwork {
public:
    MultilayerNetwork(Tensor4 adjacency, bool directed);

    Index layers() const { return adjacency_.dim(0); }
    Index entities() const { return adjacency_.dim(1); }
    bool directed() const { return directed_; }
    const Tensor4& adjacency() const { return adjacency_; }

    /// Non-zero entries. Undirected networks list each edge once, with
    /// (a, i) <= (b, j) in layer-wise order.
    std::vector<Edge> edges() const;

private:
    Tensor4 adjacency_;
    bool directed_;
};

enum class TensorKind { Adjacency, Laplacian };

struct RepresentingTensor {
    TensorKind kind = TensorKind::Adjacency;
    bool directed = false;
    Tensor4 tensor;

    Index layers() const { return tensor.dim(0); }
    Index entities() const { return tensor.dim(1); }
};

MultilayerNetwork build_from_edges(Index layers, Index entities, bool directed, std::span<const Edge> edges);

/// Diagonal strength tensor: D[a,i,a,i] = sum_{b,j} A[a,i,b,j].
Tensor4 degree_tensor(const MultilayerNetwork& net);
RepresentingTensor laplacian(const MultilayerNetwork& net);
RepresentingTensor representing(const MultilayerNetwork& net, TensorKind kind);

// --- heterogeneous layers -------------------------------------------------

struct LayerGraph {
    Index nodes = 0;
    struct Link {
        Index u = 0;
        Index v = 0;
        double w = 1.0;
    };
    std::vector<Link> links;   // intralayer, local ids
};

struct InterlayerLink {
    Index layer_u = 0;
    Index node_u = 0;
    Index layer_v = 0;
    Index node_v = 0;
    double w = 1.0;
};

struct AugmentedNetwork {
    MultilayerNetwork network;
    /// entity_of[layer][local id] = entity index in the network. Local ids
    /// keep their position; padding nodes occupy the trailing entities.
    std::vector<std::vector<Index>> entity_of;
    /// Padding nodes per layer (entities local_count .. N-1).
    std::vector<Index> padded;
};

/// Pads every layer with isolated nodes up to the largest layer size.
AugmentedNetwork augment_isolated(std::span<const LayerGraph> layers, std::span<const InterlayerLink> interlayer,
                                  bool directed = false);

// --- generators ------------------------------------------------------------

/// Undirected multiplex ER(p, q, M, N). Draw order: for each layer a, pairs
/// i < j in lexicographic order (probability p); then for each entity i,
/// layer pairs a < b in lexicographic order (probability q). One uniform()
/// per candidate edge, from Rng(seed).
MultilayerNetwork gen_er_multiplex(double p, double q, Index layers, Index entities, std::uint64_t seed);

/// Directed single-layer cycle whose supra-matrix is C_N: node k feeds k+1,
/// node N-1 feeds node 0.
MultilayerNetwork gen_cyclic(Index n);

struct GaussianThreshold {
    bool use_mean = true;
    double value = 0.0;

    static GaussianThreshold mean() { return {}; }
    static GaussianThreshold fixed(double t) { return {false, t}; }
};

/// W[i,j] = exp(-|x_i - x_j|^2 / delta^2) when |x_i - x_j|^2 <= t, else 0.
/// Rows of `features` are entities. A mean threshold is the mean squared
/// distance over all pairs i < j.
Eigen::MatrixXd gaussian_weights(const Eigen::MatrixXd& features, double delta, GaussianThreshold threshold);

} // namespace mgsp
