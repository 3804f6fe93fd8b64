#include "mgsp/network.hpp"

#include <cmath>
#include <set>
#include <string>
#include <tuple>

#include "mgsp/error.hpp"
#include "mgsp/random.hpp"

namespace mgsp {

MultilayerNetwork::MultilayerNetwork(Tensor4 adjacency, bool directed)
    : adjacency_(std::move(adjacency)), directed_(directed)
{
    require(adjacency_.is_square(), "adjacency tensor must be M x N x M x N");
    require(layers() >= 1 && entities() >= 1, "a network needs at least one layer and one entity");
    for (double w : adjacency_.data()) require(std::isfinite(w), "adjacency weights must be finite");
    if (!directed_) {
        const auto a = adjacency_.matrix();
        require(a == a.transpose(), "undirected network requires A[a,i,b,j] == A[b,j,a,i]");
    }
}

std::vector<Edge> MultilayerNetwork::edges() const
{
    std::vector<Edge> out;
    const Index m = layers();
    const Index n = entities();
    for (Index a = 0; a < m; ++a)
        for (Index i = 0; i < n; ++i)
            for (Index b = 0; b < m; ++b)
                for (Index j = 0; j < n; ++j) {
                    const double w = adjacency_(a, i, b, j);
                    if (w == 0.0) continue;
                    if (!directed_ && n * b + j < n * a + i) continue;
                    out.push_back({a, i, b, j, w});
                }
    return out;
}

MultilayerNetwork build_from_edges(Index layers, Index entities, bool directed, std::span<const Edge> edges)
{
    require(layers >= 1 && entities >= 1, "build_from_edges: M and N must be >= 1");
    auto adj = Tensor4::square(layers, entities);
    std::set<std::tuple<Index, Index, Index, Index>> seen;
    for (const auto& e : edges) {
        require(e.a >= 0 && e.a < layers && e.b >= 0 && e.b < layers, "edge layer index out of range");
        require(e.i >= 0 && e.i < entities && e.j >= 0 && e.j < entities, "edge entity index out of range");
        require(std::isfinite(e.w), "edge weight must be finite");
        auto key = std::make_tuple(e.a, e.i, e.b, e.j);
        if (!directed && entities * e.b + e.j < entities * e.a + e.i) key = std::make_tuple(e.b, e.j, e.a, e.i);
        require(seen.insert(key).second, "duplicate edge (" + std::to_string(e.a) + "," + std::to_string(e.i) + "," +
                                             std::to_string(e.b) + "," + std::to_string(e.j) + ")");
        adj(e.a, e.i, e.b, e.j) = e.w;
        if (!directed) adj(e.b, e.j, e.a, e.i) = e.w;
    }
    return {std::move(adj), directed};
}

Tensor4 degree_tensor(const MultilayerNetwork& net)
{
    const Index m = net.layers();
    const Index n = net.entities();
    auto d = Tensor4::square(m, n);
    const Eigen::VectorXd strength = net.adjacency().matrix().rowwise().sum();
    for (Index a = 0; a < m; ++a)
        for (Index i = 0; i < n; ++i) d(a, i, a, i) = strength(n * a + i);
    return d;
}

RepresentingTensor laplacian(const MultilayerNetwork& net)
{
    return {TensorKind::Laplacian, net.directed(), degree_tensor(net) - net.adjacency()};
}

RepresentingTensor representing(const MultilayerNetwork& net, TensorKind kind)
{
    if (kind == TensorKind::Laplacian) return laplacian(net);
    return {TensorKind::Adjacency, net.directed(), net.adjacency()};
}

AugmentedNetwork augment_isolated(std::span<const LayerGraph> layers, std::span<const InterlayerLink> interlayer,
                                  bool directed)
{
    require(!layers.empty(), "augment_isolated: at least one layer is required");
    Index n = 0;
    for (const auto& l : layers) {
        require(l.nodes >= 0, "augment_isolated: negative node count");
        n = std::max(n, l.nodes);
    }
    require(n >= 1, "augment_isolated: all layers are empty");
    const auto m = static_cast<Index>(layers.size());

    std::vector<Edge> edges;
    std::vector<std::vector<Index>> entity_of(layers.size());
    std::vector<Index> padded(layers.size());
    for (std::size_t a = 0; a < layers.size(); ++a) {
        const auto& l = layers[a];
        for (Index k = 0; k < l.nodes; ++k) entity_of[a].push_back(k);
        padded[a] = n - l.nodes;
        for (const auto& link : l.links) {
            require(link.u >= 0 && link.u < l.nodes && link.v >= 0 && link.v < l.nodes,
                    "augment_isolated: intralayer link references a missing node");
            edges.push_back({static_cast<Index>(a), link.u, static_cast<Index>(a), link.v, link.w});
        }
    }
    for (const auto& link : interlayer) {
        require(link.layer_u >= 0 && link.layer_u < m && link.layer_v >= 0 && link.layer_v < m,
                "augment_isolated: interlayer link references a missing layer");
        require(link.node_u >= 0 && link.node_u < layers[static_cast<std::size_t>(link.layer_u)].nodes &&
                    link.node_v >= 0 && link.node_v < layers[static_cast<std::size_t>(link.layer_v)].nodes,
                "augment_isolated: interlayer link references a missing node");
        edges.push_back({link.layer_u, link.node_u, link.layer_v, link.node_v, link.w});
    }
    return {build_from_edges(m, n, directed, edges), std::move(entity_of), std::move(padded)};
}

MultilayerNetwork gen_er_multiplex(double p, double q, Index layers, Index entities, std::uint64_t seed)
{
    require(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0, "gen_er_multiplex: probabilities must lie in [0, 1]");
    require(layers >= 1 && entities >= 1, "gen_er_multiplex: M and N must be >= 1");
    Rng rng(seed);
    auto adj = Tensor4::square(layers, entities);
    for (Index a = 0; a < layers; ++a)
        for (Index i = 0; i < entities; ++i)
            for (Index j = i + 1; j < entities; ++j)
                if (rng.uniform() < p) adj(a, i, a, j) = adj(a, j, a, i) = 1.0;
    for (Index i = 0; i < entities; ++i)
        for (Index a = 0; a < layers; ++a)
            for (Index b = a + 1; b < layers; ++b)
                if (rng.uniform() < q) adj(a, i, b, i) = adj(b, i, a, i) = 1.0;
    return {std::move(adj), false};
}

MultilayerNetwork gen_cyclic(Index n)
{
    require(n >= 2, "gen_cyclic: N must be >= 2");
    auto adj = Tensor4::square(1, n);
    for (Index k = 0; k + 1 < n; ++k) adj(0, k + 1, 0, k) = 1.0;
    adj(0, 0, 0, n - 1) = 1.0;
    return {std::move(adj), true};
}

Eigen::MatrixXd gaussian_weights(const Eigen::MatrixXd& features, double delta, GaussianThreshold threshold)
{
    require(delta > 0.0 && std::isfinite(delta), "gaussian_weights: delta must be positive");
    const Index n = features.rows();
    require(n >= 2, "gaussian_weights: at least two entities are required");

    Eigen::MatrixXd dist2 = Eigen::MatrixXd::Zero(n, n);
    double total = 0.0;
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) {
            const double d = (features.row(i) - features.row(j)).squaredNorm();
            dist2(i, j) = dist2(j, i) = d;
            total += d;
        }
    const double t = threshold.use_mean ? total / static_cast<double>(n * (n - 1) / 2) : threshold.value;

    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
            if (dist2(i, j) <= t) w(i, j) = w(j, i) = std::exp(-dist2(i, j) / (delta * delta));
    return w;
}

} // namespace mgsp
