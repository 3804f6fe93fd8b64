#include "mgsp/apps.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "mgsp/error.hpp"
#include "mgsp/numerics.hpp"

namespace mgsp {

namespace {

template <typename T>
const T& per_layer(const std::vector<T>& values, std::size_t layer, const char* what)
{
    require(values.size() == 1 || layer < values.size(), std::string(what) + ": one entry or one per layer");
    return values.size() == 1 ? values.front() : values[layer];
}

} // namespace

MultilayerNetwork build_feature_multiplex(std::span<const Eigen::MatrixXd> layers, const FeatureMultiplexOptions& options)
{
    require(!layers.empty(), "build_feature_multiplex: no layers");
    const auto m = static_cast<Index>(layers.size());
    const Index n = layers.front().rows();
    require(n >= 1, "build_feature_multiplex: no entities");
    for (const auto& l : layers)
        require(l.rows() == n, "build_feature_multiplex: every layer needs the same number of entities");
    require(options.delta.size() == 1 || static_cast<Index>(options.delta.size()) == m,
            "build_feature_multiplex: delta needs one entry or one per layer");
    require(options.threshold.size() == 1 || static_cast<Index>(options.threshold.size()) == m,
            "build_feature_multiplex: threshold needs one entry or one per layer");
    require(std::isfinite(options.interlayer_weight), "build_feature_multiplex: non-finite interlayer weight");

    auto adj = Tensor4::square(m, n);
    for (Index a = 0; a < m; ++a) {
        if (n < 2) break;
        const auto la = static_cast<std::size_t>(a);
        const Eigen::MatrixXd w = gaussian_weights(layers[la], per_layer(options.delta, la, "delta"),
                                                   per_layer(options.threshold, la, "threshold"));
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) adj(a, i, a, j) = w(i, j);
    }
    for (Index a = 0; a < m; ++a)
        for (Index b = 0; b < m; ++b)
            if (a != b)
                for (Index i = 0; i < n; ++i) adj(a, i, b, i) = options.interlayer_weight;
    return MultilayerNetwork(std::move(adj), false);
}

Index largest_gap_k(std::span<const double> descending)
{
    require(descending.size() >= 2, "largest_gap_k: need at least two values");
    Index best = 1;
    double best_gap = descending[0] - descending[1];
    for (std::size_t k = 2; k < descending.size(); ++k) {
        const double gap = descending[k - 1] - descending[k];
        if (gap > best_gap) {
            best_gap = gap;
            best = static_cast<Index>(k);
        }
    }
    return best;
}

ClusterResult mln_spectral_cluster(const MultilayerNetwork& net, std::optional<Index> k, ClusterBasis basis,
                                   std::uint64_t seed)
{
    const Index n = net.entities();
    if (k) require(*k >= 1 && *k <= n, "mln_spectral_cluster: K must lie in [1, N]");
    const RepresentingTensor f = representing(net, TensorKind::Adjacency);

    Eigen::MatrixXd entity_basis;
    std::vector<double> magnitude(static_cast<std::size_t>(n));
    if (basis == ClusterBasis::Singular) {
        const SingularSpectrum spec = hosvd(f);
        entity_basis = spec.entity_basis();
        for (Index i = 0; i < n; ++i) magnitude[static_cast<std::size_t>(i)] = std::abs(spec.entity_values()(i));
    } else {
        const OrderWiseSpectrum spec = orthogonal_cp(f);
        entity_basis = spec.entity_basis;
        for (Index i = 0; i < n; ++i) magnitude[static_cast<std::size_t>(i)] = spec.values.col(i).norm();
    }

    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) {
        return magnitude[static_cast<std::size_t>(x)] > magnitude[static_cast<std::size_t>(y)];
    });

    ClusterResult out;
    for (Index c : order) out.ordering_values.push_back(magnitude[static_cast<std::size_t>(c)]);
    out.k = k ? *k : (n >= 2 ? largest_gap_k(out.ordering_values) : 1);
    out.leading.resize(n, out.k);
    for (Index c = 0; c < out.k; ++c) out.leading.col(c) = entity_basis.col(order[static_cast<std::size_t>(c)]);
    out.labels = kmeans(out.leading, static_cast<int>(out.k), seed).labels;
    return out;
}

ClusterResult segment_from_features(std::span<const Eigen::MatrixXd> layers, const FeatureMultiplexOptions& options,
                                    std::optional<Index> k, ClusterBasis basis, std::uint64_t seed)
{
    return mln_spectral_cluster(build_feature_multiplex(layers, options), k, basis, seed);
}

double adjusted_rand_index(std::span<const int> a, std::span<const int> b)
{
    require(a.size() == b.size(), "adjusted_rand_index: partitions differ in length");
    const auto n = static_cast<double>(a.size());
    std::map<std::pair<int, int>, double> joint;
    std::map<int, double> rows;
    std::map<int, double> cols;
    for (std::size_t p = 0; p < a.size(); ++p) {
        joint[{a[p], b[p]}] += 1.0;
        rows[a[p]] += 1.0;
        cols[b[p]] += 1.0;
    }
    auto pairs = [](double x) { return x * (x - 1.0) / 2.0; };
    double index = 0.0;
    double sum_rows = 0.0;
    double sum_cols = 0.0;
    for (const auto& [key, count] : joint) index += pairs(count);
    for (const auto& [key, count] : rows) sum_rows += pairs(count);
    for (const auto& [key, count] : cols) sum_cols += pairs(count);
    const double total = pairs(n);
    if (total == 0.0) return 1.0;
    const double expected = sum_rows * sum_cols / total;
    const double maximum = 0.5 * (sum_rows + sum_cols);
    if (maximum == expected) return 1.0;
    return (index - expected) / (maximum - expected);
}

// --- classification ----------------------------------------------------------------

Signal label_signal(const Eigen::VectorXd& labels, Index layers)
{
    return Eigen::VectorXd::Ones(layers) * labels.transpose();
}

ClassifyResult classify_semisupervised(const Eigen::MatrixXd& x, const Eigen::VectorXd& labels,
                                       const ClassifyOptions& options)
{
    const Index m = x.rows();
    const Index n = x.cols();
    require(m >= 1 && n >= 2, "classify_semisupervised: need at least one feature and two entities");
    require(labels.size() == n, "classify_semisupervised: one label per entity");
    require(options.order >= 1, "classify_semisupervised: order must be at least 1");

    std::vector<Index> labeled;
    Eigen::VectorXd targets(n);
    bool positive = false;
    bool negative = false;
    for (Index i = 0; i < n; ++i) {
        const double y = labels(i);
        require(y == 1.0 || y == -1.0 || y == 0.0, "classify_semisupervised: labels must be +1, -1 or 0");
        if (y == 0.0) continue;
        targets(static_cast<Index>(labeled.size())) = y;
        labeled.push_back(i);
        (y > 0 ? positive : negative) = true;
    }
    require(!labeled.empty(), "classify_semisupervised: no labeled entities");
    require(positive && negative, "classify_semisupervised: training labels cover only one class");
    targets.conservativeResize(static_cast<Index>(labeled.size()));

    std::vector<Eigen::MatrixXd> layers;
    for (Index a = 0; a < m; ++a) layers.push_back(x.row(a).transpose());
    FeatureMultiplexOptions net_options;
    net_options.delta = {options.delta};
    net_options.threshold = {options.threshold};
    const MultilayerNetwork net = build_feature_multiplex(layers, net_options);
    const Tensor4 f = representing(net, options.tensor).tensor;
    const Signal s = label_signal(labels, m);

    ClassifyResult out;
    if (options.kind == ClassifierKind::Adaptive) {
        AdaptiveFitOptions fit_options = options.fit;
        fit_options.max_order = options.order;
        fit_options.threshold = 0.0;
        AdaptiveFit fit = fit_adaptive_polynomial(f, s, labeled, targets, fit_options);
        out.scores = apply_polynomial(fit.filter, f, s).colwise().mean().transpose();
        out.threshold = 0.0;
        out.fit = std::move(fit);
    } else {
        const double rho = spectral_radius_estimate(f);
        Signal power = s;
        for (int k = 0; k < options.order; ++k) power = shift(f, power) / (rho > 0.0 ? rho : 1.0);
        out.scores = power.colwise().mean().transpose();
        out.threshold = out.scores.mean();
    }
    out.labels = out.scores.unaryExpr([t = out.threshold](double v) { return v > t ? 1.0 : (v < t ? -1.0 : 0.0); });
    for (Index i : labeled) out.labels(i) = labels(i);
    return out;
}

// --- short-time M-GST ----------------------------------------------------------------

std::vector<double> Spectrogram::energy() const
{
    std::vector<double> out;
    for (const auto& c : coefficients) out.push_back(c.squaredNorm());
    return out;
}

namespace {

double channel_value(const FramePoint& p, Channel c)
{
    switch (c) {
    case Channel::X: return p.x;
    case Channel::Y: return p.y;
    case Channel::Z: return p.z;
    case Channel::Norm: break;
    }
    return std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
}

// Entity index per point of a frame, -1 for labels outside the entity set.
std::vector<Index> locate(const Frame& frame, std::span<const long> entity_labels)
{
    std::vector<Index> out;
    std::set<long> seen;
    for (const auto& p : frame) {
        require(seen.insert(p.label).second, "short_time_mgst: label " + std::to_string(p.label) +
                                                 " appears twice in one frame");
        const auto it = std::lower_bound(entity_labels.begin(), entity_labels.end(), p.label);
        require(it != entity_labels.end() && *it == p.label, "short_time_mgst: unknown label " + std::to_string(p.label));
        out.push_back(static_cast<Index>(it - entity_labels.begin()));
    }
    return out;
}

} // namespace

std::pair<MultilayerNetwork, Signal> window_network(std::span<const Frame> frames, std::span<const long> entity_labels,
                                                    const ShortTimeOptions& options)
{
    require(options.sigma > 0.0, "short_time_mgst: sigma must be positive");
    require(options.tau >= 0.0, "short_time_mgst: tau must be non-negative");
    const auto m = static_cast<Index>(frames.size());
    const auto n = static_cast<Index>(entity_labels.size());
    require(m >= 1 && n >= 1, "short_time_mgst: empty window");

    std::vector<Edge> edges;
    Signal s = Signal::Zero(m, n);
    std::vector<std::vector<bool>> present(static_cast<std::size_t>(m), std::vector<bool>(static_cast<std::size_t>(n)));
    for (Index a = 0; a < m; ++a) {
        const Frame& frame = frames[static_cast<std::size_t>(a)];
        const std::vector<Index> ids = locate(frame, entity_labels);
        for (std::size_t p = 0; p < frame.size(); ++p) {
            s(a, ids[p]) = channel_value(frame[p], options.channel);
            present[static_cast<std::size_t>(a)][static_cast<std::size_t>(ids[p])] = true;
            for (std::size_t q = p + 1; q < frame.size(); ++q) {
                const double dx = frame[p].x - frame[q].x;
                const double dy = frame[p].y - frame[q].y;
                const double dz = frame[p].z - frame[q].z;
                const double d2 = dx * dx + dy * dy + dz * dz;
                if (d2 <= options.tau)
                    edges.push_back({a, ids[p], a, ids[q], std::exp(-d2 / (options.sigma * options.sigma))});
            }
        }
    }
    for (Index a = 0; a + 1 < m; ++a)
        for (Index i = 0; i < n; ++i)
            if (present[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] &&
                present[static_cast<std::size_t>(a + 1)][static_cast<std::size_t>(i)])
                edges.push_back({a, i, a + 1, i, 1.0});
    return {build_from_edges(m, n, false, edges), std::move(s)};
}

Spectrogram short_time_mgst(std::span<const Frame> frames, const ShortTimeOptions& options)
{
    const auto total = static_cast<Index>(frames.size());
    require(options.window >= 2, "short_time_mgst: window must be at least 2 frames");
    require(options.window <= total, "short_time_mgst: window longer than the sequence");
    const Index hop = options.hop == 0 ? options.window : options.hop;
    require(hop >= 1, "short_time_mgst: hop must be positive");

    Spectrogram out;
    out.window = options.window;
    out.hop = hop;
    std::set<long> labels;
    for (const auto& frame : frames)
        for (const auto& p : frame) labels.insert(p.label);
    require(!labels.empty(), "short_time_mgst: no points");
    out.entity_labels.assign(labels.begin(), labels.end());

    for (Index start = 0; start + options.window <= total; start += hop) {
        const auto window = frames.subspan(static_cast<std::size_t>(start), static_cast<std::size_t>(options.window));
        auto [net, s] = window_network(window, out.entity_labels, options);
        const SingularSpectrum spec = hosvd(representing(net, TensorKind::Adjacency));
        out.starts.push_back(start);
        out.coefficients.push_back(mgst(spec, s, TransformMode::Joint));
    }
    return out;
}

Signal highpass_entity_probe(const MultilayerNetwork& net, const Signal& s, Index keep)
{
    require(!net.directed(), "highpass_entity_probe: undirected networks only");
    const SingularSpectrum spec = hosvd(representing(net, TensorKind::Adjacency));
    const Eigen::VectorXd& sigma = spec.entity_values();
    const std::vector<double> values(sigma.data(), sigma.data() + sigma.size());
    const std::vector<Index> low_first = low_first_by_value(values);
    const SpectralMask mask = make_ranked_mask(low_first, keep, Band::HighPass, Side::Entity, net.layers());
    return spectral_filter(s, spec, mask);
}

} // namespace mgsp
