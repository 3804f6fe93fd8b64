#include <doctest.h>

#include <algorithm>
#include <set>

#include "mgsp/apps.hpp"
#include "mgsp/error.hpp"
#include "support.hpp"

using namespace mgsp;
using testing::Gen;
using testing::max_abs;

namespace {

// Two tight blobs of `per_block` entities around (0, 0) and (10, 10).
std::vector<Eigen::MatrixXd> planted_layers(Gen& gen, Index layers, Index per_block)
{
    std::vector<Eigen::MatrixXd> out;
    for (Index l = 0; l < layers; ++l) {
        Eigen::MatrixXd x(2 * per_block, 2);
        for (Index e = 0; e < 2 * per_block; ++e) {
            const double c = e < per_block ? 0.0 : 10.0;
            x(e, 0) = c + 0.01 * gen.uniform();
            x(e, 1) = c + 0.01 * gen.uniform();
        }
        out.push_back(std::move(x));
    }
    return out;
}

// Pair-counting ARI oracle written from the contingency definition.
double ari_oracle(const std::vector<int>& a, const std::vector<int>& b)
{
    const std::size_t n = a.size();
    double both = 0, in_a = 0, in_b = 0;
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = x + 1; y < n; ++y) {
            const bool sa = a[x] == a[y];
            const bool sb = b[x] == b[y];
            both += sa && sb;
            in_a += sa;
            in_b += sb;
        }
    const double pairs = double(n) * double(n - 1) / 2.0;
    const double expected = in_a * in_b / pairs;
    const double max_index = 0.5 * (in_a + in_b);
    if (max_index == expected) return 1.0;
    return (both - expected) / (max_index - expected);
}

Frame static_frame(std::initializer_list<long> labels)
{
    Frame f;
    for (long l : labels) f.push_back({l, double(l), 0.5 * double(l), 1.0});
    return f;
}

} // namespace

TEST_CASE("largest gap selection")
{
    const std::vector<double> a{5, 4.9, 1, 0.9};
    const std::vector<double> b{3, 2, 1};
    const std::vector<double> c{10, 1, 0.9, 0.8};
    const std::vector<double> d{7};
    CHECK(largest_gap_k(a) == 2);
    CHECK(largest_gap_k(b) == 1);
    CHECK(largest_gap_k(c) == 1);
    CHECK_THROWS_AS(largest_gap_k(d), ValidationError);
}

TEST_CASE("feature multiplex structure")
{
    Gen gen(61);
    const std::vector<Eigen::MatrixXd> layers{gen.matrix(5, 2), gen.matrix(5, 3), gen.matrix(5, 1)};
    FeatureMultiplexOptions options;
    options.delta = {0.7};
    options.threshold = {GaussianThreshold::fixed(100.0)};
    options.interlayer_weight = 0.3;
    const MultilayerNetwork net = build_feature_multiplex(layers, options);
    REQUIRE(net.layers() == 3);
    REQUIRE(net.entities() == 5);
    CHECK(!net.directed());
    for (Index a = 0; a < 3; ++a) {
        const Eigen::MatrixXd& x = layers[static_cast<std::size_t>(a)];
        for (Index i = 0; i < 5; ++i)
            for (Index j = 0; j < 5; ++j) {
                const double d2 = (x.row(i) - x.row(j)).squaredNorm();
                const double expected = i == j ? 0.0 : std::exp(-d2 / (0.7 * 0.7));
                CHECK(std::abs(net.adjacency()(a, i, a, j) - expected) < 1e-14);
            }
        for (Index b = 0; b < 3; ++b)
            for (Index i = 0; i < 5; ++i)
                for (Index j = 0; j < 5; ++j)
                    if (a != b) CHECK(net.adjacency()(a, i, b, j) == (i == j ? 0.3 : 0.0));
    }
    options.delta = {1.0, 2.0};
    CHECK_THROWS_AS(build_feature_multiplex(layers, options), ValidationError);
    const std::vector<Eigen::MatrixXd> ragged{gen.matrix(5, 2), gen.matrix(4, 2)};
    CHECK_THROWS_AS(build_feature_multiplex(ragged, {}), ValidationError);
}

TEST_CASE("clustering recovers planted blocks")
{
    Gen gen(62);
    FeatureMultiplexOptions options;
    options.threshold = {GaussianThreshold::fixed(1.0)};
    for (int trial = 0; trial < 3; ++trial) {
        const auto layers = planted_layers(gen, 3, 6);
        std::vector<int> truth;
        for (Index e = 0; e < 12; ++e) truth.push_back(e < 6 ? 0 : 1);
        for (auto basis : {ClusterBasis::Singular, ClusterBasis::OrderWiseCP}) {
            const ClusterResult r = segment_from_features(layers, options, std::nullopt, basis, 3);
            CHECK(r.k == 2);
            CHECK(adjusted_rand_index(r.labels, truth) == doctest::Approx(1.0));
            for (std::size_t k = 1; k < r.ordering_values.size(); ++k)
                CHECK(r.ordering_values[k] <= r.ordering_values[k - 1]);
        }
    }
}

TEST_CASE("clustering edge cases")
{
    Gen gen(63);
    FeatureMultiplexOptions options;
    options.threshold = {GaussianThreshold::fixed(1.0)};
    const auto layers = planted_layers(gen, 2, 4);
    const ClusterResult one = segment_from_features(layers, options, Index{1});
    CHECK(std::all_of(one.labels.begin(), one.labels.end(), [](int l) { return l == 0; }));
    const ClusterResult all = segment_from_features(layers, options, Index{8});
    CHECK(std::set<int>(all.labels.begin(), all.labels.end()).size() == 8);
    CHECK_THROWS_AS(segment_from_features(layers, options, Index{9}), ValidationError);
    CHECK_THROWS_AS(segment_from_features(layers, options, Index{0}), ValidationError);

    // Identical features make every entity equivalent.
    const std::vector<Eigen::MatrixXd> same{Eigen::MatrixXd::Ones(5, 2), Eigen::MatrixXd::Ones(5, 2)};
    const ClusterResult flat = segment_from_features(same, {}, std::nullopt);
    CHECK(flat.k == 1);
}

TEST_CASE("adjusted Rand index matches the pair-counting oracle")
{
    Gen gen(64);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = static_cast<std::size_t>(gen.integer(2, 15));
        std::vector<int> a(n), b(n);
        for (std::size_t k = 0; k < n; ++k) {
            a[k] = static_cast<int>(gen.integer(0, 3));
            b[k] = static_cast<int>(gen.integer(0, 3));
        }
        CHECK(adjusted_rand_index(a, b) == doctest::Approx(ari_oracle(a, b)).epsilon(1e-12));
        std::vector<int> relabeled = a;
        for (int& l : relabeled) l = 7 - l;
        CHECK(adjusted_rand_index(a, relabeled) == doctest::Approx(1.0));
    }
    const std::vector<int> x{0, 1};
    const std::vector<int> y{0};
    CHECK_THROWS_AS(adjusted_rand_index(x, y), ValidationError);
}

TEST_CASE("semi-supervised classification of separated blobs")
{
    Gen gen(65);
    const Index n = 60;
    Eigen::MatrixXd x(3, n);
    Eigen::VectorXd truth(n), labels = Eigen::VectorXd::Zero(n);
    for (Index e = 0; e < n; ++e) {
        truth(e) = e % 2 == 0 ? 1.0 : -1.0;
        for (Index r = 0; r < 3; ++r) x(r, e) = 3.0 * truth(e) + 0.1 * gen.uniform();
        if (e < 12) labels(e) = truth(e);
    }
    for (auto kind : {ClassifierKind::Adaptive, ClassifierKind::FixedPower}) {
        ClassifyOptions options;
        options.kind = kind;
        const ClassifyResult r = classify_semisupervised(x, labels, options);
        CHECK(r.fit.has_value() == (kind == ClassifierKind::Adaptive));
        for (Index e = 0; e < 12; ++e) CHECK(r.labels(e) == labels(e));
        Index correct = 0;
        for (Index e = 12; e < n; ++e) correct += r.labels(e) == truth(e);
        CHECK(correct == n - 12);
    }
}

TEST_CASE("classification keeps all training labels and is permutation invariant")
{
    Gen gen(66);
    const Index n = 12;
    Eigen::MatrixXd x(2, n);
    Eigen::VectorXd labels(n);
    for (Index e = 0; e < n; ++e) {
        labels(e) = e < 6 ? 1.0 : -1.0;
        for (Index r = 0; r < 2; ++r) x(r, e) = 2.0 * labels(e) + 0.2 * gen.uniform();
    }
    const ClassifyResult all = classify_semisupervised(x, labels);
    CHECK(all.labels == labels);

    Eigen::VectorXd partial = labels;
    for (Index e : {1, 4, 7, 10}) partial(e) = 0.0;
    const ClassifyResult base = classify_semisupervised(x, partial, {.kind = ClassifierKind::FixedPower});
    std::vector<Index> perm(static_cast<std::size_t>(n));
    for (Index e = 0; e < n; ++e) perm[static_cast<std::size_t>(e)] = (5 * e + 3) % n;
    Eigen::MatrixXd xp(2, n);
    Eigen::VectorXd lp(n);
    for (Index e = 0; e < n; ++e) {
        xp.col(e) = x.col(perm[static_cast<std::size_t>(e)]);
        lp(e) = partial(perm[static_cast<std::size_t>(e)]);
    }
    const ClassifyResult permuted = classify_semisupervised(xp, lp, {.kind = ClassifierKind::FixedPower});
    for (Index e = 0; e < n; ++e) CHECK(permuted.labels(e) == base.labels(perm[static_cast<std::size_t>(e)]));
}

TEST_CASE("classification rejects single-class training sets")
{
    Eigen::MatrixXd x = Eigen::MatrixXd::Random(2, 6);
    Eigen::VectorXd labels = Eigen::VectorXd::Zero(6);
    labels(0) = 1.0;
    labels(1) = 1.0;
    CHECK_THROWS_AS(classify_semisupervised(x, labels), ValidationError);
    labels(1) = 2.0;
    CHECK_THROWS_AS(classify_semisupervised(x, labels), ValidationError);
}

TEST_CASE("label signal")
{
    const Signal s = label_signal(Eigen::Vector3d(1, 0, -1), 2);
    Signal expected(2, 3);
    expected << 1, 0, -1, 1, 0, -1;
    CHECK(s == expected);
}

TEST_CASE("short-time transform of a static sequence")
{
    const std::vector<Frame> frames(6, static_frame({1, 2, 3}));
    ShortTimeOptions options;
    options.window = 2;
    options.tau = 10.0;
    const Spectrogram sg = short_time_mgst(frames, options);
    CHECK(sg.hop == 2);
    CHECK(sg.starts == std::vector<Index>{0, 2, 4});
    CHECK(sg.entity_labels == std::vector<long>{1, 2, 3});
    REQUIRE(sg.coefficients.size() == 3);
    for (const Signal& c : sg.coefficients) {
        CHECK(c.rows() == 2);
        CHECK(c.cols() == 3);
        CHECK(max_abs(c - sg.coefficients[0]) < 1e-10);
    }
    // The transform is orthogonal, so window energy equals signal energy.
    const auto [net, signal] = window_network(std::span<const Frame>(frames).first(2), sg.entity_labels, options);
    CHECK(sg.energy()[0] == doctest::Approx(signal.squaredNorm()));
    CHECK(net.layers() == 2);

    options.hop = 1;
    CHECK(short_time_mgst(frames, options).starts.size() == 5);
}

TEST_CASE("short-time transform edge cases")
{
    std::vector<Frame> frames(4, static_frame({1, 2}));
    ShortTimeOptions options;
    options.window = 2;
    options.channel = Channel::X;
    for (auto& f : frames)
        for (auto& p : f) p.x = 0.0;
    for (const Signal& c : short_time_mgst(frames, options).coefficients) CHECK(max_abs(c) == 0.0);

    // A point missing from one frame becomes an isolated zero sample.
    std::vector<Frame> gappy{static_frame({1, 2}), static_frame({2})};
    const std::vector<long> labels{1, 2};
    const auto [net, signal] = window_network(gappy, labels, {.window = 2});
    CHECK(signal(1, 0) == 0.0);
    for (Index b = 0; b < 2; ++b)
        for (Index j = 0; j < 2; ++j) CHECK(net.adjacency()(1, 0, b, j) == 0.0);

    options.window = 5;
    CHECK_THROWS_AS(short_time_mgst(frames, options), ValidationError);
    options.window = 0;
    CHECK_THROWS_AS(short_time_mgst(frames, options), ValidationError);
}

TEST_CASE("entity high-pass probe")
{
    Gen gen(67);
    const MultilayerNetwork net = gen.network(3, 5);
    const Signal s = gen.matrix(3, 5);
    CHECK(max_abs(highpass_entity_probe(net, s, 5) - s) < 1e-12);
    CHECK(max_abs(highpass_entity_probe(net, s, 0)) < 1e-12);
    const Signal part = highpass_entity_probe(net, s, 2);
    CHECK(max_abs(highpass_entity_probe(net, part, 2) - part) < 1e-12);
}
