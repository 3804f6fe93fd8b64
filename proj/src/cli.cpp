#include "mgsp/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <optional>

#include "mgsp/apps.hpp"
#include "mgsp/error.hpp"
#include "mgsp/filters.hpp"
#include "mgsp/io.hpp"
#include "mgsp/properties.hpp"
#include "mgsp/spectral.hpp"

namespace mgsp {

namespace {

using io::json;

struct Args {
    std::string network;
    std::string output;
    bool laplacian = false;
    bool adjacency = false;
    std::uint64_t seed = 1;

    // gen / proptest
    std::vector<double> er;
    Index cyclic = 0;

    std::string convention = "layer";
    std::string signal;
    std::string coeffs_file;

    bool joint = false;
    bool cp = false;
    bool hosvd = false;
    std::vector<Index> tucker;
    std::string norm = "l1";

    std::string transform = "joint";
    std::string basis;

    std::string tv_spectrum = "joint";
    bool unit = false;

    std::string filter_kind;
    std::string filter_spec;
    std::vector<double> poly_coeffs;
    std::string side = "entity";
    std::string band = "low";
    Index keep = 0;

    std::vector<std::string> features;
    double delta = 1.0;
    std::string tau = "mean";
    std::string k = "auto";
    double interlayer = 1.0;

    std::string labels;
    std::string kind = "af";
    int order = 10;

    std::vector<std::string> frames;
    Index window = 2;
    Index hop = 0;
    double sigma = 1.0;
    std::string channel = "norm";
};

TensorKind tensor_kind(const Args& a) { return a.laplacian ? TensorKind::Laplacian : TensorKind::Adjacency; }
const char* tensor_label(const Args& a) { return a.laplacian ? "laplacian" : "adjacency"; }

Norm parse_norm(const std::string& s)
{
    if (s == "l1") return Norm::L1;
    if (s == "l2") return Norm::L2;
    throw ValidationError("--norm must be l1 or l2");
}

Convention parse_convention(const std::string& s)
{
    if (s == "layer") return Convention::LayerWise;
    if (s == "entity") return Convention::EntityWise;
    throw ValidationError("--convention must be layer or entity");
}

GaussianThreshold parse_threshold(const std::string& s)
{
    if (s == "mean") return GaussianThreshold::mean();
    try {
        std::size_t used = 0;
        const double t = std::stod(s, &used);
        if (used == s.size() && std::isfinite(t)) return GaussianThreshold::fixed(t);
    } catch (const std::exception&) {
    }
    throw ValidationError("--tau must be a number or 'mean'");
}

std::optional<Index> parse_k(const std::string& s)
{
    if (s == "auto") return std::nullopt;
    try {
        std::size_t used = 0;
        const long k = std::stol(s, &used);
        if (used == s.size()) return static_cast<Index>(k);
    } catch (const std::exception&) {
    }
    throw ValidationError("--k must be an integer or 'auto'");
}

MultilayerNetwork load_network(const Args& a)
{
    require(!a.network.empty(), "--network is required");
    return io::read_network(a.network);
}

void finish(const std::string& sub, const Args& a, std::vector<std::string> inputs, json params,
            std::vector<std::string> outputs)
{
    io::write_manifest({sub, std::move(inputs), std::move(params), a.seed, std::move(outputs)});
}

SpectralComponents spectrum_components(const RepresentingTensor& f, const std::string& which)
{
    if (which == "joint") return components(joint_spectrum(f));
    if (which == "cp") return components(orthogonal_cp(f));
    if (which == "hosvd") return components(hosvd(f));
    throw ValidationError("--spectrum must be joint, cp or hosvd");
}

// --- subcommands -------------------------------------------------------------

void run_gen(const Args& a)
{
    require(a.er.empty() != (a.cyclic == 0), "gen: give exactly one of --er or --cyclic");
    json params;
    std::optional<MultilayerNetwork> net;
    if (!a.er.empty()) {
        const double m = a.er[2];
        const double n = a.er[3];
        require(m == std::floor(m) && n == std::floor(n), "gen: M and N must be integers");
        net.emplace(gen_er_multiplex(a.er[0], a.er[1], static_cast<Index>(m), static_cast<Index>(n), a.seed));
        params = {{"generator", "er"}, {"p", a.er[0]}, {"q", a.er[1]}, {"M", m}, {"N", n}};
    } else {
        net.emplace(gen_cyclic(a.cyclic));
        params = {{"generator", "cyclic"}, {"N", a.cyclic}};
    }
    io::write_network(a.output, *net);
    finish("gen", a, {}, params, {a.output});
}

void run_flatten(const Args& a)
{
    const auto net = load_network(a);
    const auto f = representing(net, tensor_kind(a));
    io::write_matrix_csv(a.output, flatten(f.tensor, parse_convention(a.convention)).data);
    finish("flatten", a, {a.network}, {{"tensor", tensor_label(a)}, {"convention", a.convention}}, {a.output});
}

void run_shift(const Args& a)
{
    const auto net = load_network(a);
    const auto f = representing(net, tensor_kind(a));
    require(!a.signal.empty(), "--signal is required");
    const Signal s = io::read_signal(a.signal, f.layers(), f.entities());
    io::write_matrix_csv(a.output, shift(f.tensor, s));
    finish("shift", a, {a.network, a.signal}, {{"tensor", tensor_label(a)}}, {a.output});
}

void run_spectrum(const Args& a)
{
    const int chosen = int(a.joint) + int(a.cp) + int(a.hosvd) + int(!a.tucker.empty());
    require(chosen == 1, "spectrum: give exactly one of --joint, --cp, --hosvd, --tucker");
    const auto net = load_network(a);
    const auto f = representing(net, tensor_kind(a));
    const Norm norm = parse_norm(a.norm);
    json doc;
    json params{{"tensor", tensor_label(a)}, {"norm", a.norm}};
    const double fnorm = f.tensor.norm();
    auto relative = [fnorm](double e) { return fnorm > 0.0 ? e / fnorm : e; };
    if (a.joint) {
        const auto spec = joint_spectrum(f, parse_convention(a.convention));
        doc = io::spectrum_to_json(spec);
        doc["residual"] = relative((reconstruct(spec).matrix() - f.tensor.matrix()).norm());
        if (!spec.directed) doc["ranking"] = io::ranking_to_json(rank_frequencies(f.tensor, components(spec), norm));
        params["method"] = "joint";
        params["convention"] = a.convention;
    } else if (a.cp) {
        const auto spec = orthogonal_cp(f);
        doc = io::spectrum_to_json(spec);
        doc["ranking"] = io::ranking_to_json(rank_frequencies(f.tensor, components(spec), norm));
        params["method"] = "cp";
    } else if (a.hosvd) {
        const auto spec = hosvd(f);
        doc = io::spectrum_to_json(spec);
        if (!spec.directed) doc["ranking"] = io::ranking_to_json(rank_frequencies(f.tensor, components(spec), norm));
        params["method"] = "hosvd";
    } else {
        require(a.tucker.size() == 4, "--tucker needs four ranks");
        const auto t = tucker_hooi(f.tensor, {a.tucker[0], a.tucker[1], a.tucker[2], a.tucker[3]});
        doc = io::spectrum_to_json(t);
        params["method"] = "tucker";
        params["ranks"] = a.tucker;
    }
    doc["tensor"] = tensor_label(a);
    io::write_json(a.output, doc);
    finish("spectrum", a, {a.network}, params, {a.output});
}

enum class Basis { Eigen, CP, Hosvd };

Basis transform_basis(const Args& a)
{
    if (a.transform == "singular") {
        require(a.basis.empty() || a.basis == "hosvd", "--transform singular uses the hosvd basis");
        return Basis::Hosvd;
    }
    if (a.basis.empty()) return a.transform == "joint" ? Basis::Eigen : Basis::CP;
    if (a.basis == "cp") return Basis::CP;
    if (a.basis == "hosvd") return Basis::Hosvd;
    throw ValidationError("--basis must be cp or hosvd");
}

TransformMode transform_mode(const Args& a)
{
    if (a.transform == "layer") return TransformMode::Layer;
    if (a.transform == "entity") return TransformMode::Entity;
    if (a.transform == "joint" || a.transform == "singular") return TransformMode::Joint;
    throw ValidationError("--transform must be joint, layer, entity or singular");
}

void run_gft(const Args& a, bool inverse)
{
    const auto net = load_network(a);
    const auto f = representing(net, tensor_kind(a));
    const TransformMode mode = transform_mode(a);
    const Basis basis = transform_basis(a);
    const std::string input = inverse ? a.coeffs_file : a.signal;
    require(!input.empty(), inverse ? "--coeffs is required" : "--signal is required");
    std::vector<std::string> outputs{a.output};

    if (basis == Basis::Eigen) {
        const auto spec = joint_spectrum(f);
        const Index mn = spec.size();
        if (!inverse) {
            const Signal s = io::read_signal(input, f.layers(), f.entities());
            if (!spec.directed) {
                io::write_matrix_csv(a.output, mgft_joint(spec, s));
            } else {
                const Eigen::VectorXcd c = mgft_joint_directed(spec, s);
                Eigen::MatrixXd table(mn, 2);
                table << c.real(), c.imag();
                io::write_matrix_csv(a.output, table);
            }
        } else {
            const Eigen::MatrixXd c = io::read_matrix_csv(input);
            if (!spec.directed) {
                require(c.rows() == mn && c.cols() == 1, input + ": expected one coefficient per row, M*N rows");
                io::write_matrix_csv(a.output, imgft_joint(spec, c.col(0)));
            } else {
                require(c.rows() == mn && c.cols() == 2, input + ": expected M*N rows of re,im");
                Eigen::VectorXcd z(mn);
                z.real() = c.col(0);
                z.imag() = c.col(1);
                const Eigen::MatrixXcd s = imgft_joint_directed(spec, z);
                io::write_matrix_csv(a.output, s.real());
                outputs.push_back(a.output + ".imag.csv");
                io::write_matrix_csv(outputs.back(), s.imag());
            }
        }
    } else {
        const Signal s = io::read_signal(input, f.layers(), f.entities());
        Signal out;
        if (basis == Basis::CP) {
            const auto spec = orthogonal_cp(f);
            out = inverse ? imgft_orderwise(spec, s, mode) : mgft_orderwise(spec, s, mode);
        } else {
            const auto spec = hosvd(f);
            out = inverse ? imgst(spec, s, mode) : mgst(spec, s, mode);
        }
        io::write_matrix_csv(a.output, out);
    }
    finish(inverse ? "igft" : "gft", a, {a.network, input},
           {{"tensor", tensor_label(a)},
            {"transform", a.transform},
            {"basis", basis == Basis::Eigen ? "eigen" : (basis == Basis::CP ? "cp" : "hosvd")}},
           outputs);
}

void run_tv(const Args& a)
{
    const auto net = load_network(a);
    const auto f = representing(net, tensor_kind(a));
    const Norm norm = parse_norm(a.norm);
    SpectralComponents comps = spectrum_components(f, a.tv_spectrum);
    if (a.unit) comps = unit_components(comps, norm);
    const FrequencyRanking ranking = rank_frequencies(f.tensor, comps, norm);
    std::string table = "index,value,tv,rank\n";
    for (std::size_t k = 0; k < comps.values.size(); ++k)
        table += std::to_string(k) + "," + io::format_double(comps.values[k]) + "," + io::format_double(ranking.tv[k]) +
                 "," + std::to_string(ranking.rank[k]) + "\n";
    io::atomic_write(a.output, table);
    finish("tv", a, {a.network},
           {{"tensor", tensor_label(a)}, {"norm", a.norm}, {"spectrum", a.tv_spectrum}, {"unit", a.unit}},
           {a.output});
}

void run_filter(const Args& a)
{
    const auto net = load_network(a);
    io::FilterSpec spec;
    std::vector<std::string> inputs{a.network};
    if (!a.filter_spec.empty()) {
        require(a.filter_kind.empty(), "filter: give either a kind or --spec");
        spec = io::filter_from_json(io::read_json(a.filter_spec), a.filter_spec);
        inputs.push_back(a.filter_spec);
    } else if (a.filter_kind == "poly") {
        require(!a.poly_coeffs.empty(), "filter poly: --coeffs is required");
        spec.tensor = tensor_kind(a);
        spec.poly = {a.poly_coeffs, spec.tensor};
    } else if (a.filter_kind == "spectral") {
        spec.polynomial = false;
        spec.tensor = tensor_kind(a);
        const std::string basis = a.basis.empty() ? "hosvd" : a.basis;
        require(basis == "cp" || basis == "hosvd", "--basis must be cp or hosvd");
        require(a.side == "layer" || a.side == "entity", "--side must be layer or entity");
        require(a.band == "low" || a.band == "high", "--band must be low or high");
        spec.mask.source = basis == "cp" ? BasisSource::OrderWise : BasisSource::Singular;
    } else {
        throw ValidationError("filter: kind must be poly or spectral (or use --spec)");
    }

    const auto f = representing(net, spec.tensor);
    require(!a.signal.empty(), "--signal is required");
    const Signal s = io::read_signal(a.signal, f.layers(), f.entities());
    inputs.push_back(a.signal);
    Signal out;
    if (spec.polynomial) {
        out = apply_polynomial(spec.poly, f.tensor, s);
    } else {
        const Side side = a.side == "layer" ? Side::Layer : Side::Entity;
        const Band band = a.band == "low" ? Band::LowPass : Band::HighPass;
        auto ranked = [&](const std::vector<double>& values, Index other) {
            return make_ranked_mask(low_first_by_value(values), a.keep, band, side, other, spec.mask.source);
        };
        if (spec.mask.source == BasisSource::OrderWise) {
            const auto basis = orthogonal_cp(f);
            if (a.filter_spec.empty()) {
                std::vector<double> importance;
                if (side == Side::Layer)
                    for (Index r = 0; r < basis.values.rows(); ++r) importance.push_back(basis.values.row(r).norm());
                else
                    for (Index c = 0; c < basis.values.cols(); ++c) importance.push_back(basis.values.col(c).norm());
                spec.mask = ranked(importance, side == Side::Layer ? f.entities() : f.layers());
            }
            out = spectral_filter(s, basis, spec.mask);
        } else {
            const auto basis = hosvd(f);
            if (a.filter_spec.empty()) {
                const Eigen::VectorXd& v = side == Side::Layer ? basis.layer_values() : basis.entity_values();
                spec.mask = ranked(std::vector<double>(v.data(), v.data() + v.size()),
                                   side == Side::Layer ? f.entities() : f.layers());
            }
            out = spectral_filter(s, basis, spec.mask);
        }
    }
    io::write_matrix_csv(a.output, out);
    const std::string spec_path = a.output + ".filter.json";
    io::write_json(spec_path, io::filter_to_json(spec));
    finish("filter", a, inputs,
           {{"filter", io::filter_to_json(spec)}, {"side", a.side}, {"band", a.band}, {"keep", a.keep}},
           {a.output, spec_path});
}

std::string labels_csv(const std::vector<int>& labels)
{
    std::string out = "entity,label\n";
    for (std::size_t i = 0; i < labels.size(); ++i) out += std::to_string(i) + "," + std::to_string(labels[i]) + "\n";
    return out;
}

ClusterBasis cluster_basis(const std::string& b)
{
    if (b.empty() || b == "hosvd") return ClusterBasis::Singular;
    if (b == "cp") return ClusterBasis::OrderWiseCP;
    throw ValidationError("--basis must be cp or hosvd");
}

void run_cluster(const Args& a)
{
    require(!a.features.empty(), "cluster: --features needs at least one layer file");
    std::vector<Eigen::MatrixXd> layers;
    for (const auto& path : a.features) layers.push_back(io::read_matrix_csv(path));
    for (std::size_t l = 1; l < layers.size(); ++l)
        require(layers[l].rows() == layers[0].rows(),
                a.features[l] + ": expected " + std::to_string(layers[0].rows()) + " entity rows");
    FeatureMultiplexOptions options;
    options.delta = {a.delta};
    options.threshold = {parse_threshold(a.tau)};
    options.interlayer_weight = a.interlayer;
    const ClusterResult r = segment_from_features(layers, options, parse_k(a.k), cluster_basis(a.basis), a.seed);
    io::atomic_write(a.output, labels_csv(r.labels));
    finish("cluster", a, a.features,
           {{"delta", a.delta},
            {"tau", a.tau},
            {"k", a.k},
            {"k_used", r.k},
            {"basis", a.basis.empty() ? "hosvd" : a.basis},
            {"interlayer", a.interlayer},
            {"ordering_values", r.ordering_values}},
           {a.output});
}

void run_classify(const Args& a)
{
    require(a.features.size() == 1, "classify: --features takes one file (entities x features)");
    require(!a.labels.empty(), "classify: --labels is required");
    const Eigen::MatrixXd x = io::read_matrix_csv(a.features[0]).transpose();
    const Eigen::VectorXd labels = io::read_labels(a.labels, x.cols());
    ClassifyOptions options;
    if (a.kind == "af")
        options.kind = ClassifierKind::Adaptive;
    else if (a.kind == "apf")
        options.kind = ClassifierKind::FixedPower;
    else
        throw ValidationError("--kind must be af or apf");
    options.order = a.order;
    options.delta = a.delta;
    options.threshold = parse_threshold(a.tau);
    options.tensor = tensor_kind(a);
    const ClassifyResult r = classify_semisupervised(x, labels, options);
    std::string table = "entity,label,score\n";
    for (Index i = 0; i < r.labels.size(); ++i)
        table += std::to_string(i) + "," + std::to_string(static_cast<int>(r.labels(i))) + "," +
                 io::format_double(r.scores(i)) + "\n";
    io::atomic_write(a.output, table);
    json params{{"kind", a.kind}, {"order", a.order}, {"delta", a.delta}, {"tau", a.tau},
                {"tensor", tensor_label(a)}, {"threshold", r.threshold}};
    if (r.fit) {
        params["coefficients"] = r.fit->filter.coefficients;
        params["mse_history"] = r.fit->mse_history;
    }
    finish("classify", a, {a.features[0], a.labels}, params, {a.output});
}

Channel parse_channel(const std::string& c)
{
    if (c == "x") return Channel::X;
    if (c == "y") return Channel::Y;
    if (c == "z") return Channel::Z;
    if (c == "norm") return Channel::Norm;
    throw ValidationError("--channel must be x, y, z or norm");
}

void run_stmgst(const Args& a)
{
    require(!a.frames.empty(), "stmgst: --frames needs the frame files in order");
    std::vector<Frame> frames;
    for (const auto& path : a.frames) frames.push_back(io::read_frame(path));
    ShortTimeOptions options;
    options.window = a.window;
    options.hop = a.hop;
    const GaussianThreshold tau = parse_threshold(a.tau);
    require(!tau.use_mean, "stmgst: --tau must be a number");
    options.tau = tau.value;
    options.sigma = a.sigma;
    options.channel = parse_channel(a.channel);
    const Spectrogram sg = short_time_mgst(frames, options);

    const Index n = static_cast<Index>(sg.entity_labels.size());
    Eigen::MatrixXd table(static_cast<Index>(sg.coefficients.size()), sg.window * n);
    for (std::size_t w = 0; w < sg.coefficients.size(); ++w) {
        const RowMatrix row = sg.coefficients[w];
        table.row(static_cast<Index>(w)) = Eigen::Map<const Eigen::RowVectorXd>(row.data(), row.size());
    }
    io::write_matrix_csv(a.output, table);
    const std::string index_path = a.output + ".index.json";
    io::write_json(index_path, {{"window", sg.window},
                                {"hop", sg.hop},
                                {"starts", sg.starts},
                                {"entity_labels", sg.entity_labels},
                                {"layout", "row-major window x entity per row"},
                                {"energy", sg.energy()}});
    finish("stmgst", a, a.frames,
           {{"window", a.window}, {"hop", sg.hop}, {"tau", a.tau}, {"sigma", a.sigma}, {"channel", a.channel}},
           {a.output, index_path});
}

bool run_proptest(const Args& a, std::ostream& out)
{
    std::optional<MultilayerNetwork> net;
    std::vector<std::string> inputs;
    json params{{"tensor", tensor_label(a)}};
    if (!a.network.empty()) {
        require(a.er.empty(), "proptest: give either --network or --er");
        net.emplace(io::read_network(a.network));
        inputs.push_back(a.network);
    } else {
        require(a.er.size() == 4, "proptest: give --network or --er p q M N");
        net.emplace(gen_er_multiplex(a.er[0], a.er[1], static_cast<Index>(a.er[2]), static_cast<Index>(a.er[3]), a.seed));
        params["er"] = a.er;
    }
    PropertyOptions options;
    options.seed = a.seed;
    const PropertyReport report = run_property_suite(representing(*net, tensor_kind(a)), options);
    json checks = json::array();
    for (const auto& c : report.checks) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name << " measured=" << io::format_double(c.measured)
            << " tolerance=" << io::format_double(c.tolerance) << "\n";
        checks.push_back({{"name", c.name}, {"measured", c.measured}, {"tolerance", c.tolerance}, {"passed", c.passed}});
    }
    io::write_json(a.output, {{"passed", report.passed()}, {"cp_residual", report.cp_residual}, {"checks", checks}});
    finish("proptest", a, inputs, params, {a.output});
    return report.passed();
}

} // namespace

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Signal processing over multilayer networks"};
    app.require_subcommand(1);
    Args a;

    auto add_tensor_flags = [&](CLI::App* sub) {
        auto* lap = sub->add_flag("--laplacian", a.laplacian, "Use the Laplacian tensor");
        auto* adj = sub->add_flag("--adjacency", a.adjacency, "Use the adjacency tensor (default)");
        lap->excludes(adj);
    };
    auto add_common = [&](CLI::App* sub, bool needs_network) {
        auto* opt = sub->add_option("--network", a.network, "Network JSON")->check(CLI::ExistingFile);
        if (needs_network) opt->required();
        sub->add_option("-o,--output", a.output, "Output path")->required();
        sub->add_option("--seed", a.seed, "Random seed");
    };

    auto* gen = app.add_subcommand("gen", "Generate a fixture network");
    gen->add_option("--er", a.er, "Multiplex ER: p q M N")->expected(4);
    gen->add_option("--cyclic", a.cyclic, "Directed cycle on N nodes");
    add_common(gen, false);

    auto* flat = app.add_subcommand("flatten", "Write the supra-matrix");
    add_common(flat, true);
    add_tensor_flags(flat);
    flat->add_option("--convention", a.convention, "layer | entity");

    auto* shf = app.add_subcommand("shift", "Shift a signal once");
    add_common(shf, true);
    add_tensor_flags(shf);
    shf->add_option("--signal", a.signal, "Signal CSV (M x N)")->required()->check(CLI::ExistingFile);

    auto* spec = app.add_subcommand("spectrum", "Compute a spectrum");
    add_common(spec, true);
    add_tensor_flags(spec);
    spec->add_flag("--joint", a.joint, "Joint eigen-tensors");
    spec->add_flag("--cp", a.cp, "Order-wise spectrum (orthogonal CP)");
    spec->add_flag("--hosvd", a.hosvd, "Singular spectrum (HOSVD)");
    spec->add_option("--tucker", a.tucker, "Truncated Tucker ranks r1 r2 r3 r4")->expected(4);
    spec->add_option("--norm", a.norm, "TV norm: l1 | l2");
    spec->add_option("--convention", a.convention, "layer | entity (joint only)");

    CLI::App* gft_cmds[2];
    for (int inv = 0; inv < 2; ++inv) {
        auto* sub = app.add_subcommand(inv ? "igft" : "gft", inv ? "Inverse transform" : "Forward transform");
        add_common(sub, true);
        add_tensor_flags(sub);
        if (inv)
            sub->add_option("--coeffs", a.coeffs_file, "Coefficient CSV")->required()->check(CLI::ExistingFile);
        else
            sub->add_option("--signal", a.signal, "Signal CSV (M x N)")->required()->check(CLI::ExistingFile);
        sub->add_option("--transform", a.transform, "joint | layer | entity | singular");
        sub->add_option("--basis", a.basis, "cp | hosvd");
        gft_cmds[inv] = sub;
    }

    auto* tv = app.add_subcommand("tv", "Total-variation ranking table");
    add_common(tv, true);
    add_tensor_flags(tv);
    tv->add_option("--norm", a.norm, "l1 | l2");
    tv->add_option("--spectrum", a.tv_spectrum, "joint | cp | hosvd");
    tv->add_flag("--unit", a.unit, "Rescale components to unit norm first");

    auto* filt = app.add_subcommand("filter", "Apply a polynomial or spectral filter");
    add_common(filt, true);
    add_tensor_flags(filt);
    filt->add_option("kind", a.filter_kind, "poly | spectral");
    filt->add_option("--spec", a.filter_spec, "Filter spec JSON")->check(CLI::ExistingFile);
    filt->add_option("--signal", a.signal, "Signal CSV (M x N)")->required()->check(CLI::ExistingFile);
    filt->add_option("--coeffs", a.poly_coeffs, "Polynomial coefficients a0 a1 ...");
    filt->add_option("--basis", a.basis, "cp | hosvd");
    filt->add_option("--side", a.side, "layer | entity");
    filt->add_option("--band", a.band, "low | high");
    filt->add_option("--keep", a.keep, "Components kept");

    auto* clu = app.add_subcommand("cluster", "Spectral clustering of entity features");
    clu->add_option("--features", a.features, "One CSV per layer (N rows)")->required()->check(CLI::ExistingFile);
    clu->add_option("-o,--output", a.output, "Output path")->required();
    clu->add_option("--seed", a.seed, "Random seed");
    clu->add_option("--delta", a.delta, "Gaussian scale");
    clu->add_option("--tau", a.tau, "Squared-distance threshold or 'mean'");
    clu->add_option("--k", a.k, "Cluster count or 'auto'");
    clu->add_option("--basis", a.basis, "cp | hosvd");
    clu->add_option("--interlayer", a.interlayer, "Interlayer weight");

    auto* cls = app.add_subcommand("classify", "Semi-supervised classification");
    cls->add_option("--features", a.features, "CSV, entities x features")->required()->check(CLI::ExistingFile);
    cls->add_option("--labels", a.labels, "CSV entity,label")->required()->check(CLI::ExistingFile);
    cls->add_option("-o,--output", a.output, "Output path")->required();
    cls->add_option("--seed", a.seed, "Random seed");
    cls->add_option("--kind", a.kind, "af | apf");
    cls->add_option("--order", a.order, "Polynomial order");
    cls->add_option("--delta", a.delta, "Gaussian scale");
    cls->add_option("--tau", a.tau, "Squared-distance threshold or 'mean'");
    add_tensor_flags(cls);

    auto* stm = app.add_subcommand("stmgst", "Short-time singular transform of a point-cloud sequence");
    stm->add_option("--frames", a.frames, "Frame CSVs in order (label,x,y,z)")->required()->check(CLI::ExistingFile);
    stm->add_option("-o,--output", a.output, "Output path")->required();
    stm->add_option("--seed", a.seed, "Random seed");
    stm->add_option("--window", a.window, "Frames per window")->required();
    stm->add_option("--hop", a.hop, "Frames between window starts (default: window)");
    stm->add_option("--tau", a.tau, "Squared-distance threshold")->required();
    stm->add_option("--sigma", a.sigma, "Gaussian scale");
    stm->add_option("--channel", a.channel, "x | y | z | norm");

    auto* prop = app.add_subcommand("proptest", "Run the property suite");
    add_common(prop, false);
    add_tensor_flags(prop);
    prop->add_option("--er", a.er, "Generate ER p q M N instead of reading a network")->expected(4);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (gen->parsed()) run_gen(a);
        else if (flat->parsed()) run_flatten(a);
        else if (shf->parsed()) run_shift(a);
        else if (spec->parsed()) run_spectrum(a);
        else if (gft_cmds[0]->parsed()) run_gft(a, false);
        else if (gft_cmds[1]->parsed()) run_gft(a, true);
        else if (tv->parsed()) run_tv(a);
        else if (filt->parsed()) run_filter(a);
        else if (clu->parsed()) run_cluster(a);
        else if (cls->parsed()) run_classify(a);
        else if (stm->parsed()) run_stmgst(a);
        else if (prop->parsed()) return run_proptest(a, out) ? 0 : 1;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const io::json::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace mgsp
