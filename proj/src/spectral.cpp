#include "mgsp/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mgsp/error.hpp"
#include "mgsp/numerics.hpp"

namespace mgsp {

namespace {

void require_mln(const RepresentingTensor& f, const char* what)
{
    require(f.tensor.is_square() && f.layers() >= 1 && f.entities() >= 1,
            std::string(what) + ": representing tensor must be M x N x M x N");
}

void require_signal(Index layers, Index entities, const Signal& s, const char* what)
{
    require(s.rows() == layers && s.cols() == entities, std::string(what) + ": signal shape mismatch");
}

// Permutation taking an entity-wise flattened vector to layer-wise order.
Eigen::PermutationMatrix<Eigen::Dynamic> entity_to_layer(Index layers, Index entities)
{
    Eigen::PermutationMatrix<Eigen::Dynamic> p(layers * entities);
    for (Index a = 0; a < layers; ++a)
        for (Index i = 0; i < entities; ++i) p.indices()(layers * i + a) = static_cast<int>(entities * a + i);
    return p;
}

double relative(double err, double scale) { return scale > 0.0 ? err / scale : err; }

Eigen::MatrixXd layer_trace(const Tensor4& f)
{
    const Index m = f.dim(0);
    const Index n = f.dim(1);
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(m, m);
    for (Index a = 0; a < m; ++a)
        for (Index b = 0; b < m; ++b)
            for (Index i = 0; i < n; ++i) p(a, b) += f(a, i, b, i);
    return p;
}

Eigen::MatrixXd entity_trace(const Tensor4& f)
{
    const Index m = f.dim(0);
    const Index n = f.dim(1);
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (Index a = 0; a < m; ++a) p += f.matrix().block(a * n, a * n, n, n);
    return p;
}

struct ModeBasis {
    Eigen::MatrixXd basis;
    Eigen::VectorXd values;
};

ModeBasis mode_basis(const Tensor4& f, int mode, const Eigen::MatrixXd& tiebreak)
{
    const SvdFactors sv = svd(unfold(f, mode));
    ModeBasis out{sv.u, Eigen::VectorXd::Zero(sv.u.cols())};
    out.values.head(sv.singular.size()) = sv.singular;
    resolve_degenerate(out.basis, out.values, tiebreak);
    return out;
}

Eigen::MatrixXd tiebreak_for(const Tensor4& f, int mode)
{
    if (!f.is_square()) return {};
    return (mode % 2 == 0) ? layer_trace(f) : entity_trace(f);
}

Signal forward(const Eigen::MatrixXd& layer, const Eigen::MatrixXd& entity, const Signal& s, TransformMode mode)
{
    switch (mode) {
    case TransformMode::Layer: return layer.transpose() * s;
    case TransformMode::Entity: return s * entity;
    case TransformMode::Joint: break;
    }
    return layer.transpose() * s * entity;
}

Signal inverse(const Eigen::MatrixXd& layer, const Eigen::MatrixXd& entity, const Signal& c, TransformMode mode)
{
    switch (mode) {
    case TransformMode::Layer: return layer * c;
    case TransformMode::Entity: return c * entity.transpose();
    case TransformMode::Joint: break;
    }
    return layer * c * entity.transpose();
}

// --- orthogonal CP helpers -------------------------------------------------

// B[i](b, c) = e_i^T F_{bc} e_i, where F_{bc} is the (b, c) entity block.
std::vector<Eigen::MatrixXd> layer_forms(const Eigen::Map<const RowMatrix>& f, Index m, Index n,
                                         const Eigen::MatrixXd& entity_basis)
{
    std::vector<Eigen::MatrixXd> b(static_cast<std::size_t>(n), Eigen::MatrixXd(m, m));
    for (Index r = 0; r < m; ++r)
        for (Index c = 0; c < m; ++c) {
            const Eigen::MatrixXd block = f.block(r * n, c * n, n, n);
            const Eigen::VectorXd d = (entity_basis.transpose() * block * entity_basis).diagonal();
            for (Index i = 0; i < n; ++i) b[static_cast<std::size_t>(i)](r, c) = d(i);
        }
    return b;
}

// C[a] = sum_{b,c} f_a[b] f_a[c] F_{bc}.
std::vector<Eigen::MatrixXd> entity_forms(const Eigen::Map<const RowMatrix>& f, Index m, Index n,
                                          const Eigen::MatrixXd& layer_basis)
{
    std::vector<Eigen::MatrixXd> c(static_cast<std::size_t>(m), Eigen::MatrixXd::Zero(n, n));
    for (Index r = 0; r < m; ++r)
        for (Index s = 0; s < m; ++s) {
            const Eigen::MatrixXd block = f.block(r * n, s * n, n, n);
            for (Index a = 0; a < m; ++a) {
                const double w = layer_basis(r, a) * layer_basis(s, a);
                if (w != 0.0) c[static_cast<std::size_t>(a)] += w * block;
            }
        }
    return c;
}

Eigen::MatrixXd values_from_layer_forms(const std::vector<Eigen::MatrixXd>& b, const Eigen::MatrixXd& layer_basis)
{
    const Index m = layer_basis.cols();
    const auto n = static_cast<Index>(b.size());
    Eigen::MatrixXd lambda(m, n);
    for (Index i = 0; i < n; ++i)
        for (Index a = 0; a < m; ++a)
            lambda(a, i) = layer_basis.col(a).dot(b[static_cast<std::size_t>(i)] * layer_basis.col(a));
    return lambda;
}

Eigen::MatrixXd values_from_entity_forms(const std::vector<Eigen::MatrixXd>& c, const Eigen::MatrixXd& entity_basis)
{
    const auto m = static_cast<Index>(c.size());
    const Index n = entity_basis.cols();
    Eigen::MatrixXd lambda(m, n);
    for (Index a = 0; a < m; ++a)
        for (Index i = 0; i < n; ++i)
            lambda(a, i) = entity_basis.col(i).dot(c[static_cast<std::size_t>(a)] * entity_basis.col(i));
    return lambda;
}

Eigen::MatrixXd polar_factor(const Eigen::MatrixXd& a)
{
    Eigen::JacobiSVD<Eigen::MatrixXd> solver(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return solver.matrixU() * solver.matrixV().transpose();
}

// Moves `basis` toward polar(gradient + shift * basis), doubling the shift
// until the objective does not decrease. Returns false when no step helps.
template <typename Objective>
bool ascend(Eigen::MatrixXd& basis, const Eigen::MatrixXd& gradient, double& objective, Objective&& evaluate)
{
    const double gnorm = gradient.norm();
    if (gnorm == 0.0) return false;
    double shift = 0.0;
    for (int attempt = 0; attempt < 40; ++attempt) {
        const Eigen::MatrixXd candidate = polar_factor(gradient + shift * basis);
        const double value = evaluate(candidate);
        if (value >= objective) {
            basis = candidate;
            objective = value;
            return true;
        }
        shift = shift == 0.0 ? gnorm : 2.0 * shift;
    }
    return false;
}

} // namespace

// --- joint spectrum ----------------------------------------------------------

Signal JointSpectrum::tensor(Index k) const
{
    require(!directed, "JointSpectrum::tensor: real eigen-tensors exist only for undirected spectra");
    require(k >= 0 && k < size(), "JointSpectrum::tensor: index out of range");
    return unflatten_signal(vectors.col(k), layers, entities, Convention::LayerWise);
}

JointSpectrum joint_spectrum(const RepresentingTensor& f, Convention convention)
{
    require_mln(f, "joint_spectrum");
    const Index m = f.layers();
    const Index n = f.entities();
    const SupraMatrix supra = flatten(f.tensor, convention);

    JointSpectrum out;
    out.layers = m;
    out.entities = n;
    out.directed = f.directed;
    out.convention = convention;
    if (!f.directed) {
        require(asymmetry(supra.data) <= kSymmetryTol, "joint_spectrum: undirected tensor is not symmetric");
        EigenPairs ep = sym_eig(supra.data);
        out.values = std::move(ep.values);
        out.vectors = std::move(ep.vectors);
        if (convention == Convention::EntityWise) {
            out.vectors = entity_to_layer(m, n) * out.vectors;
            normalize_signs(out.vectors);
        }
    } else {
        ComplexEigenPairs ep = gen_eig(supra.data);
        out.complex_values = std::move(ep.values);
        out.right = std::move(ep.vectors);
        out.left = std::move(ep.inverse);
        if (convention == Convention::EntityWise) {
            const auto p = entity_to_layer(m, n);
            out.right = p * out.right;
            out.left = out.left * p.transpose();
        }
    }
    return out;
}

Tensor4 reconstruct(const JointSpectrum& spec)
{
    auto t = Tensor4::square(spec.layers, spec.entities);
    if (!spec.directed)
        t.matrix() = spec.vectors * spec.values.asDiagonal() * spec.vectors.transpose();
    else
        t.matrix() = (spec.right * spec.complex_values.asDiagonal() * spec.left).real();
    return t;
}

Eigen::VectorXd mgft_joint(const JointSpectrum& spec, const Signal& s)
{
    require(!spec.directed, "mgft_joint: use mgft_joint_directed for directed spectra");
    require_signal(spec.layers, spec.entities, s, "mgft_joint");
    return spec.vectors.transpose() * flatten_signal(s, Convention::LayerWise);
}

Signal imgft_joint(const JointSpectrum& spec, const Eigen::VectorXd& coefficients)
{
    require(!spec.directed, "imgft_joint: use imgft_joint_directed for directed spectra");
    require(coefficients.size() == spec.size(), "imgft_joint: coefficient length must be M*N");
    return unflatten_signal(spec.vectors * coefficients, spec.layers, spec.entities, Convention::LayerWise);
}

Eigen::VectorXcd mgft_joint_directed(const JointSpectrum& spec, const Signal& s)
{
    require(spec.directed, "mgft_joint_directed: spectrum is undirected");
    require_signal(spec.layers, spec.entities, s, "mgft_joint_directed");
    return spec.left * flatten_signal(s, Convention::LayerWise).cast<std::complex<double>>();
}

Eigen::MatrixXcd imgft_joint_directed(const JointSpectrum& spec, const Eigen::VectorXcd& coefficients)
{
    require(spec.directed, "imgft_joint_directed: spectrum is undirected");
    require(coefficients.size() == spec.size(), "imgft_joint_directed: coefficient length must be M*N");
    const Eigen::VectorXcd v = spec.right * coefficients;
    Eigen::MatrixXcd s(spec.layers, spec.entities);
    for (Index a = 0; a < spec.layers; ++a)
        for (Index i = 0; i < spec.entities; ++i) s(a, i) = v(spec.entities * a + i);
    return s;
}

// --- order-wise spectrum -----------------------------------------------------

OrderWiseSpectrum orthogonal_cp(const RepresentingTensor& f, CpOptions options)
{
    require_mln(f, "orthogonal_cp");
    require(!f.directed, "orthogonal_cp: order-wise spectra are defined for undirected networks only");
    require(options.tol > 0.0 && options.max_iter >= 0, "orthogonal_cp: invalid options");
    const Index m = f.layers();
    const Index n = f.entities();
    const auto fm = f.tensor.matrix();
    const double fnorm2 = fm.squaredNorm();
    const double fnorm = std::sqrt(fnorm2);

    const SingularSpectrum init = hosvd(f);
    OrderWiseSpectrum out;
    out.layer_basis = init.layer_basis();
    out.entity_basis = init.entity_basis();

    auto model_residual = [&](double objective) {
        return fnorm > 0.0 ? std::sqrt(std::max(0.0, fnorm2 - objective)) / fnorm : 0.0;
    };

    auto b = layer_forms(fm, m, n, out.entity_basis);
    Eigen::MatrixXd lambda = values_from_layer_forms(b, out.layer_basis);
    double objective = lambda.squaredNorm();
    double previous = model_residual(objective);
    out.residual_history.push_back(previous);

    for (int it = 1; it <= options.max_iter; ++it) {
        // Layer basis: gradient column a is sum_i lambda[a,i] B_i f_a.
        Eigen::MatrixXd grad_f = Eigen::MatrixXd::Zero(m, m);
        for (Index a = 0; a < m; ++a)
            for (Index i = 0; i < n; ++i)
                grad_f.col(a) += lambda(a, i) * (b[static_cast<std::size_t>(i)] * out.layer_basis.col(a));
        ascend(out.layer_basis, grad_f, objective,
               [&](const Eigen::MatrixXd& cand) { return values_from_layer_forms(b, cand).squaredNorm(); });

        auto c = entity_forms(fm, m, n, out.layer_basis);
        lambda = values_from_entity_forms(c, out.entity_basis);
        objective = lambda.squaredNorm();

        Eigen::MatrixXd grad_e = Eigen::MatrixXd::Zero(n, n);
        for (Index i = 0; i < n; ++i)
            for (Index a = 0; a < m; ++a)
                grad_e.col(i) += lambda(a, i) * (c[static_cast<std::size_t>(a)] * out.entity_basis.col(i));
        ascend(out.entity_basis, grad_e, objective,
               [&](const Eigen::MatrixXd& cand) { return values_from_entity_forms(c, cand).squaredNorm(); });

        b = layer_forms(fm, m, n, out.entity_basis);
        lambda = values_from_layer_forms(b, out.layer_basis);
        objective = lambda.squaredNorm();

        const double current = model_residual(objective);
        out.residual_history.push_back(current);
        out.iterations = it;
        if (std::abs(previous - current) < options.tol) {
            out.converged = true;
            break;
        }
        previous = current;
    }
    if (options.max_iter == 0) out.converged = true;

    normalize_signs(out.layer_basis);
    normalize_signs(out.entity_basis);
    out.values = values_from_layer_forms(layer_forms(fm, m, n, out.entity_basis), out.layer_basis);
    out.residual = relative((fm - reconstruct(out).matrix()).norm(), fnorm);
    return out;
}

Tensor4 reconstruct(const OrderWiseSpectrum& spec)
{
    const Index m = spec.layer_basis.rows();
    const Index n = spec.entity_basis.rows();
    const Eigen::MatrixXd q = kron(spec.layer_basis, spec.entity_basis);
    Eigen::VectorXd lambda(m * n);
    for (Index a = 0; a < m; ++a)
        for (Index i = 0; i < n; ++i) lambda(n * a + i) = spec.values(a, i);
    auto t = Tensor4::square(m, n);
    t.matrix() = q * lambda.asDiagonal() * q.transpose();
    return t;
}

Signal mgft_orderwise(const OrderWiseSpectrum& spec, const Signal& s, TransformMode mode)
{
    require_signal(spec.layer_basis.rows(), spec.entity_basis.rows(), s, "mgft_orderwise");
    return forward(spec.layer_basis, spec.entity_basis, s, mode);
}

Signal imgft_orderwise(const OrderWiseSpectrum& spec, const Signal& c, TransformMode mode)
{
    require_signal(spec.layer_basis.rows(), spec.entity_basis.rows(), c, "imgft_orderwise");
    return inverse(spec.layer_basis, spec.entity_basis, c, mode);
}

// --- singular spectrum -------------------------------------------------------

Eigen::MatrixXd SingularSpectrum::joint_values() const { return layer_values() * entity_values().transpose(); }

SingularSpectrum hosvd(const RepresentingTensor& f)
{
    require_mln(f, "hosvd");
    SingularSpectrum out;
    out.directed = f.directed;
    for (int mode : {0, 1}) {
        ModeBasis mb = mode_basis(f.tensor, mode, tiebreak_for(f.tensor, mode));
        out.factors[static_cast<std::size_t>(mode)] = std::move(mb.basis);
        out.mode_values[static_cast<std::size_t>(mode)] = std::move(mb.values);
    }
    if (!f.directed) {
        out.factors[2] = out.factors[0];
        out.factors[3] = out.factors[1];
        out.mode_values[2] = out.mode_values[0];
        out.mode_values[3] = out.mode_values[1];
    } else {
        for (int mode : {2, 3}) {
            ModeBasis mb = mode_basis(f.tensor, mode, tiebreak_for(f.tensor, mode));
            out.factors[static_cast<std::size_t>(mode)] = std::move(mb.basis);
            out.mode_values[static_cast<std::size_t>(mode)] = std::move(mb.values);
        }
    }
    const Eigen::MatrixXd left = kron(out.factors[0], out.factors[1]);
    const Eigen::MatrixXd right = kron(out.factors[2], out.factors[3]);
    out.core = Tensor4::square(f.layers(), f.entities());
    out.core.matrix() = left.transpose() * f.tensor.matrix() * right;
    out.residual = relative((f.tensor.matrix() - reconstruct(out).matrix()).norm(), f.tensor.norm());
    return out;
}

Tensor4 reconstruct(const SingularSpectrum& spec)
{
    Tensor4 t = spec.core;
    t.matrix() = kron(spec.factors[0], spec.factors[1]) * spec.core.matrix() *
                 kron(spec.factors[2], spec.factors[3]).transpose();
    return t;
}

Signal mgst(const SingularSpectrum& spec, const Signal& s, TransformMode mode)
{
    require(!spec.directed, "mgst: the singular transform is defined for undirected networks only");
    require_signal(spec.layer_basis().rows(), spec.entity_basis().rows(), s, "mgst");
    return forward(spec.layer_basis(), spec.entity_basis(), s, mode);
}

Signal imgst(const SingularSpectrum& spec, const Signal& c, TransformMode mode)
{
    require(!spec.directed, "imgst: the singular transform is defined for undirected networks only");
    require_signal(spec.layer_basis().rows(), spec.entity_basis().rows(), c, "imgst");
    return inverse(spec.layer_basis(), spec.entity_basis(), c, mode);
}

// --- Tucker / HOOI -------------------------------------------------------------

Tensor4 reconstruct(const TuckerResult& t)
{
    Tensor4 out = t.core;
    for (int mode = 0; mode < 4; ++mode) out = mode_product(out, mode, t.factors[static_cast<std::size_t>(mode)]);
    return out;
}

TuckerResult tucker_hooi(const Tensor4& f, std::array<Index, 4> ranks, double tol, int max_iter)
{
    for (int mode = 0; mode < 4; ++mode) {
        const auto r = ranks[static_cast<std::size_t>(mode)];
        require(r >= 1 && r <= f.dim(mode), "tucker_hooi: ranks must satisfy 1 <= r_n <= dim_n");
    }
    require(tol > 0.0 && max_iter >= 0, "tucker_hooi: invalid options");
    const double fnorm = f.norm();

    TuckerResult out;
    for (int mode = 0; mode < 4; ++mode) {
        const auto r = ranks[static_cast<std::size_t>(mode)];
        out.factors[static_cast<std::size_t>(mode)] = mode_basis(f, mode, tiebreak_for(f, mode)).basis.leftCols(r);
    }

    auto project_core = [&]() {
        Tensor4 core = f;
        for (int mode = 0; mode < 4; ++mode)
            core = mode_product(core, mode, out.factors[static_cast<std::size_t>(mode)].transpose());
        return core;
    };
    auto residual_of = [&]() { return relative((f.matrix() - reconstruct(out).matrix()).norm(), fnorm); };

    out.core = project_core();
    out.residual = residual_of();
    out.residual_history.push_back(out.residual);

    for (int it = 1; it <= max_iter; ++it) {
        for (int mode = 0; mode < 4; ++mode) {
            Tensor4 y = f;
            for (int other = 0; other < 4; ++other)
                if (other != mode) y = mode_product(y, other, out.factors[static_cast<std::size_t>(other)].transpose());
            const SvdFactors sv = svd(unfold(y, mode));
            out.factors[static_cast<std::size_t>(mode)] = sv.u.leftCols(ranks[static_cast<std::size_t>(mode)]);
        }
        out.core = project_core();
        const double current = residual_of();
        out.residual_history.push_back(current);
        out.iterations = it;
        const double change = std::abs(out.residual - current);
        out.residual = current;
        if (change < tol) {
            out.converged = true;
            break;
        }
    }
    if (max_iter == 0) out.converged = true;
    return out;
}

// --- total variation ----------------------------------------------------------

double signal_norm(const Signal& s, Norm norm)
{
    return norm == Norm::L1 ? s.cwiseAbs().sum() : s.norm();
}

double total_variation(const Tensor4& f, const Signal& component, double lambda_abs_max, Norm norm)
{
    if (lambda_abs_max <= 0.0) return signal_norm(component, norm);
    return signal_norm(component - shift(f, component) / lambda_abs_max, norm);
}

double total_variation_closed_form(double lambda, double lambda_abs_max, const Signal& component, Norm norm)
{
    if (lambda_abs_max <= 0.0) return signal_norm(component, norm);
    return std::abs(1.0 - lambda / lambda_abs_max) * signal_norm(component, norm);
}

SpectralComponents components(const JointSpectrum& spec)
{
    require(!spec.directed, "components: directed joint spectra have complex components");
    SpectralComponents out;
    for (Index k = 0; k < spec.size(); ++k) {
        out.values.push_back(spec.values(k));
        out.tensors.push_back(spec.tensor(k));
    }
    return out;
}

namespace {

SpectralComponents separable_components(const Eigen::MatrixXd& layer, const Eigen::MatrixXd& entity,
                                        const Eigen::MatrixXd& values)
{
    SpectralComponents out;
    for (Index a = 0; a < layer.cols(); ++a)
        for (Index i = 0; i < entity.cols(); ++i) {
            out.values.push_back(values(a, i));
            out.tensors.push_back(layer.col(a) * entity.col(i).transpose());
        }
    return out;
}

} // namespace

SpectralComponents components(const OrderWiseSpectrum& spec)
{
    return separable_components(spec.layer_basis, spec.entity_basis, spec.values);
}

SpectralComponents components(const SingularSpectrum& spec)
{
    return separable_components(spec.layer_basis(), spec.entity_basis(), spec.joint_values());
}

SpectralComponents unit_components(const SpectralComponents& comps, Norm norm)
{
    SpectralComponents out = comps;
    for (auto& t : out.tensors) {
        const double len = signal_norm(t, norm);
        if (len > 0.0) t /= len;
    }
    return out;
}

FrequencyRanking rank_frequencies(const Tensor4& f, const SpectralComponents& comps, Norm norm)
{
    require(comps.values.size() == comps.tensors.size(), "rank_frequencies: values and tensors differ in length");
    FrequencyRanking out;
    out.norm = norm;
    for (double v : comps.values) out.lambda_abs_max = std::max(out.lambda_abs_max, std::abs(v));
    out.degenerate_scale = out.lambda_abs_max == 0.0;
    for (const auto& t : comps.tensors) out.tv.push_back(total_variation(f, t, out.lambda_abs_max, norm));

    const std::size_t k = out.tv.size();
    double scale = 0.0;
    for (double v : out.tv) scale = std::max(scale, v);
    const double tie = 1e-12 * std::max(scale, 1.0);
    std::vector<bool> taken(k, false);
    out.rank.assign(k, 0);
    for (std::size_t r = 0; r < k; ++r) {
        std::size_t best = k;
        for (std::size_t c = 0; c < k; ++c) {
            if (taken[c]) continue;
            if (best == k || out.tv[c] > out.tv[best] + tie) best = c;
        }
        taken[best] = true;
        out.order.push_back(static_cast<Index>(best));
        out.rank[best] = static_cast<Index>(r);
    }
    return out;
}

} // namespace mgsp
