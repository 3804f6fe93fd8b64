#include "mgsp/filters.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mgsp/error.hpp"

namespace mgsp {

Tensor4 poly_power(const Tensor4& f, int tau)
{
    require(f.is_square(), "poly_power: tensor must be M x N x M x N");
    require(tau >= 0, "poly_power: tau must be non-negative");
    Tensor4 out = Tensor4::identity(f.dim(0), f.dim(1));
    for (int k = 0; k < tau; ++k) out = contract_tensors(out, f);
    return out;
}

Tensor4 poly_power(const JointSpectrum& spec, int tau)
{
    require(!spec.directed, "poly_power: spectral route needs an undirected spectrum");
    require(tau >= 0, "poly_power: tau must be non-negative");
    const Eigen::VectorXd powered = spec.values.array().pow(static_cast<double>(tau));
    auto t = Tensor4::square(spec.layers, spec.entities);
    t.matrix() = spec.vectors * powered.asDiagonal() * spec.vectors.transpose();
    return t;
}

Signal apply_polynomial(const PolynomialFilter& filter, const Tensor4& f, const Signal& s)
{
    require(!filter.coefficients.empty(), "apply_polynomial: filter has no coefficients");
    require(f.is_square() && s.rows() == f.dim(0) && s.cols() == f.dim(1), "apply_polynomial: shape mismatch");
    for (double a : filter.coefficients) require(std::isfinite(a), "apply_polynomial: non-finite coefficient");
    Signal power = s;
    Signal out = filter.coefficients[0] * s;
    for (std::size_t k = 1; k < filter.coefficients.size(); ++k) {
        power = shift(f, power);
        out += filter.coefficients[k] * power;
    }
    return out;
}

namespace {

Signal masked(const Signal& s, const Eigen::MatrixXd& layer, const Eigen::MatrixXd& entity, const SpectralMask& mask)
{
    require(s.rows() == layer.rows() && s.cols() == entity.rows(), "spectral_filter: signal shape mismatch");
    require(mask.layer.size() == layer.cols() && mask.entity.size() == entity.cols(),
            "spectral_filter: mask lengths must be M and N");
    require(mask.layer.allFinite() && mask.entity.allFinite(), "spectral_filter: non-finite mask entry");
    return layer * mask.layer.asDiagonal() * layer.transpose() * s * entity * mask.entity.asDiagonal() *
           entity.transpose();
}

} // namespace

Signal spectral_filter(const Signal& s, const OrderWiseSpectrum& basis, const SpectralMask& mask)
{
    return masked(s, basis.layer_basis, basis.entity_basis, mask);
}

Signal spectral_filter(const Signal& s, const SingularSpectrum& basis, const SpectralMask& mask)
{
    require(!basis.directed, "spectral_filter: singular bases of directed networks are not orthonormal pairs");
    return masked(s, basis.layer_basis(), basis.entity_basis(), mask);
}

std::vector<Index> low_first_by_value(std::span<const double> values)
{
    std::vector<Index> order(values.size());
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) {
        return values[static_cast<std::size_t>(x)] > values[static_cast<std::size_t>(y)];
    });
    return order;
}

std::vector<Index> low_first_by_tv(std::span<const double> tv)
{
    std::vector<Index> order(tv.size());
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) {
        return tv[static_cast<std::size_t>(x)] < tv[static_cast<std::size_t>(y)];
    });
    return order;
}

SpectralMask make_ranked_mask(std::span<const Index> low_first, Index keep, Band band, Side side, Index other_dim,
                              BasisSource source)
{
    const auto dim = static_cast<Index>(low_first.size());
    require(keep >= 0 && keep <= dim, "make_ranked_mask: keep must lie in [0, dimension]");
    require(other_dim >= 0, "make_ranked_mask: negative dimension");
    Eigen::VectorXd kept = Eigen::VectorXd::Zero(dim);
    for (Index r = 0; r < keep; ++r) {
        const Index pos = band == Band::LowPass ? r : dim - 1 - r;
        const Index comp = low_first[static_cast<std::size_t>(pos)];
        require(comp >= 0 && comp < dim, "make_ranked_mask: ranking is not a permutation");
        kept(comp) = 1.0;
    }
    SpectralMask mask;
    mask.source = source;
    if (side == Side::Layer) {
        mask.layer = std::move(kept);
        mask.entity = Eigen::VectorXd::Ones(other_dim);
    } else {
        mask.layer = Eigen::VectorXd::Ones(other_dim);
        mask.entity = std::move(kept);
    }
    return mask;
}

double spectral_radius_estimate(const Tensor4& f)
{
    const auto a = f.matrix();
    const Index n = a.rows();
    if (n == 0) return 0.0;
    Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(n, 1.0, 2.0);
    v.normalize();
    double estimate = 0.0;
    for (int it = 0; it < 500; ++it) {
        Eigen::VectorXd w = a.transpose() * (a * v);
        const double len = w.norm();
        if (len == 0.0) return 0.0;
        const double next = std::sqrt(len);
        w /= len;
        v = std::move(w);
        if (std::abs(next - estimate) <= 1e-12 * next) return next;
        estimate = next;
    }
    return estimate;
}

Eigen::VectorXd map_to_labels(const Signal& s, double threshold)
{
    const Eigen::VectorXd mean = s.colwise().mean().transpose();
    return mean.unaryExpr([threshold](double x) { return x > threshold ? 1.0 : (x < threshold ? -1.0 : 0.0); });
}

AdaptiveFit fit_adaptive_polynomial(const Tensor4& f, const Signal& s, std::span<const Index> labeled,
                                    const Eigen::VectorXd& targets, const AdaptiveFitOptions& options)
{
    require(f.is_square() && s.rows() == f.dim(0) && s.cols() == f.dim(1), "fit_adaptive_polynomial: shape mismatch");
    require(!labeled.empty(), "fit_adaptive_polynomial: no labeled entries");
    require(targets.size() == static_cast<Index>(labeled.size()), "fit_adaptive_polynomial: one target per labeled entry");
    require(options.max_order >= 1, "fit_adaptive_polynomial: max_order must be at least 1");
    require(options.min_order >= 0 && options.min_order <= options.max_order,
            "fit_adaptive_polynomial: min_order must lie in [0, max_order]");
    require(!options.grid.empty(), "fit_adaptive_polynomial: empty grid");
    require(options.sweeps >= 1, "fit_adaptive_polynomial: sweeps must be at least 1");
    require(options.regularizer == 0.0, "fit_adaptive_polynomial: the regularizer is not supported");
    for (Index e : labeled) require(e >= 0 && e < s.cols(), "fit_adaptive_polynomial: labeled entity out of range");

    AdaptiveFit out;
    const double radius = spectral_radius_estimate(f);
    out.rho = radius > 0.0 ? radius : 1.0;

    // Column means of (F / rho)^[k] <> s, one column per order.
    const int orders = options.max_order + 1;
    Eigen::MatrixXd means(s.cols(), orders);
    Signal power = s;
    for (int k = 0; k < orders; ++k) {
        if (k > 0) power = shift(f, power) / out.rho;
        means.col(k) = power.colwise().mean().transpose();
    }

    const double thr = options.threshold;
    auto mse_of = [&](const Eigen::VectorXd& g) {
        const Eigen::VectorXd score = means * g;
        double total = 0.0;
        for (std::size_t r = 0; r < labeled.size(); ++r) {
            const double x = score(labeled[r]);
            const double mapped = x > thr ? 1.0 : (x < thr ? -1.0 : 0.0);
            const double d = mapped - targets(static_cast<Index>(r));
            total += d * d;
        }
        return total / static_cast<double>(labeled.size());
    };

    Eigen::VectorXd g = Eigen::VectorXd::Zero(orders);
    double best = mse_of(g);
    out.mse_history.push_back(best);
    for (int sweep = 0; sweep < options.sweeps; ++sweep) {
        for (int k = options.min_order; k < orders; ++k) {
            double chosen = g(k);
            for (double candidate : options.grid) {
                if (candidate == chosen) continue;
                g(k) = candidate;
                const double value = mse_of(g);
                if (value < best) {
                    best = value;
                    chosen = candidate;
                }
            }
            g(k) = chosen;
        }
        out.mse_history.push_back(best);
    }

    out.mse = best;
    out.grid_values.assign(g.data(), g.data() + g.size());
    out.filter.coefficients.resize(static_cast<std::size_t>(orders));
    for (int k = 0; k < orders; ++k)
        out.filter.coefficients[static_cast<std::size_t>(k)] = g(k) / std::pow(out.rho, k);
    return out;
}

} // namespace mgsp
