#include "mgsp/properties.hpp"

#include <algorithm>
#include <cmath>

#include "mgsp/filters.hpp"
#include "mgsp/numerics.hpp"
#include "mgsp/random.hpp"
#include "mgsp/spectral.hpp"

namespace mgsp {

bool PropertyReport::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.passed; });
}

const PropertyCheck* PropertyReport::find(const std::string& name) const
{
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

namespace {

void record(PropertyReport& report, std::string name, double measured, double tolerance)
{
    report.checks.push_back({std::move(name), measured, tolerance, std::isfinite(measured) && measured <= tolerance});
}

Eigen::VectorXcd sorted_values(const Eigen::MatrixXd& supra, bool directed)
{
    if (!directed) return sym_eig(supra).values.cast<std::complex<double>>();
    return gen_eig(supra).values;
}

Signal random_signal(Rng& rng, Index m, Index n)
{
    Signal s(m, n);
    for (Index a = 0; a < m; ++a)
        for (Index i = 0; i < n; ++i) s(a, i) = rng.normal();
    return s;
}

} // namespace

PropertyReport run_property_suite(const RepresentingTensor& f, const PropertyOptions& options)
{
    PropertyReport report;
    const Index m = f.layers();
    const Index n = f.entities();
    const double fnorm = f.tensor.norm();

    // Flattening invariance.
    {
        const Eigen::VectorXcd lw = sorted_values(flatten(f.tensor, Convention::LayerWise).data, f.directed);
        const Eigen::VectorXcd ew = sorted_values(flatten(f.tensor, Convention::EntityWise).data, f.directed);
        record(report, "flattening-invariance", (lw - ew).cwiseAbs().maxCoeff(), 1e-10);
    }

    const JointSpectrum joint = joint_spectrum(f);
    {
        double worst = 0.0;
        if (!f.directed) {
            for (Index k = 0; k < joint.size(); ++k) {
                const Signal v = joint.tensor(k);
                worst = std::max(worst, (shift(f.tensor, v) - joint.values(k) * v).norm());
            }
        } else {
            const Eigen::MatrixXcd a = f.tensor.matrix().cast<std::complex<double>>();
            worst = (a * joint.right - joint.right * joint.complex_values.asDiagonal()).colwise().norm().maxCoeff();
        }
        record(report, "eigen-equation", worst, 1e-9 * std::max(fnorm, 1.0));
    }
    if (f.directed) return report;

    const OrderWiseSpectrum cp = orthogonal_cp(f);
    report.cp_residual = cp.residual;
    {
        double worst = 0.0;
        Eigen::MatrixXd gram(m * n, m * n);
        std::vector<Signal> tensors;
        for (Index a = 0; a < m; ++a)
            for (Index i = 0; i < n; ++i) {
                const Signal v = cp.layer_basis.col(a) * cp.entity_basis.col(i).transpose();
                const double err = (shift(f.tensor, v) - cp.values(a, i) * v).norm();
                worst = std::max(worst, fnorm > 0.0 ? err / fnorm : err);
                tensors.push_back(v);
            }
        for (std::size_t x = 0; x < tensors.size(); ++x)
            for (std::size_t y = 0; y < tensors.size(); ++y)
                gram(static_cast<Index>(x), static_cast<Index>(y)) = inner(tensors[x], tensors[y]);
        record(report, "cp-approximate-eigen", worst, cp.residual + 1e-9);
        record(report, "cp-gram", (gram - Eigen::MatrixXd::Identity(m * n, m * n)).cwiseAbs().maxCoeff(), 1e-10);
    }

    {
        double worst = 0.0;
        Tensor4 contracted = Tensor4::identity(m, n);
        for (int tau = 0; tau <= options.max_power; ++tau) {
            if (tau > 0) contracted = contract_tensors(contracted, f.tensor);
            const Tensor4 spectral = poly_power(joint, tau);
            const double scale = contracted.norm();
            const double err = (spectral.matrix() - contracted.matrix()).norm();
            worst = std::max(worst, scale > 0.0 ? err / scale : err);
        }
        record(report, "power-equivalence", worst, 1e-9);
    }

    {
        const SingularSpectrum sing = hosvd(f);
        Rng rng(options.seed);
        double joint_err = 0.0;
        double order_err = 0.0;
        double singular_err = 0.0;
        for (int r = 0; r < options.random_signals; ++r) {
            const Signal s = random_signal(rng, m, n);
            joint_err = std::max(joint_err, (imgft_joint(joint, mgft_joint(joint, s)) - s).cwiseAbs().maxCoeff());
            for (auto mode : {TransformMode::Layer, TransformMode::Entity, TransformMode::Joint}) {
                order_err = std::max(
                    order_err, (imgft_orderwise(cp, mgft_orderwise(cp, s, mode), mode) - s).cwiseAbs().maxCoeff());
                singular_err =
                    std::max(singular_err, (imgst(sing, mgst(sing, s, mode), mode) - s).cwiseAbs().maxCoeff());
            }
        }
        record(report, "roundtrip-joint", joint_err, 1e-10);
        record(report, "roundtrip-orderwise", order_err, 1e-10);
        record(report, "roundtrip-singular", singular_err, 1e-10);
    }
    return report;
}

} // namespace mgsp
