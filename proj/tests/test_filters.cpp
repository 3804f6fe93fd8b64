#include <doctest.h>

#include <algorithm>
#include <limits>

#include "mgsp/error.hpp"
#include "mgsp/filters.hpp"
#include "support.hpp"

using namespace mgsp;
using testing::Gen;
using testing::max_abs;

namespace {

RepresentingTensor x4_adjacency() { return representing(testing::x4(), TensorKind::Adjacency); }

double mse_of_labels(const Eigen::VectorXd& predicted, std::span<const Index> labeled, const Eigen::VectorXd& targets)
{
    double total = 0.0;
    for (std::size_t r = 0; r < labeled.size(); ++r) {
        const double d = predicted(labeled[r]) - targets(static_cast<Index>(r));
        total += d * d;
    }
    return total / static_cast<double>(labeled.size());
}

} // namespace

TEST_CASE("polynomial powers of the x4 adjacency")
{
    const Tensor4 a = x4_adjacency().tensor;
    Eigen::Matrix4d expected;
    expected << 2, 0, 0, 2, 0, 2, 2, 0, 0, 2, 2, 0, 2, 0, 0, 2;
    CHECK(max_abs(poly_power(a, 2).matrix() - expected) == 0.0);
    CHECK(poly_power(a, 0) == Tensor4::identity(2, 2));
    CHECK(poly_power(a, 1) == a);
    CHECK_THROWS_AS(poly_power(a, -1), ValidationError);
}

TEST_CASE("spectral and contraction powers agree")
{
    Gen gen(51);
    for (int trial = 0; trial < 5; ++trial) {
        const auto f = representing(gen.network(gen.integer(1, 3), gen.integer(2, 4)), TensorKind::Laplacian);
        const JointSpectrum spec = joint_spectrum(f);
        for (int tau = 0; tau <= 6; ++tau) {
            const Tensor4 direct = poly_power(f.tensor, tau);
            Eigen::MatrixXd matrix_power = Eigen::MatrixXd::Identity(f.tensor.matrix().rows(), f.tensor.matrix().cols());
            for (int k = 0; k < tau; ++k) matrix_power = matrix_power * f.tensor.matrix();
            CHECK(max_abs(direct.matrix() - matrix_power) < 1e-9 * std::max(1.0, matrix_power.norm()));
            CHECK(max_abs(poly_power(spec, tau).matrix() - matrix_power) < 1e-9 * std::max(1.0, matrix_power.norm()));
        }
    }
}

TEST_CASE("polynomial filter on x4")
{
    Signal s(2, 2);
    s << 1, 0, 0, 1;
    const PolynomialFilter square{{0.0, 0.0, 1.0}, TensorKind::Adjacency};
    Signal expected(2, 2);
    expected << 4, 0, 0, 4;
    CHECK(max_abs(apply_polynomial(square, x4_adjacency().tensor, s) - expected) < 1e-12);
    const PolynomialFilter identity{{1.0}, TensorKind::Adjacency};
    CHECK(max_abs(apply_polynomial(identity, x4_adjacency().tensor, s) - s) == 0.0);
}

TEST_CASE("polynomial filters are linear and match the supra-matrix polynomial")
{
    Gen gen(52);
    for (int trial = 0; trial < 5; ++trial) {
        const Index m = gen.integer(1, 3);
        const Index n = gen.integer(2, 5);
        const Tensor4 f = gen.network(m, n).adjacency();
        PolynomialFilter p;
        for (int k = 0; k <= 4; ++k) p.coefficients.push_back(gen.uniform());
        const Signal x = gen.matrix(m, n);
        const Signal y = gen.matrix(m, n);
        const double c = gen.uniform();
        CHECK(max_abs(apply_polynomial(p, f, x + c * y) - apply_polynomial(p, f, x) - c * apply_polynomial(p, f, y)) <
              1e-10);

        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m * n, m * n);
        Eigen::MatrixXd pw = Eigen::MatrixXd::Identity(m * n, m * n);
        for (double a : p.coefficients) {
            h += a * pw;
            pw = pw * f.matrix();
        }
        const Eigen::VectorXd oracle = h * x.reshaped<Eigen::RowMajor>();
        CHECK(max_abs(apply_polynomial(p, f, x).reshaped<Eigen::RowMajor>() - oracle) < 1e-10);
    }
}

TEST_CASE("spectral filter masks")
{
    Gen gen(53);
    const auto f = representing(gen.network(3, 4), TensorKind::Adjacency);
    const SingularSpectrum sing = hosvd(f);
    const OrderWiseSpectrum cp = orthogonal_cp(f);
    const Signal s = gen.matrix(3, 4);

    const SpectralMask ones{Eigen::VectorXd::Ones(3), Eigen::VectorXd::Ones(4), BasisSource::Singular};
    CHECK(max_abs(spectral_filter(s, sing, ones) - s) < 1e-12);
    CHECK(max_abs(spectral_filter(s, cp, {ones.layer, ones.entity, BasisSource::OrderWise}) - s) < 1e-12);

    Eigen::VectorXd low(4);
    low << 1, 1, 0, 0;
    const SpectralMask a{Eigen::VectorXd::Ones(3), low, BasisSource::Singular};
    const SpectralMask b{Eigen::VectorXd::Ones(3), Eigen::VectorXd::Ones(4) - low, BasisSource::Singular};
    CHECK(max_abs(spectral_filter(s, sing, a) + spectral_filter(s, sing, b) - s) < 1e-12);
    // Orthogonal projection: idempotent.
    const Signal once = spectral_filter(s, sing, a);
    CHECK(max_abs(spectral_filter(once, sing, a) - once) < 1e-12);

    // Oracle: Ef diag(g) Ef^T s Ee diag(f) Ee^T.
    const Eigen::MatrixXd wf = sing.layer_basis();
    const Eigen::MatrixXd we = sing.entity_basis();
    CHECK(max_abs(once - wf * wf.transpose() * s * we * low.asDiagonal() * we.transpose()) < 1e-12);

    CHECK_THROWS_AS(spectral_filter(s, sing, {Eigen::VectorXd::Ones(2), low}), ValidationError);
}

TEST_CASE("low-pass mask on x4 keeps the constant signal")
{
    const SingularSpectrum spec = hosvd(x4_adjacency());
    const std::vector<double> sigma(spec.entity_values().data(), spec.entity_values().data() + 2);
    const std::vector<Index> order = low_first_by_value(sigma);
    const SpectralMask mask = make_ranked_mask(order, 2, Band::LowPass, Side::Entity, 2);
    CHECK(max_abs(spectral_filter(Signal::Ones(2, 2), spec, mask) - Signal::Ones(2, 2)) < 1e-12);
}

TEST_CASE("ranked masks")
{
    const std::vector<double> values{3.0, 1.0, 0.5};
    const std::vector<Index> low = low_first_by_value(values);
    CHECK(low == std::vector<Index>{0, 1, 2});
    SpectralMask m = make_ranked_mask(low, 1, Band::LowPass, Side::Entity, 2);
    CHECK(max_abs(m.entity - Eigen::Vector3d(1, 0, 0)) == 0.0);
    CHECK(max_abs(m.layer - Eigen::Vector2d(1, 1)) == 0.0);
    m = make_ranked_mask(low, 1, Band::HighPass, Side::Layer, 4);
    CHECK(max_abs(m.layer - Eigen::Vector3d(0, 0, 1)) == 0.0);
    CHECK(m.entity.size() == 4);
    CHECK(make_ranked_mask(low, 0, Band::LowPass, Side::Entity, 1).entity.isZero());
    CHECK(make_ranked_mask(low, 3, Band::HighPass, Side::Entity, 1).entity == Eigen::VectorXd::Ones(3));
    CHECK_THROWS_AS(make_ranked_mask(low, 4, Band::LowPass, Side::Entity, 1), ValidationError);
    CHECK_THROWS_AS(make_ranked_mask(low, -1, Band::LowPass, Side::Entity, 1), ValidationError);

    const std::vector<double> tv{0.2, 0.0, 0.9};
    CHECK(low_first_by_tv(tv) == std::vector<Index>{1, 0, 2});
}

TEST_CASE("map_to_labels")
{
    Signal s(2, 3);
    s << 1, -1, 0.5, 1, -3, -0.5;
    CHECK(max_abs(map_to_labels(s, 0.0) - Eigen::Vector3d(1, -1, 0)) == 0.0);
    CHECK(max_abs(map_to_labels(s, 2.0) - Eigen::Vector3d(-1, -1, -1)) == 0.0);
}

TEST_CASE("adaptive fit matches an exhaustive search over one coefficient")
{
    Gen gen(54);
    for (int trial = 0; trial < 5; ++trial) {
        const Tensor4 f = gen.network(2, 6).adjacency();
        const Signal s = gen.matrix(2, 6);
        const std::vector<Index> labeled{0, 2, 3, 5};
        Eigen::VectorXd targets(4);
        for (Index r = 0; r < 4; ++r) targets(r) = gen.coin(0.5) ? 1.0 : -1.0;

        AdaptiveFitOptions options;
        options.max_order = 1;
        options.min_order = 1;
        const AdaptiveFit fit = fit_adaptive_polynomial(f, s, labeled, targets, options);

        // Oracle: evaluate every grid value of g_1 with g_0 = 0 through apply_polynomial.
        double best = std::numeric_limits<double>::infinity();
        for (double g : options.grid) {
            const PolynomialFilter p{{0.0, g / fit.rho}, TensorKind::Adjacency};
            best = std::min(best, mse_of_labels(map_to_labels(apply_polynomial(p, f, s), 0.0), labeled, targets));
        }
        CHECK(fit.mse == doctest::Approx(best));
        CHECK(fit.grid_values[0] == 0.0);
    }
}

TEST_CASE("adaptive fit invariants")
{
    Gen gen(55);
    for (int trial = 0; trial < 5; ++trial) {
        const Index m = gen.integer(1, 3);
        const Index n = gen.integer(4, 8);
        const Tensor4 f = gen.network(m, n).adjacency();
        const Signal s = gen.matrix(m, n);
        std::vector<Index> labeled;
        for (Index e = 0; e < n; e += 2) labeled.push_back(e);
        Eigen::VectorXd targets(static_cast<Index>(labeled.size()));
        for (Index r = 0; r < targets.size(); ++r) targets(r) = gen.coin(0.5) ? 1.0 : -1.0;

        AdaptiveFitOptions options;
        options.max_order = 4;
        options.sweeps = 3;
        const AdaptiveFit fit = fit_adaptive_polynomial(f, s, labeled, targets, options);
        REQUIRE(fit.mse_history.size() == 4);
        for (std::size_t k = 1; k < fit.mse_history.size(); ++k)
            CHECK(fit.mse_history[k] <= fit.mse_history[k - 1]);
        CHECK(fit.mse == fit.mse_history.back());
        for (double g : fit.grid_values)
            CHECK(std::find(options.grid.begin(), options.grid.end(), g) != options.grid.end());
        // The stored filter reproduces the reported MSE.
        const double replay = mse_of_labels(map_to_labels(apply_polynomial(fit.filter, f, s), 0.0), labeled, targets);
        CHECK(replay == doctest::Approx(fit.mse));
    }
}

TEST_CASE("adaptive fit with zero targets keeps all coefficients at zero")
{
    Gen gen(56);
    const Tensor4 f = gen.network(2, 5).adjacency();
    const std::vector<Index> labeled{0, 1, 2};
    const AdaptiveFit fit = fit_adaptive_polynomial(f, gen.matrix(2, 5), labeled, Eigen::VectorXd::Zero(3));
    CHECK(fit.mse == 0.0);
    for (double g : fit.grid_values) CHECK(g == 0.0);
}

TEST_CASE("adaptive fit rejects bad input")
{
    Gen gen(57);
    const Tensor4 f = gen.network(2, 5).adjacency();
    const Signal s = gen.matrix(2, 5);
    const std::vector<Index> none;
    const std::vector<Index> one{1};
    CHECK_THROWS_AS(fit_adaptive_polynomial(f, s, none, Eigen::VectorXd()), ValidationError);
    CHECK_THROWS_AS(fit_adaptive_polynomial(f, s, one, Eigen::VectorXd::Ones(2)), ValidationError);
    AdaptiveFitOptions reg;
    reg.regularizer = 0.1;
    CHECK_THROWS_AS(fit_adaptive_polynomial(f, s, one, Eigen::VectorXd::Ones(1), reg), ValidationError);
}

TEST_CASE("spectral radius estimate")
{
    Gen gen(58);
    const Tensor4 f = gen.network(3, 4).adjacency();
    const double exact = f.matrix().jacobiSvd().singularValues()(0);
    CHECK(spectral_radius_estimate(f) == doctest::Approx(exact).epsilon(1e-6));
    CHECK(spectral_radius_estimate(Tensor4::square(2, 2)) == 0.0);
}
