#pragma once

#include <span>
#include <vector>

#include "mgsp/network.hpp"
#include "mgsp/spectral.hpp"
#include "mgsp/tensor.hpp"

namespace mgsp {

/// F^[tau] by repeated contraction; tau = 0 gives the identity tensor.
Tensor4 poly_power(const Tensor4& f, int tau);
/// F^[tau] = sum_k lambda_k^tau V_k o V_k from an undirected joint spectrum.
Tensor4 poly_power(const JointSpectrum& spec, int tau);

struct PolynomialFilter {
    std::vector<double> coefficients;   // a_0 .. a_K
    TensorKind kind = TensorKind::Adjacency;

    int order() const { return static_cast<int>(coefficients.size()) - 1; }
};

/// sum_k a_k (F^[k] <> s), evaluated as repeated shifts.
Signal apply_polynomial(const PolynomialFilter& filter, const Tensor4& f, const Signal& s);

enum class BasisSource { OrderWise, Singular };

struct SpectralMask {
    Eigen::VectorXd layer;    // g, one entry per layer component
    Eigen::VectorXd entity;   // f, one entry per entity component
    BasisSource source = BasisSource::Singular;
};

/// Ef diag(g) Ef^T s Ee diag(f) Ee^T.
Signal spectral_filter(const Signal& s, const OrderWiseSpectrum& basis, const SpectralMask& mask);
Signal spectral_filter(const Signal& s, const SingularSpectrum& basis, const SpectralMask& mask);

enum class Band { LowPass, HighPass };
enum class Side { Layer, Entity };

/// Component indices from lowest to highest frequency when a larger value
/// means a lower frequency (singular values, CP magnitudes).
std::vector<Index> low_first_by_value(std::span<const double> values);
/// Component indices from lowest to highest frequency by ascending TV.
std::vector<Index> low_first_by_tv(std::span<const double> tv);

/// Binary mask keeping `keep` components at the low or high end of
/// `low_first` on `side`; the other side is all ones of length `other_dim`.
SpectralMask make_ranked_mask(std::span<const Index> low_first, Index keep, Band band, Side side, Index other_dim,
                              BasisSource source = BasisSource::Singular);

// --- greedy adaptive fit ------------------------------------------------------

struct AdaptiveFitOptions {
    int max_order = 10;
    /// Coefficients below this order stay at zero.
    int min_order = 0;
    std::vector<double> grid{0.0, 0.25, -0.25, 0.5, -0.5, 1.0, -1.0};
    int sweeps = 2;
    double threshold = 0.0;
    /// Weight of the smoothness regularizer; only 0 is supported.
    double regularizer = 0.0;
};

struct AdaptiveFit {
    PolynomialFilter filter;          // a_k = g_k / rho^k
    std::vector<double> grid_values;  // g_k as chosen from the grid
    double rho = 1.0;                 // spectral-radius estimate used to normalize powers
    double mse = 0.0;
    /// Training MSE at the start and after each sweep.
    std::vector<double> mse_history;
};

/// Spectral-radius estimate of the flattened tensor (power iteration on F^T F).
double spectral_radius_estimate(const Tensor4& f);

/// Column mean mapped through sign(x - threshold), with sign(0) = 0.
Eigen::VectorXd map_to_labels(const Signal& s, double threshold);

/// Coordinate-wise greedy grid search over g_k for the filter
/// sum_k g_k (F / rho)^[k] <> s. The objective is the MSE between mapped
/// outputs and `targets` on the `labeled` entities. Ties keep the current
/// value, so the MSE never increases.
AdaptiveFit fit_adaptive_polynomial(const Tensor4& f, const Signal& s, std::span<const Index> labeled,
                                    const Eigen::VectorXd& targets, const AdaptiveFitOptions& options = {});

} // namespace mgsp
