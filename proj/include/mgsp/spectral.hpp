#pragma once

#include <array>
#include <span>
#include <vector>

#include "mgsp/network.hpp"
#include "mgsp/tensor.hpp"

namespace mgsp {

// ---------------------------------------------------------------------------
// Joint spectrum: eigen-tensors of F obtained from a flattened supra-matrix.
// ---------------------------------------------------------------------------

struct JointSpectrum {
    Index layers = 0;
    Index entities = 0;
    bool directed = false;
    Convention convention = Convention::LayerWise;  // flattening used to solve

    // Undirected: real values ascending, columns of `vectors` are the
    // eigen-tensors flattened layer-wise (regardless of `convention`).
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;

    // Directed: complex values ascending by (real, imag); columns of `right`
    // are V_k, rows of `left` are U_k, both flattened layer-wise.
    Eigen::VectorXcd complex_values;
    Eigen::MatrixXcd right;
    Eigen::MatrixXcd left;

    Index size() const { return layers * entities; }
    /// V_k as an M x N matrix (undirected only).
    Signal tensor(Index k) const;
};

JointSpectrum joint_spectrum(const RepresentingTensor& f, Convention convention = Convention::LayerWise);

/// sum_k lambda_k V_k o V_k (undirected) or Re sum_k lambda_k V_k o U_k.
Tensor4 reconstruct(const JointSpectrum& spec);

/// Coefficients <V_k, s> in spectral order (undirected).
Eigen::VectorXd mgft_joint(const JointSpectrum& spec, const Signal& s);
/// s = sum_k c_k V_k (undirected).
Signal imgft_joint(const JointSpectrum& spec, const Eigen::VectorXd& coefficients);

/// Directed transform through the left eigen-tensors: c_k = <U_k, s>.
Eigen::VectorXcd mgft_joint_directed(const JointSpectrum& spec, const Signal& s);
Eigen::MatrixXcd imgft_joint_directed(const JointSpectrum& spec, const Eigen::VectorXcd& coefficients);

// ---------------------------------------------------------------------------
// Order-wise spectrum from a structured orthogonal CP decomposition
//   F ~ sum_{a,i} lambda[a,i] f_a o e_i o f_a o e_i
// ---------------------------------------------------------------------------

struct OrderWiseSpectrum {
    Eigen::MatrixXd layer_basis;    // E_f, columns f_a
    Eigen::MatrixXd entity_basis;   // E_e, columns e_i
    Eigen::MatrixXd values;         // lambda, M x N
    double residual = 0.0;          // |F - Fhat|_F / |F|_F
    int iterations = 0;
    bool converged = false;
    std::vector<double> residual_history;
};

struct CpOptions {
    double tol = 1e-8;
    int max_iter = 500;
};

/// Alternating fit: bases start from the HOSVD factors; each sweep refreshes
/// lambda[a,i] = <F, f_a o e_i o f_a o e_i> and moves each basis to the
/// polar factor of its objective gradient (with a backtracking shift so the
/// fit never gets worse). Undirected input only.
OrderWiseSpectrum orthogonal_cp(const RepresentingTensor& f, CpOptions options = {});

Tensor4 reconstruct(const OrderWiseSpectrum& spec);

enum class TransformMode { Layer, Entity, Joint };

/// Layer: Ef^T s. Entity: s Ee. Joint: Ef^T s Ee.
Signal mgft_orderwise(const OrderWiseSpectrum& spec, const Signal& s, TransformMode mode = TransformMode::Joint);
/// Layer: Ef c. Entity: c Ee^T. Joint: Ef c Ee^T.
Signal imgft_orderwise(const OrderWiseSpectrum& spec, const Signal& c, TransformMode mode = TransformMode::Joint);

// ---------------------------------------------------------------------------
// Singular spectrum from the HOSVD  F = S x1 U1 x2 U2 x3 U3 x4 U4.
// ---------------------------------------------------------------------------

struct SingularSpectrum {
    bool directed = false;
    std::array<Eigen::MatrixXd, 4> factors;        // U1..U4
    std::array<Eigen::VectorXd, 4> mode_values;    // n-mode singular values
    Tensor4 core;
    double residual = 0.0;                         // relative reconstruction error

    const Eigen::MatrixXd& layer_basis() const { return factors[0]; }   // W_f
    const Eigen::MatrixXd& entity_basis() const { return factors[1]; }  // W_e
    const Eigen::VectorXd& layer_values() const { return mode_values[0]; }   // gamma
    const Eigen::VectorXd& entity_values() const { return mode_values[1]; }  // sigma
    /// gamma[a] * sigma[i], M x N.
    Eigen::MatrixXd joint_values() const;
};

/// For undirected F the factors satisfy U3 = U1 and U4 = U2. Inside blocks
/// of repeated singular values the basis is fixed by diagonalizing the
/// partial traces sum_i F[:,i,:,i] (layer modes) and sum_a F[a,:,a,:]
/// (entity modes).
SingularSpectrum hosvd(const RepresentingTensor& f);

Tensor4 reconstruct(const SingularSpectrum& spec);

Signal mgst(const SingularSpectrum& spec, const Signal& s, TransformMode mode = TransformMode::Joint);
Signal imgst(const SingularSpectrum& spec, const Signal& c, TransformMode mode = TransformMode::Joint);

// ---------------------------------------------------------------------------
// Truncated Tucker by higher-order orthogonal iteration.
// ---------------------------------------------------------------------------

struct TuckerResult {
    Tensor4 core;
    std::array<Eigen::MatrixXd, 4> factors;
    double residual = 0.0;
    std::vector<double> residual_history;   // truncated HOSVD first
    int iterations = 0;
    bool converged = false;
};

TuckerResult tucker_hooi(const Tensor4& f, std::array<Index, 4> ranks, double tol = 1e-8, int max_iter = 200);

Tensor4 reconstruct(const TuckerResult& t);

// ---------------------------------------------------------------------------
// Total variation and frequency ranking.
// ---------------------------------------------------------------------------

enum class Norm { L1, L2 };

double signal_norm(const Signal& s, Norm norm);

/// |V - (F <> V) / |lambda|_max|. A zero |lambda|_max uses a factor of 1.
double total_variation(const Tensor4& f, const Signal& component, double lambda_abs_max, Norm norm = Norm::L1);
/// |1 - lambda / |lambda|_max| * |V|, valid for exact eigen-tensors.
double total_variation_closed_form(double lambda, double lambda_abs_max, const Signal& component, Norm norm = Norm::L1);

struct FrequencyRanking {
    Norm norm = Norm::L1;
    double lambda_abs_max = 0.0;
    bool degenerate_scale = false;   // lambda_abs_max was 0
    std::vector<double> tv;          // by spectral index
    std::vector<Index> order;        // order[r] = spectral index of rank r (highest frequency first)
    std::vector<Index> rank;         // inverse of order
};

/// Spectral components with their values, in spectral-index order.
struct SpectralComponents {
    std::vector<double> values;
    std::vector<Signal> tensors;
};

SpectralComponents components(const JointSpectrum& spec);
/// Index k = N*a + i pairs lambda[a,i] with f_a e_i^T.
SpectralComponents components(const OrderWiseSpectrum& spec);
SpectralComponents components(const SingularSpectrum& spec);

/// Rescales every component to unit norm; zero components stay zero.
SpectralComponents unit_components(const SpectralComponents& comps, Norm norm);

/// Ranks by descending TV; ties go to the lower spectral index.
FrequencyRanking rank_frequencies(const Tensor4& f, const SpectralComponents& comps, Norm norm = Norm::L1);

} // namespace mgsp
