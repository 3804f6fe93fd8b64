#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "mgsp/tensor.hpp"

namespace mgsp {

// Dense kernels shared by the spectral modules. Every routine fixes its
// ordering and sign conventions here so downstream results are
// reproducible.
//
// Sign convention: each vector is scaled so that its largest-magnitude
// entry is positive real; ties go to the lowest index.

struct EigenPairs {
    Eigen::VectorXd values;    // ascending
    Eigen::MatrixXd vectors;   // column k pairs with values(k)
};

struct ComplexEigenPairs {
    Eigen::VectorXcd values;   // ascending by (real, imag)
    Eigen::MatrixXcd vectors;  // right eigenvectors, unit 2-norm
    Eigen::MatrixXcd inverse;  // vectors^-1; its rows are the left eigenvectors
};

struct SvdFactors {
    Eigen::MatrixXd u;
    Eigen::VectorXd singular;  // descending
    Eigen::MatrixXd v;
};

/// Tolerance used to decide symmetry of an input matrix.
inline constexpr double kSymmetryTol = 1e-10;

EigenPairs sym_eig(const Eigen::MatrixXd& a);

/// Right eigenpairs of a general real matrix. Throws NumericError when the
/// residual exceeds 1e-8 |A| or the eigenvector matrix is numerically
/// singular (defective input).
ComplexEigenPairs gen_eig(const Eigen::MatrixXd& a);

/// Full SVD: U (r x r), singular values (min(r,c)), V (c x c).
SvdFactors svd(const Eigen::MatrixXd& a);

/// Polar factor U V^T of a full-rank square matrix.
Eigen::MatrixXd nearest_orthogonal(const Eigen::MatrixXd& a);

struct KMeansResult {
    std::vector<int> labels;   // renumbered in order of first appearance
    double inertia = 0.0;
    int iterations = 0;
};

/// Lloyd iterations from a k-means++ seeding; rows of `points` are samples.
/// Stops when assignments are stable or after 300 iterations.
KMeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed);

/// Applies the sign convention to every column in place.
void normalize_signs(Eigen::MatrixXd& columns);
void normalize_phases(Eigen::MatrixXcd& columns);

/// Picks a deterministic basis inside each block of repeated values: the
/// block's columns are rotated to diagonalize the symmetric part of
/// `tiebreak` restricted to the block (descending). `values` must be
/// sorted; a block is a run of consecutive values closer than
/// rel_tol * max|value|. Signs are normalized afterwards.
void resolve_degenerate(Eigen::MatrixXd& basis, const Eigen::VectorXd& values, const Eigen::MatrixXd& tiebreak,
                        double rel_tol = 1e-9);

/// Largest |a_ij - a_ji| relative to max(1, max|a_ij|).
double asymmetry(const Eigen::MatrixXd& a);

} // namespace mgsp
