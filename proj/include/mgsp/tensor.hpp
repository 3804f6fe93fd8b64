#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mgsp {

using Index = Eigen::Index;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// An M x N multilayer signal: entry (alpha, i) is the sample at entity i's
/// node in layer alpha.
using Signal = Eigen::MatrixXd;

enum class Convention { LayerWise, EntityWise };

/// Dense fourth-order array stored row-major.
///
/// For the M x N x M x N tensors of a multilayer network, the row-major
/// layout coincides with the layer-wise supra-matrix: element (a, i, b, j)
/// lives at row N*a + i, column N*b + j of matrix(). Tucker cores with
/// arbitrary dimensions use the same class.
class Tensor4 {
public:
    Tensor4() = default;
    Tensor4(Index d0, Index d1, Index d2, Index d3);

    static Tensor4 square(Index layers, Index entities) { return {layers, entities, layers, entities}; }
    /// I[a,i,b,j] = delta(a,b) delta(i,j); the neutral element of contract().
    static Tensor4 identity(Index layers, Index entities);

    const std::array<Index, 4>& dims() const { return dims_; }
    Index dim(int mode) const { return dims_[static_cast<std::size_t>(mode)]; }
    Index size() const { return static_cast<Index>(data_.size()); }
    bool is_square() const { return dims_[0] == dims_[2] && dims_[1] == dims_[3]; }

    double& operator()(Index a, Index i, Index b, Index j) { return data_[offset(a, i, b, j)]; }
    double operator()(Index a, Index i, Index b, Index j) const { return data_[offset(a, i, b, j)]; }

    std::span<const double> data() const { return data_; }
    std::span<double> data() { return data_; }

    /// (d0*d1) x (d2*d3) view; the layer-wise supra-matrix for square tensors.
    Eigen::Map<const RowMatrix> matrix() const
    {
        return {data_.data(), dims_[0] * dims_[1], dims_[2] * dims_[3]};
    }
    Eigen::Map<RowMatrix> matrix() { return {data_.data(), dims_[0] * dims_[1], dims_[2] * dims_[3]}; }

    double norm() const { return matrix().norm(); }

    Tensor4& operator+=(const Tensor4& other);
    Tensor4& operator-=(const Tensor4& other);
    Tensor4& operator*=(double scale);

    friend bool operator==(const Tensor4&, const Tensor4&) = default;

private:
    std::size_t offset(Index a, Index i, Index b, Index j) const
    {
        return static_cast<std::size_t>(((a * dims_[1] + i) * dims_[2] + b) * dims_[3] + j);
    }

    std::array<Index, 4> dims_{0, 0, 0, 0};
    std::vector<double> data_;
};

Tensor4 operator+(Tensor4 lhs, const Tensor4& rhs);
Tensor4 operator-(Tensor4 lhs, const Tensor4& rhs);
Tensor4 operator*(double scale, Tensor4 t);

/// MN x MN realization of a square tensor under a flattening convention.
struct SupraMatrix {
    Convention convention = Convention::LayerWise;
    Index layers = 0;
    Index entities = 0;
    Eigen::MatrixXd data;
};

/// Row/column of node (alpha, i) in a supra-matrix or flattened signal.
inline Index supra_index(Convention c, Index layers, Index entities, Index alpha, Index i)
{
    return c == Convention::LayerWise ? entities * alpha + i : layers * i + alpha;
}

SupraMatrix flatten(const Tensor4& f, Convention convention);
Tensor4 unflatten(const SupraMatrix& s);

Eigen::VectorXd flatten_signal(const Signal& s, Convention convention);
Signal unflatten_signal(const Eigen::VectorXd& v, Index layers, Index entities, Convention convention);

/// The shift F <> s: s'[a,i] = sum_{b,j} F[a,i,b,j] s[b,j].
Signal shift(const Tensor4& f, const Signal& s);

/// The contraction U (.) V: W[a,i,e,p] = sum_{b,j} U[a,i,b,j] V[b,j,e,p].
Tensor4 contract_tensors(const Tensor4& u, const Tensor4& v);

/// Outer product of two M x N matrices: T[a,i,b,j] = x[a,i] y[b,j].
Tensor4 outer(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

/// Mode-n unfolding: row index is the mode-n index, columns enumerate the
/// remaining indices in row-major order.
Eigen::MatrixXd unfold(const Tensor4& t, int mode);

/// n-mode product T x_n U with U of shape J x dim(n).
Tensor4 mode_product(const Tensor4& t, int mode, const Eigen::MatrixXd& u);

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Frobenius inner product.
inline double inner(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a.array() * b.array()).sum(); }

} // namespace mgsp
