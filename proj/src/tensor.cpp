#include "mgsp/tensor.hpp"

#include "mgsp/error.hpp"

#include <string>

namespace mgsp {

Tensor4::Tensor4(Index d0, Index d1, Index d2, Index d3) : dims_{d0, d1, d2, d3}
{
    require(d0 >= 0 && d1 >= 0 && d2 >= 0 && d3 >= 0, "tensor dimensions must be non-negative");
    data_.assign(static_cast<std::size_t>(d0 * d1 * d2 * d3), 0.0);
}

Tensor4 Tensor4::identity(Index layers, Index entities)
{
    auto t = square(layers, entities);
    for (Index a = 0; a < layers; ++a)
        for (Index i = 0; i < entities; ++i) t(a, i, a, i) = 1.0;
    return t;
}

Tensor4& Tensor4::operator+=(const Tensor4& other)
{
    require(dims_ == other.dims_, "tensor shape mismatch in addition");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
    return *this;
}

Tensor4& Tensor4::operator-=(const Tensor4& other)
{
    require(dims_ == other.dims_, "tensor shape mismatch in subtraction");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
    return *this;
}

Tensor4& Tensor4::operator*=(double scale)
{
    for (auto& x : data_) x *= scale;
    return *this;
}

Tensor4 operator+(Tensor4 lhs, const Tensor4& rhs) { return lhs += rhs; }
Tensor4 operator-(Tensor4 lhs, const Tensor4& rhs) { return lhs -= rhs; }
Tensor4 operator*(double scale, Tensor4 t) { return t *= scale; }

namespace {

void require_square(const Tensor4& f, const char* what)
{
    require(f.is_square(), std::string(what) + ": expected an M x N x M x N tensor");
}

} // namespace

SupraMatrix flatten(const Tensor4& f, Convention convention)
{
    require_square(f, "flatten");
    const Index m = f.dim(0);
    const Index n = f.dim(1);
    SupraMatrix out{convention, m, n, {}};
    if (convention == Convention::LayerWise) {
        out.data = f.matrix();
        return out;
    }
    out.data.resize(m * n, m * n);
    for (Index a = 0; a < m; ++a)
        for (Index i = 0; i < n; ++i)
            for (Index b = 0; b < m; ++b)
                for (Index j = 0; j < n; ++j) out.data(m * i + a, m * j + b) = f(a, i, b, j);
    return out;
}

Tensor4 unflatten(const SupraMatrix& s)
{
    const Index m = s.layers;
    const Index n = s.entities;
    require(s.data.rows() == m * n && s.data.cols() == m * n, "unflatten: supra-matrix is not MN x MN");
    auto f = Tensor4::square(m, n);
    for (Index a = 0; a < m; ++a)
        for (Index i = 0; i < n; ++i)
            for (Index b = 0; b < m; ++b)
                for (Index j = 0; j < n; ++j)
                    f(a, i, b, j) = s.data(supra_index(s.convention, m, n, a, i), supra_index(s.convention, m, n, b, j));
    return f;
}

Eigen::VectorXd flatten_signal(const Signal& s, Convention convention)
{
    const Index m = s.rows();
    const Index n = s.cols();
    Eigen::VectorXd v(m * n);
    for (Index a = 0; a < m; ++a)
        for (Index i = 0; i < n; ++i) v(supra_index(convention, m, n, a, i)) = s(a, i);
    return v;
}

Signal unflatten_signal(const Eigen::VectorXd& v, Index layers, Index entities, Convention convention)
{
    require(v.size() == layers * entities, "unflatten_signal: length is not M*N");
    Signal s(layers, entities);
    for (Index a = 0; a < layers; ++a)
        for (Index i = 0; i < entities; ++i) s(a, i) = v(supra_index(convention, layers, entities, a, i));
    return s;
}

Signal shift(const Tensor4& f, const Signal& s)
{
    require_square(f, "shift");
    require(s.rows() == f.dim(0) && s.cols() == f.dim(1), "shift: signal shape does not match the tensor");
    const Eigen::VectorXd x = flatten_signal(s, Convention::LayerWise);
    const Eigen::VectorXd y = f.matrix() * x;
    return unflatten_signal(y, f.dim(0), f.dim(1), Convention::LayerWise);
}

Tensor4 contract_tensors(const Tensor4& u, const Tensor4& v)
{
    require_square(u, "contract_tensors");
    require(u.dims() == v.dims(), "contract_tensors: shape mismatch");
    auto w = Tensor4::square(u.dim(0), u.dim(1));
    w.matrix().noalias() = u.matrix() * v.matrix();
    return w;
}

Tensor4 outer(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y)
{
    Tensor4 t(x.rows(), x.cols(), y.rows(), y.cols());
    const Eigen::VectorXd xv = flatten_signal(x, Convention::LayerWise);
    const Eigen::VectorXd yv = flatten_signal(y, Convention::LayerWise);
    t.matrix().noalias() = xv * yv.transpose();
    return t;
}

Eigen::MatrixXd unfold(const Tensor4& t, int mode)
{
    require(mode >= 0 && mode < 4, "unfold: mode must be in [0, 4)");
    const auto& d = t.dims();
    std::array<int, 3> rest{};
    for (int m = 0, k = 0; m < 4; ++m)
        if (m != mode) rest[static_cast<std::size_t>(k++)] = m;

    const Index cols = t.size() / std::max<Index>(d[static_cast<std::size_t>(mode)], 1);
    Eigen::MatrixXd out(d[static_cast<std::size_t>(mode)], cols);
    std::array<Index, 4> idx{};
    for (idx[0] = 0; idx[0] < d[0]; ++idx[0])
        for (idx[1] = 0; idx[1] < d[1]; ++idx[1])
            for (idx[2] = 0; idx[2] < d[2]; ++idx[2])
                for (idx[3] = 0; idx[3] < d[3]; ++idx[3]) {
                    Index col = 0;
                    for (int r : rest) col = col * d[static_cast<std::size_t>(r)] + idx[static_cast<std::size_t>(r)];
                    out(idx[static_cast<std::size_t>(mode)], col) = t(idx[0], idx[1], idx[2], idx[3]);
                }
    return out;
}

Tensor4 mode_product(const Tensor4& t, int mode, const Eigen::MatrixXd& u)
{
    require(mode >= 0 && mode < 4, "mode_product: mode must be in [0, 4)");
    const auto m = static_cast<std::size_t>(mode);
    require(u.cols() == t.dims()[m], "mode_product: matrix columns do not match the mode dimension");
    auto d = t.dims();
    d[m] = u.rows();
    Tensor4 out(d[0], d[1], d[2], d[3]);

    // Rows of the unfolding map back through the same column enumeration.
    const Eigen::MatrixXd product = u * unfold(t, mode);
    std::array<int, 3> rest{};
    for (int q = 0, k = 0; q < 4; ++q)
        if (q != mode) rest[static_cast<std::size_t>(k++)] = q;
    std::array<Index, 4> idx{};
    for (idx[0] = 0; idx[0] < d[0]; ++idx[0])
        for (idx[1] = 0; idx[1] < d[1]; ++idx[1])
            for (idx[2] = 0; idx[2] < d[2]; ++idx[2])
                for (idx[3] = 0; idx[3] < d[3]; ++idx[3]) {
                    Index col = 0;
                    for (int r : rest) col = col * d[static_cast<std::size_t>(r)] + idx[static_cast<std::size_t>(r)];
                    out(idx[0], idx[1], idx[2], idx[3]) = product(idx[m], col);
                }
    return out;
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b)
{
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index r = 0; r < a.rows(); ++r)
        for (Index c = 0; c < a.cols(); ++c) out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    return out;
}

} // namespace mgsp
