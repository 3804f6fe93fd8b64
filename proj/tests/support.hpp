#pragma once

// Fixtures and hand-rolled generators shared by the unit tests.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "mgsp/network.hpp"
#include "mgsp/tensor.hpp"

namespace testing {

using mgsp::Index;

// Independent of mgsp::Rng so that oracles never share code with the
// implementation under test.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo = -1.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    Index integer(Index lo, Index hi) { return std::uniform_int_distribution<Index>(lo, hi)(engine_); }
    bool coin(double p) { return uniform(0.0, 1.0) < p; }

    Eigen::MatrixXd matrix(Index rows, Index cols)
    {
        Eigen::MatrixXd m(rows, cols);
        for (Index r = 0; r < rows; ++r)
            for (Index c = 0; c < cols; ++c) m(r, c) = uniform();
        return m;
    }

    mgsp::Tensor4 tensor(Index d0, Index d1, Index d2, Index d3)
    {
        mgsp::Tensor4 t(d0, d1, d2, d3);
        for (auto& v : t.data()) v = uniform();
        return t;
    }

    // Random undirected weighted multilayer network.
    mgsp::MultilayerNetwork network(Index m, Index n, double density = 0.5)
    {
        auto adj = mgsp::Tensor4::square(m, n);
        for (Index a = 0; a < m; ++a)
            for (Index i = 0; i < n; ++i)
                for (Index b = 0; b < m; ++b)
                    for (Index j = 0; j < n; ++j) {
                        if (n * a + i >= n * b + j) continue;
                        if (coin(density)) adj(a, i, b, j) = adj(b, j, a, i) = uniform(0.1, 2.0);
                    }
        return {std::move(adj), false};
    }

private:
    std::mt19937_64 engine_;
};

// The 2-layer, 2-entity multiplex whose supra-adjacency is
// [[0,1,1,0],[1,0,0,1],[1,0,0,1],[0,1,1,0]].
inline mgsp::MultilayerNetwork x4()
{
    const std::vector<mgsp::Edge> edges{{0, 0, 0, 1, 1.0}, {0, 0, 1, 0, 1.0}, {0, 1, 1, 1, 1.0}, {1, 0, 1, 1, 1.0}};
    return mgsp::build_from_edges(2, 2, false, edges);
}

inline Eigen::MatrixXd hadamard()
{
    Eigen::MatrixXd h(2, 2);
    h << 1, 1, 1, -1;
    return h / std::sqrt(2.0);
}

// Columns of `a` equal those of `b` up to a per-column sign and a
// permutation.
inline bool same_columns_up_to_sign(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double tol)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    std::vector<bool> used(static_cast<std::size_t>(b.cols()), false);
    for (Index c = 0; c < a.cols(); ++c) {
        bool found = false;
        for (Index d = 0; d < b.cols() && !found; ++d) {
            if (used[static_cast<std::size_t>(d)]) continue;
            if ((a.col(c) - b.col(d)).cwiseAbs().maxCoeff() < tol || (a.col(c) + b.col(d)).cwiseAbs().maxCoeff() < tol) {
                used[static_cast<std::size_t>(d)] = true;
                found = true;
            }
        }
        if (!found) return false;
    }
    return true;
}

inline double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

} // namespace testing
