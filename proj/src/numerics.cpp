#include "mgsp/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>

#include "mgsp/error.hpp"
#include "mgsp/random.hpp"

namespace mgsp {

namespace {

// Index of the largest-magnitude entry; near-ties (within 1e-9 relative)
// resolve to the lowest index so rounding noise cannot flip the choice.
template <typename Vec>
Index pivot_index(const Vec& v)
{
    double best = 0.0;
    for (Index k = 0; k < v.size(); ++k) best = std::max(best, static_cast<double>(std::abs(v(k))));
    for (Index k = 0; k < v.size(); ++k)
        if (static_cast<double>(std::abs(v(k))) >= best * (1.0 - 1e-9)) return k;
    return 0;
}

Eigen::MatrixXd polar(const Eigen::MatrixXd& a)
{
    Eigen::JacobiSVD<Eigen::MatrixXd> solver(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return solver.matrixU() * solver.matrixV().transpose();
}

} // namespace

double asymmetry(const Eigen::MatrixXd& a)
{
    if (a.size() == 0) return 0.0;
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    return (a - a.transpose()).cwiseAbs().maxCoeff() / scale;
}

void normalize_signs(Eigen::MatrixXd& columns)
{
    for (Index c = 0; c < columns.cols(); ++c) {
        const Index p = pivot_index(columns.col(c));
        if (columns(p, c) < 0.0) columns.col(c) *= -1.0;
    }
}

void normalize_phases(Eigen::MatrixXcd& columns)
{
    for (Index c = 0; c < columns.cols(); ++c) {
        const double len = columns.col(c).norm();
        if (len == 0.0) continue;
        columns.col(c) /= len;
        const Index p = pivot_index(columns.col(c));
        const std::complex<double> z = columns(p, c);
        columns.col(c) *= std::conj(z) / std::abs(z);
        columns(p, c) = std::abs(columns(p, c));
    }
}

void resolve_degenerate(Eigen::MatrixXd& basis, const Eigen::VectorXd& values, const Eigen::MatrixXd& tiebreak,
                        double rel_tol)
{
    const Index n = values.size();
    if (n < 2 || tiebreak.rows() != basis.rows()) return;
    const double tol = rel_tol * std::max(values.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    const Eigen::MatrixXd sym = 0.5 * (tiebreak + tiebreak.transpose());
    Index start = 0;
    while (start < n) {
        Index end = start + 1;
        while (end < n && std::abs(values(end) - values(end - 1)) <= tol) ++end;
        const Index width = end - start;
        if (width > 1) {
            const Eigen::MatrixXd q = basis.middleCols(start, width);
            const Eigen::MatrixXd restricted = q.transpose() * sym * q;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (restricted + restricted.transpose()));
            // Descending tiebreak eigenvalue within the block.
            basis.middleCols(start, width) = q * es.eigenvectors().rowwise().reverse();
        }
        start = end;
    }
    normalize_signs(basis);
}

EigenPairs sym_eig(const Eigen::MatrixXd& a)
{
    require(a.rows() == a.cols(), "sym_eig: matrix must be square");
    require(asymmetry(a) <= kSymmetryTol, "sym_eig: matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (a + a.transpose()));
    if (es.info() != Eigen::Success) throw NumericError("sym_eig: eigensolver did not converge");
    EigenPairs out{es.eigenvalues(), es.eigenvectors()};
    normalize_signs(out.vectors);
    return out;
}

ComplexEigenPairs gen_eig(const Eigen::MatrixXd& a)
{
    require(a.rows() == a.cols(), "gen_eig: matrix must be square");
    const Index n = a.rows();
    Eigen::EigenSolver<Eigen::MatrixXd> es(a, true);
    if (es.info() != Eigen::Success) throw NumericError("gen_eig: eigensolver did not converge");
    const Eigen::VectorXcd raw_values = es.eigenvalues();
    Eigen::MatrixXcd raw_vectors = es.eigenvectors();

    const double scale = std::max(1.0, raw_values.cwiseAbs().maxCoeff());
    const double tie = 1e-9 * scale;
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) {
        const auto vx = raw_values(x);
        const auto vy = raw_values(y);
        if (std::abs(vx.real() - vy.real()) > tie) return vx.real() < vy.real();
        if (std::abs(vx.imag() - vy.imag()) > tie) return vx.imag() < vy.imag();
        return false;
    });

    ComplexEigenPairs out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Index k = 0; k < n; ++k) {
        const Index src = order[static_cast<std::size_t>(k)];
        out.values(k) = raw_values(src);
        out.vectors.col(k) = raw_vectors.col(src);
    }
    normalize_phases(out.vectors);

    const double anorm = a.norm();
    const Eigen::MatrixXcd ac = a.cast<std::complex<double>>();
    const double residual = (ac * out.vectors - out.vectors * out.values.asDiagonal()).colwise().norm().maxCoeff();
    if (n > 0 && residual > 1e-8 * anorm && residual > 0.0)
        throw NumericError("gen_eig: eigenpair residual " + std::to_string(residual) + " exceeds tolerance");

    Eigen::JacobiSVD<Eigen::MatrixXcd> conditioning(out.vectors);
    const auto& sv = conditioning.singularValues();
    if (n > 0 && sv(n - 1) <= 1e-10 * sv(0))
        throw NumericError("gen_eig: eigenvector matrix is numerically singular (defective input)");
    out.inverse = out.vectors.inverse();
    return out;
}

SvdFactors svd(const Eigen::MatrixXd& a)
{
    Eigen::BDCSVD<Eigen::MatrixXd> solver(a, Eigen::ComputeFullU | Eigen::ComputeThinV);
    SvdFactors out{solver.matrixU(), solver.singularValues(), solver.matrixV()};
    const Index k = out.singular.size();
    for (Index c = 0; c < k; ++c) {
        const Index p = pivot_index(out.u.col(c));
        if (out.u(p, c) < 0.0) {
            out.u.col(c) *= -1.0;
            out.v.col(c) *= -1.0;
        }
    }
    if (out.u.cols() > k) {
        Eigen::MatrixXd tail = out.u.rightCols(out.u.cols() - k);
        normalize_signs(tail);
        out.u.rightCols(out.u.cols() - k) = tail;
    }
    return out;
}

Eigen::MatrixXd nearest_orthogonal(const Eigen::MatrixXd& a)
{
    require(a.rows() == a.cols() && a.rows() > 0, "nearest_orthogonal: matrix must be square and non-empty");
    Eigen::JacobiSVD<Eigen::MatrixXd> solver(a);
    const auto& sv = solver.singularValues();
    if (sv(0) == 0.0 || sv(sv.size() - 1) <= 1e-12 * sv(0))
        throw NumericError("nearest_orthogonal: input is rank deficient");
    return polar(a);
}

KMeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed)
{
    const Index n = points.rows();
    require(k >= 1 && k <= n, "kmeans: k must lie in [1, number of points]");
    Rng rng(seed);

    Eigen::MatrixXd centers(k, points.cols());
    std::vector<bool> chosen(static_cast<std::size_t>(n), false);
    auto first = static_cast<Index>(rng.index(static_cast<std::uint64_t>(n)));
    centers.row(0) = points.row(first);
    chosen[static_cast<std::size_t>(first)] = true;

    Eigen::VectorXd d2 = (points.rowwise() - centers.row(0)).rowwise().squaredNorm();
    for (int c = 1; c < k; ++c) {
        const double total = d2.sum();
        Index pick = -1;
        if (total > 0.0) {
            const double r = rng.uniform() * total;
            double acc = 0.0;
            for (Index p = 0; p < n; ++p) {
                acc += d2(p);
                if (acc > r && d2(p) > 0.0) {
                    pick = p;
                    break;
                }
            }
        }
        if (pick < 0)
            for (Index p = 0; p < n; ++p)
                if (!chosen[static_cast<std::size_t>(p)]) {
                    pick = p;
                    break;
                }
        chosen[static_cast<std::size_t>(pick)] = true;
        centers.row(c) = points.row(pick);
        d2 = d2.cwiseMin((points.rowwise() - centers.row(c)).rowwise().squaredNorm());
        d2(pick) = 0.0;
    }

    std::vector<int> assign(static_cast<std::size_t>(n), -1);
    KMeansResult out;
    for (int iter = 1; iter <= 300; ++iter) {
        bool changed = false;
        for (Index p = 0; p < n; ++p) {
            int best = 0;
            double best_d = (points.row(p) - centers.row(0)).squaredNorm();
            for (int c = 1; c < k; ++c) {
                const double d = (points.row(p) - centers.row(c)).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (assign[static_cast<std::size_t>(p)] != best) {
                assign[static_cast<std::size_t>(p)] = best;
                changed = true;
            }
        }
        out.iterations = iter;
        if (!changed) break;
        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
        std::vector<Index> counts(static_cast<std::size_t>(k), 0);
        for (Index p = 0; p < n; ++p) {
            sums.row(assign[static_cast<std::size_t>(p)]) += points.row(p);
            ++counts[static_cast<std::size_t>(assign[static_cast<std::size_t>(p)])];
        }
        for (int c = 0; c < k; ++c)
            if (counts[static_cast<std::size_t>(c)] > 0)
                centers.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
    }

    std::vector<int> relabel(static_cast<std::size_t>(k), -1);
    int next = 0;
    out.labels.resize(static_cast<std::size_t>(n));
    for (Index p = 0; p < n; ++p) {
        const int c = assign[static_cast<std::size_t>(p)];
        if (relabel[static_cast<std::size_t>(c)] < 0) relabel[static_cast<std::size_t>(c)] = next++;
        out.labels[static_cast<std::size_t>(p)] = relabel[static_cast<std::size_t>(c)];
        out.inertia += (points.row(p) - centers.row(c)).squaredNorm();
    }
    return out;
}

} // namespace mgsp
