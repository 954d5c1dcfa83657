#include "ph/point_cloud.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ph/rng.hpp"

namespace ph {

namespace {
constexpr double kTwoPi = 6.283185307179586476925287;

void check_sample_args(std::int64_t N, const char* who) {
    if (N < 1) throw ArgumentError(std::string(who) + ": N must be >= 1");
}
}  // namespace

void validate_standard_params(const StandardAssumptionParams& sp) {
    if (!(sp.a > 0.0)) throw ArgumentError("standard assumption: a must be positive");
    if (!(sp.b > 0.0)) throw ArgumentError("standard assumption: b must be positive");
    if (!(sp.r0 >= 0.0)) throw ArgumentError("standard assumption: r0 must be non-negative");
}

void validate_metric(const FiniteMetricSpace& M) {
    const auto& d = M.dist;
    if (d.rows() != d.cols())
        throw DataError("distance matrix is not square: " + std::to_string(d.rows()) +
                        "x" + std::to_string(d.cols()));
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
        if (d(i, i) != 0.0)
            throw DataError("distance matrix diagonal entry dist[" + std::to_string(i) +
                            "][" + std::to_string(i) + "] is not zero");
        for (Eigen::Index j = 0; j < d.cols(); ++j) {
            const double v = d(i, j);
            if (!std::isfinite(v))
                throw DataError("distance matrix entry dist[" + std::to_string(i) + "][" +
                                std::to_string(j) + "] is not finite");
            if (v < 0.0)
                throw DataError("distance matrix entry dist[" + std::to_string(i) + "][" +
                                std::to_string(j) + "] is negative");
            if (v != d(j, i))
                throw DataError("distance matrix is asymmetric at dist[" +
                                std::to_string(i) + "][" + std::to_string(j) + "]");
        }
    }
}

PointCloud sample_torus(std::int64_t N, double outer_radius, double inner_radius,
                        std::uint64_t seed) {
    check_sample_args(N, "sample_torus");
    if (!(outer_radius > 0.0) || !(inner_radius > 0.0) || inner_radius >= outer_radius)
        throw ArgumentError("sample_torus: need 0 < inner_radius < outer_radius");
    PointCloud X;
    X.points.resize(N, 3);
    RandomStream rs(seed);
    for (std::int64_t i = 0; i < N; ++i) {
        const double u = rs.uniform(0.0, kTwoPi);
        const double v = rs.uniform(0.0, kTwoPi);
        const double w = outer_radius + inner_radius * std::cos(v);
        X.points(i, 0) = w * std::cos(u);
        X.points(i, 1) = w * std::sin(u);
        X.points(i, 2) = inner_radius * std::sin(v);
    }
    return X;
}

PointCloud sample_sphere(std::int64_t N, double radius, int ambient_dim,
                         std::uint64_t seed) {
    check_sample_args(N, "sample_sphere");
    if (!(radius > 0.0)) throw ArgumentError("sample_sphere: radius must be positive");
    if (ambient_dim < 2) throw ArgumentError("sample_sphere: ambient_dim must be >= 2");
    PointCloud X;
    X.points.resize(N, ambient_dim);
    RandomStream rs(seed);
    for (std::int64_t i = 0; i < N; ++i) {
        double norm2 = 0.0;
        do {
            for (int k = 0; k < ambient_dim; ++k) {
                const double g = rs.normal();
                X.points(i, k) = g;
                norm2 += g * g;
            }
        } while (norm2 == 0.0);
        X.points.row(i) *= radius / std::sqrt(norm2);
    }
    return X;
}

PointCloud sample_annulus(std::int64_t N, double outer_radius, double inner_radius,
                          std::uint64_t seed) {
    check_sample_args(N, "sample_annulus");
    if (!(inner_radius >= 0.0) || !(outer_radius > inner_radius))
        throw ArgumentError("sample_annulus: need 0 <= inner_radius < outer_radius");
    PointCloud X;
    X.points.resize(N, 2);
    RandomStream rs(seed);
    const double r2 = inner_radius * inner_radius;
    const double R2 = outer_radius * outer_radius;
    for (std::int64_t i = 0; i < N; ++i) {
        const double theta = rs.uniform(0.0, kTwoPi);
        const double rad = std::sqrt(r2 + (R2 - r2) * rs.uniform01());
        X.points(i, 0) = rad * std::cos(theta);
        X.points(i, 1) = rad * std::sin(theta);
    }
    return X;
}

std::vector<std::int64_t> subsample_indices(std::int64_t N, std::int64_t n,
                                            std::uint64_t seed, bool with_replacement) {
    if (n < 1) throw ArgumentError("subsample: n must be >= 1");
    RandomStream rs(seed);
    std::vector<std::int64_t> out;
    out.reserve(n);
    if (with_replacement) {
        if (N == 0) throw ArgumentError("subsample: cannot draw from an empty set");
        for (std::int64_t i = 0; i < n; ++i)
            out.push_back(static_cast<std::int64_t>(rs.uniform_index(N)));
    } else {
        if (n > N)
            throw ArgumentError("subsample: n = " + std::to_string(n) +
                                " exceeds population size N = " + std::to_string(N) +
                                " without replacement");
        std::vector<std::int64_t> idx(N);
        std::iota(idx.begin(), idx.end(), 0);
        for (std::int64_t i = 0; i < n; ++i) {
            const std::int64_t j =
                i + static_cast<std::int64_t>(rs.uniform_index(N - i));
            std::swap(idx[i], idx[j]);
            out.push_back(idx[i]);
        }
    }
    return out;
}

PointCloud subsample(const PointCloud& X, std::int64_t n, std::uint64_t seed,
                     bool with_replacement) {
    const auto idx = subsample_indices(X.size(), n, seed, with_replacement);
    PointCloud S;
    S.points.resize(n, X.dim());
    for (std::int64_t i = 0; i < n; ++i) S.points.row(i) = X.points.row(idx[i]);
    return S;
}

FiniteMetricSpace subsample(const FiniteMetricSpace& M, std::int64_t n,
                            std::uint64_t seed, bool with_replacement) {
    const auto idx = subsample_indices(M.size(), n, seed, with_replacement);
    FiniteMetricSpace S;
    S.dist.resize(n, n);
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = 0; j < n; ++j) S.dist(i, j) = M.dist(idx[i], idx[j]);
    // duplicated indices under replacement leave exact zero off-diagonal entries,
    // which the VR construction treats as points at distance zero
    for (std::int64_t i = 0; i < n; ++i) S.dist(i, i) = 0.0;
    return S;
}

PointCloud perturb(const PointCloud& X, double sigma, std::uint64_t seed) {
    if (sigma < 0.0) throw ArgumentError("perturb: sigma must be non-negative");
    if (sigma == 0.0) return X;
    PointCloud Y = X;
    RandomStream rs(seed);
    for (Eigen::Index i = 0; i < Y.points.rows(); ++i)
        for (Eigen::Index k = 0; k < Y.points.cols(); ++k)
            Y.points(i, k) += sigma * rs.normal();
    return Y;
}

FiniteMetricSpace perturb(const FiniteMetricSpace& M, double sigma,
                          std::uint64_t seed) {
    if (sigma < 0.0) throw ArgumentError("perturb: sigma must be non-negative");
    if (sigma == 0.0) return M;
    FiniteMetricSpace Y = M;
    RandomStream rs(seed);
    for (Eigen::Index i = 0; i < Y.dist.rows(); ++i)
        for (Eigen::Index j = i + 1; j < Y.dist.cols(); ++j) {
            const double v = std::max(0.0, Y.dist(i, j) + sigma * rs.normal());
            Y.dist(i, j) = v;
            Y.dist(j, i) = v;
        }
    return Y;
}

FiniteMetricSpace pairwise_distances(const PointCloud& X) {
    const Eigen::Index N = X.size();
    FiniteMetricSpace M;
    M.dist.resize(N, N);
    for (Eigen::Index i = 0; i < N; ++i) {
        M.dist(i, i) = 0.0;
        for (Eigen::Index j = i + 1; j < N; ++j) {
            const double d = (X.points.row(i) - X.points.row(j)).norm();
            M.dist(i, j) = d;
            M.dist(j, i) = d;
        }
    }
    return M;
}

double enclosing_radius(const FiniteMetricSpace& M) {
    const Eigen::Index N = M.size();
    if (N == 0) throw ArgumentError("enclosing_radius: empty metric space");
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < N; ++i)
        best = std::min(best, M.dist.row(i).maxCoeff());
    return best;
}

}  // namespace ph
