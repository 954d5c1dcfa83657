#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "ph/errors.hpp"

namespace ph {

// N points in R^m, one row per point.
struct PointCloud {
    Eigen::MatrixXd points;

    Eigen::Index size() const { return points.rows(); }
    Eigen::Index dim() const { return points.cols(); }
};

// Symmetric dissimilarity matrix with zero diagonal.  Triangle inequality is not
// required; VR filtrations are well defined for general dissimilarities.
struct FiniteMetricSpace {
    Eigen::MatrixXd dist;

    Eigen::Index size() const { return dist.rows(); }
};

// Parameters of the (a,b)-standard assumption: pi(B(x,r)) >= min(1, a r^b) for
// r >= r0.
struct StandardAssumptionParams {
    double a = 1.0;
    double b = 1.0;
    double r0 = 0.0;
};

void validate_standard_params(const StandardAssumptionParams& sp);

// throws DataError naming the first offending entry
void validate_metric(const FiniteMetricSpace& M);

// --- samplers (deterministic in seed) ---

// uniform angles on the (R, r) torus of revolution in R^3
PointCloud sample_torus(std::int64_t N, double outer_radius, double inner_radius,
                        std::uint64_t seed);

// uniform on the sphere of the given radius in R^ambient_dim (Gaussian direction)
PointCloud sample_sphere(std::int64_t N, double radius, int ambient_dim,
                         std::uint64_t seed);

// area-uniform on the planar annulus r_in <= |x| <= r_out
PointCloud sample_annulus(std::int64_t N, double outer_radius, double inner_radius,
                          std::uint64_t seed);

// --- subsampling / perturbation ---

std::vector<std::int64_t> subsample_indices(std::int64_t N, std::int64_t n,
                                            std::uint64_t seed,
                                            bool with_replacement = false);

PointCloud subsample(const PointCloud& X, std::int64_t n, std::uint64_t seed,
                     bool with_replacement = false);
FiniteMetricSpace subsample(const FiniteMetricSpace& M, std::int64_t n,
                            std::uint64_t seed, bool with_replacement = false);

// i.i.d. N(0, sigma) added to every coordinate; sigma = 0 returns X unchanged
PointCloud perturb(const PointCloud& X, double sigma, std::uint64_t seed);

// symmetric noise on off-diagonal entries, clamped at 0, diagonal kept zero
FiniteMetricSpace perturb(const FiniteMetricSpace& M, double sigma,
                          std::uint64_t seed);

// --- geometry ---

FiniteMetricSpace pairwise_distances(const PointCloud& X);

// min over i of max over j of d(i,j); VR homology in degrees >= 1 is unchanged by
// truncating the filtration here, so it is the default max scale.
double enclosing_radius(const FiniteMetricSpace& M);

}  // namespace ph
