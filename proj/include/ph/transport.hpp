#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <vector>

#include "ph/diagram.hpp"
#include "ph/measure.hpp"
#include "ph/point_cloud.hpp"

namespace ph {

// index value standing for the diagonal in matchings and plans
constexpr std::int32_t kDiagonal = -1;

// Point indices refer to the diagram expanded by multiplicity in canonical order
// (point 0 repeated multiplicity-0 times, then point 1, ...).
struct Matching {
    std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
    double cost = 0.0;      // the distance value
    bool infinite = false;  // essential classes irreconcilable
};

struct TransportPlan {
    struct Flow {
        std::int32_t src;  // atom index in mu, or kDiagonal
        std::int32_t dst;  // atom index in nu, or kDiagonal
        double mass;
    };
    std::vector<Flow> flows;
};

struct OtResult {
    double distance = 0.0;    // OT_{p,q}
    double power_cost = 0.0;  // OT_{p,q}^p, the transport objective itself
    TransportPlan plan;
};

struct EdgeCover {
    double value = 0.0;
    std::vector<std::pair<std::int32_t, std::int32_t>> correspondence;
};

// q-norm of the difference of two diagram points
double ground_distance(double x1, double y1, double x2, double y2, double q);

// dense square assignment by shortest augmenting paths (Jonker-Volgenant style);
// +inf entries mark forbidden pairs.  Returns row -> column.
std::vector<int> solve_assignment(const Eigen::MatrixXd& cost);

// p-Wasserstein with q ground norm via diagonal-augmented assignment.  Essential
// birth multisets must agree exactly; otherwise the result is flagged infinite.
Matching wasserstein(const PersistenceDiagram& A, const PersistenceDiagram& B,
                     double p, double q);

// recomputes the cost of a matching returned by wasserstein (shared summation
// order, used by tests)
double matching_cost(const PersistenceDiagram& A, const PersistenceDiagram& B,
                     const Matching& m, double p, double q);

// bottleneck distance: binary search over candidate costs with Hopcroft-Karp
// feasibility checks; essential classes are matched by sorted birth values and
// unequal essential counts give an infinite result
Matching bottleneck(const PersistenceDiagram& A, const PersistenceDiagram& B,
                    double q = std::numeric_limits<double>::infinity());

// optimal partial transport between persistence measures (diagonal may emit and
// absorb arbitrary mass); exact integer mass units when both denominators are
// known, successive-shortest-path min-cost flow either way
OtResult ot_distance(const PersistenceMeasure& mu, const PersistenceMeasure& nu,
                     double p, double q);

// min-cost edge cover between point sets under Euclidean ground distance,
// reduced to an assignment on cover-adjusted costs; cross is the n1 x n2 matrix
// of pairwise ground distances
EdgeCover p_hausdorff(const Eigen::MatrixXd& cross, double p);
EdgeCover p_hausdorff(const PointCloud& X, const PointCloud& Y, double p);
// rows/cols of a common dissimilarity matrix (plumbing for graph metrics)
EdgeCover p_hausdorff(const FiniteMetricSpace& M, const std::vector<std::int64_t>& rows,
                      const std::vector<std::int64_t>& cols, double p);

// symmetric matrix of pairwise OT distances
Eigen::MatrixXd pairwise_ot_matrix(const std::vector<PersistenceMeasure>& measures,
                                   double p, double q, int threads = 1);

}  // namespace ph
