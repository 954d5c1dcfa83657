#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ph/diagram.hpp"
#include "ph/measure.hpp"

namespace ph {

// Pointwise average of B diagrams as a persistence measure: every diagram point
// contributes its multiplicity divided by B.  Masses are exact multiples of 1/B
// (mass_denominator is set to B).  Essential classes are not averaged.
PersistenceMeasure mean_measure(const std::vector<PersistenceDiagram>& diagrams);

struct QuantizeOptions {
    int max_centroids = 1;
    double p = 2.0;
    double q = 2.0;
    int max_iter = 100;
    double rel_tol = 1e-6;
    // starting centroid locations; empty = greedy pick of the atoms farthest
    // from the diagonal (mass-weighted)
    std::vector<std::pair<double, double>> init;
};

struct QuantizeResult {
    PersistenceMeasure measure;    // centroids carrying their cell masses
    PersistenceDiagram diagram;    // centroid locations, one point each
    double final_loss = 0.0;       // exact powered transport cost to the input
    std::vector<double> trace;     // induced-plan powered cost after each sweep
    std::vector<int> dropped;      // centroids dropped per sweep (parallel to trace)
};

// Lloyd-style quantization of a measure to at most `max_centroids` off-diagonal
// atoms, with the diagonal acting as a free extra cell.  The trace is
// non-increasing; final_loss <= trace.back().
QuantizeResult quantize(const PersistenceMeasure& measure, const QuantizeOptions& opts);

struct FrechetOptions {
    int max_iter = 50;
    // index of the diagram used as the starting mean; -1 picks the diagram
    // with median total persistence unless init_seed chooses one at random
    int init_index = -1;
    std::optional<std::uint64_t> init_seed;
};

struct FrechetResult {
    PersistenceDiagram mean;
    double value = 0.0;           // mean squared 2-Wasserstein distance at `mean`
    int iterations = 0;
    std::vector<double> trace;    // trace[0] at init, then value after each sweep
    std::vector<int> structural;  // deletions + accepted spawns per sweep
};

// Mean squared W_{2,2} distance from `mean` to the inputs.
double frechet_function(const PersistenceDiagram& mean,
                        const std::vector<PersistenceDiagram>& diagrams);

// Greedy local minimizer of the Frechet functional: alternates optimal
// matchings with barycentric updates (diagonal partners pull toward the
// diagonal), deleting points whose partners are all diagonal and spawning
// candidates from unmatched input points when that lowers the objective.
FrechetResult frechet_mean(const std::vector<PersistenceDiagram>& diagrams,
                           const FrechetOptions& opts = {});

}  // namespace ph
