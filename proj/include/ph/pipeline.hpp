#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ph/diagram.hpp"
#include "ph/means.hpp"
#include "ph/measure.hpp"
#include "ph/point_cloud.hpp"

namespace ph {

// ---- datasets ----

struct DatasetSpec {
    enum class Kind { torus, sphere, annulus, points_csv, points_binary, distance_csv };
    Kind kind = Kind::torus;
    std::int64_t N = 0;          // sampler kinds
    double outer_radius = 2.0;   // torus / annulus
    double inner_radius = 1.0;
    double radius = 1.0;         // sphere
    int ambient_dim = 3;
    std::uint64_t seed = 0;
    std::string path;            // file kinds
};

// materialized dataset; exactly one member is engaged
struct Dataset {
    std::optional<PointCloud> cloud;
    std::optional<FiniteMetricSpace> metric;

    std::int64_t size() const;
};

Dataset materialize(const DatasetSpec& spec);

// ---- end-to-end approximation ----

struct ApproxOptions {
    int hom_dim = 1;
    double min_persistence = 0.0;
    bool with_replacement = false;
    double max_scale = std::numeric_limits<double>::infinity();
    int threads = 1;
    bool run_frechet = false;
    FrechetOptions frechet;
    std::optional<QuantizeOptions> quantize_cfg;
};

struct ApproxResult {
    PersistenceMeasure mean;
    std::vector<PersistenceDiagram> diagrams;   // one filtered diagram per subsample
    std::optional<FrechetResult> frechet;
    std::optional<QuantizeResult> quantized;
};

// Draws B subsamples of size n (stream b seeded by derive_seed(seed, b)), computes
// VR persistence of each at hom_dim, filters by min_persistence, and averages.
// Outputs depend only on (arguments, seed), never on the thread count.
ApproxResult approximate_ph(const Dataset& X, std::int64_t n, std::int64_t B,
                            std::uint64_t seed, const ApproxOptions& opts = {});
ApproxResult approximate_ph(const PointCloud& X, std::int64_t n, std::int64_t B,
                            std::uint64_t seed, const ApproxOptions& opts = {});
ApproxResult approximate_ph(const FiniteMetricSpace& X, std::int64_t n, std::int64_t B,
                            std::uint64_t seed, const ApproxOptions& opts = {});

// ---- rate experiments ----

struct BRule {
    enum class Kind { explicit_list, proportional, power };
    Kind kind = Kind::proportional;
    std::vector<std::int64_t> list;  // explicit_list: parallel to n_grid
    double coeff = 0.1;              // proportional: B = ceil(coeff * n)
    double exponent = 2.0 / 3.0;     // power: B = ceil(n^exponent)
};

std::int64_t resolve_B(const BRule& rule, std::int64_t n, std::size_t n_index);

struct ExperimentConfig {
    DatasetSpec dataset;
    double p = 3.0;
    double q = 3.0;
    int hom_dim = 1;
    std::vector<std::int64_t> n_grid;  // strictly increasing, all <= N
    BRule b_rule;
    int repeats = 5;
    std::uint64_t master_seed = 0;
    bool with_replacement = false;
    double min_persistence = 0.0;
    bool loss_power = true;  // loss = OT_p^p; false switches to OT_p
};

void validate(const ExperimentConfig& cfg);
std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const std::string& text,
                                  const std::string& origin = "<json>");
// hash of the canonical config serialization; thread counts never enter it
std::string config_hash(const ExperimentConfig& cfg);

struct LossCurve {
    struct Row {
        std::int64_t n = 0;
        std::int64_t B = 0;
        double loss = 0.0;      // mean over repeats
        double loss_std = 0.0;  // sample standard deviation over repeats
    };
    std::vector<Row> rows;
};

// Loss of the subsample mean against the full-dataset diagram for every n on the
// grid.  When csv_path is non-empty the per-(n, repeat) results are appended to
// an append-only CSV headed by the config hash; rerunning skips completed cells.
// `reference` substitutes the full-dataset diagram (hom_dim must match).
LossCurve rate_experiment(const ExperimentConfig& cfg, const std::string& csv_path = "",
                          int threads = 1,
                          const std::optional<PersistenceDiagram>& reference = std::nullopt);

struct RateFit {
    double a0 = 0.0;
    double a1 = 0.0;
    double c = 0.0;
    double sse = 0.0;
    std::string model;  // "fixed" | "free"
};

// loss(n) ~ a0 + a1 * n^-c.  Fixed mode solves the linear least squares at the
// given c (needs >= 3 rows); free mode minimizes the inner fit's SSE over
// c in [0.05, 3] by coarse scan plus golden-section (needs >= 4 rows).
RateFit fit_rate(const LossCurve& curve, std::optional<double> fixed_c = std::nullopt);

// ---- theoretical bounds ----

// Expected p-th power p-Hausdorff bias bound; branches on p vs params.b
double bias_bound(const StandardAssumptionParams& params, double p, std::int64_t n,
                  std::int64_t N);

// Tail probability bound for H_p(S_n, X) > r; requires r > 2 r0 N^{1/p};
// clamped to [0, 1]
double hausdorff_tail_bound(const StandardAssumptionParams& params, double p,
                            std::int64_t n, std::int64_t N, double r);

// ---- variance check ----

struct VarianceCurve {
    struct Row {
        std::int64_t B = 0;
        double loss = 0.0;  // OT_p^p against the largest-B proxy mean
    };
    std::vector<Row> rows;
    // decay exponent of OT_p in B fitted on the positive-loss rows (theory: 1/2)
    double fitted_exponent = 0.0;
};

// Bmax subsample diagrams are drawn once; the mean over the first B serves as
// the B-sample mean, and the full mean is the population proxy (last loss is 0
// by construction).
VarianceCurve variance_rate_check(const Dataset& X, double p, double q,
                                  const std::vector<std::int64_t>& B_grid,
                                  std::int64_t n, std::uint64_t seed,
                                  const ApproxOptions& opts = {});

// ---- distance-matrix export ----

struct OtMatrixOptions {
    std::int64_t n = 0;     // absolute subsample size, or
    double fraction = 0.0;  // fraction of each dataset's size (wins when > 0)
    std::int64_t B = 15;
    double p = 2.0;
    double q = 2.0;
    std::uint64_t seed = 0;
    ApproxOptions approx;
};

// Mean measure per dataset (all datasets share the same master seed), then the
// symmetric OT distance matrix, optionally written as CSV.
Eigen::MatrixXd export_ot_matrix(const std::vector<Dataset>& datasets,
                                 const OtMatrixOptions& opts,
                                 const std::string& csv_path = "");

// ---- plotting ----

// Standalone SVG: empirical losses with error bars, the fitted model curve, and
// an optional theoretical bound overlay (n, value pairs).
void write_loss_plot_svg(const std::string& path, const LossCurve& curve,
                         const std::optional<RateFit>& fit,
                         const std::vector<std::pair<double, double>>& bound = {},
                         const std::string& title = "empirical loss");

}  // namespace ph
