#include "ph/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "ph/io.hpp"
#include "ph/parallel.hpp"
#include "ph/rng.hpp"
#include "ph/transport.hpp"
#include "ph/vr.hpp"

namespace ph {

namespace {

const char* kind_name(DatasetSpec::Kind k) {
    switch (k) {
        case DatasetSpec::Kind::torus: return "torus";
        case DatasetSpec::Kind::sphere: return "sphere";
        case DatasetSpec::Kind::annulus: return "annulus";
        case DatasetSpec::Kind::points_csv: return "points_csv";
        case DatasetSpec::Kind::points_binary: return "points_binary";
        case DatasetSpec::Kind::distance_csv: return "distance_csv";
    }
    return "?";
}

DatasetSpec::Kind kind_from_name(const std::string& s) {
    for (auto k : {DatasetSpec::Kind::torus, DatasetSpec::Kind::sphere,
                   DatasetSpec::Kind::annulus, DatasetSpec::Kind::points_csv,
                   DatasetSpec::Kind::points_binary, DatasetSpec::Kind::distance_csv})
        if (s == kind_name(k)) return k;
    throw ConfigError("unknown dataset kind '" + s + "'");
}

// distance matrix of the selected rows (indices may repeat under replacement)
FiniteMetricSpace subspace(const Dataset& X, const std::vector<std::int64_t>& idx) {
    const auto n = static_cast<Eigen::Index>(idx.size());
    FiniteMetricSpace S;
    S.dist.setZero(n, n);
    if (X.cloud) {
        const auto& P = X.cloud->points;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j) {
                const double d = (P.row(idx[static_cast<std::size_t>(i)]) -
                                  P.row(idx[static_cast<std::size_t>(j)]))
                                     .norm();
                S.dist(i, j) = d;
                S.dist(j, i) = d;
            }
    } else {
        const auto& D = X.metric->dist;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j) {
                const double d = D(idx[static_cast<std::size_t>(i)],
                                   idx[static_cast<std::size_t>(j)]);
                S.dist(i, j) = d;
                S.dist(j, i) = d;
            }
    }
    return S;
}

double std_dev(const std::vector<double>& xs, double mean) {
    if (xs.size() < 2) return 0.0;
    double s = 0.0;
    for (double x : xs) s += (x - mean) * (x - mean);
    return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

}  // namespace

std::int64_t Dataset::size() const {
    if (cloud) return cloud->size();
    if (metric) return metric->size();
    return 0;
}

Dataset materialize(const DatasetSpec& spec) {
    Dataset d;
    switch (spec.kind) {
        case DatasetSpec::Kind::torus:
            d.cloud = sample_torus(spec.N, spec.outer_radius, spec.inner_radius, spec.seed);
            break;
        case DatasetSpec::Kind::sphere:
            d.cloud = sample_sphere(spec.N, spec.radius, spec.ambient_dim, spec.seed);
            break;
        case DatasetSpec::Kind::annulus:
            d.cloud = sample_annulus(spec.N, spec.outer_radius, spec.inner_radius, spec.seed);
            break;
        case DatasetSpec::Kind::points_csv:
            d.cloud = load_points_csv(spec.path);
            break;
        case DatasetSpec::Kind::points_binary:
            d.cloud = load_points_binary(spec.path);
            break;
        case DatasetSpec::Kind::distance_csv:
            d.metric = load_distance_csv(spec.path);
            break;
    }
    return d;
}

ApproxResult approximate_ph(const Dataset& X, std::int64_t n, std::int64_t B,
                            std::uint64_t seed, const ApproxOptions& opts) {
    if (!X.cloud && !X.metric) throw ArgumentError("approximate_ph: dataset is empty");
    if (n < 1) throw ArgumentError("approximate_ph: n must be >= 1");
    if (B < 1) throw ArgumentError("approximate_ph: B must be >= 1");
    if (opts.hom_dim < 0) throw ArgumentError("approximate_ph: hom_dim must be >= 0");
    if (opts.min_persistence < 0.0)
        throw ArgumentError("approximate_ph: min_persistence must be >= 0");

    const std::int64_t N = X.size();
    ApproxResult out;
    out.diagrams.assign(static_cast<std::size_t>(B), {});
    parallel_for(B, opts.threads, [&](std::int64_t b) {
        const std::uint64_t sb = derive_seed(seed, static_cast<std::uint64_t>(b));
        const auto idx = subsample_indices(N, n, sb, opts.with_replacement);
        const FiniteMetricSpace sub = subspace(X, idx);
        auto dgms = rips_persistence(sub, opts.hom_dim, opts.max_scale);
        out.diagrams[static_cast<std::size_t>(b)] =
            filter_by_persistence(dgms[static_cast<std::size_t>(opts.hom_dim)],
                                  opts.min_persistence);
    });
    out.mean = mean_measure(out.diagrams);
    if (opts.run_frechet) out.frechet = frechet_mean(out.diagrams, opts.frechet);
    if (opts.quantize_cfg && !out.mean.atoms.empty())
        out.quantized = quantize(out.mean, *opts.quantize_cfg);
    return out;
}

ApproxResult approximate_ph(const PointCloud& X, std::int64_t n, std::int64_t B,
                            std::uint64_t seed, const ApproxOptions& opts) {
    Dataset d;
    d.cloud = X;
    return approximate_ph(d, n, B, seed, opts);
}

ApproxResult approximate_ph(const FiniteMetricSpace& X, std::int64_t n, std::int64_t B,
                            std::uint64_t seed, const ApproxOptions& opts) {
    Dataset d;
    d.metric = X;
    return approximate_ph(d, n, B, seed, opts);
}

std::int64_t resolve_B(const BRule& rule, std::int64_t n, std::size_t n_index) {
    switch (rule.kind) {
        case BRule::Kind::explicit_list:
            if (n_index >= rule.list.size())
                throw ConfigError("B list shorter than the n grid");
            return rule.list[n_index];
        case BRule::Kind::proportional:
            return static_cast<std::int64_t>(
                std::ceil(rule.coeff * static_cast<double>(n) - 1e-12));
        case BRule::Kind::power:
            return static_cast<std::int64_t>(
                std::ceil(std::pow(static_cast<double>(n), rule.exponent) - 1e-12));
    }
    return 1;
}

void validate(const ExperimentConfig& cfg) {
    validate_order_params(cfg.p, cfg.q);
    if (cfg.hom_dim < 0) throw ConfigError("hom_dim must be >= 0");
    if (cfg.n_grid.empty()) throw ConfigError("n_grid must be nonempty");
    for (std::size_t i = 0; i + 1 < cfg.n_grid.size(); ++i)
        if (cfg.n_grid[i] >= cfg.n_grid[i + 1])
            throw ConfigError("n_grid must be strictly increasing");
    if (cfg.n_grid.front() < 1) throw ConfigError("n grid values must be >= 1");
    if (cfg.repeats < 1) throw ConfigError("repeats must be >= 1");
    if (cfg.min_persistence < 0.0) throw ConfigError("min_persistence must be >= 0");
    switch (cfg.b_rule.kind) {
        case BRule::Kind::explicit_list:
            if (cfg.b_rule.list.size() != cfg.n_grid.size())
                throw ConfigError("explicit B list must match the n grid length");
            for (auto b : cfg.b_rule.list)
                if (b < 1) throw ConfigError("B values must be >= 1");
            break;
        case BRule::Kind::proportional:
            if (!(cfg.b_rule.coeff > 0.0)) throw ConfigError("B coefficient must be > 0");
            break;
        case BRule::Kind::power:
            if (!(cfg.b_rule.exponent > 0.0)) throw ConfigError("B exponent must be > 0");
            break;
    }
}

std::string config_to_json(const ExperimentConfig& cfg) {
    nlohmann::json d;
    d["kind"] = kind_name(cfg.dataset.kind);
    d["N"] = cfg.dataset.N;
    d["outer_radius"] = cfg.dataset.outer_radius;
    d["inner_radius"] = cfg.dataset.inner_radius;
    d["radius"] = cfg.dataset.radius;
    d["ambient_dim"] = cfg.dataset.ambient_dim;
    d["seed"] = cfg.dataset.seed;
    d["path"] = cfg.dataset.path;
    nlohmann::json b;
    switch (cfg.b_rule.kind) {
        case BRule::Kind::explicit_list:
            b["kind"] = "explicit";
            b["list"] = cfg.b_rule.list;
            break;
        case BRule::Kind::proportional:
            b["kind"] = "proportional";
            b["coeff"] = cfg.b_rule.coeff;
            break;
        case BRule::Kind::power:
            b["kind"] = "power";
            b["exponent"] = cfg.b_rule.exponent;
            break;
    }
    nlohmann::json j;
    j["dataset"] = d;
    j["p"] = cfg.p;
    j["q"] = cfg.q;
    j["hom_dim"] = cfg.hom_dim;
    j["n_grid"] = cfg.n_grid;
    j["b_rule"] = b;
    j["repeats"] = cfg.repeats;
    j["master_seed"] = cfg.master_seed;
    j["with_replacement"] = cfg.with_replacement;
    j["min_persistence"] = cfg.min_persistence;
    j["loss_power"] = cfg.loss_power;
    return j.dump();  // keys serialized in sorted order: canonical
}

ExperimentConfig config_from_json(const std::string& text, const std::string& origin) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    try {
        ExperimentConfig cfg;
        const auto& d = j.at("dataset");
        cfg.dataset.kind = kind_from_name(d.at("kind").get<std::string>());
        if (d.contains("N")) cfg.dataset.N = d.at("N").get<std::int64_t>();
        if (d.contains("outer_radius")) cfg.dataset.outer_radius = d.at("outer_radius").get<double>();
        if (d.contains("inner_radius")) cfg.dataset.inner_radius = d.at("inner_radius").get<double>();
        if (d.contains("radius")) cfg.dataset.radius = d.at("radius").get<double>();
        if (d.contains("ambient_dim")) cfg.dataset.ambient_dim = d.at("ambient_dim").get<int>();
        if (d.contains("seed")) cfg.dataset.seed = d.at("seed").get<std::uint64_t>();
        if (d.contains("path")) cfg.dataset.path = d.at("path").get<std::string>();
        if (j.contains("p")) cfg.p = j.at("p").get<double>();
        if (j.contains("q")) cfg.q = j.at("q").get<double>();
        if (j.contains("hom_dim")) cfg.hom_dim = j.at("hom_dim").get<int>();
        cfg.n_grid = j.at("n_grid").get<std::vector<std::int64_t>>();
        if (j.contains("b_rule")) {
            const auto& b = j.at("b_rule");
            const auto kind = b.at("kind").get<std::string>();
            if (kind == "explicit") {
                cfg.b_rule.kind = BRule::Kind::explicit_list;
                cfg.b_rule.list = b.at("list").get<std::vector<std::int64_t>>();
            } else if (kind == "proportional") {
                cfg.b_rule.kind = BRule::Kind::proportional;
                cfg.b_rule.coeff = b.at("coeff").get<double>();
            } else if (kind == "power") {
                cfg.b_rule.kind = BRule::Kind::power;
                cfg.b_rule.exponent = b.at("exponent").get<double>();
            } else {
                throw ConfigError(origin + ": unknown B rule '" + kind + "'");
            }
        }
        if (j.contains("repeats")) cfg.repeats = j.at("repeats").get<int>();
        if (j.contains("master_seed")) cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
        if (j.contains("with_replacement"))
            cfg.with_replacement = j.at("with_replacement").get<bool>();
        if (j.contains("min_persistence"))
            cfg.min_persistence = j.at("min_persistence").get<double>();
        if (j.contains("loss_power")) cfg.loss_power = j.at("loss_power").get<bool>();
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(origin + ": " + e.what());
    }
}

std::string config_hash(const ExperimentConfig& cfg) {
    const std::string s = config_to_json(cfg);
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

LossCurve rate_experiment(const ExperimentConfig& cfg, const std::string& csv_path,
                          int threads, const std::optional<PersistenceDiagram>& reference) {
    validate(cfg);
    Dataset X = materialize(cfg.dataset);
    const std::int64_t N = X.size();
    for (auto n : cfg.n_grid)
        if (n > N)
            throw ConfigError("n = " + std::to_string(n) + " exceeds dataset size " +
                              std::to_string(N));

    PersistenceDiagram ref;
    if (reference) {
        if (reference->hom_dim != cfg.hom_dim)
            throw ConfigError("reference diagram has hom_dim " +
                              std::to_string(reference->hom_dim) + ", config wants " +
                              std::to_string(cfg.hom_dim));
        ref = *reference;
    } else {
        const FiniteMetricSpace M = X.metric ? *X.metric : pairwise_distances(*X.cloud);
        auto dgms = rips_persistence(M, cfg.hom_dim);
        ref = std::move(dgms[static_cast<std::size_t>(cfg.hom_dim)]);
    }
    // the subsample diagrams are floored at min_persistence, so the reference is
    // floored the same way; without this the degenerate n=N, B=1 loss is not 0
    ref = filter_by_persistence(ref, cfg.min_persistence);
    const PersistenceMeasure ref_measure = diagram_to_measure(ref);

    const std::string hash = config_hash(cfg);
    std::map<std::pair<std::int64_t, int>, double> done;
    const bool use_csv = !csv_path.empty();
    if (use_csv && std::filesystem::exists(csv_path)) {
        std::ifstream in(csv_path);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            if (lineno == 1) {
                if (line != "# config " + hash)
                    throw ConfigError(csv_path +
                                      " was produced by a different config (hash mismatch)");
                continue;
            }
            if (line == "n,B,repeat,loss") continue;
            std::int64_t n, B;
            int rep;
            double loss;
            if (std::sscanf(line.c_str(), "%lld,%lld,%d,%lf", (long long*)&n, (long long*)&B,
                            &rep, &loss) != 4)
                throw ParseError(csv_path + ":" + std::to_string(lineno) + ": malformed row");
            done[{n, rep}] = loss;
        }
    } else if (use_csv) {
        std::ofstream out(csv_path);
        if (!out) throw DataError("cannot open " + csv_path + " for writing");
        out << "# config " << hash << "\nn,B,repeat,loss\n";
    }

    ApproxOptions inner;
    inner.hom_dim = cfg.hom_dim;
    inner.min_persistence = cfg.min_persistence;
    inner.with_replacement = cfg.with_replacement;
    inner.threads = 1;  // cells parallelize; inside each cell stays serial

    LossCurve curve;
    for (std::size_t ni = 0; ni < cfg.n_grid.size(); ++ni) {
        const std::int64_t n = cfg.n_grid[ni];
        const std::int64_t B = resolve_B(cfg.b_rule, n, ni);
        std::vector<double> losses(static_cast<std::size_t>(cfg.repeats), 0.0);
        std::vector<int> missing;
        for (int rep = 0; rep < cfg.repeats; ++rep) {
            auto it = done.find({n, rep});
            if (it != done.end())
                losses[static_cast<std::size_t>(rep)] = it->second;
            else
                missing.push_back(rep);
        }
        if (!missing.empty()) {
            parallel_for(static_cast<std::int64_t>(missing.size()), threads,
                         [&](std::int64_t mi) {
                             const int rep = missing[static_cast<std::size_t>(mi)];
                             const std::uint64_t cell_seed = derive_seed(
                                 cfg.master_seed,
                                 static_cast<std::uint64_t>(ni) *
                                         static_cast<std::uint64_t>(cfg.repeats) +
                                     static_cast<std::uint64_t>(rep));
                             const ApproxResult res = approximate_ph(X, n, B, cell_seed, inner);
                             const OtResult ot = ot_distance(res.mean, ref_measure, cfg.p, cfg.q);
                             losses[static_cast<std::size_t>(rep)] =
                                 cfg.loss_power ? ot.power_cost : ot.distance;
                         });
            if (use_csv) {
                std::ofstream out(csv_path, std::ios::app);
                if (!out) throw DataError("cannot append to " + csv_path);
                for (int rep : missing)
                    out << n << ',' << B << ',' << rep << ','
                        << format_double(losses[static_cast<std::size_t>(rep)]) << '\n';
                if (!out) throw DataError("write to " + csv_path + " failed");
            }
        }
        double mean = 0.0;
        for (double l : losses) mean += l;
        mean /= static_cast<double>(cfg.repeats);
        curve.rows.push_back({n, B, mean, std_dev(losses, mean)});
    }
    return curve;
}

namespace {

// SSE of the best linear fit loss ~ a0 + a1 * n^-c at fixed c
double linear_fit_sse(const LossCurve& curve, double c, double& a0, double& a1) {
    const auto k = static_cast<Eigen::Index>(curve.rows.size());
    Eigen::MatrixXd A(k, 2);
    Eigen::VectorXd y(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        A(i, 0) = 1.0;
        A(i, 1) = std::pow(static_cast<double>(curve.rows[static_cast<std::size_t>(i)].n), -c);
        y(i) = curve.rows[static_cast<std::size_t>(i)].loss;
    }
    const Eigen::Vector2d beta = A.colPivHouseholderQr().solve(y);
    a0 = beta(0);
    a1 = beta(1);
    return (A * beta - y).squaredNorm();
}

}  // namespace

RateFit fit_rate(const LossCurve& curve, std::optional<double> fixed_c) {
    RateFit fit;
    if (fixed_c) {
        if (curve.rows.size() < 3)
            throw ArgumentError("fit_rate: fixed-exponent mode needs at least 3 rows");
        if (!(*fixed_c > 0.0)) throw ArgumentError("fit_rate: exponent must be > 0");
        fit.c = *fixed_c;
        fit.sse = linear_fit_sse(curve, fit.c, fit.a0, fit.a1);
        fit.model = "fixed";
        return fit;
    }
    if (curve.rows.size() < 4)
        throw ArgumentError("fit_rate: free-exponent mode needs at least 4 rows");
    double a0, a1;
    // coarse scan to bracket the minimum, then golden-section inside the bracket
    const double lo_all = 0.05, hi_all = 3.0;
    const int grid = 60;
    int best_i = 0;
    double best_sse = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= grid; ++i) {
        const double c = lo_all + (hi_all - lo_all) * i / grid;
        const double s = linear_fit_sse(curve, c, a0, a1);
        if (s < best_sse) {
            best_sse = s;
            best_i = i;
        }
    }
    double lo = lo_all + (hi_all - lo_all) * std::max(0, best_i - 1) / grid;
    double hi = lo_all + (hi_all - lo_all) * std::min(grid, best_i + 1) / grid;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = linear_fit_sse(curve, x1, a0, a1);
    double f2 = linear_fit_sse(curve, x2, a0, a1);
    while (hi - lo > 1e-12) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = linear_fit_sse(curve, x1, a0, a1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = linear_fit_sse(curve, x2, a0, a1);
        }
    }
    fit.c = (lo + hi) / 2.0;
    fit.sse = linear_fit_sse(curve, fit.c, fit.a0, fit.a1);
    fit.model = "free";
    return fit;
}

double bias_bound(const StandardAssumptionParams& params, double p, std::int64_t n,
                  std::int64_t N) {
    validate_standard_params(params);
    if (!(p >= 1.0)) throw ArgumentError("bias_bound: p must be >= 1");
    if (n < 1 || N < 1) throw ArgumentError("bias_bound: n and N must be >= 1");
    const double a = params.a, b = params.b, r0 = params.r0;
    const double Nd = static_cast<double>(N), nd = static_cast<double>(n);
    const double beta = p / b - 1.0;
    const double head = std::pow(2.0, p) * Nd * std::pow(r0, p);
    if (p > b)
        return head + std::pow(2.0, p + b) * p * Nd * std::tgamma(beta) /
                          (b * std::pow(a, beta)) * std::pow(nd, -beta);
    if (n <= 1)
        throw ArgumentError("bias_bound: the p <= b branch needs n >= 2 (log n > 0)");
    const double logn = std::log(nd);
    const double rn =
        2.0 * std::pow(Nd, 1.0 / p) / std::pow(a, 1.0 / b) * std::pow(logn / nd, 1.0 / b);
    const double tail = std::pow(2.0, p + b) * p * Nd / (b * std::pow(a, beta)) *
                        std::pow(logn / nd, p / b) / (logn * logn);
    const double mid = rn > 2.0 * r0 * std::pow(Nd, 1.0 / p) ? p * rn : 0.0;
    return head + mid + tail;
}

double hausdorff_tail_bound(const StandardAssumptionParams& params, double p,
                            std::int64_t n, std::int64_t N, double r) {
    validate_standard_params(params);
    if (!(p >= 1.0)) throw ArgumentError("hausdorff_tail_bound: p must be >= 1");
    if (n < 1 || N < 1)
        throw ArgumentError("hausdorff_tail_bound: n and N must be >= 1");
    const double Nd = static_cast<double>(N);
    if (!(r > 2.0 * params.r0 * std::pow(Nd, 1.0 / p)) || !(r > 0.0))
        throw ArgumentError("hausdorff_tail_bound: requires r > 2 r0 N^{1/p} > 0");
    const double Nbp = std::pow(Nd, params.b / p);
    const double rb = std::pow(r, params.b);
    const double v = std::pow(4.0, params.b) * Nbp / (params.a * rb) *
                     std::exp(-params.a * rb * static_cast<double>(n) /
                              (std::pow(2.0, params.b) * Nbp));
    return std::clamp(v, 0.0, 1.0);
}

VarianceCurve variance_rate_check(const Dataset& X, double p, double q,
                                  const std::vector<std::int64_t>& B_grid,
                                  std::int64_t n, std::uint64_t seed,
                                  const ApproxOptions& opts) {
    validate_order_params(p, q);
    if (B_grid.empty()) throw ArgumentError("variance_rate_check: B grid is empty");
    for (std::size_t i = 0; i + 1 < B_grid.size(); ++i)
        if (B_grid[i] >= B_grid[i + 1])
            throw ArgumentError("variance_rate_check: B grid must be strictly increasing");
    if (B_grid.front() < 1) throw ArgumentError("variance_rate_check: B must be >= 1");

    const std::int64_t B_max = B_grid.back();
    const ApproxResult full = approximate_ph(X, n, B_max, seed, opts);
    const PersistenceMeasure proxy = full.mean;

    VarianceCurve out;
    for (std::int64_t B : B_grid) {
        const std::vector<PersistenceDiagram> head(full.diagrams.begin(),
                                                   full.diagrams.begin() + B);
        const PersistenceMeasure mean_B = mean_measure(head);
        out.rows.push_back({B, ot_distance(mean_B, proxy, p, q).power_cost});
    }

    // decay exponent of the distance (power 1/p) on positive rows, log-log fit
    std::vector<std::pair<double, double>> pts;
    for (const auto& row : out.rows)
        if (row.loss > 0.0)
            pts.emplace_back(std::log(static_cast<double>(row.B)),
                             std::log(std::pow(row.loss, 1.0 / p)));
    if (pts.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (auto [x, y] : pts) {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double k = static_cast<double>(pts.size());
        out.fitted_exponent = -(k * sxy - sx * sy) / (k * sxx - sx * sx);
    }
    return out;
}

Eigen::MatrixXd export_ot_matrix(const std::vector<Dataset>& datasets,
                                 const OtMatrixOptions& opts, const std::string& csv_path) {
    if (datasets.size() < 2)
        throw ArgumentError("export_ot_matrix: need at least 2 datasets");
    std::vector<PersistenceMeasure> means;
    means.reserve(datasets.size());
    for (const auto& d : datasets) {
        std::int64_t n = opts.n;
        if (opts.fraction > 0.0)
            n = static_cast<std::int64_t>(
                std::ceil(opts.fraction * static_cast<double>(d.size())));
        if (n < 1)
            throw ArgumentError("export_ot_matrix: subsample size resolves to " +
                                std::to_string(n));
        // every dataset sees the same master seed: identical inputs give
        // identical mean measures
        means.push_back(approximate_ph(d, n, opts.B, opts.seed, opts.approx).mean);
    }
    Eigen::MatrixXd M = pairwise_ot_matrix(means, opts.p, opts.q, opts.approx.threads);
    if (!csv_path.empty()) save_distance_csv(M, csv_path);
    return M;
}

}  // namespace ph
