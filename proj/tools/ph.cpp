#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ph/io.hpp"
#include "ph/means.hpp"
#include "ph/pipeline.hpp"
#include "ph/transport.hpp"
#include "ph/vr.hpp"

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct DatasetFlags {
    std::string points_csv, points_bin, dists_csv;
    std::int64_t torus = 0, sphere = 0, annulus = 0;
    double outer = 2.0, inner = 1.0, radius = 1.0;
    int ambient_dim = 3;
    std::uint64_t sampler_seed = 0;
};

void add_dataset_flags(CLI::App* cmd, DatasetFlags& f) {
    auto* g = cmd->add_option_group("dataset", "input data (exactly one source)");
    g->add_option("--points", f.points_csv, "point-cloud CSV file");
    g->add_option("--points-bin", f.points_bin, "point-cloud binary file (PCF1)");
    g->add_option("--dists", f.dists_csv, "distance-matrix CSV file");
    g->add_option("--torus", f.torus, "sample this many torus points");
    g->add_option("--sphere", f.sphere, "sample this many sphere points");
    g->add_option("--annulus", f.annulus, "sample this many annulus points");
    g->require_option(1);
    cmd->add_option("--outer", f.outer, "torus/annulus outer radius")->capture_default_str();
    cmd->add_option("--inner", f.inner, "torus tube / annulus inner radius")->capture_default_str();
    cmd->add_option("--radius", f.radius, "sphere radius")->capture_default_str();
    cmd->add_option("--ambient-dim", f.ambient_dim, "sphere ambient dimension")->capture_default_str();
    cmd->add_option("--sampler-seed", f.sampler_seed, "seed for synthetic samplers")->capture_default_str();
}

ph::DatasetSpec spec_from_flags(const DatasetFlags& f) {
    ph::DatasetSpec s;
    s.outer_radius = f.outer;
    s.inner_radius = f.inner;
    s.radius = f.radius;
    s.ambient_dim = f.ambient_dim;
    s.seed = f.sampler_seed;
    if (!f.points_csv.empty()) {
        s.kind = ph::DatasetSpec::Kind::points_csv;
        s.path = f.points_csv;
    } else if (!f.points_bin.empty()) {
        s.kind = ph::DatasetSpec::Kind::points_binary;
        s.path = f.points_bin;
    } else if (!f.dists_csv.empty()) {
        s.kind = ph::DatasetSpec::Kind::distance_csv;
        s.path = f.dists_csv;
    } else if (f.torus > 0) {
        s.kind = ph::DatasetSpec::Kind::torus;
        s.N = f.torus;
    } else if (f.sphere > 0) {
        s.kind = ph::DatasetSpec::Kind::sphere;
        s.N = f.sphere;
    } else if (f.annulus > 0) {
        s.kind = ph::DatasetSpec::Kind::annulus;
        s.N = f.annulus;
    } else {
        throw ph::ConfigError("no dataset source given");
    }
    return s;
}

void emit(const std::string& text, const std::string& output_path) {
    if (output_path.empty())
        std::cout << text << "\n";
    else
        ph::write_text_file(output_path, text + "\n");
}

std::vector<std::int64_t> parse_int_list(const std::string& s) {
    std::vector<std::int64_t> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const std::size_t comma = s.find(',', pos);
        const std::string cell =
            s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            out.push_back(std::stoll(cell));
        } catch (const std::exception&) {
            throw ph::ConfigError("malformed integer list entry '" + cell + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::vector<std::pair<double, double>> parse_centroids(const std::string& s) {
    std::vector<std::pair<double, double>> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const std::size_t semi = s.find(';', pos);
        const std::string cell =
            s.substr(pos, semi == std::string::npos ? std::string::npos : semi - pos);
        const std::size_t comma = cell.find(',');
        if (comma == std::string::npos)
            throw ph::ConfigError("centroid '" + cell + "' is not of the form x,y");
        try {
            out.emplace_back(std::stod(cell.substr(0, comma)), std::stod(cell.substr(comma + 1)));
        } catch (const std::exception&) {
            throw ph::ConfigError("malformed centroid '" + cell + "'");
        }
        if (semi == std::string::npos) break;
        pos = semi + 1;
    }
    return out;
}

std::string matching_json(const ph::Matching& m) {
    std::string s = "{\"pairs\": [";
    for (std::size_t i = 0; i < m.pairs.size(); ++i) {
        if (i) s += ", ";
        s += "[" + std::to_string(m.pairs[i].first) + ", " + std::to_string(m.pairs[i].second) + "]";
    }
    s += "], \"cost\": " + (m.infinite ? std::string("null") : ph::format_double(m.cost));
    s += ", \"infinite\": " + std::string(m.infinite ? "true" : "false") + "}";
    return s;
}

std::string plan_json(const ph::OtResult& r) {
    std::string s = "{\"flows\": [";
    for (std::size_t i = 0; i < r.plan.flows.size(); ++i) {
        if (i) s += ", ";
        const auto& f = r.plan.flows[i];
        s += "[" + std::to_string(f.src) + ", " + std::to_string(f.dst) + ", " +
             ph::format_double(f.mass) + "]";
    }
    s += "], \"distance\": " + ph::format_double(r.distance) +
         ", \"power_cost\": " + ph::format_double(r.power_cost) + "}";
    return s;
}

std::string cover_json(const ph::EdgeCover& c) {
    std::string s = "{\"correspondence\": [";
    for (std::size_t i = 0; i < c.correspondence.size(); ++i) {
        if (i) s += ", ";
        s += "[" + std::to_string(c.correspondence[i].first) + ", " +
             std::to_string(c.correspondence[i].second) + "]";
    }
    s += "], \"value\": " + ph::format_double(c.value) + "}";
    return s;
}

ph::PersistenceMeasure load_measure_or_diagram(const std::string& path) {
    const std::string text = ph::read_text_file(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ph::ParseError(path + ": " + e.what());
    }
    if (j.contains("atoms")) return ph::measure_from_json(text, path);
    return ph::diagram_to_measure(ph::diagram_from_json(text, path));
}

}  // namespace

int run(int argc, char** argv) {
    CLI::App app{"approximate persistent homology of large point clouds by averaging "
                 "subsample diagrams"};
    app.require_subcommand(1);

    // ---- compute ----
    auto* c_compute = app.add_subcommand("compute", "persistence diagram of a dataset");
    DatasetFlags compute_data;
    add_dataset_flags(c_compute, compute_data);
    int compute_dim = 1;
    double compute_scale = kInf, compute_tau = 0.0;
    bool truncate_essentials = false;
    std::string compute_out;
    c_compute->add_option("--dim", compute_dim, "homology dimension to report")->capture_default_str();
    c_compute->add_option("--max-scale", compute_scale, "filtration cutoff");
    c_compute->add_option("--min-persistence", compute_tau, "drop points with persistence below this");
    c_compute->add_flag("--truncate-essentials", truncate_essentials,
                        "turn essential classes into (birth, max-scale) points");
    c_compute->add_option("-o,--output", compute_out, "diagram JSON path (default: stdout)");
    c_compute->callback([&] {
        const ph::Dataset d = ph::materialize(spec_from_flags(compute_data));
        const ph::FiniteMetricSpace M =
            d.metric ? *d.metric : ph::pairwise_distances(*d.cloud);
        auto dgms = ph::rips_persistence(M, compute_dim, compute_scale);
        ph::PersistenceDiagram D =
            ph::filter_by_persistence(dgms[static_cast<std::size_t>(compute_dim)], compute_tau);
        if (truncate_essentials) {
            if (!std::isfinite(compute_scale))
                throw ph::ConfigError("--truncate-essentials needs a finite --max-scale");
            auto points = D.points;
            for (double b : D.essential)
                if (compute_scale > b) points.push_back({b, compute_scale, 1});
            D = ph::make_diagram(D.hom_dim, std::move(points));
        }
        emit(ph::diagram_to_json(D), compute_out);
    });

    // ---- subsample-mean ----
    auto* c_mean = app.add_subcommand("subsample-mean",
                                      "mean persistence measure over B subsamples");
    DatasetFlags mean_data;
    add_dataset_flags(c_mean, mean_data);
    std::int64_t mean_n = 0, mean_B = 20;
    std::uint64_t mean_seed = 0;
    int mean_dim = 1, mean_threads = 1, mean_k = 1;
    double mean_tau = 0.0, mean_scale = kInf, mean_p = 2.0, mean_q = -1.0;
    bool mean_with_repl = false;
    std::string mean_out, mean_diagrams_dir, mean_frechet_out, mean_quantized_out;
    c_mean->add_option("--n", mean_n, "subsample size")->required();
    c_mean->add_option("--B", mean_B, "number of subsamples")->capture_default_str();
    c_mean->add_option("--seed", mean_seed, "master seed")->capture_default_str();
    c_mean->add_option("--dim", mean_dim, "homology dimension")->capture_default_str();
    c_mean->add_option("--threads", mean_threads, "worker threads")->capture_default_str();
    c_mean->add_option("--min-persistence", mean_tau, "per-diagram persistence floor");
    c_mean->add_option("--max-scale", mean_scale, "filtration cutoff");
    c_mean->add_option("--p", mean_p, "transport exponent for quantization")->capture_default_str();
    c_mean->add_option("--q", mean_q, "ground norm (default: p)");
    c_mean->add_flag("--with-replacement", mean_with_repl, "draw subsamples with replacement");
    c_mean->add_option("-o,--output", mean_out, "measure JSON path (default: stdout)");
    c_mean->add_option("--diagrams-dir", mean_diagrams_dir, "write each subsample diagram here");
    c_mean->add_option("--frechet-out", mean_frechet_out, "also compute the Frechet mean diagram");
    c_mean->add_option("--quantized-out", mean_quantized_out, "also quantize the mean measure");
    c_mean->add_option("--k", mean_k, "centroid count for --quantized-out")->capture_default_str();
    c_mean->callback([&] {
        const ph::Dataset d = ph::materialize(spec_from_flags(mean_data));
        ph::ApproxOptions opts;
        opts.hom_dim = mean_dim;
        opts.min_persistence = mean_tau;
        opts.with_replacement = mean_with_repl;
        opts.max_scale = mean_scale;
        opts.threads = mean_threads;
        opts.run_frechet = !mean_frechet_out.empty();
        if (!mean_quantized_out.empty()) {
            ph::QuantizeOptions qo;
            qo.max_centroids = mean_k;
            qo.p = mean_p;
            qo.q = mean_q > 0.0 ? mean_q : mean_p;
            opts.quantize_cfg = qo;
        }
        const ph::ApproxResult res = ph::approximate_ph(d, mean_n, mean_B, mean_seed, opts);
        emit(ph::measure_to_json(res.mean), mean_out);
        if (!mean_diagrams_dir.empty()) {
            std::filesystem::create_directories(mean_diagrams_dir);
            for (std::size_t b = 0; b < res.diagrams.size(); ++b) {
                char name[32];
                std::snprintf(name, sizeof(name), "diagram_%04zu.json", b);
                ph::save_diagram_json(res.diagrams[b],
                                      (std::filesystem::path(mean_diagrams_dir) / name).string());
            }
        }
        if (res.frechet) ph::save_diagram_json(res.frechet->mean, mean_frechet_out);
        if (res.quantized) ph::save_measure_json(res.quantized->measure, mean_quantized_out);
    });

    // ---- frechet ----
    auto* c_frechet = app.add_subcommand("frechet", "Frechet mean of persistence diagrams");
    std::vector<std::string> frechet_files;
    int frechet_max_iter = 50, frechet_init_index = -1;
    std::uint64_t frechet_init_seed = 0;
    bool frechet_seeded = false;
    std::string frechet_out, frechet_trace;
    c_frechet->add_option("diagrams", frechet_files, "diagram JSON files")->required()->expected(-1);
    c_frechet->add_option("--max-iter", frechet_max_iter, "sweep cap")->capture_default_str();
    c_frechet->add_option("--init-index", frechet_init_index,
                          "starting diagram (-1: median total persistence)");
    c_frechet->add_option("--init-seed", frechet_init_seed, "pick the starting diagram at random")
        ->each([&](const std::string&) { frechet_seeded = true; });
    c_frechet->add_option("-o,--output", frechet_out, "mean diagram JSON path (default: stdout)");
    c_frechet->add_option("--trace", frechet_trace, "iteration trace as JSON lines");
    c_frechet->callback([&] {
        std::vector<ph::PersistenceDiagram> dgms;
        for (const auto& f : frechet_files) dgms.push_back(ph::load_diagram_json(f));
        ph::FrechetOptions o;
        o.max_iter = frechet_max_iter;
        o.init_index = frechet_init_index;
        if (frechet_seeded) o.init_seed = frechet_init_seed;
        const ph::FrechetResult res = ph::frechet_mean(dgms, o);
        emit(ph::diagram_to_json(res.mean), frechet_out);
        std::cout << "frechet_value " << ph::format_double(res.value) << "\n";
        if (!frechet_trace.empty()) {
            std::string s;
            for (std::size_t i = 0; i < res.trace.size(); ++i)
                s += "{\"iteration\": " + std::to_string(i) +
                     ", \"frechet_value\": " + ph::format_double(res.trace[i]) +
                     ", \"structural_changes\": " +
                     std::to_string(i == 0 ? 0 : res.structural[i - 1]) + "}\n";
            ph::write_text_file(frechet_trace, s);
        }
    });

    // ---- quantize ----
    auto* c_quant = app.add_subcommand("quantize", "k-centroid quantization of a measure");
    std::string quant_in, quant_out, quant_trace, quant_init;
    int quant_k = 1, quant_max_iter = 100;
    double quant_p = 2.0, quant_q = -1.0, quant_rel_tol = 1e-6;
    bool quant_diagram = false;
    c_quant->add_option("measure", quant_in, "measure JSON (or diagram JSON) file")->required();
    c_quant->add_option("--k", quant_k, "centroid count")->capture_default_str();
    c_quant->add_option("--p", quant_p, "transport exponent")->capture_default_str();
    c_quant->add_option("--q", quant_q, "ground norm (default: p)");
    c_quant->add_option("--max-iter", quant_max_iter, "sweep cap")->capture_default_str();
    c_quant->add_option("--rel-tol", quant_rel_tol, "relative improvement stop")->capture_default_str();
    c_quant->add_option("--init", quant_init, "initial centroids as x,y;x,y;...");
    c_quant->add_flag("--diagram", quant_diagram,
                      "emit a diagram with masses rounded to integer multiplicities");
    c_quant->add_option("-o,--output", quant_out, "output path (default: stdout)");
    c_quant->add_option("--trace", quant_trace, "iteration trace as JSON lines");
    c_quant->callback([&] {
        const ph::PersistenceMeasure mu = load_measure_or_diagram(quant_in);
        ph::QuantizeOptions o;
        o.max_centroids = quant_k;
        o.p = quant_p;
        o.q = quant_q > 0.0 ? quant_q : quant_p;
        o.max_iter = quant_max_iter;
        o.rel_tol = quant_rel_tol;
        if (!quant_init.empty()) o.init = parse_centroids(quant_init);
        const ph::QuantizeResult res = ph::quantize(mu, o);
        if (quant_diagram)
            emit(ph::diagram_to_json(ph::measure_to_diagram(res.measure)), quant_out);
        else
            emit(ph::measure_to_json(res.measure), quant_out);
        std::cout << "final_loss " << ph::format_double(res.final_loss) << "\n";
        if (!quant_trace.empty()) {
            std::string s;
            for (std::size_t i = 0; i < res.trace.size(); ++i)
                s += "{\"iteration\": " + std::to_string(i) +
                     ", \"loss\": " + ph::format_double(res.trace[i]) +
                     ", \"structural_changes\": " + std::to_string(res.dropped[i]) + "}\n";
            ph::write_text_file(quant_trace, s);
        }
    });

    // ---- dist ----
    auto* c_dist = app.add_subcommand("dist", "distance between two artifacts");
    std::string dist_kind, dist_a, dist_b, dist_plan, dist_format = "csv";
    double dist_p = 2.0, dist_q = -1.0;
    c_dist->add_option("kind", dist_kind, "wasserstein | bottleneck | ot | hausdorff")
        ->required()
        ->check(CLI::IsMember({"wasserstein", "bottleneck", "ot", "hausdorff"}));
    c_dist->add_option("a", dist_a, "first input file")->required();
    c_dist->add_option("b", dist_b, "second input file")->required();
    c_dist->add_option("--p", dist_p, "order exponent")->capture_default_str();
    c_dist->add_option("--q", dist_q, "ground norm (default: p; bottleneck: inf)");
    c_dist->add_option("--plan", dist_plan, "write the certificate as JSON here");
    c_dist->add_option("--format", dist_format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    c_dist->callback([&] {
        double value = 0.0;
        bool infinite = false;
        std::string cert;
        if (dist_kind == "wasserstein") {
            const auto A = ph::load_diagram_json(dist_a);
            const auto B = ph::load_diagram_json(dist_b);
            const auto m = ph::wasserstein(A, B, dist_p, dist_q > 0.0 ? dist_q : dist_p);
            value = m.cost;
            infinite = m.infinite;
            cert = matching_json(m);
        } else if (dist_kind == "bottleneck") {
            const auto A = ph::load_diagram_json(dist_a);
            const auto B = ph::load_diagram_json(dist_b);
            const auto m = ph::bottleneck(A, B, dist_q > 0.0 ? dist_q : kInf);
            value = m.cost;
            infinite = m.infinite;
            cert = matching_json(m);
        } else if (dist_kind == "ot") {
            const auto mu = load_measure_or_diagram(dist_a);
            const auto nu = load_measure_or_diagram(dist_b);
            const auto r = ph::ot_distance(mu, nu, dist_p, dist_q > 0.0 ? dist_q : dist_p);
            value = r.distance;
            cert = plan_json(r);
        } else {
            const auto X = ph::load_points_csv(dist_a);
            const auto Y = ph::load_points_csv(dist_b);
            const auto r = ph::p_hausdorff(X, Y, dist_p);
            value = r.value;
            cert = cover_json(r);
        }
        if (dist_format == "json") {
            std::cout << "{\"distance\": " << (infinite ? "null" : ph::format_double(value))
                      << ", \"infinite\": " << (infinite ? "true" : "false") << "}\n";
        } else {
            std::cout << (infinite ? "inf" : ph::format_double(value)) << "\n";
        }
        if (!dist_plan.empty()) ph::write_text_file(dist_plan, cert + "\n");
    });

    // ---- experiment ----
    auto* c_exp = app.add_subcommand("experiment", "rate and variance experiments");
    c_exp->require_subcommand(1);

    auto* c_rate = c_exp->add_subcommand("rate", "empirical loss curve over the n grid");
    std::string rate_config, rate_csv, rate_plot, rate_fit = "free", rate_reference;
    int rate_threads = 1;
    bool rate_bound = false;
    double rate_a = 1.0, rate_b = -1.0, rate_r0 = 0.0;
    c_rate->add_option("--config", rate_config, "experiment config JSON")->required();
    c_rate->add_option("--csv", rate_csv, "append-only results CSV (resumable)");
    c_rate->add_option("--threads", rate_threads, "worker threads")->capture_default_str();
    c_rate->add_option("--reference", rate_reference, "precomputed full-dataset diagram JSON");
    c_rate->add_option("--fit", rate_fit, "free | fixed:<c> | none")->capture_default_str();
    c_rate->add_option("--plot", rate_plot, "loss-curve SVG path");
    c_rate->add_flag("--bound", rate_bound, "overlay the theoretical bias bound on the plot");
    c_rate->add_option("--a", rate_a, "standard-assumption a for --bound")->capture_default_str();
    c_rate->add_option("--b", rate_b, "standard-assumption b (default: intrinsic dimension)");
    c_rate->add_option("--r0", rate_r0, "standard-assumption r0 for --bound")->capture_default_str();
    c_rate->callback([&] {
        const ph::ExperimentConfig cfg =
            ph::config_from_json(ph::read_text_file(rate_config), rate_config);
        std::optional<ph::PersistenceDiagram> ref;
        if (!rate_reference.empty()) ref = ph::load_diagram_json(rate_reference);
        const ph::LossCurve curve = ph::rate_experiment(cfg, rate_csv, rate_threads, ref);
        std::cout << "n,B,loss,loss_std\n";
        for (const auto& r : curve.rows)
            std::cout << r.n << ',' << r.B << ',' << ph::format_double(r.loss) << ','
                      << ph::format_double(r.loss_std) << "\n";
        std::optional<ph::RateFit> fit;
        if (rate_fit == "free") {
            fit = ph::fit_rate(curve, std::nullopt);
        } else if (rate_fit.rfind("fixed:", 0) == 0) {
            fit = ph::fit_rate(curve, std::stod(rate_fit.substr(6)));
        } else if (rate_fit != "none") {
            throw ph::ConfigError("--fit must be free, fixed:<c>, or none");
        }
        if (fit)
            std::cout << "fit " << fit->model << " a0 " << ph::format_double(fit->a0) << " a1 "
                      << ph::format_double(fit->a1) << " c " << ph::format_double(fit->c)
                      << " sse " << ph::format_double(fit->sse) << "\n";
        if (!rate_plot.empty()) {
            std::vector<std::pair<double, double>> bound;
            if (rate_bound) {
                ph::StandardAssumptionParams sp;
                sp.a = rate_a;
                sp.r0 = rate_r0;
                if (rate_b > 0.0)
                    sp.b = rate_b;
                else if (cfg.dataset.kind == ph::DatasetSpec::Kind::sphere)
                    sp.b = 3.0;
                else
                    sp.b = 2.0;
                const std::int64_t N = ph::materialize(cfg.dataset).size();
                for (const auto& r : curve.rows)
                    bound.emplace_back(static_cast<double>(r.n),
                                       ph::bias_bound(sp, cfg.p, r.n, N));
            }
            ph::write_loss_plot_svg(rate_plot, curve, fit, bound, "empirical loss");
        }
    });

    auto* c_var = c_exp->add_subcommand("variance", "loss decay in B against a proxy mean");
    DatasetFlags var_data;
    add_dataset_flags(c_var, var_data);
    std::string var_grid, var_csv;
    std::int64_t var_n = 0;
    std::uint64_t var_seed = 0;
    int var_dim = 1, var_threads = 1;
    double var_p = 2.0, var_q = -1.0, var_tau = 0.0;
    bool var_with_repl = false;
    c_var->add_option("--n", var_n, "subsample size")->required();
    c_var->add_option("--B-grid", var_grid, "strictly increasing B values, comma-separated")
        ->required();
    c_var->add_option("--p", var_p, "transport exponent")->capture_default_str();
    c_var->add_option("--q", var_q, "ground norm (default: p)");
    c_var->add_option("--dim", var_dim, "homology dimension")->capture_default_str();
    c_var->add_option("--seed", var_seed, "master seed")->capture_default_str();
    c_var->add_option("--threads", var_threads, "worker threads")->capture_default_str();
    c_var->add_option("--min-persistence", var_tau, "per-diagram persistence floor");
    c_var->add_flag("--with-replacement", var_with_repl, "draw subsamples with replacement");
    c_var->add_option("--csv", var_csv, "write B,loss rows here");
    c_var->callback([&] {
        const ph::Dataset d = ph::materialize(spec_from_flags(var_data));
        ph::ApproxOptions opts;
        opts.hom_dim = var_dim;
        opts.min_persistence = var_tau;
        opts.with_replacement = var_with_repl;
        opts.threads = var_threads;
        const auto curve = ph::variance_rate_check(
            d, var_p, var_q > 0.0 ? var_q : var_p, parse_int_list(var_grid), var_n, var_seed, opts);
        std::string rows = "B,loss\n";
        for (const auto& r : curve.rows)
            rows += std::to_string(r.B) + "," + ph::format_double(r.loss) + "\n";
        std::cout << rows;
        std::cout << "fitted_exponent " << ph::format_double(curve.fitted_exponent)
                  << " (theory: 0.5)\n";
        if (!var_csv.empty()) ph::write_text_file(var_csv, rows);
    });

    // ---- bounds ----
    auto* c_bounds = app.add_subcommand("bounds", "theoretical bias/tail bound values");
    double bounds_a = 1.0, bounds_b = 1.0, bounds_r0 = 0.0, bounds_p = 2.0, bounds_r = -1.0;
    std::int64_t bounds_n = 0, bounds_N = 0;
    std::string bounds_format = "csv";
    bool bounds_tail = false;
    c_bounds->add_option("--a", bounds_a, "standard-assumption a")->capture_default_str();
    c_bounds->add_option("--b", bounds_b, "standard-assumption b")->capture_default_str();
    c_bounds->add_option("--r0", bounds_r0, "standard-assumption r0")->capture_default_str();
    c_bounds->add_option("--p", bounds_p, "exponent")->capture_default_str();
    c_bounds->add_option("--n", bounds_n, "subsample size")->required();
    c_bounds->add_option("--N", bounds_N, "ground-set size")->required();
    c_bounds->add_option("--r", bounds_r, "radius (tail bound)");
    c_bounds->add_flag("--tail", bounds_tail, "tail probability bound (needs --r)");
    c_bounds->add_option("--format", bounds_format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    c_bounds->callback([&] {
        ph::StandardAssumptionParams sp;
        sp.a = bounds_a;
        sp.b = bounds_b;
        sp.r0 = bounds_r0;
        double v;
        const char* name;
        if (bounds_tail || bounds_r >= 0.0) {
            if (bounds_r < 0.0) throw ph::ConfigError("tail bound needs --r");
            v = ph::hausdorff_tail_bound(sp, bounds_p, bounds_n, bounds_N, bounds_r);
            name = "tail_bound";
        } else {
            v = ph::bias_bound(sp, bounds_p, bounds_n, bounds_N);
            name = "bias_bound";
        }
        if (bounds_format == "json")
            std::cout << "{\"" << name << "\": " << ph::format_double(v) << "}\n";
        else
            std::cout << ph::format_double(v) << "\n";
    });

    // ---- otmatrix ----
    auto* c_otm = app.add_subcommand("otmatrix", "pairwise OT distances between dataset means");
    std::vector<std::string> otm_files;
    bool otm_dists = false, otm_with_repl = false;
    std::int64_t otm_n = 0, otm_B = 15;
    double otm_fraction = 0.0, otm_p = 2.0, otm_q = -1.0, otm_tau = 0.0;
    std::uint64_t otm_seed = 0;
    int otm_dim = 1, otm_threads = 1;
    std::string otm_out;
    c_otm->add_option("datasets", otm_files, "two or more dataset files")->required()->expected(-1);
    c_otm->add_flag("--dists-input", otm_dists, "treat inputs as distance-matrix CSVs");
    c_otm->add_option("--n", otm_n, "absolute subsample size");
    c_otm->add_option("--fraction", otm_fraction, "subsample this fraction of each dataset");
    c_otm->add_option("--B", otm_B, "subsamples per dataset")->capture_default_str();
    c_otm->add_option("--p", otm_p, "transport exponent")->capture_default_str();
    c_otm->add_option("--q", otm_q, "ground norm (default: p)");
    c_otm->add_option("--seed", otm_seed, "master seed (shared by all datasets)")->capture_default_str();
    c_otm->add_option("--dim", otm_dim, "homology dimension")->capture_default_str();
    c_otm->add_option("--threads", otm_threads, "worker threads")->capture_default_str();
    c_otm->add_option("--min-persistence", otm_tau, "per-diagram persistence floor");
    c_otm->add_flag("--with-replacement", otm_with_repl, "draw subsamples with replacement");
    c_otm->add_option("-o,--output", otm_out, "distance-matrix CSV path (default: stdout)");
    c_otm->callback([&] {
        std::vector<ph::Dataset> datasets;
        for (const auto& f : otm_files) {
            ph::DatasetSpec s;
            s.kind = otm_dists ? ph::DatasetSpec::Kind::distance_csv
                               : ph::DatasetSpec::Kind::points_csv;
            s.path = f;
            datasets.push_back(ph::materialize(s));
        }
        ph::OtMatrixOptions o;
        o.n = otm_n;
        o.fraction = otm_fraction;
        o.B = otm_B;
        o.p = otm_p;
        o.q = otm_q > 0.0 ? otm_q : otm_p;
        o.seed = otm_seed;
        o.approx.hom_dim = otm_dim;
        o.approx.min_persistence = otm_tau;
        o.approx.with_replacement = otm_with_repl;
        o.approx.threads = otm_threads;
        const Eigen::MatrixXd M = ph::export_ot_matrix(datasets, o, otm_out);
        if (otm_out.empty()) {
            for (Eigen::Index i = 0; i < M.rows(); ++i) {
                for (Eigen::Index j = 0; j < M.cols(); ++j) {
                    if (j) std::cout << ',';
                    std::cout << ph::format_double(M(i, j));
                }
                std::cout << "\n";
            }
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    return 0;
}

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ph::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ph::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ph::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ph::ArgumentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}
