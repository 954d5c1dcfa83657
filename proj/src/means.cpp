#include "ph/means.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ph/rng.hpp"
#include "ph/transport.hpp"

namespace ph {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::pair<double, double>> expanded_points(const PersistenceDiagram& D) {
    std::vector<std::pair<double, double>> out;
    for (const auto& p : D.points)
        for (std::int64_t r = 0; r < p.multiplicity; ++r)
            out.emplace_back(p.birth, p.death);
    return out;
}

}  // namespace

PersistenceMeasure mean_measure(const std::vector<PersistenceDiagram>& diagrams) {
    if (diagrams.empty())
        throw ArgumentError("mean_measure: need at least one diagram");
    const auto B = static_cast<std::int64_t>(diagrams.size());
    std::vector<MeasureAtom> atoms;
    for (const auto& d : diagrams) {
        if (d.hom_dim != diagrams.front().hom_dim)
            throw ArgumentError("mean_measure: diagrams have different homology dimensions");
        for (const auto& pt : d.points)
            atoms.push_back(
                {pt.birth, pt.death, static_cast<double>(pt.multiplicity) / static_cast<double>(B)});
    }
    return make_measure(diagrams.front().hom_dim, std::move(atoms), B);
}

QuantizeResult quantize(const PersistenceMeasure& measure, const QuantizeOptions& opts) {
    validate_order_params(opts.p, opts.q);
    if (opts.max_centroids < 1)
        throw ArgumentError("quantize: max_centroids must be >= 1");
    if (opts.max_iter < 1) throw ArgumentError("quantize: max_iter must be >= 1");
    if (!(opts.rel_tol >= 0.0)) throw ArgumentError("quantize: rel_tol must be >= 0");
    for (const auto& [cx, cy] : opts.init)
        if (!(cy > cx))
            throw ArgumentError("quantize: initial centroid must lie above the diagonal");

    const auto& atoms = measure.atoms;
    QuantizeResult out;
    out.measure.hom_dim = measure.hom_dim;
    out.measure.mass_denominator = measure.mass_denominator;
    out.diagram.hom_dim = measure.hom_dim;
    if (atoms.empty()) throw ArgumentError("quantize: measure has no atoms");

    std::vector<std::pair<double, double>> cents = opts.init;
    if (cents.empty()) {
        // heaviest cost contributors first: mass-weighted distance to the diagonal
        std::vector<int> order(atoms.size());
        for (int i = 0; i < static_cast<int>(atoms.size()); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            const double ka =
                atoms[a].mass * std::pow(diagonal_distance(atoms[a].x, atoms[a].y, opts.q), opts.p);
            const double kb =
                atoms[b].mass * std::pow(diagonal_distance(atoms[b].x, atoms[b].y, opts.q), opts.p);
            if (ka != kb) return ka > kb;
            return std::make_pair(atoms[a].x, atoms[a].y) < std::make_pair(atoms[b].x, atoms[b].y);
        });
        for (int i : order) {
            const std::pair<double, double> c{atoms[i].x, atoms[i].y};
            if (std::find(cents.begin(), cents.end(), c) == cents.end()) cents.push_back(c);
            if (static_cast<int>(cents.size()) == opts.max_centroids) break;
        }
    }

    const auto cell_cost = [&](double zx, double zy, const std::vector<int>& cell) {
        double s = 0.0;
        for (int i : cell)
            s += atoms[i].mass *
                 std::pow(ground_distance(atoms[i].x, atoms[i].y, zx, zy, opts.q), opts.p);
        return s;
    };

    std::vector<int> assign(atoms.size(), kDiagonal);
    const auto assign_cells = [&](std::vector<std::vector<int>>& cells) {
        cells.assign(cents.size(), {});
        for (int i = 0; i < static_cast<int>(atoms.size()); ++i) {
            double best = std::pow(diagonal_distance(atoms[i].x, atoms[i].y, opts.q), opts.p);
            int best_j = kDiagonal;
            for (int j = 0; j < static_cast<int>(cents.size()); ++j) {
                const double c = std::pow(
                    ground_distance(atoms[i].x, atoms[i].y, cents[j].first, cents[j].second, opts.q),
                    opts.p);
                if (c < best) {
                    best = c;
                    best_j = j;
                }
            }
            assign[i] = best_j;
            if (best_j != kDiagonal) cells[best_j].push_back(i);
        }
    };

    std::vector<std::vector<int>> cells;
    double prev = kInf;
    for (int iter = 0; iter < opts.max_iter; ++iter) {
        assign_cells(cells);
        for (int j = 0; j < static_cast<int>(cents.size()); ++j) {
            if (cells[j].empty()) continue;
            auto [zx, zy] = cents[j];
            if (opts.p == 2.0 && opts.q == 2.0) {
                double wx = 0.0, wy = 0.0, w = 0.0;
                for (int i : cells[j]) {
                    wx += atoms[i].mass * atoms[i].x;
                    wy += atoms[i].mass * atoms[i].y;
                    w += atoms[i].mass;
                }
                zx = wx / w;
                zy = wy / w;
            } else {
                // Weiszfeld-style reweighted means; each step is accepted only if
                // it lowers the cell cost, so the sweep never increases the trace
                double cur = cell_cost(zx, zy, cells[j]);
                for (int it = 0; it < 30; ++it) {
                    double wx = 0.0, wy = 0.0, w = 0.0;
                    for (int i : cells[j]) {
                        const double d = ground_distance(atoms[i].x, atoms[i].y, zx, zy, opts.q);
                        const double wi = atoms[i].mass * std::pow(std::max(d, 1e-300), opts.p - 2.0);
                        wx += wi * atoms[i].x;
                        wy += wi * atoms[i].y;
                        w += wi;
                    }
                    const double nx = wx / w, ny = wy / w;
                    const double cand = cell_cost(nx, ny, cells[j]);
                    if (!(cand <= cur)) break;
                    const bool settled =
                        std::abs(nx - zx) + std::abs(ny - zy) <= 1e-9 * (1.0 + std::abs(zx) + std::abs(zy));
                    zx = nx;
                    zy = ny;
                    cur = cand;
                    if (settled) break;
                }
            }
            cents[j] = {zx, zy};
        }
        double cost = 0.0;
        for (int i = 0; i < static_cast<int>(atoms.size()); ++i) {
            if (assign[i] == kDiagonal)
                cost += atoms[i].mass * std::pow(diagonal_distance(atoms[i].x, atoms[i].y, opts.q), opts.p);
            else
                cost += atoms[i].mass * std::pow(ground_distance(atoms[i].x, atoms[i].y,
                                                                 cents[assign[i]].first,
                                                                 cents[assign[i]].second, opts.q),
                                                 opts.p);
        }
        out.trace.push_back(cost);
        // empty cells have no pull left; drop their centroids
        std::vector<std::pair<double, double>> alive;
        for (int j = 0; j < static_cast<int>(cents.size()); ++j)
            if (!cells[j].empty()) alive.push_back(cents[j]);
        out.dropped.push_back(static_cast<int>(cents.size() - alive.size()));
        cents = std::move(alive);
        if (iter > 0 && prev - cost <= opts.rel_tol * std::max(prev, 1e-300)) {
            prev = cost;
            break;
        }
        prev = cost;
    }

    assign_cells(cells);
    std::vector<MeasureAtom> catoms;
    std::vector<DiagramPoint> cpoints;
    for (int j = 0; j < static_cast<int>(cents.size()); ++j) {
        if (cells[j].empty()) continue;
        double w = 0.0;
        for (int i : cells[j]) w += atoms[i].mass;
        // snap accumulated cell masses back onto the exact 1/denominator grid
        if (measure.mass_denominator) {
            const auto d = static_cast<double>(*measure.mass_denominator);
            w = static_cast<double>(std::llround(w * d)) / d;
        }
        catoms.push_back({cents[j].first, cents[j].second, w});
        cpoints.push_back({cents[j].first, cents[j].second, 1});
    }
    out.measure = make_measure(measure.hom_dim, std::move(catoms), measure.mass_denominator);
    out.diagram = make_diagram(measure.hom_dim, std::move(cpoints));
    out.final_loss = ot_distance(measure, out.measure, opts.p, opts.q).power_cost;
    return out;
}

double frechet_function(const PersistenceDiagram& mean,
                        const std::vector<PersistenceDiagram>& diagrams) {
    if (diagrams.empty())
        throw ArgumentError("frechet_function: need at least one diagram");
    double s = 0.0;
    for (const auto& d : diagrams) {
        const Matching m = wasserstein(mean, d, 2.0, 2.0);
        if (m.infinite) return kInf;
        s += m.cost * m.cost;
    }
    return s / static_cast<double>(diagrams.size());
}

FrechetResult frechet_mean(const std::vector<PersistenceDiagram>& diagrams,
                           const FrechetOptions& opts) {
    if (diagrams.empty())
        throw ArgumentError("frechet_mean: need at least one diagram");
    const int B = static_cast<int>(diagrams.size());
    for (const auto& d : diagrams) {
        if (d.hom_dim != diagrams.front().hom_dim)
            throw ArgumentError("frechet_mean: diagrams have different homology dimensions");
        if (d.essential != diagrams.front().essential)
            throw ArgumentError(
                "frechet_mean: diagrams have different essential classes, no finite mean exists");
    }
    if (opts.init_index >= B)
        throw ArgumentError("frechet_mean: init_index " + std::to_string(opts.init_index) +
                            " out of range for " + std::to_string(B) + " diagrams");
    if (opts.max_iter < 1) throw ArgumentError("frechet_mean: max_iter must be >= 1");

    int idx = opts.init_index;
    if (opts.init_seed) {
        RandomStream rs(*opts.init_seed);
        idx = static_cast<int>(rs.uniform_index(static_cast<std::uint64_t>(B)));
    } else if (idx < 0) {
        std::vector<std::pair<double, int>> keys;
        for (int i = 0; i < B; ++i) keys.emplace_back(total_persistence(diagrams[i], 2.0, 2.0), i);
        std::sort(keys.begin(), keys.end());
        idx = keys[(B - 1) / 2].second;
    }
    const std::vector<double>& essential = diagrams.front().essential;
    std::vector<std::pair<double, double>> pts = expanded_points(diagrams[idx]);

    const auto as_diagram = [&](const std::vector<std::pair<double, double>>& ps) {
        std::vector<DiagramPoint> dp;
        dp.reserve(ps.size());
        for (const auto& [x, y] : ps) dp.push_back({x, y, 1});
        return make_diagram(diagrams.front().hom_dim, std::move(dp), essential);
    };

    FrechetResult out;
    double prev = frechet_function(as_diagram(pts), diagrams);
    out.trace.push_back(prev);
    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        std::sort(pts.begin(), pts.end());  // expanded matching indices follow canonical order
        const PersistenceDiagram meanD = as_diagram(pts);
        const int nm = static_cast<int>(pts.size());
        std::vector<double> sumx(nm, 0.0), sumy(nm, 0.0);
        std::vector<int> diag_count(nm, 0);
        std::vector<std::pair<double, double>> spawns;
        for (const auto& d : diagrams) {
            const Matching m = wasserstein(meanD, d, 2.0, 2.0);
            if (m.infinite)
                throw ConfigError("frechet_mean: matching became infinite (internal)");
            const auto dexp = expanded_points(d);
            for (const auto& [a, b] : m.pairs) {
                if (a != kDiagonal && b != kDiagonal) {
                    sumx[a] += dexp[b].first;
                    sumy[a] += dexp[b].second;
                } else if (a != kDiagonal) {
                    ++diag_count[a];
                } else if (b != kDiagonal) {
                    const double proj = (dexp[b].first + dexp[b].second) / 2.0;
                    spawns.emplace_back((dexp[b].first + (B - 1) * proj) / B,
                                        (dexp[b].second + (B - 1) * proj) / B);
                }
            }
        }
        std::vector<std::pair<double, double>> next;
        for (int t = 0; t < nm; ++t) {
            if (diag_count[t] == B) continue;  // pulled fully onto the diagonal
            const double proj = (pts[t].first + pts[t].second) / 2.0;
            next.emplace_back((sumx[t] + diag_count[t] * proj) / B,
                              (sumy[t] + diag_count[t] * proj) / B);
        }
        int structural = nm - static_cast<int>(next.size());
        double value = frechet_function(as_diagram(next), diagrams);
        if (!spawns.empty()) {
            std::vector<std::pair<double, double>> with = next;
            with.insert(with.end(), spawns.begin(), spawns.end());
            const double v2 = frechet_function(as_diagram(with), diagrams);
            if (v2 <= value) {
                structural += static_cast<int>(spawns.size());
                next = std::move(with);
                value = v2;
            }
        }
        out.structural.push_back(structural);
        std::vector<std::pair<double, double>> sorted_next = next;
        std::sort(sorted_next.begin(), sorted_next.end());
        const bool settled = sorted_next == pts;  // matchings stabilized: fixed point
        pts = std::move(next);
        out.iterations = iter;
        out.trace.push_back(value);
        prev = value;
        if (settled) break;
    }
    out.mean = as_diagram(pts);
    out.value = prev;
    return out;
}

}  // namespace ph
