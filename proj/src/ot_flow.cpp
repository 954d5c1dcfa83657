#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>

#include "ph/parallel.hpp"
#include "ph/transport.hpp"

// Partial transport between persistence measures as min-cost flow on a bipartite
// graph with a diagonal source/sink pair.  Arc (i,j) is dropped when routing both
// endpoints through the diagonal is never worse (c_ij^p > dA_i^p + dB_j^p), which
// keeps the graph near-linear for diagonal-heavy diagrams.  Costs are scaled to
// 41-bit integers so optimality tests are exact in int64; the reported cost is
// re-accumulated from the plan with true double costs, making the integer grid a
// tie-breaking detail (objective error <= ~1e-9 relative).  Masses are exact
// integer unit counts whenever both denominators are known; integral instances
// are solved by a spanning-tree simplex, the rest by successive shortest paths.

namespace ph {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::int64_t kCostGrid = 1ll << 41;
constexpr std::int64_t kIntInf = std::numeric_limits<std::int64_t>::max() / 4;

struct Arc {
    int to;
    double cap;
    std::int64_t cost;
    int rev;
};

class FlowGraph {
  public:
    explicit FlowGraph(int n) : adj_(n), pi_(n, 0) {}

    void add_arc(int u, int v, double cap, std::int64_t cost) {
        adj_[u].push_back({v, cap, cost, static_cast<int>(adj_[v].size())});
        adj_[v].push_back({u, 0.0, -cost, static_cast<int>(adj_[u].size()) - 1});
    }

    double flow_on(int u, int k) const {  // forward arc k of node u
        const Arc& a = adj_[u][k];
        return adj_[a.to][a.rev].cap;
    }

    // primal-dual: Dijkstra on reduced costs, then a blocking flow over the
    // zero-reduced-cost subgraph; repeats until `supply` is routed
    void run(int S, int T, double supply, double eps) {
        const int n = static_cast<int>(adj_.size());
        std::vector<std::int64_t> dist(n);
        std::vector<int> level(n), arc_at(n);
        double remaining = supply;
        while (remaining > eps) {
            // Dijkstra
            std::fill(dist.begin(), dist.end(), kIntInf);
            dist[S] = 0;
            using Item = std::pair<std::int64_t, int>;
            std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
            heap.emplace(0, S);
            while (!heap.empty()) {
                const auto [du, u] = heap.top();
                heap.pop();
                if (du != dist[u]) continue;
                for (const Arc& a : adj_[u]) {
                    if (a.cap <= 0.0) continue;
                    const std::int64_t nd = du + a.cost + pi_[u] - pi_[a.to];
                    if (nd < dist[a.to]) {
                        dist[a.to] = nd;
                        heap.emplace(nd, a.to);
                    }
                }
            }
            if (dist[T] >= kIntInf)
                throw ConfigError("transport network has no augmenting path (internal)");
            for (int v = 0; v < n; ++v) pi_[v] += std::min(dist[v], dist[T]);

            // BFS levels over admissible arcs
            std::fill(level.begin(), level.end(), -1);
            std::queue<int> q;
            level[S] = 0;
            q.push(S);
            while (!q.empty()) {
                const int u = q.front();
                q.pop();
                for (const Arc& a : adj_[u]) {
                    if (a.cap <= 0.0 || level[a.to] >= 0) continue;
                    if (a.cost + pi_[u] - pi_[a.to] != 0) continue;
                    level[a.to] = level[u] + 1;
                    q.push(a.to);
                }
            }
            if (level[T] < 0)
                throw ConfigError("transport network admissible graph lost the sink (internal)");
            std::fill(arc_at.begin(), arc_at.end(), 0);
            double pushed;
            while ((pushed = push(S, T, remaining, level, arc_at)) > 0.0)
                remaining -= pushed;
        }
    }

    std::vector<std::vector<Arc>>& adj() { return adj_; }

  private:
    double push(int u, int T, double limit, const std::vector<int>& level,
                std::vector<int>& arc_at) {
        if (u == T || limit <= 0.0) return limit;
        for (int& k = arc_at[u]; k < static_cast<int>(adj_[u].size()); ++k) {
            Arc& a = adj_[u][k];
            if (a.cap <= 0.0 || level[a.to] != level[u] + 1) continue;
            if (a.cost + pi_[u] - pi_[a.to] != 0) continue;
            const double got = push(a.to, T, std::min(limit, a.cap), level, arc_at);
            if (got > 0.0) {
                a.cap -= got;
                adj_[a.to][a.rev].cap += got;
                return got;
            }
        }
        return 0.0;
    }

    std::vector<std::vector<Arc>> adj_;
    std::vector<std::int64_t> pi_;
};

// Uncapacitated min-cost transshipment on a spanning-tree basis with block
// pricing.  The leaving arc is the first blocking arc met walking the cycle from
// the apex in the flow direction (Cunningham's rule), which keeps every basis
// strongly feasible, so degenerate pivots cannot cycle.  Supplies, flows and
// costs are integers; artificial arcs to a virtual root cost more than any real
// routing, so a feasible instance ends with every artificial at zero flow.
class NetworkSimplex {
  public:
    NetworkSimplex(int n_real, std::int64_t big_cost)
        : nn_(n_real + 1), root_(n_real), big_(big_cost), b_(nn_, 0) {}

    int add_arc(int u, int v, std::int64_t cost) {
        from_.push_back(u);
        to_.push_back(v);
        cost_.push_back(cost);
        return static_cast<int>(from_.size()) - 1;
    }
    void add_supply(int v, std::int64_t s) { b_[v] += s; }
    std::int64_t flow(int arc) const { return flow_[arc]; }

    void solve() {
        const int structural = static_cast<int>(from_.size());
        flow_.assign(from_.size(), 0);
        parent_.assign(nn_, root_);
        parc_.assign(nn_, -1);
        depth_.assign(nn_, 1);
        pi_.assign(nn_, 0);
        children_.assign(nn_, {});
        pos_.assign(nn_, 0);
        stamp_.assign(nn_, 0);
        parent_[root_] = -1;
        depth_[root_] = 0;
        for (int v = 0; v < root_; ++v) {
            const bool up = b_[v] >= 0;
            parc_[v] = add_arc(up ? v : root_, up ? root_ : v, big_);
            flow_.push_back(up ? b_[v] : -b_[v]);
            pi_[v] = up ? big_ : -big_;
            pos_[v] = static_cast<int>(children_[root_].size());
            children_[root_].push_back(v);
        }
        in_tree_.assign(from_.size(), 0);
        for (int v = 0; v < root_; ++v) in_tree_[parc_[v]] = 1;

        const int E = static_cast<int>(from_.size());
        const int block =
            std::max(64, 2 * static_cast<int>(std::sqrt(static_cast<double>(E))));
        int scan = 0;
        while (true) {
            int enter = -1;
            std::int64_t best = 0;
            for (int seen = 0; seen < E;) {
                const int upto = std::min(block, E - seen);
                for (int k = 0; k < upto; ++k) {
                    const int a = scan;
                    scan = scan + 1 == E ? 0 : scan + 1;
                    if (in_tree_[a]) continue;
                    const std::int64_t rc = cost_[a] - pi_[from_[a]] + pi_[to_[a]];
                    if (rc < best) {
                        best = rc;
                        enter = a;
                    }
                }
                seen += upto;
                if (enter >= 0) break;
            }
            if (enter < 0) break;
            pivot(enter);
        }
        for (int a = structural; a < E; ++a)
            if (flow_[a] != 0)
                throw ConfigError("transport network is infeasible (internal)");
    }

  private:
    // residual of the tree arc above c for a push in the given direction;
    // uncapacitated arcs aligned with the push never block
    std::int64_t residual(int c, bool push_down) const {
        const int a = parc_[c];
        const bool arc_down = to_[a] == c;
        return arc_down == push_down ? kIntInf : flow_[a];
    }
    void adjust(int c, bool push_down, std::int64_t theta) {
        const int a = parc_[c];
        const bool arc_down = to_[a] == c;
        flow_[a] += arc_down == push_down ? theta : -theta;
    }
    void detach(int c) {
        auto& sib = children_[parent_[c]];
        const int moved = sib.back();
        sib[pos_[c]] = moved;
        pos_[moved] = pos_[c];
        sib.pop_back();
    }
    void attach(int c) {
        auto& sib = children_[parent_[c]];
        pos_[c] = static_cast<int>(sib.size());
        sib.push_back(c);
    }

    void pivot(int e) {
        const int u = from_[e], v = to_[e];
        int x = u, y = v;
        while (depth_[x] > depth_[y]) x = parent_[x];
        while (depth_[y] > depth_[x]) y = parent_[y];
        while (x != y) {
            x = parent_[x];
            y = parent_[y];
        }
        const int apex = x;
        side_u_.clear();
        for (int c = u; c != apex; c = parent_[c]) side_u_.push_back(c);
        side_v_.clear();
        for (int c = v; c != apex; c = parent_[c]) side_v_.push_back(c);

        // the entering arc pushes u -> v, so flow runs apex->u down one side and
        // v->apex up the other
        std::int64_t theta = kIntInf;
        for (int c : side_u_) theta = std::min(theta, residual(c, true));
        for (int c : side_v_) theta = std::min(theta, residual(c, false));
        if (theta == kIntInf)
            throw ConfigError("transport network is unbounded (internal)");

        int leave_node = -1;
        for (auto it = side_u_.rbegin(); it != side_u_.rend(); ++it)
            if (residual(*it, true) == theta) {
                leave_node = *it;
                break;
            }
        if (leave_node < 0)
            for (int c : side_v_)
                if (residual(c, false) == theta) {
                    leave_node = c;
                    break;
                }

        flow_[e] += theta;
        for (int c : side_u_) adjust(c, true, theta);
        for (int c : side_v_) adjust(c, false, theta);

        const int leave_arc = parc_[leave_node];
        ++cur_stamp_;
        subtree_.clear();
        subtree_.push_back(leave_node);
        stamp_[leave_node] = cur_stamp_;
        for (std::size_t h = 0; h < subtree_.size(); ++h)
            for (int c : children_[subtree_[h]]) {
                stamp_[c] = cur_stamp_;
                subtree_.push_back(c);
            }
        const bool v_in = stamp_[v] == cur_stamp_;
        const std::int64_t rc = cost_[e] - pi_[u] + pi_[v];
        const std::int64_t delta = v_in ? -rc : rc;
        const int w_in = v_in ? v : u;
        const int w_out = v_in ? u : v;

        // re-root the detached subtree at w_in by reversing its parent chain
        int node = w_in, new_parent = w_out, new_parc = e;
        while (true) {
            const int old_parent = parent_[node];
            const int old_parc = parc_[node];
            detach(node);
            parent_[node] = new_parent;
            parc_[node] = new_parc;
            attach(node);
            if (node == leave_node) break;
            new_parent = node;
            new_parc = old_parc;
            node = old_parent;
        }
        in_tree_[leave_arc] = 0;
        in_tree_[e] = 1;

        for (int c : subtree_) pi_[c] += delta;
        depth_[w_in] = depth_[w_out] + 1;
        walk_.clear();
        walk_.push_back(w_in);
        for (std::size_t h = 0; h < walk_.size(); ++h)
            for (int c : children_[walk_[h]]) {
                depth_[c] = depth_[walk_[h]] + 1;
                walk_.push_back(c);
            }
    }

    int nn_, root_;
    std::int64_t big_;
    std::vector<std::int64_t> b_, cost_, flow_, pi_;
    std::vector<int> from_, to_, parent_, parc_, depth_, pos_, stamp_;
    std::vector<char> in_tree_;
    std::vector<std::vector<int>> children_;
    std::vector<int> side_u_, side_v_, subtree_, walk_;
    int cur_stamp_ = 0;
};

double powered(double base_cost, double scale, double p) {
    return std::pow(base_cost / scale, p);
}

std::int64_t grid_cost(double powered_cost) {
    return std::llround(powered_cost * static_cast<double>(kCostGrid));
}

}  // namespace

OtResult ot_distance(const PersistenceMeasure& mu, const PersistenceMeasure& nu,
                     double p, double q) {
    validate_order_params(p, q);
    if (mu.hom_dim != nu.hom_dim)
        throw ArgumentError("ot_distance: measures have different homology dimensions");

    const int m = static_cast<int>(mu.atoms.size());
    const int n = static_cast<int>(nu.atoms.size());
    OtResult out;
    if (m == 0 && n == 0) return out;

    // identical atom lists transport in place: exact zero, no solve
    if (m == n) {
        bool same = true;
        for (int i = 0; i < m && same; ++i)
            same = mu.atoms[i].x == nu.atoms[i].x && mu.atoms[i].y == nu.atoms[i].y &&
                   mu.atoms[i].mass == nu.atoms[i].mass;
        if (same) {
            for (int i = 0; i < m; ++i)
                out.plan.flows.push_back({i, i, mu.atoms[i].mass});
            return out;
        }
    }

    // exact integer mass units when both denominators are known and fit
    double unit = 0.0;  // mass of one unit; 0 = float mode
    if (mu.mass_denominator && nu.mass_denominator) {
        const std::int64_t L = std::lcm(*mu.mass_denominator, *nu.mass_denominator);
        const double total = mu.total_mass() + nu.total_mass();
        if (static_cast<double>(L) * total < 9.0e15) {
            unit = 1.0 / static_cast<double>(L);
            for (const auto& a : mu.atoms)
                if (std::abs(a.mass * L - std::llround(a.mass * L)) > 1e-6) unit = 0.0;
            for (const auto& a : nu.atoms)
                if (std::abs(a.mass * L - std::llround(a.mass * L)) > 1e-6) unit = 0.0;
        }
    }
    const auto units = [&](double mass) {
        return unit > 0.0 ? static_cast<double>(std::llround(mass / unit)) : mass;
    };

    double maxc = 0.0;
    std::vector<double> dA(m), dB(n);
    for (int i = 0; i < m; ++i) {
        dA[i] = diagonal_distance(mu.atoms[i].x, mu.atoms[i].y, q);
        maxc = std::max(maxc, dA[i]);
    }
    for (int j = 0; j < n; ++j) {
        dB[j] = diagonal_distance(nu.atoms[j].x, nu.atoms[j].y, q);
        maxc = std::max(maxc, dB[j]);
    }
    Eigen::MatrixXd cross(m, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            cross(i, j) = ground_distance(mu.atoms[i].x, mu.atoms[i].y, nu.atoms[j].x,
                                          nu.atoms[j].y, q);
            maxc = std::max(maxc, cross(i, j));
        }
    const double scale = maxc > 0.0 ? maxc : 1.0;

    std::vector<double> powA(m), powB(n);
    for (int i = 0; i < m; ++i) powA[i] = powered(dA[i], scale, p);
    for (int j = 0; j < n; ++j) powB[j] = powered(dB[j], scale, p);

    // the arc list shared by both solvers; src/dst use the plan convention
    struct Cand {
        std::int32_t src, dst;
        double powered_cost;
        std::int64_t cost;
    };
    std::vector<Cand> cands;
    for (int i = 0; i < m; ++i)
        cands.push_back({i, kDiagonal, powA[i], grid_cost(powA[i])});
    for (int j = 0; j < n; ++j)
        cands.push_back({kDiagonal, j, powB[j], grid_cost(powB[j])});
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            const double c = powered(cross(i, j), scale, p);
            if (c > powA[i] + powB[j]) continue;  // diagonal reroute is never worse
            cands.push_back({i, j, c, grid_cost(c)});
        }

    double supply_mu = 0.0, supply_nu = 0.0;
    for (int i = 0; i < m; ++i) supply_mu += units(mu.atoms[i].mass);
    for (int j = 0; j < n; ++j) supply_nu += units(nu.atoms[j].mass);
    const double total_supply = supply_mu + supply_nu;

    std::vector<double> arc_flow(cands.size(), 0.0);
    const bool integral = unit > 0.0 && total_supply < static_cast<double>(1 << 17) &&
                          m + n + 4 < (1 << 17);
    if (integral) {
        // nodes: mu atoms, nu atoms, diagonal source, diagonal sink
        const int DS = m + n, DT = m + n + 1;
        const auto node = [&](std::int32_t i, bool is_src) {
            if (i == kDiagonal) return is_src ? DS : DT;
            return is_src ? static_cast<int>(i) : m + static_cast<int>(i);
        };
        const std::int64_t U = static_cast<std::int64_t>(total_supply);
        NetworkSimplex ns(m + n + 2, (U + 1) * (kCostGrid * 4));
        std::vector<int> ids(cands.size());
        for (std::size_t k = 0; k < cands.size(); ++k)
            ids[k] = ns.add_arc(node(cands[k].src, true), node(cands[k].dst, false),
                                cands[k].cost);
        ns.add_arc(DS, DT, 0);
        for (int i = 0; i < m; ++i)
            ns.add_supply(i, std::llround(units(mu.atoms[i].mass)));
        for (int j = 0; j < n; ++j)
            ns.add_supply(m + j, -std::llround(units(nu.atoms[j].mass)));
        ns.add_supply(DS, std::llround(supply_nu));
        ns.add_supply(DT, -std::llround(supply_mu));
        ns.solve();
        for (std::size_t k = 0; k < cands.size(); ++k)
            arc_flow[k] = static_cast<double>(ns.flow(ids[k]));
    } else {
        // nodes: S, mu atoms, nu atoms, diagonal source, diagonal sink, T
        const int S = 0, DS = m + n + 1, DT = m + n + 2, T = m + n + 3;
        const auto node = [&](std::int32_t i, bool is_src) {
            if (i == kDiagonal) return is_src ? DS : DT;
            return is_src ? 1 + static_cast<int>(i) : 1 + m + static_cast<int>(i);
        };
        FlowGraph g(m + n + 4);
        for (int i = 0; i < m; ++i) g.add_arc(S, 1 + i, units(mu.atoms[i].mass), 0);
        g.add_arc(S, DS, supply_nu, 0);
        for (int j = 0; j < n; ++j) g.add_arc(1 + m + j, T, units(nu.atoms[j].mass), 0);
        g.add_arc(DT, T, supply_mu, 0);
        std::vector<std::pair<int, int>> ids(cands.size());
        for (std::size_t k = 0; k < cands.size(); ++k) {
            const int u = node(cands[k].src, true);
            ids[k] = {u, static_cast<int>(g.adj()[u].size())};
            g.add_arc(u, node(cands[k].dst, false), kInf, cands[k].cost);
        }
        g.add_arc(DS, DT, kInf, 0);
        const double eps = unit > 0.0 ? 0.5 : 1e-12 * std::max(1.0, total_supply);
        g.run(S, T, total_supply, eps);
        for (std::size_t k = 0; k < cands.size(); ++k)
            arc_flow[k] = g.flow_on(ids[k].first, ids[k].second);
    }

    std::vector<double> terms;
    for (std::size_t k = 0; k < cands.size(); ++k) {
        if (arc_flow[k] <= 0.0) continue;
        const double mass = unit > 0.0 ? arc_flow[k] * unit : arc_flow[k];
        out.plan.flows.push_back({cands[k].src, cands[k].dst, mass});
        terms.push_back(mass * cands[k].powered_cost);
    }
    // smallest-first summation: bit-identical under argument swap
    std::sort(terms.begin(), terms.end());
    double power_scaled = 0.0;
    for (double t : terms) power_scaled += t;
    out.power_cost = power_scaled * std::pow(scale, p);
    out.distance = scale * std::pow(power_scaled, 1.0 / p);
    return out;
}

Eigen::MatrixXd pairwise_ot_matrix(const std::vector<PersistenceMeasure>& measures,
                                   double p, double q, int threads) {
    validate_order_params(p, q);
    const int k = static_cast<int>(measures.size());
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(k, k);
    std::vector<std::pair<int, int>> jobs;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) jobs.emplace_back(i, j);
    parallel_for(static_cast<std::int64_t>(jobs.size()), threads, [&](std::int64_t t) {
        const auto [i, j] = jobs[t];
        const double d = ot_distance(measures[i], measures[j], p, q).distance;
        D(i, j) = d;
        D(j, i) = d;
    });
    return D;
}

}  // namespace ph
