#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "ph/transport.hpp"

namespace ph {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::pair<double, double>> expand(const PersistenceDiagram& D) {
    std::vector<std::pair<double, double>> out;
    for (const auto& pt : D.points)
        for (std::int64_t m = 0; m < pt.multiplicity; ++m)
            out.emplace_back(pt.birth, pt.death);
    return out;
}

void check_same_dim(const PersistenceDiagram& A, const PersistenceDiagram& B,
                    const char* who) {
    if (A.hom_dim != B.hom_dim)
        throw ArgumentError(std::string(who) + ": diagrams have different homology "
                            "dimensions (" + std::to_string(A.hom_dim) + " vs " +
                            std::to_string(B.hom_dim) + ")");
}

bool same_multiset(std::vector<double> a, std::vector<double> b) {
    if (a.size() != b.size()) return false;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

// --- Hopcroft-Karp on an explicit adjacency list ---
struct HopcroftKarp {
    int nl, nr;
    std::vector<std::vector<int>> adj;
    std::vector<int> matchL, matchR, level;

    HopcroftKarp(int l, int r) : nl(l), nr(r), adj(l) {}

    bool bfs() {
        std::queue<int> q;
        level.assign(nl, -1);
        for (int i = 0; i < nl; ++i)
            if (matchL[i] < 0) {
                level[i] = 0;
                q.push(i);
            }
        bool reachable = false;
        while (!q.empty()) {
            const int i = q.front();
            q.pop();
            for (int j : adj[i]) {
                const int k = matchR[j];
                if (k < 0)
                    reachable = true;
                else if (level[k] < 0) {
                    level[k] = level[i] + 1;
                    q.push(k);
                }
            }
        }
        return reachable;
    }

    bool dfs(int i) {
        for (int j : adj[i]) {
            const int k = matchR[j];
            if (k < 0 || (level[k] == level[i] + 1 && dfs(k))) {
                matchL[i] = j;
                matchR[j] = i;
                return true;
            }
        }
        level[i] = -1;
        return false;
    }

    int run() {
        matchL.assign(nl, -1);
        matchR.assign(nr, -1);
        int size = 0;
        while (bfs())
            for (int i = 0; i < nl; ++i)
                if (matchL[i] < 0 && dfs(i)) ++size;
        return size;
    }
};

}  // namespace

Matching wasserstein(const PersistenceDiagram& A, const PersistenceDiagram& B,
                     double p, double q) {
    validate_order_params(p, q);
    check_same_dim(A, B, "wasserstein");

    Matching out;
    if (!same_multiset(A.essential, B.essential)) {
        out.infinite = true;
        out.cost = kInf;
        return out;
    }
    const auto a = expand(A), b = expand(B);
    const int n1 = static_cast<int>(a.size()), n2 = static_cast<int>(b.size());
    if (n1 + n2 == 0) return out;

    Eigen::MatrixXd base(n1 + n2, n1 + n2);
    double maxc = 0.0;
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
            const double c = ground_distance(a[i].first, a[i].second, b[j].first,
                                             b[j].second, q);
            base(i, j) = c;
            maxc = std::max(maxc, c);
        }
    std::vector<double> diag_a(n1), diag_b(n2);
    for (int i = 0; i < n1; ++i) {
        diag_a[i] = diagonal_distance(a[i].first, a[i].second, q);
        maxc = std::max(maxc, diag_a[i]);
    }
    for (int j = 0; j < n2; ++j) {
        diag_b[j] = diagonal_distance(b[j].first, b[j].second, q);
        maxc = std::max(maxc, diag_b[j]);
    }

    // rescale by the max base cost before powering; exact for the optimum and
    // keeps large p away from overflow
    const double scale = maxc > 0.0 ? maxc : 1.0;
    Eigen::MatrixXd C(n1 + n2, n1 + n2);
    for (int i = 0; i < n1 + n2; ++i)
        for (int j = 0; j < n1 + n2; ++j) {
            double c;
            if (i < n1 && j < n2)
                c = base(i, j);
            else if (i < n1)
                c = diag_a[i];
            else if (j < n2)
                c = diag_b[j];
            else
                c = 0.0;
            C(i, j) = std::pow(c / scale, p);
        }

    const auto row_to_col = solve_assignment(C);
    // sum smallest-first so the value is bit-identical under argument swap
    std::vector<double> terms(n1 + n2);
    for (int i = 0; i < n1 + n2; ++i) terms[i] = C(i, row_to_col[i]);
    std::sort(terms.begin(), terms.end());
    double total = 0.0;
    for (double t : terms) total += t;
    out.cost = scale * std::pow(total, 1.0 / p);
    for (int i = 0; i < n1; ++i) {
        const int j = row_to_col[i];
        out.pairs.emplace_back(i, j < n2 ? j : kDiagonal);
    }
    for (int t = 0; t < n2; ++t) {
        const int j = row_to_col[n1 + t];
        if (j < n2) out.pairs.emplace_back(kDiagonal, j);
    }
    return out;
}

double matching_cost(const PersistenceDiagram& A, const PersistenceDiagram& B,
                     const Matching& m, double p, double q) {
    validate_order_params(p, q);
    if (m.infinite) return kInf;
    const auto a = expand(A), b = expand(B);
    auto pairs = m.pairs;
    std::sort(pairs.begin(), pairs.end(), [](const auto& u, const auto& v) {
        const bool ud = u.first == kDiagonal, vd = v.first == kDiagonal;
        if (ud != vd) return vd;  // real left points first, in index order
        return ud ? u.second < v.second : u.first < v.first;
    });
    double total = 0.0;
    for (const auto& [i, j] : pairs) {
        double c;
        if (i != kDiagonal && j != kDiagonal)
            c = ground_distance(a[i].first, a[i].second, b[j].first, b[j].second, q);
        else if (i != kDiagonal)
            c = diagonal_distance(a[i].first, a[i].second, q);
        else
            c = diagonal_distance(b[j].first, b[j].second, q);
        total += std::pow(c, p);
    }
    return std::pow(total, 1.0 / p);
}

Matching bottleneck(const PersistenceDiagram& A, const PersistenceDiagram& B,
                    double q) {
    validate_order_params(1.0, q);
    check_same_dim(A, B, "bottleneck");

    Matching out;
    if (A.essential.size() != B.essential.size()) {
        out.infinite = true;
        out.cost = kInf;
        return out;
    }
    double ess_cost = 0.0;
    {
        auto ea = A.essential, eb = B.essential;
        std::sort(ea.begin(), ea.end());
        std::sort(eb.begin(), eb.end());
        for (std::size_t k = 0; k < ea.size(); ++k)
            ess_cost = std::max(ess_cost, std::abs(ea[k] - eb[k]));
    }

    const auto a = expand(A), b = expand(B);
    const int n1 = static_cast<int>(a.size()), n2 = static_cast<int>(b.size());

    Eigen::MatrixXd cross(n1, n2);
    std::vector<double> diag_a(n1), diag_b(n2);
    std::vector<double> cands{0.0, ess_cost};
    for (int i = 0; i < n1; ++i) {
        diag_a[i] = diagonal_distance(a[i].first, a[i].second, q);
        cands.push_back(diag_a[i]);
    }
    for (int j = 0; j < n2; ++j) {
        diag_b[j] = diagonal_distance(b[j].first, b[j].second, q);
        cands.push_back(diag_b[j]);
    }
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
            cross(i, j) =
                ground_distance(a[i].first, a[i].second, b[j].first, b[j].second, q);
            cands.push_back(cross(i, j));
        }
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

    // a matching covering {i : diag_a > t} and {j : diag_b > t} exists iff each
    // side is coverable on its own (Mendelsohn-Dulmage)
    const auto coverable = [&](double t, bool left_side) -> bool {
        std::vector<int> req;
        for (int i = 0; i < (left_side ? n1 : n2); ++i)
            if ((left_side ? diag_a[i] : diag_b[i]) > t) req.push_back(i);
        if (req.empty()) return true;
        const int other = left_side ? n2 : n1;
        HopcroftKarp hk(static_cast<int>(req.size()), other);
        for (std::size_t r = 0; r < req.size(); ++r)
            for (int j = 0; j < other; ++j)
                if ((left_side ? cross(req[r], j) : cross(j, req[r])) <= t)
                    hk.adj[r].push_back(j);
        return hk.run() == static_cast<int>(req.size());
    };
    const auto feasible = [&](double t) { return coverable(t, true) && coverable(t, false); };

    int lo = 0, hi = static_cast<int>(cands.size()) - 1;
    while (lo < hi) {
        const int mid = lo + (hi - lo) / 2;
        if (feasible(cands[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    const double t = std::max(cands[lo], ess_cost);

    // reconstruct one optimal matching: cover the required left points, cover the
    // required right points, merge by alternating walks, send the rest diagonal
    std::vector<int> matchL(n1, -1), matchR(n2, -1);
    {
        HopcroftKarp hka(n1, n2);
        for (int i = 0; i < n1; ++i) {
            if (!(diag_a[i] > t)) continue;
            for (int j = 0; j < n2; ++j)
                if (cross(i, j) <= t) hka.adj[i].push_back(j);
        }
        hka.run();
        matchL = hka.matchL;
        matchR = hka.matchR;

        HopcroftKarp hkb(n1, n2);
        for (int i = 0; i < n1; ++i)
            for (int j = 0; j < n2; ++j)
                if (diag_b[j] > t && cross(i, j) <= t) hkb.adj[i].push_back(j);
        hkb.run();

        for (int j = 0; j < n2; ++j) {
            if (!(diag_b[j] > t) || matchR[j] >= 0) continue;
            int jj = j;
            while (jj >= 0) {
                const int i = hkb.matchR[jj];
                const int displaced = matchL[i];
                matchL[i] = jj;
                matchR[jj] = i;
                if (displaced >= 0) matchR[displaced] = -1;
                jj = displaced;
                if (jj >= 0 && hkb.matchR[jj] < 0) break;  // displaced point is optional
            }
        }
    }
    for (int i = 0; i < n1; ++i) out.pairs.emplace_back(i, matchL[i] >= 0 ? matchL[i] : kDiagonal);
    for (int j = 0; j < n2; ++j)
        if (matchR[j] < 0) out.pairs.emplace_back(kDiagonal, j);
    out.cost = t;
    return out;
}

EdgeCover p_hausdorff(const Eigen::MatrixXd& cross, double p) {
    validate_order_params(p, 1.0);
    const int n1 = static_cast<int>(cross.rows()), n2 = static_cast<int>(cross.cols());
    if (n1 == 0 || n2 == 0)
        throw ArgumentError("p_hausdorff: point sets must be nonempty");
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j)
            if (!(cross(i, j) >= 0.0) || !std::isfinite(cross(i, j)))
                throw ArgumentError("p_hausdorff: ground distances must be finite and "
                                    "non-negative");

    Eigen::VectorXd rmin = cross.rowwise().minCoeff();
    Eigen::VectorXd cmin = cross.colwise().minCoeff();
    const double maxc = cross.maxCoeff();
    const double scale = maxc > 0.0 ? maxc : 1.0;

    // minimum edge cover = best matching + cheapest pendant edges for the rest
    const int m = n1 + n2;
    Eigen::MatrixXd C(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            double c;
            if (i < n1 && j < n2)
                c = cross(i, j);
            else if (i < n1)
                c = rmin(i);
            else if (j < n2)
                c = cmin(j);
            else
                c = 0.0;
            C(i, j) = std::pow(c / scale, p);
        }
    const auto row_to_col = solve_assignment(C);

    EdgeCover out;
    std::vector<double> terms(m);
    for (int i = 0; i < m; ++i) terms[i] = C(i, row_to_col[i]);
    std::sort(terms.begin(), terms.end());
    double total = 0.0;
    for (double t : terms) total += t;
    out.value = scale * std::pow(total, 1.0 / p);
    for (int i = 0; i < n1; ++i) {
        const int j = row_to_col[i];
        if (j < n2) {
            out.correspondence.emplace_back(i, j);
        } else {
            int best = 0;
            cross.row(i).minCoeff(&best);
            out.correspondence.emplace_back(i, best);
        }
    }
    for (int t = 0; t < n2; ++t) {
        const int j = row_to_col[n1 + t];
        if (j < n2) {
            int best = 0;
            cross.col(j).minCoeff(&best);
            out.correspondence.emplace_back(best, j);
        }
    }
    return out;
}

EdgeCover p_hausdorff(const PointCloud& X, const PointCloud& Y, double p) {
    if (X.dim() != Y.dim())
        throw ArgumentError("p_hausdorff: point clouds have different ambient dimensions");
    Eigen::MatrixXd cross(X.size(), Y.size());
    for (Eigen::Index i = 0; i < X.size(); ++i)
        for (Eigen::Index j = 0; j < Y.size(); ++j)
            cross(i, j) = (X.points.row(i) - Y.points.row(j)).norm();
    return p_hausdorff(cross, p);
}

EdgeCover p_hausdorff(const FiniteMetricSpace& M, const std::vector<std::int64_t>& rows,
                      const std::vector<std::int64_t>& cols, double p) {
    Eigen::MatrixXd cross(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (rows[i] < 0 || rows[i] >= M.size() || cols[j] < 0 || cols[j] >= M.size())
                throw ArgumentError("p_hausdorff: index out of range");
            cross(i, j) = M.dist(rows[i], cols[j]);
        }
    return p_hausdorff(cross, p);
}

}  // namespace ph
