#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "ph/vr.hpp"

// VR persistence without materializing the filtration.  The edge graph is first
// pruned by filtration-preserving edge collapse: an edge (u, v) at value t whose
// common neighborhood is covered by a single vertex w at every scale >= t spans a
// cone link, so removing it from every level of the flag filtration is a strong
// collapse and leaves all diagrams unchanged.  Degree 0 is then Kruskal /
// union-find over the retained edges; degree k >= 1 reduces the coboundary matrix
// of k-simplices in decreasing filtration order (persistent cohomology), visiting
// a (k+1)-simplex only when some column asks for it.  Simplices paired by the
// previous degree are skipped (clearing), and a column whose first equal-diameter
// cofacet is unclaimed terminates immediately (emergent pair), which covers the
// overwhelming zero-persistence majority.  Columns that needed additions record
// the list of columns added (not the resulting coboundary, which can be enormous)
// and are re-expanded on demand.  Pairs and essentials agree with the explicit
// reduction; the filtration total order here is (diameter, combinatorial index),
// and diagrams are tie-break independent.

namespace ph {

namespace {

using i64 = std::int64_t;
using Entry = std::pair<double, i64>;  // (diameter, combinatorial index)

// C(v, k) table, k small
struct BinomTable {
    int max_k;
    std::vector<std::vector<i64>> t;  // t[k][v]

    BinomTable(int n, int mk) : max_k(mk) {
        t.assign(mk + 1, std::vector<i64>(n + 1, 0));
        for (int v = 0; v <= n; ++v) t[0][v] = 1;
        for (int k = 1; k <= mk; ++k)
            for (int v = 1; v <= n; ++v) t[k][v] = t[k][v - 1] + t[k - 1][v - 1];
    }
    i64 operator()(int v, int k) const { return (k < 0 || v < k) ? 0 : t[k][v]; }
};

// rank of a sorted vertex set in colexicographic order
i64 cns_encode(const std::vector<int>& verts, const BinomTable& B) {
    i64 c = 0;
    for (std::size_t i = 0; i < verts.size(); ++i) c += B(verts[i], static_cast<int>(i) + 1);
    return c;
}

std::vector<int> cns_decode(i64 cns, int card, int n, const BinomTable& B) {
    std::vector<int> verts(card);
    int hi = n - 1;
    for (int i = card; i >= 1; --i) {
        int lo = i - 1, v = i - 1;
        // largest v in [lo, hi] with C(v, i) <= cns
        while (lo <= hi) {
            const int mid = lo + (hi - lo) / 2;
            if (B(mid, i) <= cns) {
                v = mid;
                lo = mid + 1;
            } else {
                hi = mid - 1;
            }
        }
        verts[i - 1] = v;
        cns -= B(v, i);
        hi = v - 1;
    }
    return verts;
}

// symmetric n x n bitset of retained graph edges
class EdgeMask {
  public:
    EdgeMask(int n, const Eigen::MatrixXd& d, double threshold)
        : n_(n), stride_((static_cast<std::size_t>(n) + 63) / 64) {
        bits_.assign(stride_ * static_cast<std::size_t>(n), 0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j && d(i, j) <= threshold) set_one(i, j);
    }

    bool test(int i, int j) const {
        return (row(i)[static_cast<std::size_t>(j) >> 6] >> (j & 63)) & 1;
    }
    void clear(int i, int j) {
        row(i)[static_cast<std::size_t>(j) >> 6] &= ~(1ULL << (j & 63));
        row(j)[static_cast<std::size_t>(i) >> 6] &= ~(1ULL << (i & 63));
    }

    // vertices adjacent to both i and j, ascending
    void common(int i, int j, std::vector<int>& out) const {
        out.clear();
        const std::uint64_t* a = row(i);
        const std::uint64_t* b = row(j);
        for (std::size_t w = 0; w < stride_; ++w) {
            std::uint64_t m = a[w] & b[w];
            while (m) {
                const int bit = __builtin_ctzll(m);
                out.push_back(static_cast<int>(w * 64) + bit);
                m &= m - 1;
            }
        }
    }

    // first vertex adjacent to both i and j but not to k, or -1
    int uncovered(int i, int j, int k) const {
        const std::uint64_t* a = row(i);
        const std::uint64_t* b = row(j);
        const std::uint64_t* c = row(k);
        const std::size_t kw = static_cast<std::size_t>(k) >> 6;
        for (std::size_t w = 0; w < stride_; ++w) {
            std::uint64_t m = a[w] & b[w] & ~c[w];
            if (w == kw) m &= ~(1ULL << (k & 63));
            if (m) return static_cast<int>(w * 64) + __builtin_ctzll(m);
        }
        return -1;
    }

  private:
    const std::uint64_t* row(int i) const { return bits_.data() + stride_ * static_cast<std::size_t>(i); }
    std::uint64_t* row(int i) { return bits_.data() + stride_ * static_cast<std::size_t>(i); }
    void set_one(int i, int j) { row(i)[static_cast<std::size_t>(j) >> 6] |= 1ULL << (j & 63); }

    int n_;
    std::size_t stride_;
    std::vector<std::uint64_t> bits_;
};

// Drop every edge (u, v, t) for which some vertex w with d(u, w) <= t and
// d(v, w) <= t stays adjacent to each common neighbor x no later than x joins
// the common neighborhood: d(w, x) <= max(t, d(u, x), d(v, x)).  Such a w makes
// the link of (u, v) a cone at every scale >= t, so the removal preserves the
// persistence of the flag filtration in every degree.  Edges are processed from
// the largest down so the densest scales shrink first, and the sweep repeats
// while removals keep shrinking the neighborhoods.  Candidate dominators are
// streamed nearest-first from per-vertex sorted neighbor lists, and candidates
// are rejected cheaply by retesting the vertex that eliminated the previous one
// (remembered across sweeps), so the full verification scan runs rarely.
void collapse_edges(const Eigen::MatrixXd& d, int n, double threshold, EdgeMask& mask) {
    if (n >= 65536) return;
    struct Edge {
        double val;
        int u, v;
        int killer = -1;
    };
    std::vector<Edge> edges;
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i)
            if (d(i, j) <= threshold) edges.push_back({d(i, j), i, j});
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        if (a.val != b.val) return a.val > b.val;
        return a.u != b.u ? a.u > b.u : a.v > b.v;
    });

    // neighbors of each vertex within the threshold, nearest first
    std::vector<std::vector<std::uint16_t>> nbrs(n);
    for (int u = 0; u < n; ++u) {
        const double* col = d.col(u).data();
        auto& row = nbrs[u];
        for (int w = 0; w < n; ++w)
            if (w != u && col[w] <= threshold) row.push_back(static_cast<std::uint16_t>(w));
        std::sort(row.begin(), row.end(),
                  [col](std::uint16_t a, std::uint16_t b) {
                      return col[a] != col[b] ? col[a] < col[b] : a < b;
                  });
    }

    constexpr int kMaxCandidates = 256;
    constexpr int kMaxSteps = 1 << 15;
    constexpr int kMaxPasses = 3;
    std::vector<std::uint32_t> stamp(n, 0);
    std::uint32_t edge_id = 0;
    std::vector<int> cn;
    // after the first pass an edge only needs another look if a removal touched
    // one of its endpoints; other neighborhoods are unchanged
    std::vector<std::uint8_t> dirty(n, 1), dirty_next(n, 0);
    for (int pass = 0; pass < kMaxPasses; ++pass) {
        std::size_t removed = 0;
        std::vector<Edge> kept;
        kept.reserve(edges.size());
        for (auto& e : edges) {
            const auto [t, u, v, cached] = e;
            if (!dirty[u] && !dirty[v]) {
                kept.push_back(e);
                continue;
            }
            const double* du = d.col(u).data();
            const double* dv = d.col(v).data();
            int killer = cached;
            if (killer >= 0 && !(mask.test(u, killer) && mask.test(v, killer))) killer = -1;
            ++edge_id;
            bool dominated = false, cn_built = false;
            std::size_t iu = 0, iv = 0, vi0 = 0;
            int emitted = 0;
            // walk both neighbor lists in distance order; a vertex seen from both
            // sides is a candidate, reached in ascending max(d(u, w), d(v, w))
            for (int steps = 0; steps < kMaxSteps && emitted < kMaxCandidates;) {
                const bool au = iu < nbrs[u].size() && du[nbrs[u][iu]] <= t;
                const bool av = iv < nbrs[v].size() && dv[nbrs[v][iv]] <= t;
                if (!au && !av) break;
                int w;
                if (au && (!av || du[nbrs[u][iu]] <= dv[nbrs[v][iv]]))
                    w = nbrs[u][iu++];
                else
                    w = nbrs[v][iv++];
                ++steps;
                if (stamp[w] != edge_id) {
                    stamp[w] = edge_id;
                    continue;
                }
                if (w == u || w == v || !mask.test(u, w) || !mask.test(v, w)) continue;
                ++emitted;
                if (killer >= 0 && killer != w &&
                    (!mask.test(w, killer) ||
                     d(w, killer) > std::max({t, du[killer], dv[killer]})))
                    continue;
                // a common neighbor that w is not adjacent to rejects w in pure
                // word operations, before any distance is loaded
                const int miss = mask.uncovered(u, v, w);
                if (miss >= 0) {
                    killer = miss;
                    continue;
                }
                if (!cn_built) {
                    mask.common(u, v, cn);
                    cn_built = true;
                }
                const double* dw = d.col(w).data();
                bool covers = true;
                // start the scan where the previous candidate failed: rejecting
                // constraints cluster, so repeats fail on the first probe
                for (std::size_t k = 0, m = cn.size(); k < m; ++k) {
                    std::size_t idx = vi0 + k;
                    if (idx >= m) idx -= m;
                    const int x = cn[idx];
                    if (dw[x] > t && dw[x] > du[x] && dw[x] > dv[x]) {
                        covers = false;
                        killer = x;
                        vi0 = idx;
                        break;
                    }
                }
                if (covers) {
                    dominated = true;
                    break;
                }
            }
            if (dominated) {
                mask.clear(u, v);
                ++removed;
                dirty_next[u] = dirty_next[v] = 1;
            } else {
                e.killer = killer;
                kept.push_back(e);
            }
        }
        edges.swap(kept);
        if (removed * 50 < edges.size() || edges.empty()) break;
        dirty.swap(dirty_next);
        std::fill(dirty_next.begin(), dirty_next.end(), std::uint8_t{0});
    }
}

// insert-only open-addressing map: (k+1)-simplex index -> owning column
class PivotMap {
  public:
    explicit PivotMap(std::size_t expected) {
        std::size_t sz = 16;
        while (sz < expected * 2) sz <<= 1;
        keys_.assign(sz, kEmpty);
        vals_.resize(sz);
        mask_ = sz - 1;
    }

    const std::int32_t* find(i64 k) const {
        for (std::size_t h = slot(k);; h = (h + 1) & mask_) {
            if (keys_[h] == k) return &vals_[h];
            if (keys_[h] == kEmpty) return nullptr;
        }
    }

    void insert(i64 k, std::int32_t v) {
        if ((count_ + 1) * 3 > keys_.size() * 2) grow();
        insert_raw(k, v);
        ++count_;
    }

  private:
    static constexpr i64 kEmpty = -1;

    std::size_t slot(i64 k) const {
        std::uint64_t x = static_cast<std::uint64_t>(k);
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return static_cast<std::size_t>(x ^ (x >> 31)) & mask_;
    }

    void insert_raw(i64 k, std::int32_t v) {
        for (std::size_t h = slot(k);; h = (h + 1) & mask_) {
            if (keys_[h] == kEmpty) {
                keys_[h] = k;
                vals_[h] = v;
                return;
            }
        }
    }

    void grow() {
        std::vector<i64> ok;
        std::vector<std::int32_t> ov;
        ok.swap(keys_);
        ov.swap(vals_);
        keys_.assign(ok.size() * 2, kEmpty);
        vals_.resize(ov.size() * 2);
        mask_ = keys_.size() - 1;
        for (std::size_t h = 0; h < ok.size(); ++h)
            if (ok[h] != kEmpty) insert_raw(ok[h], ov[h]);
    }

    std::vector<i64> keys_;
    std::vector<std::int32_t> vals_;
    std::size_t mask_ = 0;
    std::size_t count_ = 0;
};

struct UnionFind {
    std::vector<int> parent, size;

    explicit UnionFind(int n) : parent(n), size(n, 1) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (size[a] < size[b]) std::swap(a, b);
        parent[b] = a;
        size[a] += size[b];
        return true;
    }
};

using MinHeap = std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>>;

std::optional<Entry> pop_min_mod2(MinHeap& heap) {
    while (!heap.empty()) {
        Entry e = heap.top();
        heap.pop();
        int count = 1;
        while (!heap.empty() && heap.top().second == e.second) {
            heap.pop();
            ++count;
        }
        if (count & 1) return e;
    }
    return std::nullopt;
}

class RipsEngine {
  public:
    RipsEngine(const Eigen::MatrixXd& dist, int n, int max_hom_dim, double threshold,
               const EdgeMask& mask)
        : d_(dist),
          n_(n),
          max_hom_dim_(max_hom_dim),
          threshold_(threshold),
          mask_(mask),
          binom_(std::max(n, 2), max_hom_dim + 2),
          pts_(max_hom_dim + 1),
          ess_(max_hom_dim + 1) {}

    std::vector<PersistenceDiagram> run() {
        std::vector<Entry> cols = degree_zero();
        for (int k = 1; k <= max_hom_dim_; ++k) cols = reduce_degree(k, cols);
        std::vector<PersistenceDiagram> out;
        for (int k = 0; k <= max_hom_dim_; ++k)
            out.push_back(make_diagram(k, std::move(pts_[k]), std::move(ess_[k])));
        return out;
    }

  private:
    // Kruskal pass; returns the unpaired (cycle-creating) edges sorted by
    // (diameter, index) ascending, which are the degree-1 columns
    std::vector<Entry> degree_zero() {
        std::vector<Entry> edges;
        for (int j = 1; j < n_; ++j) {
            const i64 base = binom_(j, 2);
            for (int i = 0; i < j; ++i)
                if (mask_.test(i, j)) edges.emplace_back(d_(i, j), base + i);
        }
        std::sort(edges.begin(), edges.end());
        UnionFind uf(n_);
        std::vector<Entry> cols;
        cols.reserve(edges.size());
        for (const auto& [diam, cns] : edges) {
            const auto v = edge_of(cns);
            if (uf.unite(v.first, v.second)) {
                if (diam > 0.0) pts_[0].push_back({0.0, diam, 1});
            } else {
                cols.emplace_back(diam, cns);
            }
        }
        for (int i = 0; i < n_; ++i)
            if (uf.find(i) == i) ess_[0].push_back(0.0);
        return cols;
    }

    std::pair<int, int> edge_of(i64 cns) const {
        int j = static_cast<int>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(cns))) / 2.0);
        while (binom_(j + 1, 2) <= cns) ++j;
        while (binom_(j, 2) > cns) --j;
        return {static_cast<int>(cns - binom_(j, 2)), j};
    }

    // all cofacets of `verts` in the retained graph, ascending index order
    std::vector<Entry> coboundary(const std::vector<int>& verts, double diam) const {
        std::vector<Entry> out;
        std::size_t at = 0;  // insertion position of v in verts
        for (int v = 0; v < n_; ++v) {
            while (at < verts.size() && verts[at] < v) ++at;
            if (at < verts.size() && verts[at] == v) continue;
            double m = 0.0;
            bool ok = true;
            for (int u : verts) {
                if (!mask_.test(v, u)) {
                    ok = false;
                    break;
                }
                m = std::max(m, d_(v, u));
            }
            if (!ok) continue;
            out.emplace_back(std::max(diam, m), cofacet_index(verts, v));
        }
        return out;
    }

    i64 cofacet_index(const std::vector<int>& verts, int v) const {
        i64 c = 0;
        int pos = 1;
        bool placed = false;
        for (int u : verts) {
            if (!placed && v < u) {
                c += binom_(v, pos++);
                placed = true;
            }
            c += binom_(u, pos++);
        }
        if (!placed) c += binom_(v, pos);
        return c;
    }

    void push_coboundary(MinHeap& heap, i64 cns, double diam, int k) const {
        const auto verts = cns_decode(cns, k + 1, n_, binom_);
        for (const auto& e : coboundary(verts, diam)) heap.push(e);
    }

    // drop duplicate-parity entries; a drained heap is ascending, hence heap-ordered
    static void compact(MinHeap& heap) {
        std::vector<Entry> kept;
        while (auto e = pop_min_mod2(heap)) kept.push_back(*e);
        heap = MinHeap(std::greater<Entry>(), std::move(kept));
    }

    // reduce degree-k columns; returns the degree-(k+1) column list (only built
    // when another pass follows)
    std::vector<Entry> reduce_degree(int k, const std::vector<Entry>& cols) {
        PivotMap owner(cols.size());
        // flat addition lists: the reduced column of pos is its own coboundary
        // plus the coboundaries of every column in vstore[pos]
        std::unordered_map<std::int32_t, std::vector<std::int32_t>> vstore;
        constexpr std::size_t kCompactFloor = std::size_t{1} << 22;

        for (std::int32_t pos = static_cast<std::int32_t>(cols.size()) - 1; pos >= 0; --pos) {
            const auto [sdiam, scns] = cols[pos];
            const auto verts = cns_decode(scns, k + 1, n_, binom_);

            // assemble, shortcutting on the first equal-diameter unclaimed cofacet
            MinHeap heap;
            bool emergent = false, equal_seen = false;
            {
                std::size_t at = 0;
                for (int v = 0; v < n_ && !emergent; ++v) {
                    while (at < verts.size() && verts[at] < v) ++at;
                    if (at < verts.size() && verts[at] == v) continue;
                    double m = 0.0;
                    bool ok = true;
                    for (int u : verts) {
                        if (!mask_.test(v, u)) {
                            ok = false;
                            break;
                        }
                        m = std::max(m, d_(v, u));
                    }
                    if (!ok) continue;
                    const Entry e(std::max(sdiam, m), cofacet_index(verts, v));
                    if (!equal_seen && e.first == sdiam) {
                        equal_seen = true;
                        if (!owner.find(e.second)) {
                            owner.insert(e.second, pos);  // zero-persistence pair
                            emergent = true;
                            break;
                        }
                    }
                    heap.push(e);
                }
            }
            if (emergent) continue;

            std::vector<std::int32_t> added;
            std::size_t compacted = kCompactFloor;
            while (true) {
                const auto piv = pop_min_mod2(heap);
                if (!piv) {
                    ess_[k].push_back(sdiam);
                    break;
                }
                const std::int32_t* own = owner.find(piv->second);
                if (!own) {
                    owner.insert(piv->second, pos);
                    if (piv->first != sdiam) pts_[k].push_back({sdiam, piv->first, 1});
                    if (!added.empty()) {
                        // additions cancel pairwise mod 2
                        std::sort(added.begin(), added.end());
                        std::vector<std::int32_t> net;
                        for (std::size_t i = 0; i < added.size();) {
                            std::size_t j = i;
                            while (j < added.size() && added[j] == added[i]) ++j;
                            if ((j - i) & 1) net.push_back(added[i]);
                            i = j;
                        }
                        if (!net.empty()) vstore.emplace(pos, std::move(net));
                    }
                    break;
                }
                heap.push(*piv);  // cancels against the owner's pivot entry
                push_coboundary(heap, cols[*own].second, cols[*own].first, k);
                added.push_back(*own);
                const auto it = vstore.find(*own);
                if (it != vstore.end()) {
                    for (const std::int32_t u : it->second) {
                        push_coboundary(heap, cols[u].second, cols[u].first, k);
                        added.push_back(u);
                    }
                }
                if (heap.size() >= 2 * compacted && heap.size() >= kCompactFloor) {
                    compact(heap);
                    compacted = std::max(heap.size(), kCompactFloor);
                }
            }
        }

        if (k == max_hom_dim_) return {};
        return next_columns(k + 1, owner);
    }

    // degree-(k+1) simplices in the retained graph that were not claimed as pivots
    std::vector<Entry> next_columns(int k, const PivotMap& claimed) const {
        std::vector<Entry> cols;
        std::vector<int> cur;
        constexpr std::size_t kLimit = 200'000'000;
        enumerate(cur, 0, k + 1, 0.0, claimed, cols, kLimit);
        std::sort(cols.begin(), cols.end());
        return cols;
    }

    void enumerate(std::vector<int>& cur, int from, int card, double diam,
                   const PivotMap& claimed, std::vector<Entry>& out,
                   std::size_t limit) const {
        if (static_cast<int>(cur.size()) == card) {
            if (out.size() > limit)
                throw ArgumentError("rips_persistence: simplex count exceeds " +
                                    std::to_string(limit) + " in degree " +
                                    std::to_string(card - 1) +
                                    "; lower max_hom_dim or max_scale");
            const i64 cns = cns_encode(cur, binom_);
            if (!claimed.find(cns)) out.emplace_back(diam, cns);
            return;
        }
        for (int v = from; v < n_; ++v) {
            double dv = diam;
            bool ok = true;
            for (int u : cur) {
                if (!mask_.test(u, v)) {
                    ok = false;
                    break;
                }
                dv = std::max(dv, d_(u, v));
            }
            if (!ok) continue;
            cur.push_back(v);
            enumerate(cur, v + 1, card, dv, claimed, out, limit);
            cur.pop_back();
        }
    }

    const Eigen::MatrixXd& d_;
    int n_;
    int max_hom_dim_;
    double threshold_;
    const EdgeMask& mask_;
    BinomTable binom_;
    std::vector<std::vector<DiagramPoint>> pts_;
    std::vector<std::vector<double>> ess_;
};

}  // namespace

std::vector<PersistenceDiagram> rips_persistence(const FiniteMetricSpace& M,
                                                 int max_hom_dim, double max_scale) {
    if (max_hom_dim < 0) throw ArgumentError("rips_persistence: max_hom_dim must be >= 0");
    if (std::isnan(max_scale) || max_scale < 0.0)
        throw ArgumentError("rips_persistence: max_scale must be >= 0");
    if (!M.dist.allFinite()) throw ArgumentError("rips_persistence: distances must be finite");
    const int n = static_cast<int>(M.size());
    if (n == 0) {
        std::vector<PersistenceDiagram> out;
        for (int k = 0; k <= max_hom_dim; ++k) out.push_back(make_diagram(k, {}));
        return out;
    }
    // homology is unchanged above the enclosing radius (the complex becomes a cone)
    const double threshold = std::min(max_scale, enclosing_radius(M));
    EdgeMask mask(n, M.dist, threshold);
    collapse_edges(M.dist, n, threshold, mask);
    return RipsEngine(M.dist, n, max_hom_dim, threshold, mask).run();
}

}  // namespace ph
