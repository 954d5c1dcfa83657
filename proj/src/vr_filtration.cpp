#include <algorithm>
#include <cmath>
#include <string>

#include "ph/vr.hpp"

namespace ph {

namespace {

// appends all simplices extending `cur` by vertices > cur.back(), tracking the
// running diameter so subtrees over max_scale are pruned
void grow(const Eigen::MatrixXd& d, int n, int max_card, double max_scale,
          std::vector<int>& cur, double diam, Filtration& out, std::size_t limit) {
    if (out.size() > limit)
        throw ArgumentError(
            "build_vr_filtration: simplex count exceeds " + std::to_string(limit) +
            "; lower max_dim or max_scale (or use rips_persistence)");
    out.push_back({cur, diam});
    if (static_cast<int>(cur.size()) == max_card) return;
    for (int v = cur.back() + 1; v < n; ++v) {
        double dv = diam;
        bool ok = true;
        for (int u : cur) {
            const double duv = d(u, v);
            if (duv > max_scale) {
                ok = false;
                break;
            }
            dv = std::max(dv, duv);
        }
        if (!ok) continue;
        cur.push_back(v);
        grow(d, n, max_card, max_scale, cur, dv, out, limit);
        cur.pop_back();
    }
}

}  // namespace

Filtration build_vr_filtration(const FiniteMetricSpace& M, int max_dim,
                               double max_scale) {
    if (max_dim < 0) throw ArgumentError("build_vr_filtration: max_dim must be >= 0");
    if (std::isnan(max_scale) || max_scale < 0.0)
        throw ArgumentError("build_vr_filtration: max_scale must be >= 0");
    if (!M.dist.allFinite())
        throw ArgumentError("build_vr_filtration: distances must be finite");
    const int n = static_cast<int>(M.size());
    const int max_card = std::min(max_dim + 2, n);  // simplices up to dim max_dim+1
    constexpr std::size_t kLimit = 50'000'000;

    Filtration out;
    std::vector<int> cur;
    for (int v = 0; v < n; ++v) {
        cur.push_back(v);
        grow(M.dist, n, max_card, max_scale, cur, 0.0, out, kLimit);
        cur.pop_back();
    }
    std::sort(out.begin(), out.end(), [](const FilteredSimplex& a, const FilteredSimplex& b) {
        if (a.value != b.value) return a.value < b.value;
        if (a.vertices.size() != b.vertices.size())
            return a.vertices.size() < b.vertices.size();
        return a.vertices < b.vertices;
    });
    return out;
}

}  // namespace ph
