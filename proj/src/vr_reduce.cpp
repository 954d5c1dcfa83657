#include <algorithm>
#include <string>
#include <unordered_map>

#include "ph/vr.hpp"

namespace ph {

namespace {

struct VertexSetHash {
    std::size_t operator()(const std::vector<int>& v) const noexcept {
        std::size_t h = 1469598103934665603ull;
        for (int x : v) {
            h ^= static_cast<std::size_t>(x) + 0x9e3779b9;
            h *= 1099511628211ull;
        }
        return h;
    }
};

using SimplexIndex = std::unordered_map<std::vector<int>, int, VertexSetHash>;

std::string simplex_str(const FilteredSimplex& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.vertices.size(); ++i)
        out += (i ? "," : "") + std::to_string(s.vertices[i]);
    return out + "}";
}

// validates ordering and vertex lists, returns vertex-set -> position map
SimplexIndex index_filtration(const Filtration& f) {
    SimplexIndex idx;
    idx.reserve(f.size() * 2);
    for (std::size_t j = 0; j < f.size(); ++j) {
        const auto& s = f[j];
        if (s.vertices.empty())
            throw ArgumentError("filtration contract violated: empty simplex at position " +
                                std::to_string(j));
        for (std::size_t k = 1; k < s.vertices.size(); ++k)
            if (s.vertices[k - 1] >= s.vertices[k])
                throw ArgumentError("filtration contract violated: vertices of " +
                                    simplex_str(s) + " are not strictly increasing");
        if (j > 0) {
            const auto& t = f[j - 1];
            const bool ordered =
                t.value < s.value ||
                (t.value == s.value &&
                 (t.vertices.size() < s.vertices.size() ||
                  (t.vertices.size() == s.vertices.size() && t.vertices < s.vertices)));
            if (!ordered)
                throw ArgumentError(
                    "filtration contract violated: not sorted by (value, dim, lex) at "
                    "position " + std::to_string(j));
        }
        if (!idx.emplace(s.vertices, static_cast<int>(j)).second)
            throw ArgumentError("filtration contract violated: duplicate simplex " +
                                simplex_str(s));
    }
    return idx;
}

// boundary column of f[j] as ascending positions; verifies face-closedness
std::vector<int> boundary_column(const Filtration& f, const SimplexIndex& idx, int j) {
    const auto& s = f[j];
    std::vector<int> col;
    if (s.vertices.size() == 1) return col;
    std::vector<int> facet(s.vertices.size() - 1);
    for (std::size_t omit = 0; omit < s.vertices.size(); ++omit) {
        std::size_t w = 0;
        for (std::size_t k = 0; k < s.vertices.size(); ++k)
            if (k != omit) facet[w++] = s.vertices[k];
        const auto it = idx.find(facet);
        if (it == idx.end())
            throw ArgumentError("filtration contract violated: " + simplex_str(s) +
                                " is missing a facet (not face-closed)");
        if (f[it->second].value > s.value)
            throw ArgumentError("filtration contract violated: facet of " +
                                simplex_str(s) + " has larger value");
        col.push_back(it->second);
    }
    std::sort(col.begin(), col.end());
    return col;
}

// symmetric difference of sorted vectors (Z/2 column addition)
std::vector<int> add_mod2(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, k = 0;
    while (i < a.size() && k < b.size()) {
        if (a[i] < b[k])
            out.push_back(a[i++]);
        else if (b[k] < a[i])
            out.push_back(b[k++]);
        else {
            ++i;
            ++k;
        }
    }
    out.insert(out.end(), a.begin() + i, a.end());
    out.insert(out.end(), b.begin() + k, b.end());
    return out;
}

std::vector<PersistenceDiagram> assemble_diagrams(
    const Filtration& f, int max_hom_dim,
    const std::vector<std::pair<int, int>>& pairs,
    const std::vector<int>& essential_positions) {
    std::vector<std::vector<DiagramPoint>> pts(max_hom_dim + 1);
    std::vector<std::vector<double>> ess(max_hom_dim + 1);
    for (const auto& [b, d] : pairs) {
        const int dim = f[b].dim();
        if (dim <= max_hom_dim) pts[dim].push_back({f[b].value, f[d].value, 1});
    }
    for (int j : essential_positions) {
        const int dim = f[j].dim();
        if (dim <= max_hom_dim) ess[dim].push_back(f[j].value);
    }
    std::vector<PersistenceDiagram> out;
    for (int k = 0; k <= max_hom_dim; ++k)
        out.push_back(make_diagram(k, std::move(pts[k]), std::move(ess[k])));
    return out;
}

}  // namespace

std::vector<PersistenceDiagram> compute_persistence(const Filtration& f,
                                                    int max_hom_dim) {
    if (max_hom_dim < 0) throw ArgumentError("compute_persistence: max_hom_dim must be >= 0");
    const auto idx = index_filtration(f);
    const int S = static_cast<int>(f.size());

    int top = 0;
    for (const auto& s : f) top = std::max(top, s.dim());
    const int reduce_top = std::min(top, max_hom_dim + 1);

    std::vector<int> pivot_owner(S, -1);
    std::vector<char> cleared(S, 0), zero_col(S, 0);
    std::unordered_map<int, std::vector<int>> stored;
    std::vector<std::pair<int, int>> pairs;

    // twist order: top dimension first so deaths clear lower-dimensional columns
    for (int d = reduce_top; d >= 1; --d) {
        for (int j = 0; j < S; ++j) {
            if (f[j].dim() != d || cleared[j]) continue;
            std::vector<int> col = boundary_column(f, idx, j);
            while (!col.empty()) {
                const int low = col.back();
                const int own = pivot_owner[low];
                if (own < 0) break;
                col = add_mod2(col, stored.at(own));
            }
            if (col.empty()) {
                zero_col[j] = 1;
            } else {
                const int low = col.back();
                pivot_owner[low] = j;
                cleared[low] = 1;
                pairs.emplace_back(low, j);
                stored.emplace(j, std::move(col));
            }
        }
    }

    std::vector<int> essential;
    for (int j = 0; j < S; ++j) {
        const int d = f[j].dim();
        if (d > max_hom_dim || cleared[j]) continue;
        if (d == 0 || zero_col[j]) essential.push_back(j);
    }
    return assemble_diagrams(f, max_hom_dim, pairs, essential);
}

std::vector<PersistenceDiagram> naive_reduction_oracle(const Filtration& f,
                                                       int max_hom_dim) {
    if (max_hom_dim < 0)
        throw ArgumentError("naive_reduction_oracle: max_hom_dim must be >= 0");
    const auto idx = index_filtration(f);
    const int S = static_cast<int>(f.size());

    std::vector<std::vector<int>> R(S);
    std::vector<int> owner(S, -1);
    for (int j = 0; j < S; ++j) {
        R[j] = boundary_column(f, idx, j);
        while (!R[j].empty() && owner[R[j].back()] >= 0)
            R[j] = add_mod2(R[j], R[owner[R[j].back()]]);
        if (!R[j].empty()) owner[R[j].back()] = j;
    }

    std::vector<std::pair<int, int>> pairs;
    std::vector<int> essential;
    for (int j = 0; j < S; ++j) {
        if (!R[j].empty()) continue;  // death column, not a class
        if (owner[j] >= 0)
            pairs.emplace_back(j, owner[j]);
        else
            essential.push_back(j);
    }
    return assemble_diagrams(f, max_hom_dim, pairs, essential);
}

}  // namespace ph
