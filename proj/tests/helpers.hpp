#pragma once

// Shared random-instance generators and brute-force reference solvers for the
// test binaries.  The brute solvers are deliberately independent of the library
// implementations.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "ph/diagram.hpp"
#include "ph/measure.hpp"
#include "ph/point_cloud.hpp"
#include "ph/rng.hpp"
#include "ph/transport.hpp"

namespace testutil {

inline bool exact_equal(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    return A.rows() == B.rows() && A.cols() == B.cols() && (A.array() == B.array()).all();
}

inline ph::PointCloud random_cloud(ph::RandomStream& rs, int n, int dim,
                                   double lo = -1.0, double hi = 1.0) {
    ph::PointCloud X;
    X.points.resize(n, dim);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < dim; ++j) X.points(i, j) = rs.uniform(lo, hi);
    return X;
}

inline ph::FiniteMetricSpace random_metric(ph::RandomStream& rs, int n, int dim = 3) {
    return ph::pairwise_distances(random_cloud(rs, n, dim));
}

// essential-free diagram with unit multiplicities
inline ph::PersistenceDiagram random_diagram(ph::RandomStream& rs, int max_points,
                                             int hom_dim = 1) {
    const int k = static_cast<int>(rs.uniform_index(max_points + 1));
    std::vector<ph::DiagramPoint> pts;
    for (int i = 0; i < k; ++i) {
        const double b = rs.uniform(0.0, 2.0);
        pts.push_back({b, b + rs.uniform(0.05, 2.0), 1});
    }
    return ph::make_diagram(hom_dim, std::move(pts));
}

inline ph::PersistenceMeasure random_measure(ph::RandomStream& rs, int max_atoms,
                                             int hom_dim = 1) {
    const int k = static_cast<int>(rs.uniform_index(max_atoms)) + 1;
    std::vector<ph::MeasureAtom> atoms;
    for (int i = 0; i < k; ++i) {
        const double b = rs.uniform(0.0, 2.0);
        atoms.push_back({b, b + rs.uniform(0.05, 2.0), rs.uniform(0.1, 2.0)});
    }
    return ph::make_measure(hom_dim, std::move(atoms));
}

// sums smallest-first so equal addend multisets give bit-identical totals
inline double sorted_sum(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

inline std::vector<ph::DiagramPoint> expand(const ph::PersistenceDiagram& D) {
    std::vector<ph::DiagramPoint> out;
    for (const auto& p : D.points)
        for (std::int64_t c = 0; c < p.multiplicity; ++c) out.push_back({p.birth, p.death, 1});
    return out;
}

namespace detail {

struct BruteState {
    const std::vector<ph::DiagramPoint>* a;
    const std::vector<ph::DiagramPoint>* b;
    double p, q;
    bool bottleneck;
    std::vector<bool> used;
    std::vector<double> addends;
    double best;
};

inline double leaf_value(BruteState& st) {
    std::vector<double> v = st.addends;
    for (std::size_t j = 0; j < st.b->size(); ++j)
        if (!st.used[j]) {
            const auto& pt = (*st.b)[j];
            const double d = ph::diagonal_distance(pt.birth, pt.death, st.q);
            v.push_back(st.bottleneck ? d : std::pow(d, st.p));
        }
    if (st.bottleneck) {
        double m = 0.0;
        for (double x : v) m = std::max(m, x);
        return m;
    }
    return sorted_sum(std::move(v));
}

inline void recurse(BruteState& st, std::size_t i) {
    if (i == st.a->size()) {
        st.best = std::min(st.best, leaf_value(st));
        return;
    }
    const auto& pa = (*st.a)[i];
    const double dd = ph::diagonal_distance(pa.birth, pa.death, st.q);
    st.addends.push_back(st.bottleneck ? dd : std::pow(dd, st.p));
    recurse(st, i + 1);
    st.addends.pop_back();
    for (std::size_t j = 0; j < st.b->size(); ++j) {
        if (st.used[j]) continue;
        const auto& pb = (*st.b)[j];
        const double c = ph::ground_distance(pa.birth, pa.death, pb.birth, pb.death, st.q);
        st.used[j] = true;
        st.addends.push_back(st.bottleneck ? c : std::pow(c, st.p));
        recurse(st, i + 1);
        st.addends.pop_back();
        st.used[j] = false;
    }
}

}  // namespace detail

// optimal p-th-power Wasserstein cost by full enumeration of partial bijections
// (unmatched points pay their diagonal cost); diagrams must have no essentials
inline double brute_wasserstein_power(const ph::PersistenceDiagram& A,
                                      const ph::PersistenceDiagram& B, double p,
                                      double q) {
    const auto a = expand(A), b = expand(B);
    detail::BruteState st{&a, &b, p, q, false, std::vector<bool>(b.size(), false),
                          {}, std::numeric_limits<double>::infinity()};
    detail::recurse(st, 0);
    return st.best;
}

inline double brute_bottleneck(const ph::PersistenceDiagram& A,
                               const ph::PersistenceDiagram& B, double q) {
    const auto a = expand(A), b = expand(B);
    detail::BruteState st{&a, &b, 1.0, q, true, std::vector<bool>(b.size(), false),
                          {}, std::numeric_limits<double>::infinity()};
    detail::recurse(st, 0);
    return st.best;
}

// powered cost of a solver matching, accumulated smallest-first (comparable
// with brute_wasserstein_power bit-for-bit when the addend multisets agree)
inline double matching_power_sorted(const ph::PersistenceDiagram& A,
                                    const ph::PersistenceDiagram& B,
                                    const ph::Matching& m, double p, double q) {
    const auto a = expand(A), b = expand(B);
    std::vector<double> v;
    for (const auto& [i, j] : m.pairs) {
        if (i == ph::kDiagonal && j == ph::kDiagonal) continue;
        double c;
        if (i == ph::kDiagonal)
            c = ph::diagonal_distance(b[j].birth, b[j].death, q);
        else if (j == ph::kDiagonal)
            c = ph::diagonal_distance(a[i].birth, a[i].death, q);
        else
            c = ph::ground_distance(a[i].birth, a[i].death, b[j].birth, b[j].death, q);
        v.push_back(std::pow(c, p));
    }
    return sorted_sum(std::move(v));
}

}  // namespace testutil
