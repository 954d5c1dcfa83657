#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "ph/vr.hpp"

using namespace ph;

namespace {

FiniteMetricSpace equilateral(double s) {
    FiniteMetricSpace M;
    M.dist.resize(3, 3);
    M.dist << 0, s, s, s, 0, s, s, s, 0;
    return M;
}

PointCloud unit_square() {
    PointCloud X;
    X.points.resize(4, 2);
    X.points << 0, 0, 1, 0, 1, 1, 0, 1;
    return X;
}

FiniteMetricSpace permuted(const FiniteMetricSpace& M, const std::vector<int>& perm) {
    FiniteMetricSpace P;
    const auto n = M.size();
    P.dist.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) P.dist(i, j) = M.dist(perm[i], perm[j]);
    return P;
}

}  // namespace

TEST_CASE("two-point filtration") {
    FiniteMetricSpace M;
    M.dist.resize(2, 2);
    M.dist << 0, 1, 1, 0;
    const Filtration f = build_vr_filtration(M, 1);
    REQUIRE(f.size() == 3);
    CHECK(f[0].vertices == std::vector<int>{0});
    CHECK(f[0].value == 0.0);
    CHECK(f[1].vertices == std::vector<int>{1});
    CHECK(f[2].vertices == std::vector<int>{0, 1});
    CHECK(f[2].value == 1.0);
}

TEST_CASE("equilateral filtration: vertices, edges, triangle at s") {
    const Filtration f = build_vr_filtration(equilateral(0.7), 1);
    REQUIRE(f.size() == 7);
    for (int i = 0; i < 3; ++i) {
        CHECK(f[i].dim() == 0);
        CHECK(f[i].value == 0.0);
    }
    for (int i = 3; i < 6; ++i) {
        CHECK(f[i].dim() == 1);
        CHECK(f[i].value == 0.7);
    }
    CHECK(f[6].dim() == 2);
    CHECK(f[6].value == 0.7);
    CHECK(f[6].vertices == std::vector<int>{0, 1, 2});
}

TEST_CASE("simplex counts on ten points") {
    RandomStream rs(21);
    const FiniteMetricSpace M = testutil::random_metric(rs, 10);
    CHECK(build_vr_filtration(M, 1).size() == 10 + 45 + 120);
}

TEST_CASE("filtration is sorted by (value, dim, lex) and face-closed") {
    RandomStream rs(22);
    const FiniteMetricSpace M = testutil::random_metric(rs, 8);
    const Filtration f = build_vr_filtration(M, 2);
    for (std::size_t i = 1; i < f.size(); ++i) {
        const auto& a = f[i - 1];
        const auto& b = f[i];
        const auto ka = std::make_tuple(a.value, a.dim(), a.vertices);
        const auto kb = std::make_tuple(b.value, b.dim(), b.vertices);
        CHECK(ka < kb);
    }
    CHECK_NOTHROW(compute_persistence(f, 2));  // face closure is validated inside
}

TEST_CASE("max_scale truncates by diameter") {
    RandomStream rs(23);
    const FiniteMetricSpace M = testutil::random_metric(rs, 7);
    const double cut = 0.8;
    for (const auto& s : build_vr_filtration(M, 2, cut)) CHECK(s.value <= cut);
}

TEST_CASE("non-finite distances are rejected") {
    FiniteMetricSpace M;
    M.dist.resize(2, 2);
    M.dist << 0, std::numeric_limits<double>::quiet_NaN(),
        std::numeric_limits<double>::quiet_NaN(), 0;
    CHECK_THROWS_AS(build_vr_filtration(M, 1), ArgumentError);
}

TEST_CASE("single point: one essential class in H0") {
    FiniteMetricSpace M;
    M.dist.resize(1, 1);
    M.dist << 0;
    const auto dgms = compute_persistence(build_vr_filtration(M, 1), 1);
    REQUIRE(dgms.size() == 2);
    CHECK(dgms[0].points.empty());
    CHECK(dgms[0].essential == std::vector<double>{0.0});
    CHECK(dgms[1].points.empty());
    CHECK(dgms[1].essential.empty());
}

TEST_CASE("unit square: known diagram") {
    const FiniteMetricSpace M = pairwise_distances(unit_square());
    const auto dgms = compute_persistence(build_vr_filtration(M, 1), 1);
    const double s2 = std::sqrt(2.0);

    REQUIRE(dgms[0].points.size() == 1);
    CHECK(dgms[0].points[0] == DiagramPoint{0.0, 1.0, 3});
    CHECK(dgms[0].essential == std::vector<double>{0.0});

    REQUIRE(dgms[1].points.size() == 1);
    CHECK(dgms[1].points[0].birth == 1.0);
    CHECK(dgms[1].points[0].death == s2);
    CHECK(dgms[1].points[0].multiplicity == 1);
    CHECK(dgms[1].essential.empty());
}

TEST_CASE("three equilateral points: H0 pair at s, H1 empty") {
    const auto dgms = compute_persistence(build_vr_filtration(equilateral(0.7), 1), 1);
    REQUIRE(dgms[0].points.size() == 1);
    CHECK(dgms[0].points[0] == DiagramPoint{0.0, 0.7, 2});
    CHECK(dgms[0].essential == std::vector<double>{0.0});
    CHECK(dgms[1].points.empty());
    CHECK(dgms[1].essential.empty());
}

TEST_CASE("unsorted or face-open filtrations violate the contract") {
    Filtration f = build_vr_filtration(equilateral(0.5), 1);
    std::swap(f.front(), f.back());
    CHECK_THROWS_AS(compute_persistence(f, 1), ArgumentError);

    Filtration open_f = build_vr_filtration(equilateral(0.5), 1);
    open_f.erase(open_f.begin());  // drop vertex {0}; its edges remain
    CHECK_THROWS_AS(compute_persistence(open_f, 1), ArgumentError);
}

TEST_CASE("naive oracle equals the reducer on random instances") {
    RandomStream rs(31);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 3 + static_cast<int>(rs.uniform_index(10));  // <= 12 points
        const int dim = trial % 2 ? 2 : 3;
        const FiniteMetricSpace M = pairwise_distances(testutil::random_cloud(rs, n, dim));
        const int max_hom = trial % 3 == 0 ? 2 : 1;
        const Filtration f = build_vr_filtration(M, max_hom);
        const auto fast = compute_persistence(f, max_hom);
        const auto slow = naive_reduction_oracle(f, max_hom);
        REQUIRE(fast.size() == slow.size());
        for (std::size_t d = 0; d < fast.size(); ++d) CHECK(fast[d] == slow[d]);
    }
}

TEST_CASE("implicit engine equals the explicit reducer") {
    RandomStream rs(32);
    for (int trial = 0; trial < 12; ++trial) {
        const int n = 4 + static_cast<int>(rs.uniform_index(18));
        const FiniteMetricSpace M = pairwise_distances(testutil::random_cloud(rs, n, 3));
        const int max_hom = trial % 3 == 0 ? 2 : 1;
        const double scale = trial % 2 ? std::numeric_limits<double>::infinity()
                                       : rs.uniform(0.4, 1.2);
        const auto fast = rips_persistence(M, max_hom, scale);
        const auto ref = compute_persistence(build_vr_filtration(M, max_hom, scale), max_hom);
        REQUIRE(fast.size() == ref.size());
        for (std::size_t d = 0; d < fast.size(); ++d) CHECK(fast[d] == ref[d]);
    }
}

TEST_CASE("enclosing-radius truncation of the implicit engine is lossless") {
    RandomStream rs(33);
    const FiniteMetricSpace M = pairwise_distances(testutil::random_cloud(rs, 14, 2));
    const auto full = compute_persistence(build_vr_filtration(M, 1), 1);
    const auto trunc = rips_persistence(M, 1);  // internally cuts at enclosing radius
    for (std::size_t d = 0; d < full.size(); ++d) CHECK(full[d] == trunc[d]);
}

// dense structured samples where the implicit engine's edge pruning fires heavily,
// including an integer grid whose many tied distances stress tie handling
TEST_CASE("implicit engine equals the explicit reducer on dense samples") {
    auto check = [](const FiniteMetricSpace& M, int max_hom) {
        const auto fast = rips_persistence(M, max_hom);
        const auto ref =
            compute_persistence(build_vr_filtration(M, max_hom, enclosing_radius(M)), max_hom);
        REQUIRE(fast.size() == ref.size());
        for (std::size_t d = 0; d < fast.size(); ++d) CHECK(fast[d] == ref[d]);
    };
    check(pairwise_distances(sample_annulus(140, 1.0, 0.6, 7)), 1);
    check(pairwise_distances(sample_torus(130, 0.8, 0.3, 11)), 1);
    PointCloud grid;
    grid.points.resize(36, 2);
    for (int i = 0; i < 36; ++i) {
        grid.points(i, 0) = i % 6;
        grid.points(i, 1) = i / 6;
    }
    check(pairwise_distances(grid), 2);
}

TEST_CASE("Euler consistency on full complexes") {
    RandomStream rs(34);
    for (int trial = 0; trial < 6; ++trial) {
        const int n = 3 + static_cast<int>(rs.uniform_index(6));  // <= 8 points
        const FiniteMetricSpace M = pairwise_distances(testutil::random_cloud(rs, n, 3));
        const Filtration f = build_vr_filtration(M, n - 1);
        long chi_simplices = 0;
        for (const auto& s : f) chi_simplices += s.dim() % 2 == 0 ? 1 : -1;
        const auto dgms = compute_persistence(f, n - 1);
        long chi_homology = 0;
        for (std::size_t d = 0; d < dgms.size(); ++d) {
            const long k = static_cast<long>(dgms[d].essential.size());
            chi_homology += d % 2 == 0 ? k : -k;
        }
        CHECK(chi_simplices == chi_homology);
        CHECK(chi_homology == 1);  // a full simplex is contractible
    }
}

TEST_CASE("permutation invariance of diagrams") {
    RandomStream rs(35);
    const FiniteMetricSpace M = pairwise_distances(testutil::random_cloud(rs, 11, 2));
    std::vector<int> perm(11);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = 10; i > 0; --i)
        std::swap(perm[i], perm[static_cast<int>(rs.uniform_index(i + 1))]);
    const auto a = rips_persistence(M, 1);
    const auto b = rips_persistence(permuted(M, perm), 1);
    for (std::size_t d = 0; d < a.size(); ++d) CHECK(a[d] == b[d]);
}

TEST_CASE("stability under perturbation") {
    RandomStream rs(36);
    for (int trial = 0; trial < 5; ++trial) {
        const PointCloud X = sample_annulus(30, 1.0, 0.5, 100 + trial);
        PointCloud Y = X;
        double eps = 0.0;
        for (Eigen::Index i = 0; i < Y.size(); ++i) {
            Eigen::RowVector2d delta(rs.uniform(-0.02, 0.02), rs.uniform(-0.02, 0.02));
            Y.points.row(i) += delta;
            eps = std::max(eps, delta.norm());
        }
        const auto da = rips_persistence(pairwise_distances(X), 1);
        const auto db = rips_persistence(pairwise_distances(Y), 1);
        for (int d = 0; d <= 1; ++d) {
            const Matching m = bottleneck(da[d], db[d]);
            REQUIRE(!m.infinite);
            CHECK(m.cost <= 2 * eps + 1e-12);
        }
    }
}

TEST_CASE("filter_by_persistence") {
    const PersistenceDiagram D =
        make_diagram(1, {{0.0, 0.05, 1}, {1.0, 1.5, 2}}, {0.3});
    CHECK(filter_by_persistence(D, 0.0) == D);

    const PersistenceDiagram F = filter_by_persistence(D, 0.1);
    REQUIRE(F.points.size() == 1);
    CHECK(F.points[0] == DiagramPoint{1.0, 1.5, 2});
    CHECK(F.essential == std::vector<double>{0.3});  // essentials always survive

    CHECK(filter_by_persistence(F, 0.1) == F);  // idempotent
    CHECK(filter_by_persistence(D, 0.1).total_multiplicity() <= D.total_multiplicity());
}

TEST_CASE("diagram canonicalization rules") {
    PersistenceDiagram D;
    D.hom_dim = 0;
    D.points = {{1.0, 2.0, 1}, {0.5, 0.5, 4}, {1.0, 2.0, 2}};
    D.essential = {0.7, 0.1};
    canonicalize(D);
    REQUIRE(D.points.size() == 1);  // zero-persistence dropped, duplicates merged
    CHECK(D.points[0] == DiagramPoint{1.0, 2.0, 3});
    CHECK(D.essential == std::vector<double>{0.1, 0.7});

    PersistenceDiagram bad;
    bad.points = {{2.0, 1.0, 1}};
    CHECK_THROWS_AS(canonicalize(bad), ArgumentError);
    bad.points = {{1.0, 2.0, 0}};
    CHECK_THROWS_AS(canonicalize(bad), ArgumentError);
    bad.points = {{std::numeric_limits<double>::quiet_NaN(), 2.0, 1}};
    CHECK_THROWS_AS(canonicalize(bad), ArgumentError);
}
