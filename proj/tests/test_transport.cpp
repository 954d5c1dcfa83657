#include <cmath>
#include <limits>
#include <map>

#include "doctest.h"
#include "helpers.hpp"
#include "ph/transport.hpp"

using namespace ph;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// recomputes a transport plan's powered cost from its flows
double plan_power(const PersistenceMeasure& mu, const PersistenceMeasure& nu,
                  const TransportPlan& plan, double p, double q) {
    double total = 0.0;
    for (const auto& f : plan.flows) {
        double c;
        if (f.src == kDiagonal && f.dst == kDiagonal)
            c = 0.0;
        else if (f.src == kDiagonal)
            c = diagonal_distance(nu.atoms[f.dst].x, nu.atoms[f.dst].y, q);
        else if (f.dst == kDiagonal)
            c = diagonal_distance(mu.atoms[f.src].x, mu.atoms[f.src].y, q);
        else
            c = ground_distance(mu.atoms[f.src].x, mu.atoms[f.src].y, nu.atoms[f.dst].x,
                                nu.atoms[f.dst].y, q);
        total += f.mass * std::pow(c, p);
    }
    return total;
}
}  // namespace

TEST_CASE("wasserstein of a diagram with itself is zero") {
    RandomStream rs(60);
    const PersistenceDiagram D = testutil::random_diagram(rs, 6);
    const Matching m = wasserstein(D, D, 2.0, 2.0);
    CHECK(m.cost == 0.0);
    CHECK(!m.infinite);
    CHECK(matching_cost(D, D, m, 2.0, 2.0) == 0.0);
}

TEST_CASE("single point against the empty diagram") {
    const PersistenceDiagram D = make_diagram(1, {{0.0, 2.0, 1}});
    const PersistenceDiagram E = make_diagram(1, {});
    const Matching m = wasserstein(D, E, 2.0, 2.0);
    CHECK(m.cost == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    REQUIRE(m.pairs.size() == 1);
    CHECK(m.pairs[0] == std::pair<std::int32_t, std::int32_t>(0, kDiagonal));
}

TEST_CASE("W1 prefers the direct match over double diagonal routing") {
    const PersistenceDiagram A = make_diagram(1, {{0.0, 2.0, 1}});
    const PersistenceDiagram B = make_diagram(1, {{0.0, 2.5, 1}});
    const Matching m = wasserstein(A, B, 1.0, 1.0);
    CHECK(m.cost == doctest::Approx(0.5).epsilon(1e-14));
    REQUIRE(m.pairs.size() == 1);
    CHECK(m.pairs[0] == std::pair<std::int32_t, std::int32_t>(0, 0));
}

TEST_CASE("essential classes gate finiteness") {
    const PersistenceDiagram A = make_diagram(0, {{0.0, 1.0, 1}}, {0.0});
    const PersistenceDiagram B = make_diagram(0, {{0.0, 1.0, 1}}, {0.0, 0.5});
    const Matching m = wasserstein(A, B, 2.0, 2.0);
    CHECK(m.infinite);

    const PersistenceDiagram C = make_diagram(0, {{0.0, 1.5, 1}}, {0.0, 0.5});
    const Matching ok = wasserstein(B, C, 2.0, 2.0);
    CHECK(!ok.infinite);
    CHECK(ok.cost == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("wasserstein argument validation") {
    const PersistenceDiagram D = make_diagram(1, {{0.0, 1.0, 1}});
    CHECK_THROWS_AS(wasserstein(D, D, 0.5, 2.0), ArgumentError);
    CHECK_THROWS_AS(wasserstein(D, D, kInf, 2.0), ArgumentError);
}

TEST_CASE("assignment solver equals brute-force enumeration") {
    RandomStream rs(61);
    for (double p : {1.0, 2.0, 3.0}) {
        for (int trial = 0; trial < 8; ++trial) {
            const PersistenceDiagram A = testutil::random_diagram(rs, 5);
            const PersistenceDiagram B = testutil::random_diagram(rs, 5);
            const Matching m = wasserstein(A, B, p, p);
            const double solver = testutil::matching_power_sorted(A, B, m, p, p);
            const double brute = testutil::brute_wasserstein_power(A, B, p, p);
            CHECK(solver == brute);  // identical addend multisets, sorted summation
            CHECK(m.cost == doctest::Approx(std::pow(brute, 1.0 / p)).epsilon(1e-12));
        }
    }
}

TEST_CASE("multiplicities expand correctly in matchings") {
    const PersistenceDiagram A = make_diagram(1, {{0.0, 1.0, 3}});
    const PersistenceDiagram B = make_diagram(1, {{0.0, 1.1, 2}});
    const Matching m = wasserstein(A, B, 1.0, 1.0);
    // two expanded copies match across (0.1 each), one goes to the diagonal (1)
    CHECK(m.cost == doctest::Approx(1.2).epsilon(1e-12));
    std::map<std::int32_t, int> left_cover;
    for (const auto& [i, j] : m.pairs)
        if (i != kDiagonal) ++left_cover[i];
    CHECK(left_cover.size() == 3);  // every expanded copy covered exactly once
}

TEST_CASE("bottleneck examples") {
    RandomStream rs(62);
    const PersistenceDiagram D = testutil::random_diagram(rs, 6);
    CHECK(bottleneck(D, D).cost == 0.0);

    const PersistenceDiagram one = make_diagram(1, {{0.0, 2.0, 1}});
    CHECK(bottleneck(one, make_diagram(1, {})).cost == doctest::Approx(1.0).epsilon(1e-14));

    const PersistenceDiagram other = make_diagram(1, {{0.0, 2.5, 1}});
    CHECK(bottleneck(one, other).cost == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("bottleneck equals brute force on small diagrams") {
    RandomStream rs(63);
    for (double q : {2.0, kInf}) {
        for (int trial = 0; trial < 10; ++trial) {
            const PersistenceDiagram A = testutil::random_diagram(rs, 5);
            const PersistenceDiagram B = testutil::random_diagram(rs, 5);
            const Matching m = bottleneck(A, B, q);
            CHECK(m.cost == doctest::Approx(testutil::brute_bottleneck(A, B, q))
                                .epsilon(1e-12));
        }
    }
}

TEST_CASE("bottleneck on essentials matches sorted births") {
    const PersistenceDiagram A = make_diagram(0, {}, {0.0, 1.0});
    const PersistenceDiagram B = make_diagram(0, {}, {0.0, 2.0});
    CHECK(bottleneck(A, B).cost == doctest::Approx(1.0).epsilon(1e-14));

    const PersistenceDiagram C = make_diagram(0, {}, {0.0});
    CHECK(bottleneck(A, C).infinite);
}

TEST_CASE("ot distance of identical measures is exactly zero") {
    RandomStream rs(64);
    const PersistenceMeasure mu = testutil::random_measure(rs, 6);
    const OtResult r = ot_distance(mu, mu, 2.0, 2.0);
    CHECK(r.distance == 0.0);
    CHECK(r.power_cost == 0.0);
    CHECK(plan_power(mu, mu, r.plan, 2.0, 2.0) == 0.0);
}

TEST_CASE("partial mass rides free, the rest transports") {
    const PersistenceMeasure mu = make_measure(1, {{0.0, 2.0, 1.0}}, 1);
    const PersistenceMeasure nu =
        make_measure(1, {{0.0, 2.0, 0.5}, {0.0, 4.0, 0.5}}, 2);
    const OtResult r = ot_distance(mu, nu, 1.0, 1.0);
    CHECK(r.distance == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.power_cost == doctest::Approx(1.0).epsilon(1e-12));
    // plan: 0.5 stays at (0,2), 0.5 moves to (0,4); no diagonal mass
    double moved = 0.0;
    for (const auto& f : r.plan.flows) {
        CHECK(f.src != kDiagonal);
        if (f.dst == 1) moved += f.mass;
    }
    CHECK(moved == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("ot plan satisfies the marginal constraints") {
    RandomStream rs(65);
    for (int trial = 0; trial < 6; ++trial) {
        const PersistenceMeasure mu = testutil::random_measure(rs, 5);
        const PersistenceMeasure nu = testutil::random_measure(rs, 5);
        const double p = 1.0 + rs.uniform_index(3);
        const OtResult r = ot_distance(mu, nu, p, p);

        std::vector<double> out_mass(mu.atoms.size(), 0.0), in_mass(nu.atoms.size(), 0.0);
        for (const auto& f : r.plan.flows) {
            CHECK(f.mass > 0.0);
            if (f.src != kDiagonal) out_mass[f.src] += f.mass;
            if (f.dst != kDiagonal) in_mass[f.dst] += f.mass;
        }
        for (std::size_t i = 0; i < mu.atoms.size(); ++i)
            CHECK(out_mass[i] == doctest::Approx(mu.atoms[i].mass).epsilon(1e-9));
        for (std::size_t j = 0; j < nu.atoms.size(); ++j)
            CHECK(in_mass[j] == doctest::Approx(nu.atoms[j].mass).epsilon(1e-9));

        // certificate: plan cost reproduces the reported objective
        CHECK(plan_power(mu, nu, r.plan, p, p) ==
              doctest::Approx(r.power_cost).epsilon(1e-9));
        CHECK(r.distance == doctest::Approx(std::pow(r.power_cost, 1.0 / p)).epsilon(1e-12));
    }
}

TEST_CASE("ot coincides with wasserstein on integer-mass diagrams") {
    RandomStream rs(66);
    for (double p : {1.0, 2.0, 3.0}) {
        for (int trial = 0; trial < 6; ++trial) {
            const PersistenceDiagram A = testutil::random_diagram(rs, 6);
            const PersistenceDiagram B = testutil::random_diagram(rs, 6);
            const Matching m = wasserstein(A, B, p, p);
            const OtResult r =
                ot_distance(diagram_to_measure(A), diagram_to_measure(B), p, p);
            CHECK(std::abs(r.distance - m.cost) <= 1e-8);
        }
    }
}

TEST_CASE("ot rejects mismatched dimensions and bad orders") {
    const PersistenceMeasure a = make_measure(1, {{0.0, 1.0, 1.0}});
    PersistenceMeasure b = a;
    b.hom_dim = 2;
    CHECK_THROWS_AS(ot_distance(a, b, 2.0, 2.0), ArgumentError);
    CHECK_THROWS_AS(ot_distance(a, a, 0.9, 2.0), ArgumentError);
}

TEST_CASE("metric axioms hold on sampled instances") {
    RandomStream rs(67);
    std::vector<PersistenceDiagram> dgms;
    for (int i = 0; i < 3; ++i) dgms.push_back(testutil::random_diagram(rs, 5));
    std::vector<PersistenceMeasure> ms;
    for (int i = 0; i < 3; ++i) ms.push_back(testutil::random_measure(rs, 5));

    for (double p : {1.0, 2.0}) {
        // symmetry is exact: the solvers sum sorted addends
        CHECK(wasserstein(dgms[0], dgms[1], p, p).cost ==
              wasserstein(dgms[1], dgms[0], p, p).cost);
        CHECK(ot_distance(ms[0], ms[1], p, p).distance ==
              ot_distance(ms[1], ms[0], p, p).distance);

        const double dab = wasserstein(dgms[0], dgms[1], p, p).cost;
        const double dbc = wasserstein(dgms[1], dgms[2], p, p).cost;
        const double dac = wasserstein(dgms[0], dgms[2], p, p).cost;
        CHECK(dac <= dab + dbc + 1e-9);
        CHECK(dab >= 0.0);

        const double oab = ot_distance(ms[0], ms[1], p, p).distance;
        const double obc = ot_distance(ms[1], ms[2], p, p).distance;
        const double oac = ot_distance(ms[0], ms[2], p, p).distance;
        CHECK(oac <= oab + obc + 1e-9);
    }

    CHECK(bottleneck(dgms[0], dgms[1]).cost == bottleneck(dgms[1], dgms[0]).cost);
    const double bab = bottleneck(dgms[0], dgms[1]).cost;
    const double bbc = bottleneck(dgms[1], dgms[2]).cost;
    const double bac = bottleneck(dgms[0], dgms[2]).cost;
    CHECK(bac <= bab + bbc + 1e-9);
}

TEST_CASE("p-hausdorff examples on the line") {
    PointCloud X, Y;
    X.points.resize(1, 1);
    X.points << 0;
    Y.points.resize(2, 1);
    Y.points << 0, 1;

    CHECK(p_hausdorff(X, X, 2.0).value == 0.0);

    const EdgeCover h1 = p_hausdorff(X, Y, 1.0);
    CHECK(h1.value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(h1.correspondence.size() == 2);  // 0 covers both points of Y

    Y.points << 3, 4;
    const EdgeCover h2 = p_hausdorff(X, Y, 2.0);
    CHECK(h2.value == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("p-hausdorff certificate covers both sides") {
    RandomStream rs(68);
    const PointCloud X = testutil::random_cloud(rs, 5, 2);
    const PointCloud Y = testutil::random_cloud(rs, 7, 2);
    const EdgeCover c = p_hausdorff(X, Y, 2.0);
    std::vector<bool> lc(5, false), rc(7, false);
    std::vector<double> terms;
    for (const auto& [i, j] : c.correspondence) {
        lc[i] = true;
        rc[j] = true;
        terms.push_back(
            std::pow((X.points.row(i) - Y.points.row(j)).norm(), 2.0));
    }
    for (bool v : lc) CHECK(v);
    for (bool v : rc) CHECK(v);
    CHECK(std::pow(testutil::sorted_sum(terms), 0.5) ==
          doctest::Approx(c.value).epsilon(1e-9));
}

TEST_CASE("p-hausdorff symmetry and dimension mismatch") {
    RandomStream rs(69);
    const PointCloud X = testutil::random_cloud(rs, 4, 3);
    const PointCloud Y = testutil::random_cloud(rs, 6, 3);
    CHECK(p_hausdorff(X, Y, 2.0).value == p_hausdorff(Y, X, 2.0).value);

    const PointCloud Z = testutil::random_cloud(rs, 4, 2);
    CHECK_THROWS_AS(p_hausdorff(X, Z, 2.0), ArgumentError);
}

TEST_CASE("p-hausdorff metric-space overload matches the euclidean one") {
    RandomStream rs(70);
    const PointCloud X = testutil::random_cloud(rs, 5, 3);
    const PointCloud Y = testutil::random_cloud(rs, 4, 3);
    PointCloud XY;
    XY.points.resize(9, 3);
    XY.points << X.points, Y.points;
    const FiniteMetricSpace M = pairwise_distances(XY);
    const EdgeCover a = p_hausdorff(X, Y, 2.0);
    const EdgeCover b = p_hausdorff(M, {0, 1, 2, 3, 4}, {5, 6, 7, 8}, 2.0);
    CHECK(a.value == doctest::Approx(b.value).epsilon(1e-12));
}

TEST_CASE("pairwise ot matrix") {
    RandomStream rs(71);
    const PersistenceMeasure a = testutil::random_measure(rs, 5);
    const PersistenceMeasure b = testutil::random_measure(rs, 5);
    const PersistenceMeasure c = testutil::random_measure(rs, 5);

    const Eigen::MatrixXd single = pairwise_ot_matrix({a}, 2.0, 2.0);
    REQUIRE(single.rows() == 1);
    CHECK(single(0, 0) == 0.0);

    const Eigen::MatrixXd dup = pairwise_ot_matrix({a, b, a}, 2.0, 2.0);
    CHECK(dup(0, 2) == 0.0);  // duplicate measures: exactly zero
    CHECK(dup(0, 1) > 0.0);
    CHECK(dup(0, 1) == dup(1, 0));

    const Eigen::MatrixXd M = pairwise_ot_matrix({a, b, c}, 2.0, 2.0);
    for (int i = 0; i < 3; ++i) CHECK(M(i, i) == 0.0);
    CHECK(M(0, 2) <= M(0, 1) + M(1, 2) + 1e-9);

    const Eigen::MatrixXd Mt = pairwise_ot_matrix({a, b, c}, 2.0, 2.0, 3);
    CHECK(testutil::exact_equal(M, Mt));  // thread count cannot change values
}
