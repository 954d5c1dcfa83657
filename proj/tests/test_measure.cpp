#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "ph/measure.hpp"

using namespace ph;

TEST_CASE("diagram_to_measure maps multiplicities to masses") {
    const PersistenceDiagram D = make_diagram(1, {{1.0, 2.0, 3}});
    const PersistenceMeasure mu = diagram_to_measure(D);
    REQUIRE(mu.atoms.size() == 1);
    CHECK(mu.atoms[0].x == 1.0);
    CHECK(mu.atoms[0].y == 2.0);
    CHECK(mu.atoms[0].mass == 3.0);
    CHECK(mu.hom_dim == 1);
    REQUIRE(mu.mass_denominator.has_value());
    CHECK(*mu.mass_denominator == 1);
}

TEST_CASE("diagram_to_measure merges repeated points and drops essentials") {
    const PersistenceDiagram D =
        make_diagram(0, {{0.0, 1.0, 1}, {0.0, 1.0, 1}, {2.0, 5.0, 1}}, {0.0});
    const PersistenceMeasure mu = diagram_to_measure(D);
    REQUIRE(mu.atoms.size() == 2);
    CHECK(mu.atoms[0].mass == 2.0);
    CHECK(mu.atoms[1].mass == 1.0);
    CHECK(mu.total_mass() == 3.0);

    CHECK(diagram_to_measure(make_diagram(1, {})).atoms.empty());
}

TEST_CASE("measure round-trips to a diagram with matching multiplicities") {
    const PersistenceDiagram D = make_diagram(1, {{0.0, 1.0, 2}, {0.5, 3.0, 5}});
    CHECK(measure_to_diagram(diagram_to_measure(D)) == D);

    // fractional masses round to the nearest unit count
    const PersistenceMeasure mu = make_measure(1, {{0.0, 1.0, 0.26}, {1.0, 2.0, 0.74}}, 4);
    const PersistenceDiagram R = measure_to_diagram(mu);
    REQUIRE(R.points.size() == 2);
    CHECK(R.points[0].multiplicity == 1);  // 0.26 * 4 = 1.04 -> 1
    CHECK(R.points[1].multiplicity == 3);  // 0.74 * 4 = 2.96 -> 3
}

TEST_CASE("measure canonicalization merges atoms and validates") {
    PersistenceMeasure mu;
    mu.hom_dim = 1;
    mu.atoms = {{1.0, 2.0, 0.5}, {0.0, 1.0, 0.25}, {1.0, 2.0, 0.5}};
    canonicalize(mu);
    REQUIRE(mu.atoms.size() == 2);
    CHECK(mu.atoms[0].x == 0.0);
    CHECK(mu.atoms[1].mass == 1.0);

    PersistenceMeasure bad;
    bad.atoms = {{1.0, 1.0, 0.5}};  // on the diagonal
    CHECK_THROWS_AS(canonicalize(bad), ArgumentError);
    bad.atoms = {{1.0, 2.0, 0.0}};  // zero mass
    CHECK_THROWS_AS(canonicalize(bad), ArgumentError);
    bad.atoms = {{2.0, 1.0, 0.5}};  // below the diagonal
    CHECK_THROWS_AS(canonicalize(bad), ArgumentError);
}

TEST_CASE("diagonal projection") {
    CHECK(diagonal_projection(0.0, 2.0) == std::pair<double, double>(1.0, 1.0));
    CHECK(diagonal_projection(3.0, 3.0) == std::pair<double, double>(3.0, 3.0));
    CHECK(diagonal_projection(1.0, 5.0) == std::pair<double, double>(3.0, 3.0));
}

TEST_CASE("diagonal distance across norms") {
    // (0,2): midpoint (1,1); l2 distance sqrt(2), l1 distance 2, l-inf 1
    CHECK(diagonal_distance(0.0, 2.0, 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(diagonal_distance(0.0, 2.0, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(diagonal_distance(0.0, 2.0, std::numeric_limits<double>::infinity()) == 1.0);
}

TEST_CASE("total persistence examples") {
    const PersistenceMeasure one = make_measure(1, {{0.0, 2.0, 1.0}});
    CHECK(total_persistence(one, 2.0, 2.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(total_persistence(one, 1.0, std::numeric_limits<double>::infinity()) == 1.0);
    CHECK(total_persistence(PersistenceMeasure{}, 2.0, 2.0) == 0.0);
}

TEST_CASE("total persistence is 1-homogeneous in mass and p-homogeneous in scale") {
    RandomStream rs(50);
    const PersistenceMeasure mu = testutil::random_measure(rs, 6);
    const double p = 3.0, q = 2.0;
    const double base = total_persistence(mu, p, q);

    PersistenceMeasure scaled_mass = mu;
    for (auto& a : scaled_mass.atoms) a.mass *= 2.5;
    CHECK(total_persistence(scaled_mass, p, q) == doctest::Approx(2.5 * base).epsilon(1e-12));

    PersistenceMeasure scaled_coords = mu;
    for (auto& a : scaled_coords.atoms) {
        a.x *= 3.0;
        a.y *= 3.0;
    }
    CHECK(total_persistence(scaled_coords, p, q) ==
          doctest::Approx(std::pow(3.0, p) * base).epsilon(1e-12));
}

TEST_CASE("total persistence agrees between a diagram and its measure") {
    RandomStream rs(51);
    for (int t = 0; t < 5; ++t) {
        const PersistenceDiagram D = testutil::random_diagram(rs, 8);
        const double p = 1.0 + rs.uniform_index(3);
        CHECK(total_persistence(D, p, 2.0) ==
              doctest::Approx(total_persistence(diagram_to_measure(D), p, 2.0))
                  .epsilon(1e-12));
    }
}

TEST_CASE("order parameter validation") {
    CHECK_THROWS_AS(validate_order_params(0.5, 2.0), ArgumentError);
    CHECK_THROWS_AS(validate_order_params(std::numeric_limits<double>::infinity(), 2.0),
                    ArgumentError);
    CHECK_THROWS_AS(validate_order_params(2.0, 0.5), ArgumentError);
    CHECK_NOTHROW(validate_order_params(1.0, std::numeric_limits<double>::infinity()));
    CHECK_NOTHROW(validate_order_params(9.0, 9.0));
}
