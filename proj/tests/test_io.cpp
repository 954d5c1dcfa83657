#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>

#include "doctest.h"
#include "helpers.hpp"
#include "ph/io.hpp"
#include "ph/point_cloud.hpp"

using namespace ph;

namespace {

std::filesystem::path tmp_dir() {
    auto d = std::filesystem::temp_directory_path() / "ph_io_tests";
    std::filesystem::create_directories(d);
    return d;
}

std::string tmp_file(const std::string& name) { return (tmp_dir() / name).string(); }

void put(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

}  // namespace

TEST_CASE("points csv round-trip is value-exact") {
    RandomStream rs(404);
    PointCloud X = testutil::random_cloud(rs, 23, 4, -1e3, 1e3);
    X.points(0, 0) = 0.1;  // not representable exactly; %.17g must still round-trip
    X.points(1, 1) = -1.0 / 3.0;
    X.points(2, 2) = 1e-15;
    const auto path = tmp_file("pts.csv");
    save_points_csv(X, path);
    PointCloud Y = load_points_csv(path);
    CHECK(testutil::exact_equal(X.points, Y.points));
}

TEST_CASE("points csv skips comments and blank lines") {
    const auto path = tmp_file("commented.csv");
    put(path,
        "# header comment\n"
        "\n"
        "1.5,2.5\n"
        "   \n"
        "3.5,4.5\n"
        "# trailing\n");
    PointCloud X = load_points_csv(path);
    REQUIRE(X.size() == 2);
    REQUIRE(X.dim() == 2);
    CHECK(X.points(0, 0) == 1.5);
    CHECK(X.points(1, 1) == 4.5);
}

TEST_CASE("points csv errors carry the offending line number") {
    const auto ragged = tmp_file("ragged.csv");
    put(ragged, "1,2,3\n4,5\n");
    CHECK_THROWS_WITH_AS(load_points_csv(ragged),
                         doctest::Contains((ragged + ":2:").c_str()), ParseError);

    const auto garbage = tmp_file("garbage.csv");
    put(garbage, "1,2\n# fine\n3,four\n");
    CHECK_THROWS_WITH_AS(load_points_csv(garbage),
                         doctest::Contains((garbage + ":3:").c_str()), ParseError);

    const auto empty = tmp_file("empty.csv");
    put(empty, "# nothing here\n\n");
    CHECK_THROWS_AS(load_points_csv(empty), ParseError);

    CHECK_THROWS_AS(load_points_csv(tmp_file("does_not_exist.csv")), DataError);
}

TEST_CASE("points binary round-trip is bit-exact for awkward doubles") {
    PointCloud X;
    X.points.resize(3, 2);
    X.points << -0.0, std::numeric_limits<double>::denorm_min(),
        1e308, -1e-308,
        0.1, -12345.6789;
    const auto path = tmp_file("pts.bin");
    save_points_binary(X, path);
    PointCloud Y = load_points_binary(path);
    REQUIRE(Y.size() == 3);
    REQUIRE(Y.dim() == 2);
    for (Eigen::Index i = 0; i < 3; ++i)
        for (Eigen::Index j = 0; j < 2; ++j) {
            std::uint64_t a, b;
            std::memcpy(&a, &X.points(i, j), 8);
            std::memcpy(&b, &Y.points(i, j), 8);
            CHECK(a == b);  // bit identity, distinguishes -0.0 from 0.0
        }
}

TEST_CASE("points binary rejects corrupt files") {
    const auto bad_magic = tmp_file("bad_magic.bin");
    put(bad_magic, "NOPE_and_some_padding_bytes_here");
    CHECK_THROWS_WITH_AS(load_points_binary(bad_magic), doctest::Contains("bad magic"),
                         ParseError);

    PointCloud X;
    X.points = Eigen::MatrixXd::Ones(4, 3);
    const auto path = tmp_file("trunc.bin");
    save_points_binary(X, path);
    auto bytes = read_text_file(path);
    put(tmp_file("trunc2.bin"), bytes.substr(0, bytes.size() - 9));
    CHECK_THROWS_WITH_AS(load_points_binary(tmp_file("trunc2.bin")),
                         doctest::Contains("truncated"), ParseError);

    put(tmp_file("trunc_hdr.bin"), bytes.substr(0, 10));
    CHECK_THROWS_AS(load_points_binary(tmp_file("trunc_hdr.bin")), ParseError);

    CHECK_THROWS_AS(load_points_binary(tmp_file("missing.bin")), DataError);
}

TEST_CASE("distance csv round-trip and validation") {
    RandomStream rs(7);
    FiniteMetricSpace S = testutil::random_metric(rs, 9);
    const auto path = tmp_file("dist.csv");
    save_distance_csv(S.dist, path);
    FiniteMetricSpace T = load_distance_csv(path);
    CHECK(testutil::exact_equal(S.dist, T.dist));

    const auto nonsquare = tmp_file("nonsquare.csv");
    put(nonsquare, "0,1,2\n1,0,3\n");
    CHECK_THROWS_WITH_AS(load_distance_csv(nonsquare), doctest::Contains("square"),
                         ParseError);

    const auto asym = tmp_file("asym.csv");
    put(asym, "0,1\n2,0\n");
    CHECK_THROWS_AS(load_distance_csv(asym), ParseError);

    // symmetric but not a metric: negative entry passes parsing, fails validation
    const auto neg = tmp_file("neg.csv");
    put(neg, "0,-1\n-1,0\n");
    CHECK_THROWS_AS(load_distance_csv(neg), DataError);

    const auto diag = tmp_file("diag.csv");
    put(diag, "0.5,1\n1,0\n");
    CHECK_THROWS_AS(load_distance_csv(diag), DataError);
}

TEST_CASE("diagram json round-trip preserves structure") {
    PersistenceDiagram D = make_diagram(1,
                                        {{0.25, 1.75, 2}, {0.5, 3.0, 1}},
                                        {0.0, 0.125});
    const auto path = tmp_file("dgm.json");
    save_diagram_json(D, path);
    PersistenceDiagram E = load_diagram_json(path);
    CHECK(E == D);
    CHECK(E.hom_dim == 1);
    REQUIRE(E.points.size() == 2);
    CHECK(E.points[0].multiplicity == 2);
    REQUIRE(E.essential.size() == 2);
    CHECK(E.essential[0] == 0.0);
}

TEST_CASE("diagram json round-trip is value-exact on random data") {
    RandomStream rs(11);
    for (int t = 0; t < 8; ++t) {
        PersistenceDiagram D = testutil::random_diagram(rs, 12, t % 3);
        PersistenceDiagram E = diagram_from_json(diagram_to_json(D), "mem");
        CHECK(E == D);
    }
}

TEST_CASE("measure json round-trip, with and without a mass denominator") {
    PersistenceMeasure mu = make_measure(0, {{0.0, 1.0, 0.25}, {1.0, 2.0, 0.75}}, 4);
    const auto path = tmp_file("mu.json");
    save_measure_json(mu, path);
    PersistenceMeasure nu = load_measure_json(path);
    CHECK(nu.hom_dim == 0);
    REQUIRE(nu.atoms.size() == 2);
    CHECK(nu.atoms[0].mass == 0.25);
    REQUIRE(nu.mass_denominator.has_value());
    CHECK(*nu.mass_denominator == 4);

    PersistenceMeasure free_mass = make_measure(2, {{0.5, 0.75, 1.125}}, std::nullopt);
    const auto s = measure_to_json(free_mass);
    CHECK(s.find("null") != std::string::npos);
    PersistenceMeasure back = measure_from_json(s, "mem");
    CHECK_FALSE(back.mass_denominator.has_value());
    CHECK(back.atoms[0].mass == 1.125);
}

TEST_CASE("json errors name their origin") {
    const auto path = tmp_file("broken.json");
    put(path, "{\"hom_dim\": 1, \"points\": [[0, 1, ");
    CHECK_THROWS_WITH_AS(load_diagram_json(path), doctest::Contains(path.c_str()), ParseError);

    CHECK_THROWS_WITH_AS(diagram_from_json("{}", "somewhere"),
                         doctest::Contains("somewhere"), ParseError);
    CHECK_THROWS_WITH_AS(diagram_from_json("{\"hom_dim\": 0, \"points\": [[1, 2]], \"essential\": []}",
                                           "short_row"),
                         doctest::Contains("short_row"), ParseError);
    CHECK_THROWS_AS(measure_from_json("[1,2,3]", "mem"), ParseError);

    // structurally valid json whose content violates diagram invariants
    CHECK_THROWS_AS(
        diagram_from_json("{\"hom_dim\": 0, \"points\": [[2, 1, 1]], \"essential\": []}", "mem"),
        ArgumentError);
    CHECK_THROWS_AS(
        measure_from_json("{\"hom_dim\": 0, \"atoms\": [[0, 1, -0.5]], \"mass_denominator\": null}",
                          "mem"),
        ArgumentError);
}

TEST_CASE("format_double survives a parse round-trip") {
    const double vals[] = {0.1,      -1.0 / 3.0, 1e308, -1e-308, 0.0,
                           123456.5, 2.0 / 7.0,  1e-15};
    for (double v : vals) {
        const std::string s = format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
}

TEST_CASE("read/write text file round-trip") {
    const auto path = tmp_file("note.txt");
    const std::string body = "line one\nline two\n# with a comment\n";
    write_text_file(path, body);
    CHECK(read_text_file(path) == body);
    CHECK_THROWS_AS(read_text_file(tmp_file("missing.txt")), DataError);
}
