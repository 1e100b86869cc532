#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "instance_forge/errors.hpp"
#include "instance_forge/io.hpp"

using namespace instance_forge;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    auto dir = fs::temp_directory_path() / "instance_forge_test_io";
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("native round trip is bit exact") {
    const auto dir = scratch_dir();
    const TspInstance square({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, "square");
    write_instance(square, dir / "square.json");
    CHECK(read_instance(dir / "square.json") == square);

    RandomSource rng(3);
    for (int k = 0; k < 20; ++k) {
        const auto inst = random_instance(30, rng);
        CHECK(parse_instance(format_instance(inst)) == inst);
    }
    // Values that need all 17 significant digits.
    const TspInstance awkward({{0.1, 1.0 / 3.0}, {2.0 / 3.0, 0.7000000000000001}, {5e-324, 0.9999999999999999}});
    CHECK(parse_instance(format_instance(awkward)) == awkward);
}

TEST_CASE("native format errors") {
    CHECK_THROWS_WITH_AS(parse_instance(R"({"n": 3})"), doctest::Contains("cities"), ParseError);
    CHECK_THROWS_AS(parse_instance("{\"cities\": [[0,0],[1,1]"), ParseError);
    CHECK_THROWS_WITH_AS(parse_instance(R"({"cities": [[0,0],[1,1],[0.5]]})"), doctest::Contains("cities[2]"),
                         ParseError);
    CHECK_THROWS_AS(parse_instance(R"({"cities": [[0,0],[1,1],[0.5,1.5]]})"), ValidationError);
    CHECK_THROWS_WITH_AS(parse_instance(R"({"n": 4, "cities": [[0,0],[1,1],[0.5,0.5]]})"), doctest::Contains("'n'"),
                         ParseError);
    CHECK(parse_instance(R"({"cities": [[0,0],[1,1],[0.5,0.5]], "id": "x"})").id() == "x");
}

TEST_CASE("TSPLIB EUC_2D import rescales into the unit square") {
    std::istringstream in(R"(NAME : demo
COMMENT : five cities
TYPE : TSP
DIMENSION : 5
EDGE_WEIGHT_TYPE : EUC_2D
NODE_COORD_SECTION
1 0 0
2 100 0
3 100 50
4 0 50
5 50 25
EOF
)");
    const auto inst = parse_tsplib(in);
    CHECK(inst.id() == "demo");
    REQUIRE(inst.size() == 5);
    for (const auto& c : inst.cities()) {
        CHECK(in_unit_square(c));
    }
    // Aspect ratio 2:1 is preserved.
    CHECK(inst[2].x == doctest::Approx(1.0));
    CHECK(inst[2].y == doctest::Approx(0.5));
    CHECK(inst[4].x == doctest::Approx(0.5));
    CHECK(inst[4].y == doctest::Approx(0.25));
}

TEST_CASE("TSPLIB errors name the line") {
    std::istringstream bad_type("NAME : x\nEDGE_WEIGHT_TYPE : GEO\nDIMENSION : 3\n");
    CHECK_THROWS_WITH_AS(parse_tsplib(bad_type), doctest::Contains("line 2"), ParseError);
    std::istringstream bad_coord("DIMENSION : 3\nNODE_COORD_SECTION\n1 0 0\n2 zero 1\n3 1 1\nEOF\n");
    CHECK_THROWS_WITH_AS(parse_tsplib(bad_coord), doctest::Contains("line 4"), ParseError);
    std::istringstream short_file("DIMENSION : 4\nNODE_COORD_SECTION\n1 0 0\n2 1 1\n3 1 0\nEOF\n");
    CHECK_THROWS_AS(parse_tsplib(short_file), ParseError);
}

TEST_CASE("read_instance dispatches on content") {
    const auto dir = scratch_dir();
    {
        std::ofstream out(dir / "tiny.tsp");
        out << "NAME: tiny\nDIMENSION: 3\nNODE_COORD_SECTION\n1 10 10\n2 20 10\n3 10 30\nEOF\n";
    }
    const auto inst = read_instance(dir / "tiny.tsp");
    CHECK(inst.size() == 3);
    CHECK(inst[2].y == doctest::Approx(1.0));
    CHECK_THROWS_AS(read_instance(dir / "does_not_exist.json"), ParseError);
}
