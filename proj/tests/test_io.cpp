#include <cmath>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "oracles.hpp"
#include "zsf/error.hpp"
#include "zsf/io.hpp"
#include "zsf/pipeline.hpp"

using namespace zsf;
namespace fs = std::filesystem;

namespace {
fs::path scratch_dir(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("zsf_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}
}  // namespace

TEST_SUITE("io") {

TEST_CASE("csv format and parse round trip") {
    CsvTable t{{"a", "b"}, {{0.1, -2.5e-17, 1.0 / 3.0}, {1e300, 7.0, -0.0}}};
    const auto text = format_csv(t);
    CHECK(text.rfind("a,b\n0.10000000000000001,", 0) == 0);
    const auto back = parse_csv(text);
    CHECK(back.header == t.header);
    for (std::size_t j = 0; j < 2; ++j) {
        for (std::size_t i = 0; i < 3; ++i) REQUIRE(back.columns[j][i] == t.columns[j][i]);
    }
    CHECK(back.column("b")[1] == 7.0);
    CHECK_THROWS_AS(back.column("c"), DataError);
}

TEST_CASE("malformed csv") {
    CHECK_THROWS_AS(parse_csv(""), DataError);
    CHECK_THROWS_AS(parse_csv("x,V\n1,2,3\n"), DataError);
    CHECK_THROWS_AS(parse_csv("x,V\n1,abc\n"), DataError);
    CHECK_THROWS_AS(format_csv({{"a"}, {{1.0}, {2.0}}}), ConfigError);
}

TEST_CASE("potential round trip is bit exact") {
    const Grid g(12.0, 4001);
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = std::cosh(0.3 * g.x(i)) + 1.0 / 7.0;
    const SampledPotential p(g, v);
    const auto dir = scratch_dir("roundtrip");
    write_file_atomic(dir / "V.csv", format_csv(potential_table(p)));
    CHECK_FALSE(fs::exists(dir / "V.csv.tmp"));
    const auto q = read_potential(dir / "V.csv");
    CHECK(q.grid() == g);
    for (std::size_t i = 0; i < g.size(); ++i) REQUIRE(q[i] == p[i]);
    CHECK(read_file(dir / "V.csv").rfind("x,V\n-12,", 0) == 0);
}

TEST_CASE("non-uniform abscissae are rejected") {
    CHECK_THROWS_AS(potential_from_table(parse_csv("x,V\n-1,0\n0.1,0\n1,0\n")), DataError);
    CHECK_THROWS_AS(potential_from_table(parse_csv("x,V\n-1,0\n1,0\n")), DataError);
}

TEST_CASE("sha256") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("run config JSON round trip") {
    RunConfig c;
    c.n_max = 7;
    c.de = 0.025;
    c.x_max = 11.5;
    c.shift_rule = ShiftRule::fitted;
    c.optimizer.max_iter = 123;
    c.out_dir = "somewhere";
    CHECK(config_from_json(to_json(c)) == c);
    const auto dir = scratch_dir("config");
    save_config(c, dir / "c.json");
    CHECK(load_config(dir / "c.json") == c);
    RunConfig d;
    CHECK(config_from_json(nlohmann::json::object()) == d);
}

TEST_CASE("run config validation") {
    auto j = to_json(RunConfig{});
    j["n_points"] = 4000;
    CHECK_THROWS_AS(config_from_json(j), ConfigError);
    j = to_json(RunConfig{});
    j["bogus"] = 1;
    CHECK_THROWS_AS(config_from_json(j), ConfigError);
    j = to_json(RunConfig{});
    j["optimizer"]["tol_rel"] = 2.0;
    CHECK_THROWS_AS(config_from_json(j), ConfigError);
    j = to_json(RunConfig{});
    j["shift_rule"] = "sideways";
    CHECK_THROWS_AS(config_from_json(j), ConfigError);
    j = to_json(RunConfig{});
    j["de"] = "small";
    CHECK_THROWS_AS(config_from_json(j), ConfigError);
    RunConfig full;
    full.apply_paper_scale();
    CHECK(full.n_points == 20001);
    CHECK(full.n_max == 50);
}

}
