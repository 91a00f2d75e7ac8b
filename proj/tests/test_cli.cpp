#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mbump/cli.hpp"
#include "mbump/errors.hpp"

using namespace mbump;
namespace fs = std::filesystem;

namespace {

nlohmann::json read_json(const fs::path& p) {
    std::ifstream in(p);
    return nlohmann::json::parse(in);
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("mbump_test_" + name);
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("parse_config defaults") {
    const RunConfig c = parse_config("");
    CHECK(c.params.lambda == 1.0);
    CHECK(c.params.alpha0 == 1.0);
    CHECK(c.params.alpha1 == 1.0);
    CHECK(c.params.a == 1.0);
    CHECK(c.params.m == 1.0);
    CHECK(c.params.theta == 2.0);
    CHECK(c.params.dim == 2);
    CHECK(c.params.k == 16);
    CHECK(c.beta_auto);
    CHECK(c.spacing() == 0.125);
    CHECK(c.k_list == std::vector<int>{12, 16, 24});
}

TEST_CASE("parse_config overrides and errors") {
    const RunConfig c = parse_config("k = 24\nbeta = 0.05\n");
    CHECK(c.params.k == 24);
    CHECK(c.params.beta == 0.05);
    CHECK_FALSE(c.beta_auto);
    CHECK(c.params.lambda == 1.0);

    const RunConfig d = parse_config("# comment\n  N = 3   # trailing\n\netas = 0.25, 1\nsech_oracle = true\n");
    CHECK(d.params.dim == 3);
    CHECK(d.spacing() == 0.25);
    CHECK(d.etas == std::vector<double>{0.25, 1.0});
    CHECK(d.sech_oracle);

    try {
        parse_config("m = 0.4");
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("m > 1/2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config("gamma = 1"), ConfigError);
    CHECK_THROWS_AS(parse_config("k = twelve"), ConfigError);
    CHECK_THROWS_AS(parse_config("k = 2.5"), ConfigError);
    CHECK_THROWS_AS(parse_config("lambda"), ConfigError);
    CHECK_THROWS_AS(parse_config("tol = -1"), ConfigError);
    CHECK_THROWS_AS(parse_config("potential = cubic"), ConfigError);

    const RunConfig n = parse_config("mu0 = 4");
    CHECK(n.params.mu0 == 1.0);
    CHECK(n.params.lambda == doctest::Approx(0.25));
}

TEST_CASE("ground-state subcommand") {
    const fs::path dir = scratch("gs");
    const RunConfig c = parse_config("sech_oracle = true");
    CHECK(run("ground-state", c, dir.string()) == 0);
    CHECK_FALSE(fs::exists(dir / "failure.json"));
    const auto s = read_json(dir / "summary.json");
    CHECK(s["passed"] == true);
    CHECK(s["sech_max_error"].get<double>() < 1e-6);
    CHECK(fs::exists(dir / "profile_U0.csv"));
    std::ifstream csv(dir / "moments.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header.rfind("species,c,alpha,N", 0) == 0);
}

TEST_CASE("errors produce a failure record") {
    const fs::path dir = scratch("bad");
    CHECK(run("no-such-stage", RunConfig{}, dir.string()) == 2);
    const auto f = read_json(dir / "failure.json");
    CHECK(f["kind"] == "error");

    const fs::path dir2 = scratch("cfg");
    try {
        parse_config("m = 0.3");
    } catch (const ConfigError& e) {
        CHECK(report_error("bounds", dir2.string(), e) == 2);
    }
    const auto g = read_json(dir2 / "failure.json");
    CHECK(g["error"] == "ConfigError");
}

TEST_CASE("bounds subcommand is reproducible") {
    const RunConfig c = parse_config("samples = 200\nlemma_mu_radii = 10, 20\ncross_radii = 3, 4, 5\n");
    const fs::path a = scratch("b1"), b = scratch("b2");
    CHECK(run("bounds", c, a.string()) == 0);
    CHECK(run("bounds", c, b.string()) == 0);
    for (const char* f : {"summary.json", "ksum.csv", "coupling.csv", "potential_moment.csv", "crossprod.csv"}) {
        std::ifstream x(a / f), y(b / f);
        std::stringstream sx, sy;
        sx << x.rdbuf();
        sy << y.rdbuf();
        CHECK(sx.str() == sy.str());
    }
}
