#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pathint/cli.hpp"
#include "pathint/errors.hpp"
#include "pathint/model_file.hpp"

using namespace pathint;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(PATHINT_DATA_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& body) {
    const auto p = std::filesystem::temp_directory_path() / ("pathint_test_" + name);
    std::ofstream(p) << body;
    return p.string();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST_CASE("price emits versioned JSON") {
    const auto r = run({"price", "--model", data("hw.toml"), "--z", "0.05", "--T", "1", "--method", "exact"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["schema"] == "1");
    CHECK(j["price"].get<double>() == doctest::Approx(0.951237).epsilon(1e-6));
    CHECK(j["yield"].get<double>() == doctest::Approx(0.0499916).epsilon(1e-6));
    CHECK(j["method"] == "exact");
}

TEST_CASE("curve at T = t reports price 1 and yield 0") {
    const auto r = run({"curve", "--model", data("hw.toml"), "--z", "0.05", "--maturities", "0", "--method",
                        "exact", "--output", "csv"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == std::vector<std::string>{"T", "price", "yield", "method", "err_estimate"});
    CHECK(rows[1][1] == "1");
    CHECK(rows[1][2] == "0");
}

TEST_CASE("CSV output round-trips bit-exactly") {
    const auto r = run({"curve", "--model", data("bk.toml"), "--maturities", "0.5,1,2", "--output", "csv"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 4);
    const ModelSpec spec = load_model_file(data("bk.toml"));
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double T = std::strtod(rows[i][0].c_str(), nullptr);
        const auto direct = price_with(spec.model, Method::semiclassical, {0.05, 0, T}, Knobs{});
        CHECK(std::strtod(rows[i][1].c_str(), nullptr) == direct.price);
        CHECK(std::strtod(rows[i][2].c_str(), nullptr) == direct.yield);
    }
}

TEST_CASE("identical runs give byte-identical output") {
    const std::vector<std::string> args{"price", "--model", data("bk.toml"), "--method", "all", "--paths", "20000"};
    const auto a = run(args), b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("bad input exits with status 2 and a line-anchored message") {
    const auto syntax = temp_file("syntax.toml", "[mapped]\nsigma = 0.1\nalpha = = 1\n");
    auto r = run({"price", "--model", syntax});
    CHECK(r.code == 2);
    CHECK(r.err.find("syntax.toml:3:") != std::string::npos);

    const auto unknown = temp_file("unknown.toml", "[mapped]\nmap = \"exp\"\nsigma = 0.1\nalpha = 1\nr0 = 0.05\nvol = 2\n");
    r = run({"price", "--model", unknown});
    CHECK(r.code == 2);
    CHECK(r.err.find("unknown.toml:6:") != std::string::npos);

    const auto badmap = temp_file("badmap.toml", "[mapped]\nmap = \"cubic\"\nsigma = 0.1\nalpha = 1\nr0 = 0.05\n");
    r = run({"price", "--model", badmap});
    CHECK(r.code == 2);
    CHECK(r.err.find("badmap.toml:2:") != std::string::npos);

    CHECK(run({"price", "--model", "/nonexistent/model.toml"}).code == 2);
    CHECK(run({"curve", "--model", data("hw.toml"), "--maturities", "1,1"}).code == 2);
    CHECK(run({"price", "--model", data("hw.toml"), "--method", "lattice"}).code == 2);
    CHECK(run({"price", "--model", data("hw.toml"), "--method", "bogus"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
}

TEST_CASE("model files") {
    auto s = parse_model("[hull_white]\nt = [0, 1, 2]\nalpha = 1\ntheta = [0.04, 0.05, 0.05]\nsigma = 0.01\n");
    const auto& hw = std::get<HullWhiteParams>(s.model);
    CHECK(hw.theta(0.5) == doctest::Approx(0.045));
    CHECK(hw.horizon() == 2.0);
    s = parse_model("[potential]\nbuiltin = \"harmonic\"\nomega = 2\n");
    CHECK(std::get<PotentialModel>(s.model).V(1.0, 0.0) == doctest::Approx(2.0));
    s = parse_model("[mapped]\nmap = \"quadratic\"\na = 1\nsigma = 0.1\nalpha = 1\nr0 = 0.05\n");
    CHECK(std::get<MappedModel>(s.model).map.kind() == RateMap::Kind::quadratic);
    CHECK_THROWS_AS(parse_model("[hull_white]\nalpha = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_model("[mapped]\nmap = \"exp\"\nsigma = 0.1\nalpha = 1\nr0 = 0.05\n[potential]\nbuiltin = \"constant\"\nvalue = 1\n"),
                    ConfigError);
    try {
        parse_model("[hull_white]\nt = [0, 1]\nalpha = [1, 2, 3]\ntheta = 0\nsigma = 0.01\n", "m.toml");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("validate passes on the sample models") {
    for (const char* m : {"hw.toml", "bk.toml", "quadratic.toml"}) {
        const auto r = run({"validate", "--model", data(m)});
        INFO(m << "\n" << r.out << r.err);
        CHECK(r.code == 0);
    }
    const auto r = run({"validate", "--model", data("bk.toml"), "--output", "json"});
    const auto j = nlohmann::json::parse(r.out);
    bool seen = false;
    for (const auto& c : j["checks"])
        if (c["check"] == "semiclassical_vs_mc_rel") {
            seen = true;
            CHECK(c["measured"].get<double>() < 5e-3);
        }
    CHECK(seen);
    const auto h = run({"validate", "--model", data("harmonic.toml"), "--z", "0.02"});
    INFO(h.out);
    CHECK(h.code == 0);
    CHECK(run({"validate"}).code == 0);
}

TEST_CASE("oracle runs a single method") {
    const auto r = run({"oracle", "--model", data("hw.toml"), "--method", "pde", "--output", "csv"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    CHECK(rows[1][3] == "pde");
    CHECK(std::abs(std::strtod(rows[1][1].c_str(), nullptr) - 0.951237) < 1e-5);
    CHECK(run({"oracle", "--model", data("hw.toml"), "--method", "exact"}).code == 2);
}
