#include "doctest.h"

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "config.hpp"
#include "thzgeo/netmodel.hpp"

using namespace thzgeo;
using namespace thzgeo::cli;

TEST_CASE("quantities with unit suffixes") {
    CHECK(parse_quantity("2Gbps") == 2e9);
    CHECK(parse_quantity("2.5 Mbps") == 2.5e6);
    CHECK(parse_quantity("1.8THz") == 1.8e12);
    CHECK(parse_quantity("2.1GHz") == 2.1e9);
    CHECK(parse_quantity("40MHz") == 40e6);
    CHECK(parse_quantity("500 Hz") == 500.0);
    CHECK(parse_quantity("3kbps") == 3e3);
    CHECK(parse_quantity("1Tbps") == 1e12);
    CHECK(parse_quantity("+1e-3") == 1e-3);
    CHECK(std::isinf(parse_quantity("inf")));
    CHECK_THROWS_AS(parse_quantity(""), ConfigError);
    CHECK_THROWS_AS(parse_quantity("abc"), ConfigError);
    CHECK_THROWS_AS(parse_quantity("1.0x"), ConfigError);
    CHECK_THROWS_AS(parse_quantity("1GHzz"), ConfigError);
}

TEST_CASE("value lists and ranges") {
    CHECK(parse_values("1,2.5,4") == std::vector<double>{1, 2.5, 4});
    CHECK(parse_values("1:3:3") == std::vector<double>{1, 2, 3});
    const auto lin = parse_values("-10:32:15:lin");
    REQUIRE(lin.size() == 15);
    for (int i = 0; i < 15; ++i) CHECK(lin[i] == -10.0 + 3.0 * i);
    const auto log = parse_values("1e-3:1:7:log");
    REQUIRE(log.size() == 7);
    CHECK(log.front() == 1e-3);
    CHECK(log.back() == 1.0);
    for (int i = 1; i < 7; ++i) CHECK(log[i] / log[i - 1] == doctest::Approx(std::sqrt(10.0)));
    const auto rates = parse_values("2Gbps:9Gbps:15:lin");
    CHECK(rates.front() == 2e9);
    CHECK(rates.back() == 9e9);
    CHECK(parse_values("5:5:1") == std::vector<double>{5});
    CHECK_THROWS_AS(parse_values("1:2"), ConfigError);
    CHECK_THROWS_AS(parse_values("1:2:0"), ConfigError);
    CHECK_THROWS_AS(parse_values("0:2:3:log"), ConfigError);
    CHECK_THROWS_AS(parse_values("1:2:3:cubic"), ConfigError);
}

TEST_CASE("sweeps: ranges, lists and zipped keys") {
    const SweepSpec a = parse_sweep("network.lambda_t=0.01:0.1:2");
    CHECK(a.keys == std::vector<std::string>{"network.lambda_t"});
    REQUIRE(a.values.size() == 2);
    CHECK(a.values[1][0] == "0.10000000000000001");

    const SweepSpec z = parse_sweep("network.k_a+network.f_t=0.05/1THz,0.2/1.8THz");
    CHECK(z.keys.size() == 2);
    REQUIRE(z.values.size() == 2);
    CHECK(z.values[1] == std::vector<std::string>{"0.2", "1.8THz"});

    CHECK_THROWS_AS(parse_sweep("network.k_a"), ConfigError);
    CHECK_THROWS_AS(parse_sweep("network.k_a="), ConfigError);
    CHECK_THROWS_AS(parse_sweep("no.such.key=1,2"), ConfigError);
    CHECK_THROWS_AS(parse_sweep("network.k_a+network.f_t=0.05,0.1"), ConfigError);
    CHECK_THROWS_AS(parse_sweep("sweep=a,b"), ConfigError);

    const auto points = expand_sweeps({parse_sweep("network.k_a=0.05,0.1"),
                                       parse_sweep("network.lambda_t=1,2,3")});
    REQUIRE(points.size() == 6);
    CHECK(points[0][0].second == "0.05");
    CHECK(points[0][1].second == "1");
    CHECK(points[1][1].second == "2");  // last sweep varies fastest
    CHECK(points[3][0].second == "0.1");
    CHECK(expand_sweeps({}).size() == 1);
}

TEST_CASE("config files: comments, errors with locations") {
    const RunConfig cfg = parse_config(
        "# comment\n"
        "network.lambda_t = 0.1   # trailing comment\n"
        "network.f_t = 1.5THz\n"
        "threshold.kind = sinr_db\n"
        "threshold.grid = -10:20:4\n"
        "coverage.modes = thz_only, rf_only\n",
        "test.conf");
    CHECK(cfg.network.lambda_t == 0.1);
    CHECK(cfg.network.f_t == 1.5e12);
    CHECK(cfg.threshold_kind == ThresholdKind::sinr_db);
    CHECK(cfg.modes.size() == 2);
    const auto grid = cfg.threshold_grid_values();
    REQUIRE(grid.size() == 4);
    CHECK(grid[0].first == -10.0);
    CHECK(grid[0].second.tau_t == doctest::Approx(0.1));
    CHECK(grid[3].second.tau_r == doctest::Approx(100.0));

    CHECK_THROWS_WITH_AS(parse_config("network.k_a = 1\nnetwork.k_a = 2\n", "f.conf"),
                         doctest::Contains("f.conf:2:"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("network.nope = 1\n", "f.conf"),
                         doctest::Contains("f.conf:1:"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("just text\n", "f.conf"), doctest::Contains("key = value"),
                         ConfigError);
    CHECK_THROWS_AS(parse_config("network.alpha = 1.5\n", "f.conf"), ConfigError);
    CHECK_THROWS_AS(parse_config("mc.trials = -5\n", "f.conf"), ConfigError);
    CHECK_THROWS_AS(parse_config("coverage.modes = both\n", "f.conf"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/x.conf"), ConfigError);
}

TEST_CASE("every key round-trips through its text form") {
    const RunConfig defaults;
    std::set<std::string> names;
    for (const KeyInfo& k : key_schema()) {
        CAPTURE(k.name);
        CHECK(names.insert(k.name).second);
        CHECK_FALSE(k.help.empty());
        RunConfig copy;
        const std::string text = get_key(defaults, k.name);
        CHECK_NOTHROW(set_key(copy, k.name, text));
        CHECK(get_key(copy, k.name) == text);
    }
    CHECK(resolved_keys(defaults).size() == key_schema().size());
}

TEST_CASE("rate thresholds and derived noise") {
    RunConfig cfg;
    set_key(cfg, "threshold.value", "5Gbps");
    const Thresholds t = cfg.single_threshold();
    CHECK(t.tau_t == doctest::Approx(sinr_threshold(5e9, cfg.network.w_t)));
    CHECK(t.tau_r == doctest::Approx(sinr_threshold(5e9, cfg.network.w_r)));

    set_key(cfg, "network.noise_figure_db", "10");
    CHECK(cfg.resolved_network().n0_t == doctest::Approx(thermal_noise(cfg.network.w_t, 10.0)));
    set_key(cfg, "network.n0_t", "1e-12");
    CHECK(cfg.resolved_network().n0_t == 1e-12);
    set_key(cfg, "network.n0_t", "auto");
    CHECK_FALSE(cfg.n0_t.has_value());
}

TEST_CASE("number formatting") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(3.0) == "3");
    CHECK(format_double(std::nan("")) == "");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}
