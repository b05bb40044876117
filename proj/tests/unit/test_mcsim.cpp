#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "thzgeo/analytic.hpp"
#include "thzgeo/errors.hpp"
#include "thzgeo/mcsim.hpp"

using namespace thzgeo;

namespace {

constexpr double kPi = std::numbers::pi;

class ThreadsEnv {
public:
    explicit ThreadsEnv(const char* n) {
        if (const char* old = std::getenv("THZGEO_THREADS")) saved_ = old;
        setenv("THZGEO_THREADS", n, 1);
    }
    ~ThreadsEnv() {
        if (saved_.empty())
            unsetenv("THZGEO_THREADS");
        else
            setenv("THZGEO_THREADS", saved_.c_str(), 1);
    }

private:
    std::string saved_;
};

McConfig small_run(std::int64_t trials, std::uint64_t seed = 3) {
    McConfig mc;
    mc.trials = trials;
    mc.master_seed = seed;
    return mc;
}

}  // namespace

TEST_CASE("per-trial streams depend only on seed and index") {
    Rng a = trial_rng(9, 1234);
    Rng b = trial_rng(9, 1234);
    Rng c = trial_rng(9, 1235);
    Rng d = trial_rng(10, 1234);
    const auto x = a();
    CHECK(x == b());
    CHECK(x != c());
    CHECK(x != d());
}

TEST_CASE("PPP radii are sorted, inside the disc, Poisson in count and uniform in area") {
    const double intensity = 0.05, radius = 20.0;
    const double mean = intensity * kPi * radius * radius;
    std::vector<double> pooled;
    double count = 0.0;
    const int draws = 2000;
    for (int i = 0; i < draws; ++i) {
        Rng rng = trial_rng(77, i);
        const std::vector<double> r = sample_ppp_radii(intensity, radius, rng);
        CHECK(std::is_sorted(r.begin(), r.end()));
        for (double v : r) {
            CHECK(v >= 0.0);
            CHECK(v <= radius);
        }
        count += r.size();
        if (pooled.size() < 20000) pooled.insert(pooled.end(), r.begin(), r.end());
    }
    CHECK(std::abs(count / draws - mean) < 4.0 * std::sqrt(mean / draws));
    const double ks = ks_distance(pooled, [&](double x) { return x * x / (radius * radius); });
    CHECK(ks < 1.63 / std::sqrt(static_cast<double>(pooled.size())));  // 1% level
}

TEST_CASE("PPP points lie in the disc") {
    Rng rng = trial_rng(5, 0);
    const auto pts = sample_ppp(0.1, 10.0, rng);
    CHECK_FALSE(pts.empty());
    for (const Point& q : pts) CHECK(q.x * q.x + q.y * q.y <= 100.0 + 1e-9);
    Rng rng2 = trial_rng(5, 0);
    CHECK(sample_ppp(0.0, 10.0, rng2).empty());
}

TEST_CASE("trials are reproducible") {
    NetworkParams p;
    const McConfig mc = small_run(10);
    const TrialOutcome a = run_trial(p, mc, 42);
    const TrialOutcome b = run_trial(p, mc, 42);
    CHECK(a.sinr_thz == b.sinr_thz);
    CHECK(a.sinr_rf == b.sinr_rf);
    CHECK(a.distance_thz == b.distance_thz);
    CHECK(a.agg_interference_rf == b.agg_interference_rf);
    const TrialOutcome c = run_trial(p, mc, 43);
    CHECK(a.distance_thz != c.distance_thz);
}

TEST_CASE("estimates do not depend on the worker count") {
    NetworkParams p;
    const McConfig mc = small_run(3000);
    const std::vector<double> s{1e5, 1e6, 1e7};
    const std::vector<Thresholds> tau{{1.0, 1.0}, {100.0, 100.0}};
    std::vector<McEstimate> lt1, lt4, cov1, cov4;
    {
        ThreadsEnv env("1");
        lt1 = estimate_lt(s, p, mc);
        cov1 = estimate_coverage(p, mc, tau);
    }
    {
        ThreadsEnv env("4");
        lt4 = estimate_lt(s, p, mc);
        cov4 = estimate_coverage(p, mc, tau);
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(lt1[i].mean == lt4[i].mean);
        CHECK(lt1[i].ci95_halfwidth == lt4[i].ci95_halfwidth);
    }
    for (std::size_t i = 0; i < tau.size(); ++i) CHECK(cov1[i].mean == cov4[i].mean);
}

TEST_CASE("simulated association matches the analytic probability") {
    oracle::Gen g(51);
    for (int i = 0; i < 4; ++i) {
        NetworkParams p;
        p.lambda_t = g.log_uniform(0.005, 0.2);
        p.b_t = g.log_uniform(0.1, 10.0);
        const McEstimate e = estimate_association(p, small_run(20000, 100 + i));
        const double ref = assoc_prob_thz_quadrature(p);
        CAPTURE(p.lambda_t);
        CAPTURE(p.b_t);
        CHECK(std::abs(e.mean - ref) < 2.0 * e.ci95_halfwidth + 1e-3);
    }
}

TEST_CASE("simulated RF-only coverage matches the closed form") {
    NetworkParams p;
    p.alpha = 4.0;
    McConfig mc = small_run(20000, 8);
    mc.rule = AssociationRule::nearest_rf;
    const McEstimate e = estimate_coverage(p, mc, Thresholds{1.0, 1.0});
    CHECK(std::abs(e.mean - 1.0 / (1.0 + kPi / 4.0)) < 2.0 * e.ci95_halfwidth + 2e-3);
}

TEST_CASE("simulated LT matches the analytic average") {
    NetworkParams p;
    const std::vector<double> s{1e5, 1e6, 1e7};
    const auto est = estimate_lt(s, p, small_run(20000, 4));
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double ref = lt_thz_average(s[i], p, {3, true}).value;
        CAPTURE(s[i]);
        CHECK(std::abs(est[i].mean - ref) < 2.0 * est[i].ci95_halfwidth + 1e-3);
    }
}

TEST_CASE("serving distances are drawn from the requested tier") {
    NetworkParams p;
    McConfig mc = small_run(1);
    const auto thz = sample_serving_distances(p, mc, Tier::thz, 500);
    const auto rf = sample_serving_distances(p, mc, Tier::rf, 50);
    CHECK(thz.size() == 500);
    CHECK(rf.size() == 50);
    for (double x : thz) CHECK(x > 0.0);
    p.b_t = 0.0;
    CHECK_THROWS_AS(sample_serving_distances(p, mc, Tier::thz, 5), DegenerateError);
}

TEST_CASE("Wilson interval") {
    const McEstimate e = proportion_estimate(30, 100);
    const double z = 1.959963984540054, n = 100, ph = 0.3;
    const double centre = (ph + z * z / (2 * n)) / (1 + z * z / n);
    const double half = z / (1 + z * z / n) * std::sqrt(ph * (1 - ph) / n + z * z / (4 * n * n));
    CHECK(e.mean == doctest::Approx(0.3));
    CHECK(e.ci95_halfwidth == doctest::Approx(std::max(centre + half - ph, ph - centre + half)));
    // Degenerate proportions still get a non-zero interval.
    CHECK(proportion_estimate(0, 1000).ci95_halfwidth > 0.0);
    CHECK(proportion_estimate(1000, 1000).ci95_halfwidth > 0.0);
    CHECK(proportion_estimate(0, 0).trials_used == 0);
}

TEST_CASE("KS distance") {
    auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
    CHECK(ks_distance({0.5}, uniform) == doctest::Approx(0.5));
    CHECK(ks_distance({0.25, 0.75}, uniform) == doctest::Approx(0.25));
    CHECK_THROWS_AS(ks_distance({}, uniform), DomainError);
}

TEST_CASE("configuration validation and names") {
    McConfig mc;
    CHECK_NOTHROW(mc.validate());
    mc.trials = 0;
    CHECK_THROWS_AS(mc.validate(), DomainError);
    mc = McConfig{};
    mc.rf_disc_radius = -1.0;
    CHECK_THROWS_AS(mc.validate(), DomainError);
    for (auto r : {AssociationRule::nearest_thz, AssociationRule::nearest_rf, AssociationRule::brsp,
                   AssociationRule::rsrp, AssociationRule::hybrid})
        CHECK(parse_association_rule(to_string(r)) == r);
    for (auto m : {GainMode::deterministic_F, GainMode::bernoulli_thinning, GainMode::four_level})
        CHECK(parse_gain_mode(to_string(m)) == m);
    CHECK_THROWS(parse_association_rule("nearest"));
}
