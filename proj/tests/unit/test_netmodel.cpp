#include "doctest.h"

#include <cmath>
#include <numbers>

#include "oracle.hpp"
#include "thzgeo/errors.hpp"
#include "thzgeo/netmodel.hpp"

using namespace thzgeo;

TEST_CASE("dB conversion and thresholds") {
    CHECK(db_to_linear(0.0) == 1.0);
    CHECK(db_to_linear(20.0) == doctest::Approx(100.0));
    CHECK(db_to_linear(-10.0) == doctest::Approx(0.1));
    CHECK(sinr_threshold(5e9, 0.5e9) == doctest::Approx(1023.0));
    CHECK(sinr_threshold(40e6, 40e6) == doctest::Approx(1.0));
    CHECK(thermal_noise(1.0) == doctest::Approx(kBoltzmann * kNoiseTemperature));
    CHECK(thermal_noise(1e9, 10.0) == doctest::Approx(10.0 * kBoltzmann * kNoiseTemperature * 1e9));
}

TEST_CASE("default network is valid and its rate thresholds follow from the bandwidths") {
    const NetworkParams p;
    CHECK_NOTHROW(p.validate());
    const Thresholds t = rate_thresholds(p);
    CHECK(t.tau_t == doctest::Approx(std::exp2(5e9 / 0.5e9) - 1.0));
    CHECK(t.tau_r == doctest::Approx(std::expm1(std::log(2.0) * 5e9 / 40e6)).epsilon(1e-10));
}

TEST_CASE("gain distribution is a probability distribution over the four alignments") {
    oracle::Gen g(21);
    for (int i = 0; i < 100; ++i) {
        const NetworkParams p = g.network();
        AntennaPattern rx = p.rx;
        rx.beamwidth = g.uniform(0.05, 2.0);
        const GainDistribution d = gain_distribution(p.tx, rx);
        double total = 0.0, mean = 0.0;
        for (const GainLevel& l : d.levels) {
            CHECK(l.probability >= 0.0);
            total += l.probability;
            mean += l.probability * l.gain;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
        const double ft = p.tx.main_lobe_fraction(), fr = rx.main_lobe_fraction();
        const double mean_tx = ft * p.tx.g_max + (1 - ft) * p.tx.g_min;
        const double mean_rx = fr * rx.g_max + (1 - fr) * rx.g_min;
        CHECK(mean == doctest::Approx(mean_tx * mean_rx).epsilon(1e-12));
        CHECK(d.levels[0].gain == doctest::Approx(p.tx.g_max * rx.g_max));
    }
}

TEST_CASE("derived constants follow from the link budget") {
    oracle::Gen g(22);
    for (int i = 0; i < 50; ++i) {
        const NetworkParams p = g.network();
        const DerivedConstants d = derive(p);
        const double wl_t = kSpeedOfLight / (4 * std::numbers::pi * p.f_t);
        const double wl_r = kSpeedOfLight / (4 * std::numbers::pi * p.f_r);
        CHECK(d.gamma_t == doctest::Approx(p.tx.g_max * p.rx.g_max * wl_t * wl_t));
        CHECK(d.gamma_r == doctest::Approx(wl_r * wl_r));
        CHECK(d.k_ratio == doctest::Approx(p.p_r * d.gamma_r / (p.b_t * p.p_t * d.gamma_t)));
        CHECK(d.main_lobe_prob == doctest::Approx(oracle::main_lobe_prob(p)));
        const double r = g.uniform(0.5, 80.0);
        CHECK(thz_signal_power(r, p, d) == doctest::Approx(oracle::thz_power(r, p)));
        CHECK(thz_gain(r, p) * p.tx.g_max * p.rx.g_max * p.p_t ==
              doctest::Approx(oracle::thz_power(r, p)));
        CHECK(rf_gain(r, p) == doctest::Approx(wl_r * wl_r * std::pow(r, -p.alpha)));
    }
    NetworkParams p;
    p.b_t = 0.0;
    CHECK(std::isinf(derive(p).k_ratio));
}

TEST_CASE("validation names the offending field") {
    NetworkParams p;
    p.lambda_t = -1.0;
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("lambda_t"), DomainError);
    p = NetworkParams{};
    p.alpha = 2.0;
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("alpha"), DomainError);
    p = NetworkParams{};
    p.tx.g_min = p.tx.g_max * 2;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = NetworkParams{};
    p.f_t = std::nan("");
    CHECK_THROWS_AS(p.validate(), DomainError);
}
