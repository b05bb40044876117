#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "oracle.hpp"
#include "thzgeo/interference.hpp"
#include "thzgeo/specfun.hpp"

using namespace thzgeo;

namespace {

// Lambda(sigma) = int_1^inf t (1 - exp(-sigma t^{-2} e^{-kappa (t - 1)})) dt, real sigma.
double lambda_reference(double sigma, double kappa) {
    auto f = [&](double t) {
        return -t * std::expm1(-sigma * std::exp(-kappa * (t - 1.0)) / (t * t));
    };
    return oracle::simpson(f, 1.0, 1.0 + 80.0 / kappa, 1e-14, 1024);
}

// W = sum q(t_i) for a PPP of intensity 2 c t dt on (1, T), drawn directly.
std::vector<double> sample_w(double c, double kappa, int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const double t_max = 1.0 + 50.0 / kappa;
    const double mean_count = c * (t_max * t_max - 1.0);
    std::poisson_distribution<int> count(mean_count);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> out(n);
    for (double& w : out) {
        const int k = count(rng);
        w = 0.0;
        for (int i = 0; i < k; ++i) {
            const double t = std::sqrt(1.0 + u(rng) * (t_max * t_max - 1.0));
            w += std::exp(-kappa * (t - 1.0)) / (t * t);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("series coefficients come from the exponential integral") {
    for (double kappa : {0.01, 0.5, 3.0}) {
        const InterferenceShape s(kappa);
        for (int l = 1; l <= 6; ++l) {
            const double ref =
                std::exp(l * kappa) * oracle::exp_integral(2 * l - 1, l * kappa) / std::tgamma(l + 1.0);
            CHECK(s.series_coefficient(l) == doctest::Approx(ref).epsilon(1e-8));
        }
    }
}

TEST_CASE("Lambda by series, quadrature and the dispatching routine agree with direct integration") {
    oracle::Gen g(31);
    for (int i = 0; i < 40; ++i) {
        const double kappa = g.log_uniform(0.01, 10.0);
        const double sigma = g.log_uniform(1e-3, 50.0);
        const InterferenceShape s(kappa);
        const double ref = lambda_reference(sigma, kappa);
        CAPTURE(kappa);
        CAPTURE(sigma);
        CHECK(s.lambda_quadrature({sigma, 0.0}).real() == doctest::Approx(ref).epsilon(1e-8));
        CHECK(s.lambda({sigma, 0.0}).real() == doctest::Approx(ref).epsilon(1e-8));
        if (sigma < 0.5) CHECK(s.lambda_series({sigma, 0.0}, 60).real() == doctest::Approx(ref).epsilon(1e-8));
    }
}

TEST_CASE("Lambda on the imaginary axis matches quadrature") {
    for (double kappa : {0.05, 1.0, 6.0}) {
        const InterferenceShape s(kappa);
        for (double z : {0.1, 3.0, 40.0, 2000.0}) {
            const std::complex<double> sigma(0.0, -z);
            const auto ref = s.lambda_quadrature(sigma, {1e-13, 1e-11, 4000});
            const RotatedParts parts = s.rotated(z);
            const auto sum = parts.along_zero + parts.at_one +
                             std::exp(std::complex<double>(0.0, z)) * parts.oscillating;
            CAPTURE(kappa);
            CAPTURE(z);
            CHECK(std::abs(s.lambda(sigma) - ref) < 1e-8 * std::max(1.0, std::abs(ref)));
            CHECK(std::abs(sum - ref) < 1e-8 * std::max(1.0, std::abs(ref)));
        }
    }
}

TEST_CASE("moments of the normalized interference") {
    for (double kappa : {0.02, 0.7, 5.0}) {
        const InterferenceShape s(kappa);
        // E[W] / 2c = int_1^inf t q(t) dt = e^kappa E1(kappa)
        CHECK(s.mean_per_c() == doctest::Approx(std::exp(kappa) * oracle::exp_integral(1, kappa)).epsilon(1e-9));
        const double var = oracle::simpson_to_inf(
            [&](double t) { return std::exp(-2 * kappa * (t - 1)) / (t * t * t); }, 1.0, 1e-14);
        CHECK(s.variance_per_c() == doctest::Approx(var).epsilon(1e-9));
    }
}

TEST_CASE("Gil-Pelaez CDF matches a direct simulation of the field") {
    const double c = 0.3, kappa = 2.0;
    const InterferenceShape shape(kappa);
    const std::vector<double> sample = sample_w(c, kappa, 40000, 5);
    std::vector<double> w{0.02, 0.05, 0.1, 0.2, 0.4, 0.8, 1.5};
    const InterferenceCdf cdf = interference_cdf(shape, c, w);
    // |CF| decays only like a power of z for this light a field, so the
    // frequency cutoff may be reached; the points must still agree.
    CHECK(cdf.error_estimate < 1e-6);
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double emp = static_cast<double>(std::lower_bound(sample.begin(), sample.end(), w[i]) -
                                               sample.begin()) /
                           sample.size();
        CAPTURE(w[i]);
        // 40000 draws: 4 standard errors is below 0.01
        CHECK(std::abs(cdf.cdf[i] - emp) < 0.01);
    }
}

TEST_CASE("interference CDF is a CDF") {
    oracle::Gen g(32);
    for (int i = 0; i < 15; ++i) {
        const double c = g.log_uniform(0.01, 30.0);
        const InterferenceShape shape(g.log_uniform(0.05, 20.0));
        std::vector<double> w;
        for (double x = 1e-3; x < 1e3; x *= 1.7) w.push_back(x);
        const InterferenceCdf cdf = interference_cdf(shape, c, w);
        for (std::size_t k = 0; k < w.size(); ++k) {
            CHECK(cdf.cdf[k] >= -1e-6);
            CHECK(cdf.cdf[k] <= 1.0 + 1e-6);
            if (k > 0) CHECK(cdf.cdf[k] >= cdf.cdf[k - 1] - 1e-6);
        }
        const std::vector<double> nonpos{0.0, -1.0};
        const InterferenceCdf z = interference_cdf(shape, c, nonpos);
        CHECK(z.cdf[0] == 0.0);
        CHECK(z.cdf[1] == 0.0);
    }
}

TEST_CASE("empty field has all mass at zero") {
    const InterferenceShape shape(1.0);
    const std::vector<double> w{1e-6, 1.0};
    const InterferenceCdf cdf = interference_cdf(shape, 0.0, w);
    CHECK(cdf.cdf[0] == doctest::Approx(1.0));
    CHECK(cdf.cdf[1] == doctest::Approx(1.0));
}
