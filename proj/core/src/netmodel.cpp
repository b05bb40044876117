#include "thzgeo/netmodel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "thzgeo/errors.hpp"

namespace thzgeo {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

}  // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

void AntennaPattern::validate(const char* which) const {
    const std::string w(which);
    require(std::isfinite(g_min) && g_min > 0.0, w + ".g_min must be > 0");
    require(std::isfinite(g_max) && g_max >= g_min, w + ".g_max must be >= g_min");
    require(beamwidth > 0.0 && beamwidth < 2.0 * std::numbers::pi,
            w + ".beamwidth must lie in (0, 2pi)");
}

double AntennaPattern::main_lobe_fraction() const { return beamwidth / (2.0 * std::numbers::pi); }

GainDistribution gain_distribution(const AntennaPattern& tx, const AntennaPattern& rx) {
    tx.validate("tx");
    rx.validate("rx");
    const double ft = tx.main_lobe_fraction();
    const double fr = rx.main_lobe_fraction();
    GainDistribution d;
    d.levels[0] = {tx.g_max * rx.g_max, ft * fr};
    d.levels[1] = {tx.g_max * rx.g_min, ft * (1.0 - fr)};
    d.levels[2] = {tx.g_min * rx.g_max, (1.0 - ft) * fr};
    d.levels[3] = {tx.g_min * rx.g_min, (1.0 - ft) * (1.0 - fr)};
    return d;
}

void NetworkParams::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    auto nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
    require(nonneg(lambda_t), "network.lambda_t must be >= 0");
    require(nonneg(lambda_r), "network.lambda_r must be >= 0");
    require(nonneg(lambda_u), "network.lambda_u must be >= 0");
    require(lambda_t > 0.0 || lambda_r > 0.0,
            "network.lambda_t and network.lambda_r cannot both be zero");
    require(positive(p_t), "network.p_t must be > 0");
    require(positive(p_r), "network.p_r must be > 0");
    require(positive(f_t), "network.f_t must be > 0");
    require(positive(f_r), "network.f_r must be > 0");
    require(nonneg(k_a), "network.k_a must be >= 0");
    require(std::isfinite(alpha) && alpha > 2.0, "network.alpha must be > 2");
    require(positive(w_t), "network.w_t must be > 0");
    require(positive(w_r), "network.w_r must be > 0");
    require(nonneg(rate), "network.rate must be >= 0");
    require(nonneg(n0_t), "network.n0_t must be >= 0");
    require(nonneg(n0_r), "network.n0_r must be >= 0");
    require(b_t >= 0.0 && !std::isnan(b_t), "network.b_t must be >= 0");
    tx.validate("antenna.tx");
    rx.validate("antenna.rx");
}

DerivedConstants derive(const NetworkParams& p) {
    p.validate();
    DerivedConstants d;
    const double wl_t = kSpeedOfLight / (4.0 * std::numbers::pi * p.f_t);
    const double wl_r = kSpeedOfLight / (4.0 * std::numbers::pi * p.f_r);
    d.gamma_t = p.tx.g_max * p.rx.g_max * wl_t * wl_t;
    d.gamma_r = wl_r * wl_r;
    d.k_ratio = p.b_t > 0.0 ? p.p_r * d.gamma_r / (p.b_t * p.p_t * d.gamma_t)
                            : std::numeric_limits<double>::infinity();
    d.tau_t = sinr_threshold(p.rate, p.w_t);
    d.tau_r = sinr_threshold(p.rate, p.w_r);
    d.main_lobe_prob = p.tx.main_lobe_fraction() * p.rx.main_lobe_fraction();
    return d;
}

Thresholds rate_thresholds(const NetworkParams& p) {
    return {sinr_threshold(p.rate, p.w_t), sinr_threshold(p.rate, p.w_r)};
}

double thermal_noise(double bandwidth_hz, double noise_figure_db) {
    require(bandwidth_hz > 0.0, "thermal_noise: bandwidth must be > 0");
    return kBoltzmann * kNoiseTemperature * bandwidth_hz * db_to_linear(noise_figure_db);
}

double thz_gain(double r, const NetworkParams& p) {
    require(r > 0.0, "thz_gain: distance must be > 0");
    const double wl = kSpeedOfLight / (4.0 * std::numbers::pi * p.f_t);
    return wl * wl * std::exp(-p.k_a * r) / (r * r);
}

double rf_gain(double rho, const NetworkParams& p) {
    require(rho > 0.0, "rf_gain: distance must be > 0");
    const double wl = kSpeedOfLight / (4.0 * std::numbers::pi * p.f_r);
    return wl * wl * std::pow(rho, -p.alpha);
}

double sinr_threshold(double rate, double bandwidth) {
    require(rate >= 0.0, "sinr_threshold: rate must be >= 0");
    require(bandwidth > 0.0, "sinr_threshold: bandwidth must be > 0");
    return std::exp2(rate / bandwidth) - 1.0;
}

double thz_signal_power(double r, const NetworkParams& p, const DerivedConstants& d) {
    return p.p_t * d.gamma_t * std::exp(-p.k_a * r) / (r * r);
}

}  // namespace thzgeo
