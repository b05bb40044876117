#pragma once

// Deployment parameters, antenna model and deterministic link functions
// shared by the analytic engine and the simulator.

#include <array>

namespace thzgeo {

inline constexpr double kSpeedOfLight = 3e8;         // m/s
inline constexpr double kBoltzmann = 1.380649e-23;   // J/K
inline constexpr double kNoiseTemperature = 290.0;   // K

/// Sectored two-level antenna: g_max inside the main lobe of width
/// `beamwidth` radians, g_min elsewhere. Gains are linear.
struct AntennaPattern {
    double g_max = 316.22776601683796;  // 25 dB
    double g_min = 31.622776601683793;  // 15 dB
    double beamwidth = 0.52359877559829887;  // 30 degrees

    void validate(const char* which = "antenna") const;
    /// Fraction of directions covered by the main lobe, beamwidth / 2pi.
    double main_lobe_fraction() const;
};

double db_to_linear(double db);

struct GainLevel {
    double gain;         // product of tx and rx gains, linear
    double probability;
};

/// Gain products for max*max, max*min, min*max, min*min alignment.
struct GainDistribution {
    std::array<GainLevel, 4> levels;
};

GainDistribution gain_distribution(const AntennaPattern& tx, const AntennaPattern& rx);

struct NetworkParams {
    double lambda_t = 0.032;   // THz base stations per m^2
    double lambda_r = 1e-4;    // RF base stations per m^2
    double lambda_u = 0.0;     // users per m^2; accepted but unused
    double p_t = 1.0;          // W
    double p_r = 1.0;          // W
    double f_t = 1.0e12;       // Hz
    double f_r = 2.1e9;        // Hz
    double k_a = 0.05;         // 1/m
    double alpha = 2.5;
    double w_t = 0.5e9;        // Hz
    double w_r = 40e6;         // Hz
    double rate = 5e9;         // bit/s
    double n0_t = kBoltzmann * kNoiseTemperature * 0.5e9;  // W
    double n0_r = 0.0;         // W
    double b_t = 1.0;
    AntennaPattern tx{};
    AntennaPattern rx{};

    /// Throws DomainError naming the first offending field.
    void validate() const;
};

/// SINR thresholds per tier (linear).
struct Thresholds {
    double tau_t;
    double tau_r;
};

struct DerivedConstants {
    double gamma_t;   // G_tx G_rx c^2 / (4 pi f_T)^2
    double gamma_r;   // c^2 / (4 pi f_R)^2
    double k_ratio;   // P_R gamma_R / (B_T P_T gamma_T); +inf when B_T = 0
    double tau_t;
    double tau_r;
    double main_lobe_prob;  // F = F_tx F_rx
};

DerivedConstants derive(const NetworkParams& p);

/// Thresholds implied by the configured rate and bandwidths.
Thresholds rate_thresholds(const NetworkParams& p);

/// Thermal noise power k_B T W scaled by a noise figure in dB.
double thermal_noise(double bandwidth_hz, double noise_figure_db = 0.0);

/// Free-space THz spreading with molecular absorption, without antenna
/// gains: (c / 4 pi f_T)^2 e^{-k_a r} / r^2.
double thz_gain(double r, const NetworkParams& p);

/// RF path gain gamma_R rho^{-alpha}.
double rf_gain(double rho, const NetworkParams& p);

/// 2^{rate/bandwidth} - 1.
double sinr_threshold(double rate, double bandwidth);

/// Received THz power from the serving (main-lobe aligned) base station at r.
double thz_signal_power(double r, const NetworkParams& p, const DerivedConstants& d);

}  // namespace thzgeo
