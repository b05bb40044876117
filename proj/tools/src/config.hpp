#pragma once

// Run configuration for the thzgeo tool: a flat `key = value` file with
// dotted keys. Every key has a default; unknown keys are rejected.

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "thzgeo/analytic.hpp"
#include "thzgeo/mcsim.hpp"
#include "thzgeo/netmodel.hpp"
#include "thzgeo/optimize.hpp"

namespace thzgeo::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ThresholdKind { rate, sinr_db, sinr };
enum class CoverageMode { thz_only, rf_only, coexisting, hybrid };
enum class BiasPolicy { fixed, optimized };

std::string to_string(ThresholdKind k);
std::string to_string(CoverageMode m);
std::string to_string(BiasPolicy b);
CoverageMode parse_coverage_mode(const std::string& s);

/// A list of values for one or more keys varied together.
struct SweepSpec {
    std::vector<std::string> keys;
    /// values[i][j] is the value of keys[j] at sweep point i.
    std::vector<std::vector<std::string>> values;
};

struct RunConfig {
    NetworkParams network;
    std::optional<double> n0_t;  // nullopt: thermal noise over w_t
    double noise_figure_db = 0.0;

    McConfig mc;
    bool mc_enabled = true;

    std::string s_grid = "1e5:1e7:20:log";
    LtOptions lt{3, true};

    ThresholdKind threshold_kind = ThresholdKind::rate;
    std::string threshold_value;  // empty: network.rate (rate kind only)
    std::string threshold_grid;   // empty: a default grid per kind

    std::vector<CoverageMode> modes{CoverageMode::thz_only};
    BiasPolicy coverage_bias = BiasPolicy::fixed;
    BiasPolicy assoc_bias = BiasPolicy::fixed;
    bool assoc_series = true;

    RfDistanceModel rf_model = RfDistanceModel::exact_association;
    GilPelaezOptions gil_pelaez;
    SeriesOptions series;
    BiasSearchSpec search{-8.0, 8.0, 33, 1e-3, 1e-4};

    std::string sweep;
    std::string figure_command;

    /// Network parameters with derived noise filled in, validated.
    NetworkParams resolved_network() const;
    /// Single threshold pair (threshold.value).
    Thresholds single_threshold() const;
    /// Threshold grid: the input values in their own unit and the linear pairs.
    std::vector<std::pair<double, Thresholds>> threshold_grid_values() const;
    std::vector<double> s_values() const;
    std::vector<SweepSpec> sweeps() const;

    /// Checks every cross-key invariant; throws ConfigError.
    void validate() const;
};

struct KeyInfo {
    std::string name;
    std::string help;
    bool numeric;
};

/// Every accepted key in schema order.
const std::vector<KeyInfo>& key_schema();

/// Sets one key from its text form. Throws ConfigError naming the key.
void set_key(RunConfig& cfg, const std::string& key, const std::string& value);

/// Current value of a key in canonical text form.
std::string get_key(const RunConfig& cfg, const std::string& key);

/// All keys with their resolved values, in schema order.
std::vector<std::pair<std::string, std::string>> resolved_keys(const RunConfig& cfg);

/// Parses `key = value` lines; `#` starts a comment. `origin` names the
/// source in error messages. Duplicate keys are errors.
RunConfig parse_config(const std::string& text, const std::string& origin);
RunConfig load_config(const std::string& path);

/// "start:stop:count[:lin|log]" or a comma list; values may carry a unit
/// suffix (Hz, kHz, MHz, GHz, THz, bps, kbps, Mbps, Gbps, Tbps).
std::vector<double> parse_values(const std::string& text);

/// A single number with an optional unit suffix.
double parse_quantity(const std::string& text);

/// "key=values" or "k1+k2=a1/a2,b1/b2" (zipped keys).
SweepSpec parse_sweep(const std::string& text);

/// Expands the cartesian product of the sweeps in order (last varies fastest).
std::vector<std::vector<std::pair<std::string, std::string>>> expand_sweeps(
    const std::vector<SweepSpec>& sweeps);

/// %.17g, or "" for NaN.
std::string format_double(double v);

}  // namespace thzgeo::cli
