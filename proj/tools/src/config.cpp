#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

#include "thzgeo/errors.hpp"

namespace thzgeo::cli {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

struct Unit {
    const char* suffix;
    double scale;
};

// Longest suffixes first so "Gbps" is not read as "bps" with a stray "G".
constexpr Unit kUnits[] = {
    {"Tbps", 1e12}, {"Gbps", 1e9}, {"Mbps", 1e6}, {"kbps", 1e3}, {"bps", 1.0},
    {"THz", 1e12},  {"GHz", 1e9},  {"MHz", 1e6},  {"kHz", 1e3},  {"Hz", 1.0},
};

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

long long parse_integer(const std::string& key, const std::string& v) {
    const double x = parse_quantity(v);
    if (x != std::floor(x) || std::abs(x) > 9e15)
        throw ConfigError(key + ": expected an integer, got '" + v + "'");
    return static_cast<long long>(x);
}

double db_from_linear(double g) { return 10.0 * std::log10(g); }

// Shortest text that reads back to the same double, for echoing settings.
std::string format_setting(double v) {
    if (std::isnan(v) || std::isinf(v)) return format_double(v);
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

struct KeyDef {
    KeyInfo info;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

template <class Field>
KeyDef real_key(std::string name, std::string help, Field field) {
    return {{std::move(name), std::move(help), true},
            [field](RunConfig& c, const std::string& v) { field(c) = parse_quantity(v); },
            [field](const RunConfig& c) {
                return format_setting(field(const_cast<RunConfig&>(c)));
            }};
}

template <class Field>
KeyDef gain_db_key(std::string name, std::string help, Field field) {
    return {{std::move(name), std::move(help), true},
            [field](RunConfig& c, const std::string& v) {
                field(c) = db_to_linear(parse_quantity(v));
            },
            [field](const RunConfig& c) {
                return format_setting(db_from_linear(field(const_cast<RunConfig&>(c))));
            }};
}

template <class Field>
KeyDef degrees_key(std::string name, std::string help, Field field) {
    return {{std::move(name), std::move(help), true},
            [field](RunConfig& c, const std::string& v) {
                field(c) = parse_quantity(v) * std::numbers::pi / 180.0;
            },
            [field](const RunConfig& c) {
                return format_setting(field(const_cast<RunConfig&>(c)) * 180.0 / std::numbers::pi);
            }};
}

KeyDef bool_key(std::string name, std::string help, bool RunConfig::*field) {
    const std::string key = name;
    return {{std::move(name), std::move(help), false},
            [field, key](RunConfig& c, const std::string& v) { c.*field = parse_bool(key, v); },
            [field](const RunConfig& c) { return std::string(c.*field ? "true" : "false"); }};
}

KeyDef text_key(std::string name, std::string help, std::string RunConfig::*field) {
    return {{std::move(name), std::move(help), false},
            [field](RunConfig& c, const std::string& v) { c.*field = v; },
            [field](const RunConfig& c) { return c.*field; }};
}

BiasPolicy parse_bias_policy(const std::string& key, const std::string& v) {
    if (v == "fixed") return BiasPolicy::fixed;
    if (v == "optimized") return BiasPolicy::optimized;
    throw ConfigError(key + ": expected fixed or optimized, got '" + v + "'");
}

std::vector<KeyDef> build_schema() {
    std::vector<KeyDef> k;
    auto net = [](auto member) {
        return [member](RunConfig& c) -> double& { return c.network.*member; };
    };
    k.push_back(real_key("network.lambda_t", "THz base station intensity (1/m^2)",
                         net(&NetworkParams::lambda_t)));
    k.push_back(real_key("network.lambda_r", "RF base station intensity (1/m^2)",
                         net(&NetworkParams::lambda_r)));
    k.push_back(real_key("network.lambda_u", "user intensity (1/m^2), recorded but unused",
                         net(&NetworkParams::lambda_u)));
    k.push_back(real_key("network.p_t", "THz transmit power (W)", net(&NetworkParams::p_t)));
    k.push_back(real_key("network.p_r", "RF transmit power (W)", net(&NetworkParams::p_r)));
    k.push_back(real_key("network.f_t", "THz carrier (Hz; GHz/THz suffix accepted)",
                         net(&NetworkParams::f_t)));
    k.push_back(real_key("network.f_r", "RF carrier (Hz; MHz/GHz suffix accepted)",
                         net(&NetworkParams::f_r)));
    k.push_back(real_key("network.k_a", "molecular absorption coefficient (1/m)",
                         net(&NetworkParams::k_a)));
    k.push_back(real_key("network.alpha", "RF path-loss exponent (> 2)",
                         net(&NetworkParams::alpha)));
    k.push_back(real_key("network.w_t", "THz bandwidth (Hz)", net(&NetworkParams::w_t)));
    k.push_back(real_key("network.w_r", "RF bandwidth (Hz)", net(&NetworkParams::w_r)));
    k.push_back(real_key("network.rate", "target rate (bit/s; Gbps suffix accepted)",
                         net(&NetworkParams::rate)));
    k.push_back({{"network.n0_t", "THz noise power (W) or auto for k_B T W_T", true},
                 [](RunConfig& c, const std::string& v) {
                     if (v == "auto")
                         c.n0_t.reset();
                     else
                         c.n0_t = parse_quantity(v);
                 },
                 [](const RunConfig& c) {
                     return c.n0_t ? format_setting(*c.n0_t) : std::string("auto");
                 }});
    k.push_back(real_key("network.n0_r", "RF noise power (W)", net(&NetworkParams::n0_r)));
    k.push_back(real_key("network.noise_figure_db", "noise figure added to auto THz noise (dB)",
                         [](RunConfig& c) -> double& { return c.noise_figure_db; }));
    k.push_back(real_key("network.b_t", "THz association bias (inf allowed)",
                         net(&NetworkParams::b_t)));
    for (const char* side : {"tx", "rx"}) {
        const bool tx = std::string(side) == "tx";
        auto pat = [tx](auto member) {
            return [tx, member](RunConfig& c) -> double& {
                AntennaPattern* a = tx ? &c.network.tx : &c.network.rx;
                return a->*member;
            };
        };
        const std::string prefix = std::string("antenna.") + side + ".";
        k.push_back(gain_db_key(prefix + "g_max_db", "main-lobe gain (dB)",
                                pat(&AntennaPattern::g_max)));
        k.push_back(gain_db_key(prefix + "g_min_db", "side-lobe gain (dB)",
                                pat(&AntennaPattern::g_min)));
        k.push_back(degrees_key(prefix + "beamwidth_deg", "main-lobe width (degrees)",
                                pat(&AntennaPattern::beamwidth)));
    }

    k.push_back(bool_key("mc.enabled", "run the Monte Carlo columns", &RunConfig::mc_enabled));
    k.push_back({{"mc.trials", "Monte Carlo trials per estimate", true},
                 [](RunConfig& c, const std::string& v) {
                     c.mc.trials = parse_integer("mc.trials", v);
                 },
                 [](const RunConfig& c) { return std::to_string(c.mc.trials); }});
    k.push_back({{"mc.seed", "master seed", true},
                 [](RunConfig& c, const std::string& v) {
                     const long long s = parse_integer("mc.seed", v);
                     if (s < 0) throw ConfigError("mc.seed: must be >= 0");
                     c.mc.master_seed = static_cast<std::uint64_t>(s);
                 },
                 [](const RunConfig& c) { return std::to_string(c.mc.master_seed); }});
    k.push_back(real_key("mc.disc_radius", "simulation disc radius (m)",
                         [](RunConfig& c) -> double& { return c.mc.disc_radius; }));
    k.push_back(real_key("mc.rf_disc_radius", "RF tier simulation disc radius (m)",
                         [](RunConfig& c) -> double& { return c.mc.rf_disc_radius; }));
    k.push_back({{"mc.rf_tail_mean", "add the mean RF interference from beyond the disc", false},
                 [](RunConfig& c, const std::string& v) {
                     c.mc.rf_tail_mean = parse_bool("mc.rf_tail_mean", v);
                 },
                 [](const RunConfig& c) {
                     return std::string(c.mc.rf_tail_mean ? "true" : "false");
                 }});
    k.push_back({{"mc.gain_mode", "deterministic_F | bernoulli_thinning | four_level", false},
                 [](RunConfig& c, const std::string& v) {
                     try {
                         c.mc.gain_mode = parse_gain_mode(v);
                     } catch (const DomainError& e) {
                         throw ConfigError(std::string("mc.gain_mode: ") + e.what());
                     }
                 },
                 [](const RunConfig& c) { return to_string(c.mc.gain_mode); }});

    k.push_back(text_key("lt.s_grid", "transform arguments s (1/W): range or list",
                         &RunConfig::s_grid));
    k.push_back({{"lt.truncation", "series terms L for the lt_analytic column", true},
                 [](RunConfig& c, const std::string& v) {
                     c.lt.truncation_L = static_cast<int>(parse_integer("lt.truncation", v));
                 },
                 [](const RunConfig& c) { return std::to_string(c.lt.truncation_L); }});
    k.push_back({{"lt.adaptive", "add terms beyond L until converged, else quadrature", false},
                 [](RunConfig& c, const std::string& v) {
                     c.lt.adaptive = parse_bool("lt.adaptive", v);
                 },
                 [](const RunConfig& c) { return std::string(c.lt.adaptive ? "true" : "false"); }});
    k.push_back(real_key("lt.term_rel_tol", "adaptive stopping tolerance",
                         [](RunConfig& c) -> double& { return c.lt.term_rel_tol; }));

    k.push_back({{"threshold.kind", "rate | sinr_db | sinr", false},
                 [](RunConfig& c, const std::string& v) {
                     if (v == "rate")
                         c.threshold_kind = ThresholdKind::rate;
                     else if (v == "sinr_db")
                         c.threshold_kind = ThresholdKind::sinr_db;
                     else if (v == "sinr")
                         c.threshold_kind = ThresholdKind::sinr;
                     else
                         throw ConfigError("threshold.kind: expected rate, sinr_db or sinr, got '" +
                                           v + "'");
                 },
                 [](const RunConfig& c) { return to_string(c.threshold_kind); }});
    k.push_back({{"threshold.value", "single threshold (optimize-bias, optimized assoc)", true},
                 [](RunConfig& c, const std::string& v) {
                     c.threshold_value = v == "auto" ? "" : v;
                 },
                 [](const RunConfig& c) {
                     return c.threshold_value.empty() ? std::string("auto") : c.threshold_value;
                 }});
    k.push_back({{"threshold.grid", "coverage threshold grid: range or list", false},
                 [](RunConfig& c, const std::string& v) {
                     c.threshold_grid = v == "auto" ? "" : v;
                 },
                 [](const RunConfig& c) {
                     return c.threshold_grid.empty() ? std::string("auto") : c.threshold_grid;
                 }});

    k.push_back({{"coverage.modes", "comma list of thz_only, rf_only, coexisting, hybrid", false},
                 [](RunConfig& c, const std::string& v) {
                     std::vector<CoverageMode> modes;
                     for (const std::string& m : split(v, ',')) modes.push_back(parse_coverage_mode(m));
                     c.modes = modes;
                 },
                 [](const RunConfig& c) {
                     std::string out;
                     for (CoverageMode m : c.modes) out += (out.empty() ? "" : ",") + to_string(m);
                     return out;
                 }});
    k.push_back({{"coverage.bias", "fixed (network.b_t) | optimized, for coexisting", false},
                 [](RunConfig& c, const std::string& v) {
                     c.coverage_bias = parse_bias_policy("coverage.bias", v);
                 },
                 [](const RunConfig& c) { return to_string(c.coverage_bias); }});
    k.push_back({{"assoc.bias", "fixed (network.b_t) | optimized", false},
                 [](RunConfig& c, const std::string& v) {
                     c.assoc_bias = parse_bias_policy("assoc.bias", v);
                 },
                 [](const RunConfig& c) { return to_string(c.assoc_bias); }});
    k.push_back(bool_key("assoc.series", "evaluate the series and asymptotic columns",
                         &RunConfig::assoc_series));

    k.push_back({{"analytic.rf_distance_model", "exact | printed", false},
                 [](RunConfig& c, const std::string& v) {
                     if (v == "exact")
                         c.rf_model = RfDistanceModel::exact_association;
                     else if (v == "printed")
                         c.rf_model = RfDistanceModel::printed_approximation;
                     else
                         throw ConfigError(
                             "analytic.rf_distance_model: expected exact or printed, got '" + v + "'");
                 },
                 [](const RunConfig& c) { return to_string(c.rf_model); }});
    k.push_back(real_key("analytic.omega_max", "inversion frequency cutoff",
                         [](RunConfig& c) -> double& { return c.gil_pelaez.omega_max; }));
    k.push_back(real_key("analytic.cf_floor", "inversion stops below this |CF| bound",
                         [](RunConfig& c) -> double& { return c.gil_pelaez.cf_floor; }));
    k.push_back({{"analytic.series_terms", "association series truncation J", true},
                 [](RunConfig& c, const std::string& v) {
                     c.series.truncation_J =
                         static_cast<int>(parse_integer("analytic.series_terms", v));
                 },
                 [](const RunConfig& c) { return std::to_string(c.series.truncation_J); }});
    k.push_back(real_key("analytic.series_tail_tol", "association series stopping term size",
                         [](RunConfig& c) -> double& { return c.series.tail_tol; }));
    k.push_back(real_key("analytic.divergence_guard", "association series term growth limit",
                         [](RunConfig& c) -> double& { return c.series.divergence_guard; }));

    k.push_back(real_key("optimize.log10_b_min", "bias search lower end (log10)",
                         [](RunConfig& c) -> double& { return c.search.log10_b_min; }));
    k.push_back(real_key("optimize.log10_b_max", "bias search upper end (log10)",
                         [](RunConfig& c) -> double& { return c.search.log10_b_max; }));
    k.push_back({{"optimize.grid_points", "coarse bias grid size", true},
                 [](RunConfig& c, const std::string& v) {
                     c.search.grid_points =
                         static_cast<int>(parse_integer("optimize.grid_points", v));
                 },
                 [](const RunConfig& c) { return std::to_string(c.search.grid_points); }});
    k.push_back(real_key("optimize.refine_tol", "golden-section relative tolerance on B",
                         [](RunConfig& c) -> double& { return c.search.refine_tol; }));
    k.push_back(real_key("optimize.noise_floor", "objective noise level for flat/multimodal flags",
                         [](RunConfig& c) -> double& { return c.search.noise_floor; }));

    k.push_back(text_key("sweep", "sweeps separated by ';' (see --sweep)", &RunConfig::sweep));
    k.push_back(text_key("figure.command", "lt | coverage | assoc | optimize-bias (figures only)",
                         &RunConfig::figure_command));
    return k;
}

const std::vector<KeyDef>& schema() {
    static const std::vector<KeyDef> s = build_schema();
    return s;
}

const KeyDef& find_key(const std::string& key) {
    for (const KeyDef& d : schema())
        if (d.info.name == key) return d;
    throw ConfigError("unknown key '" + key + "'");
}

std::vector<double> default_grid(ThresholdKind k) {
    switch (k) {
        case ThresholdKind::rate: return parse_values("2e9:9e9:15:lin");
        case ThresholdKind::sinr_db: return parse_values("-10:32:15:lin");
        case ThresholdKind::sinr: return parse_values("0.1:1000:15:log");
    }
    return {};
}

}  // namespace

std::string to_string(ThresholdKind k) {
    switch (k) {
        case ThresholdKind::rate: return "rate";
        case ThresholdKind::sinr_db: return "sinr_db";
        case ThresholdKind::sinr: return "sinr";
    }
    return "unknown";
}

std::string to_string(CoverageMode m) {
    switch (m) {
        case CoverageMode::thz_only: return "thz_only";
        case CoverageMode::rf_only: return "rf_only";
        case CoverageMode::coexisting: return "coexisting";
        case CoverageMode::hybrid: return "hybrid";
    }
    return "unknown";
}

std::string to_string(BiasPolicy b) { return b == BiasPolicy::fixed ? "fixed" : "optimized"; }

CoverageMode parse_coverage_mode(const std::string& s) {
    for (CoverageMode m : {CoverageMode::thz_only, CoverageMode::rf_only, CoverageMode::coexisting,
                           CoverageMode::hybrid})
        if (s == to_string(m)) return m;
    throw ConfigError("unknown coverage mode '" + s + "'");
}

std::string format_double(double v) {
    if (std::isnan(v)) return "";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_quantity(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw ConfigError("empty number");
    if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
    double scale = 1.0;
    std::string digits = t;
    for (const Unit& u : kUnits) {
        const std::string suf = u.suffix;
        if (t.size() > suf.size() && t.compare(t.size() - suf.size(), suf.size(), suf) == 0) {
            digits = trim(t.substr(0, t.size() - suf.size()));
            scale = u.scale;
            break;
        }
    }
    double v = 0.0;
    const char* first = digits.data();
    const char* last = first + digits.size();
    if (*first == '+') ++first;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last)
        throw ConfigError("not a number: '" + t + "'");
    return v * scale;
}

std::vector<double> parse_values(const std::string& text) {
    const std::string t = trim(text);
    if (t.find(':') != std::string::npos) {
        const std::vector<std::string> parts = split(t, ':');
        if (parts.size() != 3 && parts.size() != 4)
            throw ConfigError("range '" + t + "' must be start:stop:count[:lin|log]");
        const double a = parse_quantity(parts[0]);
        const double b = parse_quantity(parts[1]);
        const double count_d = parse_quantity(parts[2]);
        if (count_d < 1 || count_d != std::floor(count_d))
            throw ConfigError("range '" + t + "': count must be an integer >= 1");
        const int count = static_cast<int>(count_d);
        const std::string scale = parts.size() == 4 ? parts[3] : "lin";
        if (scale != "lin" && scale != "log")
            throw ConfigError("range '" + t + "': scale must be lin or log");
        std::vector<double> out;
        if (scale == "log" && !(a > 0.0 && b > 0.0))
            throw ConfigError("range '" + t + "': log range needs positive endpoints");
        const bool log_scale = scale == "log";
        const double lo = log_scale ? std::log10(a) : a;
        const double hi = log_scale ? std::log10(b) : b;
        const double step = count == 1 ? 0.0 : (hi - lo) / (count - 1);
        for (int i = 0; i < count; ++i) {
            const double x = i + 1 == count && count > 1 ? hi : lo + i * step;
            if (!log_scale)
                out.push_back(x);
            else if (i == 0)
                out.push_back(a);
            else if (i + 1 == count)
                out.push_back(b);
            else
                out.push_back(std::pow(10.0, x));
        }
        return out;
    }
    std::vector<double> out;
    for (const std::string& v : split(t, ',')) out.push_back(parse_quantity(v));
    return out;
}

SweepSpec parse_sweep(const std::string& text) {
    const std::size_t eq = text.find('=');
    if (eq == std::string::npos)
        throw ConfigError("sweep '" + text + "' must look like key=values");
    SweepSpec spec;
    spec.keys = split(text.substr(0, eq), '+');
    for (const std::string& key : spec.keys) {
        find_key(key);
        if (key == "sweep" || key == "figure.command")
            throw ConfigError("key '" + key + "' cannot be swept");
    }
    const std::string values = trim(text.substr(eq + 1));
    if (values.empty()) throw ConfigError("sweep '" + text + "' has no values");
    if (spec.keys.size() == 1 && values.find(':') != std::string::npos &&
        find_key(spec.keys[0]).info.numeric) {
        for (double v : parse_values(values)) spec.values.push_back({format_double(v)});
        return spec;
    }
    for (const std::string& item : split(values, ',')) {
        std::vector<std::string> parts = split(item, '/');
        if (parts.size() != spec.keys.size())
            throw ConfigError("sweep '" + text + "': value '" + item + "' does not match " +
                              std::to_string(spec.keys.size()) + " key(s)");
        spec.values.push_back(parts);
    }
    return spec;
}

std::vector<std::vector<std::pair<std::string, std::string>>> expand_sweeps(
    const std::vector<SweepSpec>& sweeps) {
    std::vector<std::vector<std::pair<std::string, std::string>>> points{{}};
    for (const SweepSpec& s : sweeps) {
        std::vector<std::vector<std::pair<std::string, std::string>>> next;
        for (const auto& base : points) {
            for (const auto& vals : s.values) {
                auto p = base;
                for (std::size_t j = 0; j < s.keys.size(); ++j) p.emplace_back(s.keys[j], vals[j]);
                next.push_back(std::move(p));
            }
        }
        points = std::move(next);
    }
    return points;
}

const std::vector<KeyInfo>& key_schema() {
    static const std::vector<KeyInfo> info = [] {
        std::vector<KeyInfo> v;
        for (const KeyDef& d : schema()) v.push_back(d.info);
        return v;
    }();
    return info;
}

void set_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    const KeyDef& d = find_key(key);
    try {
        d.set(cfg, trim(value));
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        if (what.rfind(key, 0) == 0) throw;
        throw ConfigError(key + ": " + what);
    }
}

std::string get_key(const RunConfig& cfg, const std::string& key) { return find_key(key).get(cfg); }

std::vector<std::pair<std::string, std::string>> resolved_keys(const RunConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const KeyDef& d : schema()) out.emplace_back(d.info.name, d.get(cfg));
    return out;
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        const std::string where = origin + ":" + std::to_string(number) + ": ";
        if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (!seen.insert(key).second) throw ConfigError(where + "duplicate key '" + key + "'");
        try {
            set_key(cfg, key, line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        }
    }
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str(), path);
}

NetworkParams RunConfig::resolved_network() const {
    NetworkParams p = network;
    p.n0_t = n0_t ? *n0_t : thermal_noise(p.w_t, noise_figure_db);
    try {
        p.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    return p;
}

namespace {

Thresholds thresholds_from(ThresholdKind kind, double v, const NetworkParams& p) {
    switch (kind) {
        case ThresholdKind::rate:
            if (v < 0.0) throw ConfigError("rate threshold must be >= 0");
            return {sinr_threshold(v, p.w_t), sinr_threshold(v, p.w_r)};
        case ThresholdKind::sinr_db: {
            const double t = db_to_linear(v);
            return {t, t};
        }
        case ThresholdKind::sinr:
            if (v < 0.0) throw ConfigError("SINR threshold must be >= 0");
            return {v, v};
    }
    return {0.0, 0.0};
}

}  // namespace

Thresholds RunConfig::single_threshold() const {
    const NetworkParams p = resolved_network();
    if (threshold_value.empty()) {
        if (threshold_kind != ThresholdKind::rate)
            throw ConfigError("threshold.value is required when threshold.kind is not rate");
        return thresholds_from(threshold_kind, p.rate, p);
    }
    return thresholds_from(threshold_kind, parse_quantity(threshold_value), p);
}

std::vector<std::pair<double, Thresholds>> RunConfig::threshold_grid_values() const {
    const NetworkParams p = resolved_network();
    const std::vector<double> raw =
        threshold_grid.empty() ? default_grid(threshold_kind) : parse_values(threshold_grid);
    std::vector<std::pair<double, Thresholds>> out;
    for (double v : raw) out.emplace_back(v, thresholds_from(threshold_kind, v, p));
    return out;
}

std::vector<double> RunConfig::s_values() const {
    std::vector<double> s = parse_values(s_grid);
    for (double v : s)
        if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("lt.s_grid: values must be >= 0");
    return s;
}

std::vector<SweepSpec> RunConfig::sweeps() const {
    std::vector<SweepSpec> out;
    if (trim(sweep).empty()) return out;
    for (const std::string& part : split(sweep, ';'))
        if (!part.empty()) out.push_back(parse_sweep(part));
    return out;
}

void RunConfig::validate() const {
    try {
        resolved_network();
        mc.validate();
        lt.validate();
        gil_pelaez.validate();
        series.validate();
        search.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    if (mc.disc_radius <= 0.0) throw ConfigError("mc.disc_radius must be > 0");
    if (modes.empty()) throw ConfigError("coverage.modes must not be empty");
    s_values();
    threshold_grid_values();
    sweeps();
    if (!threshold_value.empty()) single_threshold();
    if (!figure_command.empty() && figure_command != "lt" && figure_command != "coverage" &&
        figure_command != "assoc" && figure_command != "optimize-bias")
        throw ConfigError("figure.command: unknown command '" + figure_command + "'");
}

}  // namespace thzgeo::cli
