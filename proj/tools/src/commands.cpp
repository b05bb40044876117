#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"

#include "thzgeo/analytic.hpp"
#include "thzgeo/errors.hpp"
#include "thzgeo/mcsim.hpp"
#include "thzgeo/optimize.hpp"
#include "thzgeo/parallel.hpp"
#include "thzgeo/version.hpp"

namespace thzgeo::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Row = std::vector<Cell>;

struct PointResult {
    std::vector<Row> rows;
};

struct Flags {
    std::vector<std::string> items;
    void add(const std::string& what) { items.push_back(what); }
    std::string joined() const {
        std::string out;
        for (const std::string& s : items) out += (out.empty() ? "" : "; ") + s;
        return out;
    }
};

Cell number_or_empty(double v) {
    if (std::isnan(v)) return std::monostate{};
    return v;
}

Cell sweep_cell(const std::string& key, const std::string& value) {
    for (const KeyInfo& k : key_schema()) {
        if (k.name != key || !k.numeric) continue;
        try {
            return parse_quantity(value);
        } catch (const ConfigError&) {
            return value;
        }
    }
    return value;
}

std::vector<std::string> derived_notes(const RunConfig& cfg) {
    const NetworkParams p = cfg.resolved_network();
    const DerivedConstants d = derive(p);
    const Thresholds rt = rate_thresholds(p);
    std::vector<std::string> n;
    n.push_back("derived: n0_t_watts = " + format_double(p.n0_t));
    n.push_back("derived: main_lobe_probability = " + format_double(d.main_lobe_prob));
    n.push_back("derived: gamma_t = " + format_double(d.gamma_t) +
                ", gamma_r = " + format_double(d.gamma_r) + ", k_ratio = " + format_double(d.k_ratio));
    n.push_back("derived: rate thresholds tau_t = " + format_double(rt.tau_t) +
                ", tau_r = " + format_double(rt.tau_r));
    return n;
}

std::string threshold_note(const RunConfig& cfg) {
    std::string unit;
    switch (cfg.threshold_kind) {
        case ThresholdKind::rate: unit = "rate in bit/s"; break;
        case ThresholdKind::sinr_db: unit = "SINR in dB"; break;
        case ThresholdKind::sinr: unit = "linear SINR"; break;
    }
    return "threshold column: " + unit + " as given; tau_t and tau_r are linear SINR";
}

// Runs `point` for every sweep point on the worker pool and assembles the
// table with the sweep columns first. Rows keep sweep order.
Table run_points(const RunConfig& base, const std::string& command,
                 const std::vector<std::string>& columns,
                 const std::function<std::vector<Row>(const RunConfig&)>& point,
                 const std::vector<std::string>& implied_keys = {}) {
    base.validate();
    const std::vector<SweepSpec> sweeps = base.sweeps();
    const auto points = expand_sweeps(sweeps);

    std::vector<std::string> sweep_keys;
    for (const SweepSpec& s : sweeps)
        for (const std::string& k : s.keys) {
            bool implied = false;
            for (const std::string& i : implied_keys) implied = implied || i == k;
            if (!implied) sweep_keys.push_back(k);
        }

    std::vector<RunConfig> configs;
    configs.reserve(points.size());
    for (const auto& pt : points) {
        RunConfig c = base;
        for (const auto& [k, v] : pt) set_key(c, k, v);
        c.validate();
        configs.push_back(std::move(c));
    }

    std::vector<PointResult> results(points.size());
    parallel_for(points.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) results[i].rows = point(configs[i]);
    });

    Table t;
    t.command = command;
    t.config = resolved_keys(base);
    t.notes = derived_notes(base);
    t.columns = sweep_keys;
    t.columns.insert(t.columns.end(), columns.begin(), columns.end());
    t.columns.push_back("flags");
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (Row& r : results[i].rows) {
            Row row;
            for (const auto& [k, v] : points[i]) {
                bool shown = false;
                for (const std::string& s : sweep_keys) shown = shown || s == k;
                if (shown) row.push_back(sweep_cell(k, v));
            }
            row.insert(row.end(), r.begin(), r.end());
            const std::size_t n = t.rows.size();
            if (std::holds_alternative<std::string>(row.back()) &&
                !std::get<std::string>(row.back()).empty())
                t.flags.push_back("row " + std::to_string(n) + ": " + std::get<std::string>(row.back()));
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

template <class Fn>
double guarded(Flags& flags, const std::string& what, Fn&& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        flags.add(what + " failed: " + e.what());
        return kNaN;
    }
}

McConfig mc_with_rule(const RunConfig& cfg, AssociationRule rule) {
    McConfig mc = cfg.mc;
    mc.rule = rule;
    return mc;
}

CoexistingOptions coexisting_options(const RunConfig& cfg) {
    CoexistingOptions o;
    o.gil_pelaez = cfg.gil_pelaez;
    o.rf_model = cfg.rf_model;
    return o;
}

// Coexisting coverage as a function of the bias, memoized per bias value.
class BiasObjective {
public:
    BiasObjective(const NetworkParams& p, std::vector<Thresholds> tau, const CoexistingOptions& o)
        : eval_(p, std::move(tau), o) {}

    const std::vector<CoexistingBreakdown>& at(double b) {
        auto it = cache_.find(b);
        if (it == cache_.end()) it = cache_.emplace(b, eval_.evaluate(b)).first;
        return it->second;
    }

private:
    CoexistingEvaluator eval_;
    std::map<double, std::vector<CoexistingBreakdown>> cache_;
};

void add_optimizer_flags(Flags& flags, const BiasOptimum& opt) {
    if (opt.flat) flags.add("bias objective flat");
    if (opt.multimodal) flags.add("bias objective multimodal");
}

}  // namespace

Table cmd_lt(const RunConfig& cfg) {
    const std::vector<std::string> columns{"s",         "lt_analytic_L1", "lt_analytic_L3",
                                           "lt_analytic", "lt_terms",     "lt_used_quadrature",
                                           "lt_mc",     "lt_mc_ci95"};
    Table t = run_points(cfg, "lt", columns, [](const RunConfig& c) {
        const NetworkParams p = c.resolved_network();
        const std::vector<double> s = c.s_values();
        std::vector<McEstimate> mc;
        if (c.mc_enabled) mc = estimate_lt(s, p, c.mc);
        std::vector<Row> rows;
        for (std::size_t i = 0; i < s.size(); ++i) {
            Flags flags;
            const double l1 = guarded(flags, "lt_analytic_L1", [&] {
                return lt_thz_average(s[i], p, LtOptions{1, false}).value;
            });
            const double l3 = guarded(flags, "lt_analytic_L3", [&] {
                return lt_thz_average(s[i], p, LtOptions{3, false}).value;
            });
            LtAverage full{kNaN, 0.0, 0, false};
            guarded(flags, "lt_analytic", [&] {
                full = lt_thz_average(s[i], p, c.lt);
                return full.value;
            });
            Row r{s[i], number_or_empty(l1), number_or_empty(l3), number_or_empty(full.value)};
            if (std::isnan(full.value)) {
                r.push_back(std::monostate{});
                r.push_back(std::monostate{});
            } else {
                r.push_back(static_cast<std::int64_t>(full.max_terms_used));
                r.push_back(static_cast<std::int64_t>(full.used_integral ? 1 : 0));
            }
            if (c.mc_enabled) {
                r.push_back(mc[i].mean);
                r.push_back(mc[i].ci95_halfwidth);
            } else {
                r.push_back(std::monostate{});
                r.push_back(std::monostate{});
            }
            r.push_back(flags.joined());
            rows.push_back(std::move(r));
        }
        return rows;
    });
    return t;
}

Table cmd_coverage(const RunConfig& cfg) {
    const std::vector<std::string> columns{
        "mode",   "threshold",  "tau_t",       "tau_r",      "coverage_analytic",
        "coverage_mc", "coverage_mc_ci95", "method", "terms_used", "quad_error",
        "bias_used",   "p_assoc_thz"};
    Table t = run_points(cfg, "coverage", columns, [](const RunConfig& c) {
        const NetworkParams p = c.resolved_network();
        const auto grid = c.threshold_grid_values();
        const std::size_t m = grid.size();
        std::vector<Thresholds> taus;
        std::vector<double> tau_t;
        for (const auto& g : grid) {
            taus.push_back(g.second);
            tau_t.push_back(g.second.tau_t);
        }

        // Per-tier analytic results, computed once and shared by the modes.
        std::vector<CoverageResult> thz, rf;
        std::string thz_error, rf_error;
        auto need_thz = [&] {
            if (!thz.empty() || !thz_error.empty()) return;
            try {
                thz = coverage_thz_only(p, tau_t, c.gil_pelaez);
            } catch (const std::exception& e) {
                thz_error = e.what();
            }
        };
        auto need_rf = [&] {
            if (!rf.empty() || !rf_error.empty()) return;
            try {
                for (const Thresholds& tau : taus) rf.push_back(coverage_rf_only(p, tau.tau_r));
            } catch (const std::exception& e) {
                rf.clear();
                rf_error = e.what();
            }
        };

        std::vector<Row> rows;
        for (CoverageMode mode : c.modes) {
            std::vector<CoverageResult> analytic(m);
            std::vector<std::string> failure(m);
            std::vector<double> bias(m, kNaN), p_assoc(m, kNaN);
            std::vector<Flags> flags(m);
            std::vector<McEstimate> mc(m);

            switch (mode) {
                case CoverageMode::thz_only:
                    need_thz();
                    for (std::size_t i = 0; i < m; ++i) {
                        if (thz_error.empty())
                            analytic[i] = thz[i];
                        else
                            failure[i] = thz_error;
                    }
                    if (c.mc_enabled)
                        mc = estimate_coverage(p, mc_with_rule(c, AssociationRule::nearest_thz), taus);
                    break;
                case CoverageMode::rf_only:
                    need_rf();
                    for (std::size_t i = 0; i < m; ++i) {
                        if (rf_error.empty())
                            analytic[i] = rf[i];
                        else
                            failure[i] = rf_error;
                    }
                    if (c.mc_enabled)
                        mc = estimate_coverage(p, mc_with_rule(c, AssociationRule::nearest_rf), taus);
                    break;
                case CoverageMode::hybrid:
                    need_thz();
                    need_rf();
                    for (std::size_t i = 0; i < m; ++i) {
                        if (!thz_error.empty())
                            failure[i] = thz_error;
                        else if (!rf_error.empty())
                            failure[i] = rf_error;
                        else
                            analytic[i] = combine_hybrid(thz[i], rf[i]);
                    }
                    if (c.mc_enabled)
                        mc = estimate_coverage(p, mc_with_rule(c, AssociationRule::hybrid), taus);
                    break;
                case CoverageMode::coexisting: {
                    try {
                        BiasObjective objective(p, taus, coexisting_options(c));
                        for (std::size_t i = 0; i < m; ++i) {
                            double b = p.b_t;
                            if (c.coverage_bias == BiasPolicy::optimized) {
                                const BiasOptimum opt = optimize_bias(c.search, [&](double bb) {
                                    return objective.at(bb)[i].total.probability;
                                });
                                b = opt.b_star;
                                add_optimizer_flags(flags[i], opt);
                            }
                            const CoexistingBreakdown& br = objective.at(b)[i];
                            analytic[i] = br.total;
                            bias[i] = b;
                            p_assoc[i] = br.p_assoc_thz;
                        }
                    } catch (const std::exception& e) {
                        for (std::size_t i = 0; i < m; ++i) failure[i] = e.what();
                    }
                    if (c.mc_enabled) {
                        const McConfig mcc = mc_with_rule(c, AssociationRule::brsp);
                        if (c.coverage_bias == BiasPolicy::fixed) {
                            mc = estimate_coverage(p, mcc, taus);
                        } else {
                            for (std::size_t i = 0; i < m; ++i) {
                                NetworkParams q = p;
                                q.b_t = std::isnan(bias[i]) ? p.b_t : bias[i];
                                mc[i] = estimate_coverage(q, mcc, taus[i]);
                            }
                        }
                    }
                    break;
                }
            }

            for (std::size_t i = 0; i < m; ++i) {
                Row r{to_string(mode), grid[i].first, grid[i].second.tau_t, grid[i].second.tau_r};
                if (failure[i].empty()) {
                    r.push_back(analytic[i].probability);
                } else {
                    flags[i].add("coverage_analytic failed: " + failure[i]);
                    r.push_back(std::monostate{});
                }
                if (c.mc_enabled) {
                    r.push_back(mc[i].mean);
                    r.push_back(mc[i].ci95_halfwidth);
                } else {
                    r.push_back(std::monostate{});
                    r.push_back(std::monostate{});
                }
                if (failure[i].empty()) {
                    if (analytic[i].truncated) flags[i].add("frequency integral truncated");
                    r.push_back(to_string(analytic[i].method));
                    r.push_back(static_cast<std::int64_t>(analytic[i].terms_used));
                    r.push_back(analytic[i].estimated_error);
                } else {
                    r.push_back(std::monostate{});
                    r.push_back(std::monostate{});
                    r.push_back(std::monostate{});
                }
                r.push_back(number_or_empty(bias[i]));
                r.push_back(number_or_empty(p_assoc[i]));
                r.push_back(flags[i].joined());
                rows.push_back(std::move(r));
            }
        }
        return rows;
    });
    t.notes.push_back(threshold_note(cfg));
    return t;
}

namespace {

// Bias maximizing coexisting coverage at the single configured threshold.
BiasOptimum optimal_bias(const RunConfig& c, const NetworkParams& p) {
    BiasObjective objective(p, {c.single_threshold()}, coexisting_options(c));
    return optimize_bias(c.search,
                         [&](double b) { return objective.at(b).front().total.probability; });
}

std::string series_status(ConvergenceError::Reason reason) {
    switch (reason) {
        case ConvergenceError::Reason::diverged: return "diverged";
        case ConvergenceError::Reason::term_limit: return "term_limit";
        case ConvergenceError::Reason::out_of_range: return "out_of_range";
    }
    return "failed";
}

}  // namespace

Table cmd_assoc(const RunConfig& cfg) {
    const std::vector<std::string> columns{
        "lambda_t",         "bias_used",     "p_assoc_quadrature", "p_assoc_series",
        "series_terms",     "series_status", "p_assoc_asymptotic", "p_assoc_mc",
        "p_assoc_mc_ci95"};
    Table t = run_points(
        cfg, "assoc", columns,
        [](const RunConfig& c) {
            NetworkParams p = c.resolved_network();
            Flags flags;
            if (c.assoc_bias == BiasPolicy::optimized) {
                const double b = guarded(flags, "bias optimization", [&] {
                    const BiasOptimum opt = optimal_bias(c, p);
                    add_optimizer_flags(flags, opt);
                    return opt.b_star;
                });
                if (!std::isnan(b)) p.b_t = b;
            }
            const double quad =
                guarded(flags, "p_assoc_quadrature", [&] { return assoc_prob_thz_quadrature(p); });
            // The series is asymptotic, so leaving its region of validity is
            // reported in series_status rather than flagged; the quadrature
            // column stays authoritative.
            double series = kNaN, asym = kNaN;
            int terms = -1;
            std::string status;
            if (c.assoc_series) {
                series = guarded(flags, "p_assoc_series", [&] {
                    try {
                        const SeriesResult r = assoc_prob_thz_series(p, c.series);
                        terms = r.terms_used;
                        status = "converged";
                        return r.value;
                    } catch (const ConvergenceError& e) {
                        status = series_status(e.reason());
                        return kNaN;
                    }
                });
                asym = guarded(flags, "p_assoc_asymptotic", [&] {
                    try {
                        return assoc_prob_thz_asymptotic(p, c.series).value;
                    } catch (const ConvergenceError&) {
                        return kNaN;
                    }
                });
            }
            Row r{p.lambda_t, p.b_t, number_or_empty(quad), number_or_empty(series)};
            if (terms >= 0)
                r.push_back(static_cast<std::int64_t>(terms));
            else
                r.push_back(std::monostate{});
            r.push_back(status);
            r.push_back(number_or_empty(asym));
            if (c.mc_enabled) {
                const McEstimate e = estimate_association(p, mc_with_rule(c, AssociationRule::brsp));
                r.push_back(e.mean);
                r.push_back(e.ci95_halfwidth);
            } else {
                r.push_back(std::monostate{});
                r.push_back(std::monostate{});
            }
            r.push_back(flags.joined());
            return std::vector<Row>{std::move(r)};
        },
        {"network.lambda_t"});
    return t;
}

Table cmd_optimize_bias(const RunConfig& cfg) {
    const std::vector<std::string> columns{
        "lambda_t",      "b_star",          "coverage_at_b_star", "coverage_at_b1",
        "flat_flag",     "multimodal_flag", "evaluations",        "coverage_mc_at_b_star",
        "coverage_mc_at_b_star_ci95"};
    Table t = run_points(
        cfg, "optimize-bias", columns,
        [](const RunConfig& c) {
            const NetworkParams p = c.resolved_network();
            const Thresholds tau = c.single_threshold();
            Flags flags;
            Row r{p.lambda_t};
            try {
                BiasObjective objective(p, {tau}, coexisting_options(c));
                auto f = [&](double b) { return objective.at(b).front().total.probability; };
                const BiasOptimum opt = optimize_bias(c.search, f);
                add_optimizer_flags(flags, opt);
                r.push_back(opt.b_star);
                r.push_back(opt.coverage);
                r.push_back(f(1.0));
                r.push_back(static_cast<std::int64_t>(opt.flat ? 1 : 0));
                r.push_back(static_cast<std::int64_t>(opt.multimodal ? 1 : 0));
                r.push_back(static_cast<std::int64_t>(opt.trace.size()));
                if (c.mc_enabled) {
                    NetworkParams q = p;
                    q.b_t = opt.b_star;
                    const McEstimate e =
                        estimate_coverage(q, mc_with_rule(c, AssociationRule::brsp), tau);
                    r.push_back(e.mean);
                    r.push_back(e.ci95_halfwidth);
                } else {
                    r.push_back(std::monostate{});
                    r.push_back(std::monostate{});
                }
            } catch (const std::exception& e) {
                flags.add(std::string("optimization failed: ") + e.what());
                r.resize(1 + 8, std::monostate{});
            }
            r.push_back(flags.joined());
            return std::vector<Row>{std::move(r)};
        },
        {"network.lambda_t"});
    t.notes.push_back(threshold_note(cfg));
    return t;
}

Table run_command(const std::string& name, const RunConfig& cfg) {
    if (name == "lt") return cmd_lt(cfg);
    if (name == "coverage") return cmd_coverage(cfg);
    if (name == "assoc") return cmd_assoc(cfg);
    if (name == "optimize-bias") return cmd_optimize_bias(cfg);
    throw ConfigError("unknown command '" + name + "'");
}

const std::vector<std::string>& figure_names() {
    static const std::vector<std::string> names{"fig1a", "fig1b", "fig1c",
                                                "fig2a", "fig2b", "fig2c"};
    return names;
}

std::vector<FigureEntry> cmd_figures(const std::string& config_dir, const std::string& out_dir,
                                     const std::vector<std::pair<std::string, std::string>>& overrides) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    std::vector<FigureEntry> entries;
    for (const std::string& name : figure_names()) {
        FigureEntry e;
        e.name = name;
        const fs::path conf = fs::path(config_dir) / (name + ".conf");
        const auto start = std::chrono::steady_clock::now();
        if (!fs::exists(conf)) {
            e.status = "missing";
            e.message = "no config " + conf.string();
            entries.push_back(e);
            continue;
        }
        try {
            RunConfig cfg = load_config(conf.string());
            for (const auto& [k, v] : overrides) set_key(cfg, k, v);
            cfg.validate();
            if (cfg.figure_command.empty())
                throw ConfigError(conf.string() + ": figure.command is not set");
            const Table t = run_command(cfg.figure_command, cfg);
            std::ostringstream csv;
            write_csv(csv, t);
            std::string header;
            for (const auto& [k, v] : t.config) header += k + " = " + v + "\n";
            e.config_hash = fnv1a_hex(header);
            e.csv_hash = fnv1a_hex(csv.str());
            e.rows = t.rows.size();
            e.flags = t.flags.size();
            e.status = t.flags.empty() ? "ok" : "flags";
            const fs::path out = fs::path(out_dir) / (name + ".csv");
            std::ofstream f(out, std::ios::binary);
            if (!f) throw std::runtime_error("cannot write " + out.string());
            f << csv.str();
            if (!f) throw std::runtime_error("write failed for " + out.string());
        } catch (const std::exception& ex) {
            e.status = "error";
            e.message = ex.what();
        }
        e.runtime_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        entries.push_back(e);
    }

    nlohmann::ordered_json m;
    m["tool"] = "thzgeo";
    m["version"] = kVersion;
    m["config_dir"] = config_dir;
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const FigureEntry& e : entries) {
        nlohmann::ordered_json j;
        j["name"] = e.name;
        j["csv"] = e.name + ".csv";
        j["status"] = e.status;
        if (!e.message.empty()) j["message"] = e.message;
        j["config_fnv1a"] = e.config_hash;
        j["csv_fnv1a"] = e.csv_hash;
        j["rows"] = e.rows;
        j["flagged_rows"] = e.flags;
        j["runtime_seconds"] = e.runtime_seconds;
        list.push_back(std::move(j));
    }
    m["figures"] = std::move(list);
    std::ofstream f(fs::path(out_dir) / "manifest.json", std::ios::binary);
    f << m.dump(2) << "\n";
    if (!f) throw std::runtime_error("cannot write manifest in " + out_dir);
    return entries;
}

}  // namespace thzgeo::cli
