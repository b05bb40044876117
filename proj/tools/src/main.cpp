// thzgeo: coverage, association and interference statistics for coexisting
// RF/THz networks, with Monte Carlo cross-checks.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "commands.hpp"
#include "config.hpp"
#include "table.hpp"
#include "thzgeo/version.hpp"

namespace {

using namespace thzgeo::cli;

constexpr int kExitError = 1;
constexpr int kExitFlags = 3;

struct Options {
    std::string config;
    std::string out = "-";
    std::string format = "csv";
    std::vector<std::string> sweeps;
    std::vector<std::string> sets;
    long long trials = 0;
    long long seed = -1;
    int terms = 0;
    std::string mode;
};

std::pair<std::string, std::string> split_assignment(const std::string& s) {
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
    return {s.substr(0, eq), s.substr(eq + 1)};
}

std::vector<std::pair<std::string, std::string>> cli_overrides(const Options& o) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const std::string& s : o.sets) out.push_back(split_assignment(s));
    if (o.trials > 0) out.emplace_back("mc.trials", std::to_string(o.trials));
    if (o.seed >= 0) out.emplace_back("mc.seed", std::to_string(o.seed));
    if (o.terms > 0) out.emplace_back("lt.truncation", std::to_string(o.terms));
    if (!o.mode.empty()) out.emplace_back("coverage.modes", o.mode);
    if (!o.sweeps.empty()) {
        std::string joined;
        for (const std::string& s : o.sweeps) joined += (joined.empty() ? "" : ";") + s;
        out.emplace_back("sweep", joined);
    }
    return out;
}

void error_summary(const std::string& status, const std::string& message,
                   const std::vector<std::string>& flags = {}) {
    nlohmann::ordered_json j;
    j["status"] = status;
    if (!message.empty()) j["message"] = message;
    if (!flags.empty()) {
        j["flag_count"] = flags.size();
        j["flags"] = flags;
    }
    std::cerr << j.dump() << "\n";
}

int run_table_command(const std::string& name, const Options& o) {
    RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
    for (const auto& [k, v] : cli_overrides(o)) set_key(cfg, k, v);
    cfg.validate();
    const Table t = run_command(name, cfg);

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (o.out != "-") {
        file.open(o.out, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open output '" + o.out + "'");
        out = &file;
    }
    if (o.format == "json")
        write_json(*out, t);
    else
        write_csv(*out, t);
    out->flush();
    if (!*out) throw std::runtime_error("write failed for '" + o.out + "'");

    for (const std::string& f : t.flags) std::cerr << "warning: " << f << "\n";
    if (!t.flags.empty()) {
        error_summary("flags", "", t.flags);
        return kExitFlags;
    }
    return 0;
}

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--config", o.config, "configuration file (key = value)");
    cmd->add_option("--out", o.out, "output path, - for stdout");
    cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--trials", o.trials, "Monte Carlo trials (overrides mc.trials)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "master seed (overrides mc.seed)")->check(CLI::NonNegativeNumber);
    cmd->add_option("--terms", o.terms, "series terms (overrides lt.truncation)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--sweep", o.sweeps,
                    "key=start:stop:count[:lin|log], key=v1,v2,... or k1+k2=a1/a2,b1/b2; "
                    "replaces the config sweep");
    cmd->add_option("--set", o.sets, "override any config key, key=value");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RF/THz coexisting network analysis"};
    app.set_version_flag("--version", std::string("thzgeo ") + thzgeo::kVersion);
    app.require_subcommand(1);

    Options opts;
    std::string config_dir = "configs/figures";
    std::string out_dir = "figures_out";

    auto* lt = app.add_subcommand("lt", "Laplace transform of the THz interference over s");
    add_common(lt, opts);
    auto* cov = app.add_subcommand("coverage", "coverage probability over a threshold grid");
    add_common(cov, opts);
    cov->add_option("--mode", opts.mode, "thz_only, rf_only, coexisting, hybrid (comma list)");
    auto* assoc = app.add_subcommand("assoc", "THz association probability");
    add_common(assoc, opts);
    auto* opt = app.add_subcommand("optimize-bias", "coverage-maximizing THz bias");
    add_common(opt, opts);
    auto* figs = app.add_subcommand("figures", "regenerate the six figure datasets");
    figs->add_option("--config-dir", config_dir, "directory with fig1a.conf ... fig2c.conf");
    figs->add_option("--out-dir", out_dir, "output directory");
    figs->add_option("--trials", opts.trials, "Monte Carlo trials for every figure")
        ->check(CLI::PositiveNumber);
    figs->add_option("--seed", opts.seed, "master seed for every figure")
        ->check(CLI::NonNegativeNumber);
    figs->add_option("--set", opts.sets, "override a key in every figure config, key=value");
    auto* keys = app.add_subcommand("keys", "list every configuration key with its default");

    CLI11_PARSE(app, argc, argv);

    try {
        if (keys->parsed()) {
            const RunConfig defaults;
            for (const KeyInfo& k : key_schema())
                std::cout << k.name << " = " << get_key(defaults, k.name) << "    # " << k.help
                          << "\n";
            return 0;
        }
        if (figs->parsed()) {
            const auto entries = cmd_figures(config_dir, out_dir, cli_overrides(opts));
            std::vector<std::string> problems;
            for (const FigureEntry& e : entries) {
                std::cerr << e.name << ": " << e.status << " (" << e.rows << " rows, "
                          << e.runtime_seconds << " s)" << (e.message.empty() ? "" : ": ")
                          << e.message << "\n";
                if (e.status != "ok") problems.push_back(e.name + ": " + e.status);
            }
            if (!problems.empty()) {
                error_summary("flags", "", problems);
                return kExitFlags;
            }
            return 0;
        }
        for (CLI::App* sub : {lt, cov, assoc, opt})
            if (sub->parsed()) return run_table_command(sub->get_name(), opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        error_summary("error", e.what());
        return kExitError;
    }
    return kExitError;
}
