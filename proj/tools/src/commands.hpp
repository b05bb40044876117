#pragma once

#include <string>
#include <utility>
#include <vector>

#include "config.hpp"
#include "table.hpp"

namespace thzgeo::cli {

Table cmd_lt(const RunConfig& cfg);
Table cmd_coverage(const RunConfig& cfg);
Table cmd_assoc(const RunConfig& cfg);
Table cmd_optimize_bias(const RunConfig& cfg);

/// Dispatches by command name ("lt", "coverage", "assoc", "optimize-bias").
Table run_command(const std::string& name, const RunConfig& cfg);

/// The six figure datasets, in output order.
const std::vector<std::string>& figure_names();

struct FigureEntry {
    std::string name;
    std::string status;  // ok | flags | error | missing
    std::string message;
    std::string config_hash;
    std::string csv_hash;
    std::size_t rows = 0;
    std::size_t flags = 0;
    double runtime_seconds = 0.0;
};

/// Runs <config_dir>/<name>.conf for every figure, writes <out_dir>/<name>.csv
/// and <out_dir>/manifest.json. `overrides` are applied after each config is
/// read. A failing figure is recorded in the manifest and the batch continues.
std::vector<FigureEntry> cmd_figures(const std::string& config_dir, const std::string& out_dir,
                                     const std::vector<std::pair<std::string, std::string>>& overrides);

}  // namespace thzgeo::cli
