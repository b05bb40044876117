#pragma once

// Result tables and their CSV / JSON serialization.

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace thzgeo::cli {

/// Empty (missing value), number, integer or text.
using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

struct Table {
    std::string command;
    /// Resolved configuration, echoed in the header.
    std::vector<std::pair<std::string, std::string>> config;
    /// Extra header lines (derived quantities, threshold spelling).
    std::vector<std::string> notes;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    /// One entry per flagged row condition, "row <i>: <what>".
    std::vector<std::string> flags;

    std::size_t column(const std::string& name) const;
};

std::string cell_text(const Cell& c);

void write_csv(std::ostream& out, const Table& t);
void write_json(std::ostream& out, const Table& t);

/// 64-bit FNV-1a of a byte string, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace thzgeo::cli
