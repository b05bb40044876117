#include "table.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "json.hpp"

#include "config.hpp"
#include "thzgeo/version.hpp"

namespace thzgeo::cli {

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

// Header lines must stay comments even if a value contains a newline.
std::string one_line(const std::string& s) {
    std::string out = s;
    for (char& c : out)
        if (c == '\n' || c == '\r') c = ' ';
    return out;
}

}  // namespace

std::size_t Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    throw std::out_of_range("no column '" + name + "'");
}

std::string cell_text(const Cell& c) {
    if (std::holds_alternative<double>(c)) return format_double(std::get<double>(c));
    if (std::holds_alternative<std::int64_t>(c)) return std::to_string(std::get<std::int64_t>(c));
    if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
    return "";
}

void write_csv(std::ostream& out, const Table& t) {
    // RFC 4180 line breaks throughout, the comment block included.
    out << "# thzgeo " << kVersion << "\r\n";
    out << "# command: " << t.command << "\r\n";
    for (const auto& [k, v] : t.config) out << "# " << k << " = " << one_line(v) << "\r\n";
    for (const std::string& n : t.notes) out << "# " << one_line(n) << "\r\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        out << (i ? "," : "") << csv_escape(t.columns[i]);
    out << "\r\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_escape(cell_text(row[i]));
        out << "\r\n";
    }
}

void write_json(std::ostream& out, const Table& t) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["tool"] = "thzgeo";
    j["version"] = kVersion;
    j["command"] = t.command;
    ordered_json cfg = ordered_json::object();
    for (const auto& [k, v] : t.config) cfg[k] = v;
    j["config"] = cfg;
    j["notes"] = t.notes;
    j["columns"] = t.columns;
    ordered_json rows = ordered_json::array();
    for (const auto& row : t.rows) {
        ordered_json r = ordered_json::array();
        for (const Cell& c : row) {
            if (std::holds_alternative<double>(c)) {
                const double v = std::get<double>(c);
                if (std::isfinite(v))
                    r.push_back(v);
                else
                    r.push_back(format_double(v).empty() ? ordered_json() : ordered_json(format_double(v)));
            } else if (std::holds_alternative<std::int64_t>(c)) {
                r.push_back(std::get<std::int64_t>(c));
            } else if (std::holds_alternative<std::string>(c)) {
                r.push_back(std::get<std::string>(c));
            } else {
                r.push_back(nullptr);
            }
        }
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    j["flags"] = t.flags;
    out << j.dump(2) << "\n";
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace thzgeo::cli
