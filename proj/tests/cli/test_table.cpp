#include "doctest.h"

#include <sstream>
#include <string>

#include "json.hpp"
#include "table.hpp"

using namespace thzgeo::cli;

namespace {

Table sample() {
    Table t;
    t.command = "coverage";
    t.config = {{"network.k_a", "0.05"}, {"mode", "odd\nvalue"}};
    t.notes = {"gamma_t = 1"};
    t.columns = {"a", "b,c", "d"};
    t.rows.push_back({1.5, std::int64_t{7}, std::string("x\"y")});
    t.rows.push_back({std::monostate{}, 0.1, std::string("plain")});
    return t;
}

}  // namespace

TEST_CASE("CSV: comment header, escaping and CRLF rows") {
    std::ostringstream out;
    write_csv(out, sample());
    const std::string s = out.str();
    CHECK(s.rfind("# thzgeo ", 0) == 0);
    CHECK(s.find("# command: coverage\r\n") != std::string::npos);
    CHECK(s.find("# mode = odd value\r\n") != std::string::npos);
    CHECK(s.find("a,\"b,c\",d\r\n") != std::string::npos);
    CHECK(s.find("1.5,7,\"x\"\"y\"\r\n") != std::string::npos);
    CHECK(s.find(",0.10000000000000001,plain\r\n") != std::string::npos);
    // every line is CRLF terminated
    std::size_t lf = 0, crlf = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] == '\n') {
            ++lf;
            if (i > 0 && s[i - 1] == '\r') ++crlf;
        }
    CHECK(lf == crlf);
}

TEST_CASE("JSON mirror") {
    std::ostringstream out;
    Table t = sample();
    t.flags = {"row 1: something"};
    write_json(out, t);
    const auto j = nlohmann::json::parse(out.str());
    CHECK(j["command"] == "coverage");
    CHECK(j["columns"].size() == 3);
    CHECK(j["rows"][0][0] == 1.5);
    CHECK(j["rows"][0][1] == 7);
    CHECK(j["rows"][1][0].is_null());
    CHECK(j["config"]["network.k_a"] == "0.05");
    CHECK(j["flags"][0] == "row 1: something");
}

TEST_CASE("cells and columns") {
    const Table t = sample();
    CHECK(t.column("d") == 2);
    CHECK_THROWS_AS(t.column("zz"), std::out_of_range);
    CHECK(cell_text(Cell{}) == "");
    CHECK(cell_text(Cell{std::int64_t{-3}}) == "-3");
}

TEST_CASE("FNV-1a reference values") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}
