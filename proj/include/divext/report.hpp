#ifndef DIVEXT_REPORT_HPP
#define DIVEXT_REPORT_HPP

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "divext/cohomx.hpp"
#include "divext/dalg.hpp"

namespace divext::cli {

using Json = nlohmann::ordered_json;

struct RunConfig {
    int p = 3, f = 1, d = 2, r = 1;
    std::string field_case = "padic";  // "padic" | "function-field"
    int e = 1;
    int precision = 4;  // varpi-adic window N
    uint64_t cap_enum = uint64_t(1) << 20;
    uint64_t cap_dlog = uint64_t(1) << 24;
    uint64_t seed = 0;
    std::string format = "json";  // json | csv | md
    std::string out;              // empty -> stdout
    int jobs = 0;                 // 0 -> hardware concurrency
    bool timings = false;

    Json to_json() const;
    uint64_t hash() const;
    gf::FieldPtr field() const;
    cohomx::LocalField local_field() const;
    dalg::Mode mode() const;

    // key=value assignment, as used by config files and --params
    void set(const std::string& key, const std::string& value);
    void load_file(const std::string& path);
};

struct ItemResult {
    std::string probe;
    Json params;
    std::string status;  // pass | fail | notfound
    Json counts;
    std::optional<Json> counterexample;
    int64_t elapsed_ms = 0;
};

struct Report {
    std::string command;
    RunConfig config;
    std::vector<ItemResult> items;

    int passed() const;
    int failed() const;
    Json to_json() const;
    std::string render() const;  // honors config.format
    // writes to config.out (or stdout); returns process exit code
    int emit() const;
};

// Verification suites over the checked-in default grids.
std::vector<std::string> suite_names();
std::vector<ItemResult> run_suite(const std::string& suite, const RunConfig& cfg);

}  // namespace divext::cli

#endif
