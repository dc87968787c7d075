#include "divext/report.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace divext::cli {

Json RunConfig::to_json() const {
    Json j;
    j["p"] = p;
    j["f"] = f;
    j["d"] = d;
    j["r"] = r;
    j["case"] = field_case;
    j["e"] = e;
    j["precision"] = precision;
    j["cap-enum"] = cap_enum;
    j["cap-dlog"] = cap_dlog;
    j["seed"] = seed;
    j["format"] = format;
    j["out"] = out;
    j["jobs"] = jobs;
    j["timings"] = timings;
    return j;
}

uint64_t RunConfig::hash() const { return fnv1a64(to_json().dump()); }

gf::FieldPtr RunConfig::field() const { return gf::make_field(p, f, d, r, cap_dlog); }

cohomx::LocalField RunConfig::local_field() const {
    if (field_case == "padic") return {cohomx::FieldCase::PAdic, e, f};
    require(field_case == "function-field", "case must be padic or function-field");
    return {cohomx::FieldCase::FunctionField, 1, f};
}

dalg::Mode RunConfig::mode() const {
    return field_case == "padic" ? dalg::Mode::MixedCharUnramified : dalg::Mode::EqualChar;
}

void RunConfig::set(const std::string& key, const std::string& value) {
    auto to_u64 = [&](const std::string& s) { return static_cast<uint64_t>(std::stoull(s)); };
    if (key == "p") p = std::stoi(value);
    else if (key == "f") f = std::stoi(value);
    else if (key == "d") d = std::stoi(value);
    else if (key == "r") r = std::stoi(value);
    else if (key == "case") field_case = value;
    else if (key == "e") e = std::stoi(value);
    else if (key == "precision") precision = std::stoi(value);
    else if (key == "cap-enum") cap_enum = to_u64(value);
    else if (key == "cap-dlog") cap_dlog = to_u64(value);
    else if (key == "seed") seed = to_u64(value);
    else if (key == "format") format = value;
    else if (key == "out") out = value;
    else if (key == "jobs") jobs = std::stoi(value);
    else if (key == "timings") timings = (value == "1" || value == "true");
    else require(false, "unknown config key: " + key);
}

void RunConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open config file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        auto hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            size_t b = s.find_first_not_of(" \t\r");
            size_t e2 = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e2 - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (!key.empty()) set(key, value);
    }
}

int Report::passed() const {
    int n = 0;
    for (const auto& it : items)
        if (it.status == "pass") ++n;
    return n;
}

int Report::failed() const {
    int n = 0;
    for (const auto& it : items)
        if (it.status != "pass") ++n;
    return n;
}

Json Report::to_json() const {
    Json j;
    j["command"] = command;
    j["tool_version"] = kToolVersion;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(config.hash()));
    j["config_hash"] = buf;
    j["config"] = config.to_json();
    Json arr = Json::array();
    for (const auto& it : items) {
        Json ij;
        ij["probe"] = it.probe;
        ij["params"] = it.params;
        ij["status"] = it.status;
        ij["counts"] = it.counts;
        if (it.counterexample) ij["counterexample"] = *it.counterexample;
        ij["elapsed_ms"] = config.timings ? it.elapsed_ms : 0;
        arr.push_back(ij);
    }
    j["items"] = arr;
    j["passed"] = passed();
    j["failed"] = failed();
    return j;
}

namespace {

std::string csv_escape(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

}  // namespace

std::string Report::render() const {
    if (config.format == "json") return to_json().dump(2) + "\n";
    if (config.format == "csv") {
        std::ostringstream os;
        os << "probe,params,status,counts,elapsed_ms\n";
        for (const auto& it : items)
            os << csv_escape(it.probe) << "," << csv_escape(it.params.dump()) << "," << it.status
               << "," << csv_escape(it.counts.dump()) << "," << (config.timings ? it.elapsed_ms : 0)
               << "\n";
        os << "total,,"
           << (failed() == 0 ? "pass" : "fail") << "," << csv_escape("passed=" + std::to_string(passed()) + ";failed=" + std::to_string(failed()))
           << ",0\n";
        return os.str();
    }
    require(config.format == "md", "format must be json, csv or md");
    std::ostringstream os;
    os << "# " << command << "\n\n";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(config.hash()));
    os << "config `" << buf << "`, tool " << kToolVersion << "\n\n";
    os << "| probe | params | status | counts |\n|---|---|---|---|\n";
    for (const auto& it : items)
        os << "| " << it.probe << " | `" << it.params.dump() << "` | " << it.status << " | `"
           << it.counts.dump() << "` |\n";
    os << "\n**" << passed() << " passed, " << failed() << " failed**\n";
    return os.str();
}

int Report::emit() const {
    std::string text = render();
    if (config.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream of(config.out, std::ios::binary);
        require(of.good(), "cannot open output file: " + config.out);
        of << text;
    }
    return failed() == 0 ? 0 : 1;
}

}  // namespace divext::cli
