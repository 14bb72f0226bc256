// SPDX-License-Identifier: Apache-2.0

#include "isac/sim/results.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace isac::sim {

namespace {

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_number(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s.empty()) throw std::runtime_error("malformed number '" + s + "' in results CSV");
    return v;
}

void check_field(const std::string& s) {
    if (s.find_first_of(",\n\r\"") != std::string::npos) {
        throw std::invalid_argument("result field '" + s + "' contains a CSV delimiter");
    }
}

}  // namespace

void write_results(std::ostream& out, const std::vector<TrialResult>& results, OutputFormat format) {
    if (results.empty()) throw std::invalid_argument("no results to emit");
    if (format == OutputFormat::Csv) {
        out << kCsvHeader << '\n';
        for (const auto& r : results) {
            check_field(r.scenario);
            check_field(r.param_name);
            check_field(r.trial);
            check_field(r.metric);
            out << r.scenario << ',' << r.param_name << ',' << format_number(r.param_value) << ',' << r.trial << ','
                << r.metric << ',' << format_number(r.value) << '\n';
        }
    } else {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& r : results) {
            arr.push_back({{"scenario", r.scenario},
                           {"param_name", r.param_name},
                           {"param_value", r.param_value},
                           {"trial", r.trial},
                           {"metric", r.metric},
                           {"value", r.value}});
        }
        out << arr.dump(2) << '\n';
    }
}

void emit_results(const std::vector<TrialResult>& results, OutputFormat format, const std::string& path) {
    if (results.empty()) throw std::invalid_argument("no results to emit");
    std::ostringstream buffer;
    write_results(buffer, results, format);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << buffer.str();
    out.flush();
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::vector<TrialResult> parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw std::runtime_error("results CSV has an unexpected header");
    std::vector<TrialResult> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::size_t start = 0;
        for (std::size_t pos; (pos = line.find(',', start)) != std::string::npos; start = pos + 1) {
            f.push_back(line.substr(start, pos - start));
        }
        f.push_back(line.substr(start));
        if (f.size() != 6) throw std::runtime_error("results CSV row has " + std::to_string(f.size()) + " fields");
        out.push_back({f[0], f[1], parse_number(f[2]), f[3], f[4], parse_number(f[5])});
    }
    return out;
}

}  // namespace isac::sim
