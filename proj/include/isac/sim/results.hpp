// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "isac/sim/config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace isac::sim {

/// One output row. `trial` is the trial index, or "mean" / "std" for
/// aggregate rows over the trials of one parameter point.
struct TrialResult {
    std::string scenario;
    std::string param_name;
    double param_value = 0.0;
    std::string trial;
    std::string metric;
    double value = 0.0;

    bool operator==(const TrialResult&) const = default;
};

inline constexpr const char* kCsvHeader = "scenario,param_name,param_value,trial,metric,value";

/// CSV: header plus one row per result, numbers printed with %.17g.
/// JSON: an array of objects with the same six fields.
void write_results(std::ostream& out, const std::vector<TrialResult>& results, OutputFormat format);
/// Throws on empty results or an unwritable path.
void emit_results(const std::vector<TrialResult>& results, OutputFormat format, const std::string& path);

std::vector<TrialResult> parse_csv(std::istream& in);

}  // namespace isac::sim
