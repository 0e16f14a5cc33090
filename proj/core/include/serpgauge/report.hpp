#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "serpgauge/metrics.hpp"

namespace serpgauge::report {

// Work-unit counts instead of wall-clock times: identical inputs must yield
// byte-identical reports, so nothing time-dependent may enter one.
struct Timing {
    std::int64_t queries = 0;
    std::int64_t serps = 0;
    std::int64_t pages = 0;

    friend bool operator==(const Timing&, const Timing&) = default;
};

struct RunReport {
    std::string run_id;
    std::string queryset_hash;  // content hash of the query-set file
    std::vector<std::string> engines;
    std::vector<metrics::DomainScore> domains;
    std::vector<metrics::ComponentScore> components;
    std::vector<std::string> warnings;
    Timing timing;

    friend bool operator==(const RunReport&, const RunReport&) = default;
};

// Nearest double to x printed at 9 significant digits. Idempotent, so a
// report whose floats went through this serializes and re-parses exactly.
double canon9(double value);

// 9-significant-digit decimal form of a canonical float ("0.545454545").
// Throws Error on non-finite input; reports never carry those.
std::string format9(double value);

// Applies canon9 to every score and puts rows and engine list into canonical
// order (engines ascending; rows by engine, then taxonomy position). Emitters
// expect a report that went through this.
void canonicalize(RunReport& report);

enum class Format { json, csv };

std::string emit_report(const RunReport& report, Format format);

// Inverse of the json emitter: parse(emit(r)) == r for canonicalized r.
// Throws InputError on malformed or incomplete input.
RunReport parse_report(std::string_view json);

// One grouped bar chart per component present in the report (one panel per
// top-level subdomain plus a sum-up panel) and a cross-component summary.
// Keyed by file name: "<component>.svg", "summary.svg".
std::map<std::string, std::string> emit_charts(const RunReport& report);

}  // namespace serpgauge::report
