/// @file study.hpp
/// @brief Study orchestration: single runs and the two continuation studies
/// (vanishing artificial viscosity, vanishing artificial pressure), report
/// assembly, CSV emission, and the built-in identity check battery.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "evfx/config.hpp"
#include "evfx/diagnostics.hpp"
#include "evfx/solver.hpp"

namespace evfx {

inline constexpr const char* kCodeVersion = "1.0.0";

struct Verdict {
    std::string name;
    std::string status;  // pass | fail | indeterminate
    std::string detail;  // the numbers it was computed from
};

struct StudyReport {
    std::vector<std::pair<std::string, std::string>> provenance;  // key, value
    std::vector<Verdict> verdicts;
    std::vector<std::pair<std::string, std::string>> values;

    bool all_pass() const;
    void add_value(const std::string& key, double v);
    void add_verdict(const std::string& name, bool pass, const std::string& detail);
};

/// Stable "key = value" rendering, one line per entry.
std::string format_report(const StudyReport& rep);

std::uint64_t fnv1a64(const std::string& bytes);

/// Fixed-schema CSV: one row per recorded step, 17 significant digits.
void emit_csv(const DiagnosticsSeries& series, const std::string& path);
std::string render_csv(const DiagnosticsSeries& series);

struct StudyContext {
    StudyConfig cfg;
    std::string config_text;  // hashed into provenance
    std::string out_dir;      // empty: no files written
    int threads = 1;
};

StudyReport run_single(const StudyContext& ctx);
StudyReport run_eps_sweep(const StudyContext& ctx);
StudyReport run_delta_sweep(const StudyContext& ctx);

/// Fast identity/property battery; prints one line per check, returns the
/// number of failures.
int check_suite(std::uint64_t seed, std::ostream& log);

}  // namespace evfx
