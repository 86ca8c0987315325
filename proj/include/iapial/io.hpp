#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "iapial/driver.hpp"
#include "iapial/verify.hpp"

namespace iapial {

using Json = nlohmann::json;

constexpr int kSchemaVersion = 1;

// File helpers; both throw ParseError on I/O failure.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
Json parse_json(const std::string& text);

Json problem_to_json(const ProblemInstance& problem);
ProblemInstance problem_from_json(const Json& doc);

Json generator_spec_to_json(const GeneratorSpec& spec);
GeneratorSpec generator_spec_from_json(const Json& doc);

Json constants_to_json(const TheoreticalConstants& k);
Json record_to_json(const OuterRecord& r);
OuterRecord record_from_json(const Json& doc);

// Run summary with per-cycle histories, final triple and constants. `timestamp` is the only
// field that varies between identical runs.
Json summary_to_json(const ProblemInstance& problem, const DriverConfig& config, const SolveResult& result,
                     const std::string& timestamp);

// What verify needs back from a summary or a trace.
struct LoadedRun {
  double nu = 1.0;
  double sigma = 0.70710678118654752;
  TolerancePair tol;
  double c1 = 1.0;
  std::vector<CycleHistory> cycles;
};

// Penalty parameters are recomputed from the problem rather than read back.
LoadedRun run_from_summary(const ProblemInstance& problem, const Json& summary);

extern const std::vector<std::string> kTraceColumns;

// One row per outer iteration of every cycle.
std::string trace_csv(const SolveResult& result);
std::string trace_csv(const std::vector<CycleHistory>& cycles);
std::vector<CycleHistory> cycles_from_trace_csv(const ProblemInstance& problem, const std::string& text, double nu,
                                                double sigma);

Json monitor_to_json(const MonitorReport& report);

// 17 significant digits.
std::string format_double(double v);

}  // namespace iapial
