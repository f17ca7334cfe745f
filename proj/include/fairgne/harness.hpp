#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fairgne/config.hpp"
#include "fairgne/oracle.hpp"
#include "fairgne/stats.hpp"

namespace fairgne {

// One (method, seed) grid cell.
struct CellResult {
  MethodSpec method;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;
  EvalSummary final_summary;
  std::vector<EvalPoint> eval_curve;
  std::vector<DualHistoryEntry> lambda_history;
  double final_lambda = 0.0;
  std::int64_t env_steps = 0;
  std::vector<EpisodeTrace> eval_traces;
};

// Across-seed aggregate of one method row.
struct MethodAggregate {
  MethodSpec method;
  SampleStats success, jfi, lambda, constraint_sat, kkt_sat;
  std::vector<double> per_seed_jfi;
  std::vector<double> per_seed_success;
};

struct Comparison {
  std::string method;
  std::string baseline;
  std::string metric;  // "jfi"
  TestResult test;
};

struct RunArtifact {
  ExperimentConfig config;
  std::vector<CellResult> cells;
  std::vector<MethodAggregate> aggregates;
  std::vector<Comparison> comparisons;
};

// Trains and evaluates every (method, seed) cell; cell failures are
// recorded, not fatal. Deterministic in (config, seeds) regardless of the
// worker count.
RunArtifact run_experiment(const ExperimentConfig& config);

// results.json, table.csv, table.md, lambda_trace_<method>_<seed>.csv,
// episodes_<method>_<seed>.csv under out_dir. Throws on unwritable output.
void write_artifact(const RunArtifact& artifact, const std::string& out_dir);

std::string render_table_markdown(const RunArtifact& artifact);
std::string render_table_csv(const RunArtifact& artifact);

// ---- oracle validation suite ----

struct OracleCaseResult {
  std::string name;
  bool passed = false;
  std::vector<std::string> failures;
  AscentResult ascent;
};

struct OracleSuiteReport {
  std::vector<OracleCaseResult> cases;
  bool all_passed() const;
};

// Built-in cases: the chore game, an infeasible threshold, and a game whose
// return maximizer is already feasible.
OracleSuiteReport run_oracle_suite();

// Declarative JSON suite; parse errors carry line diagnostics.
OracleSuiteReport run_oracle_suite_file(const std::string& path);

void print_oracle_report(std::ostream& out, const OracleSuiteReport& report);

}  // namespace fairgne
