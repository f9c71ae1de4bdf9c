#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "aoicache/scenario.hpp"

namespace aoicache {

struct RunSpec {
  ScenarioConfig config;
  std::vector<std::uint64_t> seeds;  // at least one
  std::string out_dir;               // empty: no files written
};

/// Runs every seed, writes slots.csv and summary.csv per run (atomically,
/// under seed_<n>/ when several seeds are given), prints a counter summary.
/// Returns a process exit code.
int cmd_run(const RunSpec& spec, std::ostream& out);

struct PolicyStats {
  Stage1Policy policy = Stage1Policy::Proposed;
  std::vector<RunSummary> per_seed;
  double mean_updates = 0.0;
  double mean_exceed = 0.0;
  double mean_caching_cost = 0.0;
};

struct CompareResult {
  std::vector<PolicyStats> stats;
  int seeds = 0;
  // Per-seed verdicts, counted when all three stock policies are present:
  // threshold violations ordered random > aoi-greedy > proposed, caching
  // cost ordered aoi-greedy > proposed > random.
  int exceed_ordering_passes = 0;
  int cost_ordering_passes = 0;
};

/// Runs each stage-1 policy against the identical seed set; every policy sees
/// the same mobility and request draw streams.
CompareResult compare_policies(const ScenarioConfig& config,
                               std::span<const std::uint64_t> seeds,
                               std::span<const Stage1Policy> policies);

int cmd_compare(const RunSpec& spec, std::ostream& out);

struct SweepRow {
  double cost_weight = 0.0;
  std::int64_t service_success = 0;
  std::int64_t cost_save = 0;
  double service_cost = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // ascending cost weight
  bool success_non_increasing = false;
  bool cost_save_non_decreasing = false;
  bool sum_constant = false;
};

/// Replays the identical request trace under each service cost weight.
SweepResult sweep_cost_weight(const ScenarioConfig& config,
                              std::span<const double> weights);

/// Empty weight list: the light/normal/heavy presets for the configured
/// layout.
int cmd_sweep(const RunSpec& spec, std::span<const double> weights, std::ostream& out);

/// Writes through a temp file plus rename so readers never see partial CSV.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace aoicache
