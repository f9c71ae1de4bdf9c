#include "aoicache/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace aoicache {
namespace fs = std::filesystem;

void write_file_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

namespace {

fs::path run_dir(const RunSpec& spec, std::uint64_t seed) {
  fs::path dir(spec.out_dir);
  if (spec.seeds.size() > 1) dir /= "seed_" + std::to_string(seed);
  return dir;
}

void write_run_files(const fs::path& dir, const MetricsLog& log) {
  fs::create_directories(dir);
  write_file_atomic((dir / "slots.csv").string(), slots_csv(log));
  write_file_atomic((dir / "summary.csv").string(), summary_csv(log));
}

}  // namespace

int cmd_run(const RunSpec& spec, std::ostream& out) {
  if (spec.seeds.empty()) throw std::invalid_argument("run: need at least one seed");
  spec.config.validate();  // fail before touching the filesystem
  for (std::uint64_t seed : spec.seeds) {
    ScenarioConfig config = spec.config;
    config.seed = seed;
    const MetricsLog log = run_scenario(config);
    if (!spec.out_dir.empty()) write_run_files(run_dir(spec, seed), log);
    out << "seed " << seed << " (" << stage1_name(config.stage1) << " / "
        << stage2_name(config.stage2) << ")\n";
    out << summary_text(log);
  }
  if (!spec.out_dir.empty()) {
    out << "wrote slots.csv and summary.csv under " << spec.out_dir << "\n";
  }
  return 0;
}

CompareResult compare_policies(const ScenarioConfig& config,
                               std::span<const std::uint64_t> seeds,
                               std::span<const Stage1Policy> policies) {
  CompareResult result;
  result.seeds = static_cast<int>(seeds.size());
  result.stats.resize(policies.size());
  for (std::size_t p = 0; p < policies.size(); ++p) {
    result.stats[p].policy = policies[p];
    result.stats[p].per_seed.resize(seeds.size());
  }

  const long long jobs = static_cast<long long>(policies.size() * seeds.size());
#pragma omp parallel for schedule(dynamic)
  for (long long job = 0; job < jobs; ++job) {
    const std::size_t p = job / seeds.size();
    const std::size_t s = job % seeds.size();
    ScenarioConfig run_config = config;
    run_config.stage1 = policies[p];
    run_config.seed = seeds[s];
    result.stats[p].per_seed[s] = run_scenario(run_config).summary;
  }

  for (PolicyStats& stats : result.stats) {
    for (const RunSummary& s : stats.per_seed) {
      stats.mean_updates += static_cast<double>(s.updates);
      stats.mean_exceed += static_cast<double>(s.aoi_max_exceed);
      stats.mean_caching_cost += s.caching_cost_total;
    }
    const double n = std::max<std::size_t>(stats.per_seed.size(), 1);
    stats.mean_updates /= n;
    stats.mean_exceed /= n;
    stats.mean_caching_cost /= n;
  }

  const auto find = [&](Stage1Policy p) -> const PolicyStats* {
    for (const PolicyStats& s : result.stats) {
      if (s.policy == p) return &s;
    }
    return nullptr;
  };
  const PolicyStats* proposed = find(Stage1Policy::Proposed);
  const PolicyStats* greedy = find(Stage1Policy::AoiGreedy);
  const PolicyStats* random = find(Stage1Policy::Random);
  if (proposed && greedy && random) {
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      const auto& pr = proposed->per_seed[s];
      const auto& gr = greedy->per_seed[s];
      const auto& rn = random->per_seed[s];
      if (rn.aoi_max_exceed > gr.aoi_max_exceed && gr.aoi_max_exceed > pr.aoi_max_exceed) {
        ++result.exceed_ordering_passes;
      }
      if (gr.caching_cost_total > pr.caching_cost_total &&
          pr.caching_cost_total > rn.caching_cost_total) {
        ++result.cost_ordering_passes;
      }
    }
  }
  return result;
}

int cmd_compare(const RunSpec& spec, std::ostream& out) {
  if (spec.seeds.empty()) throw std::invalid_argument("compare: need at least one seed");
  spec.config.validate();
  const Stage1Policy policies[] = {Stage1Policy::Proposed, Stage1Policy::AoiGreedy,
                                   Stage1Policy::Random};
  const CompareResult result = compare_policies(spec.config, spec.seeds, policies);

  std::ostringstream csv;
  csv << "# aoicache compare.csv v1\n";
  csv << "policy,seed,updates,aoi_max_exceed,caching_cost\n";
  out << "policy       mean_updates  mean_exceed  mean_caching_cost\n";
  for (const PolicyStats& stats : result.stats) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-12s %12.1f %12.1f %18.1f\n",
                  stage1_name(stats.policy), stats.mean_updates, stats.mean_exceed,
                  stats.mean_caching_cost);
    out << line;
    for (std::size_t s = 0; s < stats.per_seed.size(); ++s) {
      const RunSummary& sum = stats.per_seed[s];
      csv << stage1_name(stats.policy) << ',' << spec.seeds[s] << ',' << sum.updates
          << ',' << sum.aoi_max_exceed << ',' << format_double(sum.caching_cost_total)
          << '\n';
    }
  }
  out << "reference run, not asserted: updates 260/297/146, threshold"
         " violations 638/1018/1741 (proposed/aoi-greedy/random)\n";
  out << "exceed ordering random > aoi-greedy > proposed: "
      << result.exceed_ordering_passes << "/" << result.seeds << " seeds\n";
  out << "cost ordering aoi-greedy > proposed > random:   "
      << result.cost_ordering_passes << "/" << result.seeds << " seeds\n";
  if (!spec.out_dir.empty()) {
    fs::create_directories(spec.out_dir);
    write_file_atomic((fs::path(spec.out_dir) / "compare.csv").string(), csv.str());
  }
  return 0;
}

SweepResult sweep_cost_weight(const ScenarioConfig& config,
                              std::span<const double> weights) {
  std::vector<double> sorted(weights.begin(), weights.end());
  std::sort(sorted.begin(), sorted.end());

  SweepResult result;
  result.rows.resize(sorted.size());
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < static_cast<long long>(sorted.size()); ++i) {
    ScenarioConfig run_config = config;
    run_config.v_preset = VPreset::Custom;
    run_config.dpp.cost_weight = sorted[i];
    const RunSummary summary = run_scenario(run_config).summary;
    result.rows[i] = {sorted[i], summary.service_success, summary.cost_save,
                      summary.service_cost_total};
  }

  result.success_non_increasing = true;
  result.cost_save_non_decreasing = true;
  result.sum_constant = true;
  for (std::size_t i = 1; i < result.rows.size(); ++i) {
    if (result.rows[i].service_success > result.rows[i - 1].service_success) {
      result.success_non_increasing = false;
    }
    if (result.rows[i].cost_save < result.rows[i - 1].cost_save) {
      result.cost_save_non_decreasing = false;
    }
    if (result.rows[i].service_success + result.rows[i].cost_save !=
        result.rows[0].service_success + result.rows[0].cost_save) {
      result.sum_constant = false;
    }
  }
  return result;
}

int cmd_sweep(const RunSpec& spec, std::span<const double> weights, std::ostream& out) {
  if (spec.seeds.empty()) throw std::invalid_argument("sweep: need at least one seed");
  spec.config.validate();
  ScenarioConfig config = spec.config;
  config.seed = spec.seeds.front();

  std::vector<double> resolved(weights.begin(), weights.end());
  if (resolved.empty()) {
    const RoadLayout layout = build_layout(config);
    ScenarioConfig preset = config;
    preset.v_preset = VPreset::Light;
    resolved.push_back(resolve_cost_weight(preset, layout));
    preset.v_preset = VPreset::Normal;
    resolved.push_back(resolve_cost_weight(preset, layout));
    preset.v_preset = VPreset::Heavy;
    resolved.push_back(resolve_cost_weight(preset, layout));
  }
  const SweepResult result = sweep_cost_weight(config, resolved);

  std::ostringstream csv;
  csv << "# aoicache sweep.csv v1\n";
  csv << "v,service_success,cost_save,service_cost\n";
  out << "v              success  cost_save  service_cost\n";
  for (const SweepRow& row : result.rows) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-14.6g %7lld %10lld %13.1f\n", row.cost_weight,
                  static_cast<long long>(row.service_success),
                  static_cast<long long>(row.cost_save), row.service_cost);
    out << line;
    csv << format_double(row.cost_weight) << ',' << row.service_success << ','
        << row.cost_save << ',' << format_double(row.service_cost) << '\n';
  }
  out << "reference run, not asserted: success 151/51/38, cost save 141/245/257"
         " (light/normal/heavy)\n";
  out << "success non-increasing in v: " << (result.success_non_increasing ? "yes" : "NO")
      << "\n";
  out << "cost_save non-decreasing in v: "
      << (result.cost_save_non_decreasing ? "yes" : "NO") << "\n";
  out << "success + cost_save constant: " << (result.sum_constant ? "yes" : "NO") << "\n";
  if (!spec.out_dir.empty()) {
    fs::create_directories(spec.out_dir);
    write_file_atomic((fs::path(spec.out_dir) / "sweep.csv").string(), csv.str());
  }
  return 0;
}

}  // namespace aoicache
