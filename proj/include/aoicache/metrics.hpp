#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aoicache/geometry.hpp"

namespace aoicache {

// One stage-2 outcome for a pending request: served, withheld, refused by the
// staleness filter, or expired because the UV passed the target region.
struct ServiceEvent {
  int slot = 0;
  int uv_id = 0;
  int rsu_id = 0;
  int target_region = 0;
  bool served = false;
  double cost = 0.0;
  int received_aoi = 0;  // 0 when not served
  bool stale_blocked = false;
  bool expired = false;
};

struct SlotRow {
  int slot = 0;
  int uploads = 0;
  int updates = 0;
  double caching_cost = 0.0;
  int served = 0;
  int stale_blocks = 0;
  double service_cost = 0.0;
  int aoi_exceed = 0;  // cached copies past their threshold this slot
  std::vector<int> rsu_aoi;        // per region
  std::vector<double> uv_backlog;  // per UV, 0 without a live request
};

// Per-kind cached-copy age statistics sampled every 10 slots.
struct KindStatRow {
  int slot = 0;
  RegionKind kind = RegionKind::Normal;
  double avg = 0.0;
  int min_age = 0;
  int max_age = 0;
};

struct RunSummary {
  std::int64_t uploads = 0;
  std::int64_t updates = 0;
  std::int64_t aoi_max_exceed = 0;  // (rsu, region, slot) triples past threshold
  std::int64_t service_success = 0;
  std::int64_t cost_save = 0;  // pending-request slots left unserved
  std::int64_t stale_blocks = 0;
  double caching_cost_total = 0.0;
  double service_cost_total = 0.0;
};

struct MetricsLog {
  std::vector<SlotRow> rows;
  std::vector<ServiceEvent> events;
  std::vector<KindStatRow> kind_stats;
  RunSummary summary;
};

// CSV serialization with a fixed, versioned schema (leading comment row).
// Output is byte-stable for a given log.
std::string slots_csv(const MetricsLog& log);
std::string summary_csv(const MetricsLog& log);

/// Human-readable counter table for terminal output.
std::string summary_text(const MetricsLog& log);

/// Fixed-format double used everywhere CSV output must be byte-stable.
std::string format_double(double value);

}  // namespace aoicache
