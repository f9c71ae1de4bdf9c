#pragma once

#include <optional>
#include <span>
#include <vector>

#include "aoicache/aoi_ledger.hpp"

namespace aoicache {

// One UV's outstanding request at an RSU. The backlog measures accumulated
// waiting slots; it grows by one per unserved slot and is flushed whole when
// the request is served. The queue only makes sense while the UV has not yet
// passed the target region.
struct RequestQueue {
  int uv_id = 0;
  int rsu_id = 0;
  int target_region = 0;  // global region index
  double backlog = 0.0;
  int created_at = 0;
};

struct DppParams {
  // Penalty weight trading service cost against queue growth. Larger values
  // hold requests back longer.
  double cost_weight = 1.0;
  // Maximum simultaneous services per RSU; 0 means unlimited.
  int h_uv_limit = 0;
  // Refuse a service whose delivered age would exceed the target region's
  // validity threshold.
  bool enforce_staleness = true;
};

struct ServiceAction {
  std::vector<int> served_uv;  // ascending uv ids
  bool serves(int uv_id) const;
};

/// Queue after one slot: REMOVED (nullopt) when served or when the UV has
/// passed the target region; otherwise the backlog grows by one slot.
std::optional<RequestQueue> queue_step(const RequestQueue& queue, bool served,
                                       int uv_region);

/// Age of the content a UV receives: the RSU copy's age plus the one-slot
/// transmission, or 0 when not served.
int received_aoi(int rsu_content_aoi, bool served);

/// Transmission cost of one service: the UV-RSU distance at unit bandwidth.
double service_cost(bool served, double distance);

struct ServiceDecision {
  ServiceAction action;
  std::vector<int> stale_blocked;  // uv ids refused by the freshness filter
};

// Per-queue drift-plus-penalty rule for one RSU's live queues: serve exactly
// when backlog^2 > cost_weight * distance (flushing the backlog beats paying
// the penalized cost). A zero backlog therefore never triggers a service at
// positive distance. With the staleness filter on, a service whose delivered
// age would exceed the region's threshold is forced off and reported. When
// more candidates pass than h_uv_limit allows, the largest
// backlog^2 - cost_weight*distance scores win, ties to the lower uv id.
ServiceDecision dpp_decide(std::span<const RequestQueue> queues,
                           std::span<const double> distances,
                           const AoiLedger& ledger, const DppParams& params);

/// Serves every live request, up to h_uv_limit (0 = unlimited).
ServiceAction latency_only_policy(std::span<const RequestQueue> queues,
                                  int h_uv_limit = 0);

/// Never serves.
ServiceAction cost_only_policy(std::span<const RequestQueue> queues);

// Empirical check of the quadratic drift bound used by the service rule:
// with L(Q) = Q^2/2 and Q' = max(Q - b, 0) + a, every slot must satisfy
// L(Q') - L(Q) <= (a^2 + b^2)/2 + Q(a - b). The reported constant is the
// largest observed (a^2 + b^2)/2.
struct DriftSlot {
  double arrival = 0.0;
  double departure = 0.0;
};

struct DriftReport {
  bool holds = true;
  double constant = 0.0;     // max (a^2 + b^2)/2 over all slots
  double worst_slack = 0.0;  // min of bound - drift; negative on violation
  std::size_t slots_checked = 0;
  double cost_weight = 0.0;  // echoed from the caller
};

DriftReport drift_bound_check(std::span<const std::vector<DriftSlot>> trajectories,
                              double cost_weight, double initial_backlog = 0.0);

}  // namespace aoicache
