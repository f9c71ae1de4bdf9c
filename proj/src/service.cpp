#include "aoicache/service.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace aoicache {

bool ServiceAction::serves(int uv_id) const {
  return std::binary_search(served_uv.begin(), served_uv.end(), uv_id);
}

std::optional<RequestQueue> queue_step(const RequestQueue& queue, bool served,
                                       int uv_region) {
  if (uv_region > queue.target_region) return std::nullopt;  // request expired
  if (served) return std::nullopt;  // backlog flushed whole, request fulfilled
  RequestQueue next = queue;
  next.backlog += 1.0;  // waiting accumulates one slot per slot
  return next;
}

int received_aoi(int rsu_content_aoi, bool served) {
  return served ? rsu_content_aoi + 1 : 0;
}

double service_cost(bool served, double distance) {
  return served ? distance : 0.0;
}

ServiceDecision dpp_decide(std::span<const RequestQueue> queues,
                           std::span<const double> distances,
                           const AoiLedger& ledger, const DppParams& params) {
  ServiceDecision decision;
  struct Candidate {
    int uv_id;
    double score;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < queues.size(); ++i) {
    const RequestQueue& q = queues[i];
    const double d = distances[i];
    // Serving scores cost_weight*d - backlog^2 against 0 for holding back;
    // strictly negative wins the serve.
    const double score = q.backlog * q.backlog - params.cost_weight * d;
    if (!(score > 0.0)) continue;
    if (params.enforce_staleness) {
      const int delivered = received_aoi(ledger.rsu[q.target_region], true);
      if (delivered > ledger.aoi_max[q.target_region]) {
        decision.stale_blocked.push_back(q.uv_id);
        continue;
      }
    }
    candidates.push_back({q.uv_id, score});
  }
  if (params.h_uv_limit > 0 &&
      candidates.size() > static_cast<std::size_t>(params.h_uv_limit)) {
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.uv_id < b.uv_id;
    });
    candidates.resize(params.h_uv_limit);
  }
  for (const Candidate& c : candidates) decision.action.served_uv.push_back(c.uv_id);
  std::sort(decision.action.served_uv.begin(), decision.action.served_uv.end());
  std::sort(decision.stale_blocked.begin(), decision.stale_blocked.end());
  return decision;
}

ServiceAction latency_only_policy(std::span<const RequestQueue> queues, int h_uv_limit) {
  ServiceAction action;
  for (const RequestQueue& q : queues) {
    if (h_uv_limit > 0 &&
        action.served_uv.size() >= static_cast<std::size_t>(h_uv_limit))
      break;
    action.served_uv.push_back(q.uv_id);
  }
  std::sort(action.served_uv.begin(), action.served_uv.end());
  return action;
}

ServiceAction cost_only_policy(std::span<const RequestQueue> queues) {
  (void)queues;
  return {};
}

DriftReport drift_bound_check(std::span<const std::vector<DriftSlot>> trajectories,
                              double cost_weight, double initial_backlog) {
  DriftReport report;
  report.cost_weight = cost_weight;
  report.worst_slack = std::numeric_limits<double>::infinity();
  for (const auto& trajectory : trajectories) {
    double backlog = initial_backlog;
    for (const DriftSlot& slot : trajectory) {
      const double a = slot.arrival;
      const double b = slot.departure;
      const double next = std::max(backlog - b, 0.0) + a;
      const double drift = 0.5 * (next * next - backlog * backlog);
      const double bound = 0.5 * (a * a + b * b) + backlog * (a - b);
      const double slack = bound - drift;
      report.worst_slack = std::min(report.worst_slack, slack);
      report.constant = std::max(report.constant, 0.5 * (a * a + b * b));
      if (slack < -1e-9) report.holds = false;
      ++report.slots_checked;
      backlog = next;
    }
  }
  if (report.slots_checked == 0) report.worst_slack = 0.0;
  return report;
}

}  // namespace aoicache
