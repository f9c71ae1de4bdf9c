#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "aoicache/rng.hpp"
#include "aoicache/service.hpp"

using namespace aoicache;

namespace {

RequestQueue queue_with(double backlog, int target = 3) {
  RequestQueue q;
  q.uv_id = 0;
  q.rsu_id = 0;
  q.target_region = target;
  q.backlog = backlog;
  return q;
}

AoiLedger fresh_ledger() {
  AoiLedger ledger = make_ledger(0, 1, {20, 10, 8, 15});
  ledger.rsu = {2, 2, 2, 2};
  return ledger;
}

}  // namespace

TEST_CASE("queue_step") {
  SUBCASE("waiting accumulates one slot") {
    const auto next = queue_step(queue_with(3.0), false, 2);
    REQUIRE(next.has_value());
    CHECK(next->backlog == 4.0);
  }
  SUBCASE("service flushes the whole backlog and retires the queue") {
    CHECK_FALSE(queue_step(queue_with(5.0), true, 2).has_value());
  }
  SUBCASE("passing the target retires the queue regardless of backlog") {
    CHECK_FALSE(queue_step(queue_with(9.0, 3), false, 4).has_value());
  }
  SUBCASE("sitting inside the target region keeps the queue alive") {
    CHECK(queue_step(queue_with(1.0, 3), false, 3).has_value());
  }
}

TEST_CASE("received_aoi") {
  CHECK(received_aoi(5, true) == 6);
  CHECK(received_aoi(5, false) == 0);
  CHECK(received_aoi(14, true) == 15);  // lands exactly on a threshold of 15
}

TEST_CASE("service_cost") {
  CHECK(service_cost(true, 60.83) == doctest::Approx(60.83));
  CHECK(service_cost(false, 123.0) == 0.0);
  CHECK(service_cost(true, 0.0) == 0.0);
}

TEST_CASE("dpp serve rule") {
  const AoiLedger ledger = fresh_ledger();
  DppParams params;
  params.enforce_staleness = false;

  SUBCASE("zero backlog never serves at positive distance") {
    params.cost_weight = 0.001;
    const std::vector<RequestQueue> queues = {queue_with(0.0)};
    const std::vector<double> d = {5.0};
    CHECK(dpp_decide(queues, d, ledger, params).action.served_uv.empty());
  }
  SUBCASE("flushing five beats paying twenty") {
    params.cost_weight = 10.0;
    const std::vector<RequestQueue> queues = {queue_with(5.0)};
    const std::vector<double> d = {2.0};  // 10*2 - 25 < 0
    CHECK(dpp_decide(queues, d, ledger, params).action.serves(0));
  }
  SUBCASE("a huge backlog forces the service") {
    params.cost_weight = 50.0;
    const std::vector<RequestQueue> queues = {queue_with(1e6)};
    const std::vector<double> d = {900.0};
    CHECK(dpp_decide(queues, d, ledger, params).action.serves(0));
  }
}

TEST_CASE("dpp threshold law on random triples") {
  const AoiLedger ledger = fresh_ledger();
  Rng rng = make_stream(5, 0);
  DppParams params;
  params.enforce_staleness = false;
  for (int i = 0; i < 1000; ++i) {
    const double backlog = draw_unit(rng) * 30.0;
    const double distance = draw_unit(rng) * 500.0;
    params.cost_weight = draw_unit(rng) * 4.0;
    RequestQueue q = queue_with(backlog);
    const std::vector<RequestQueue> queues = {q};
    const std::vector<double> d = {distance};
    const bool served = dpp_decide(queues, d, ledger, params).action.serves(0);
    CHECK(served == (backlog * backlog > params.cost_weight * distance));
  }
}

TEST_CASE("raising the cost weight never serves more on a fixed snapshot") {
  const AoiLedger ledger = fresh_ledger();
  Rng rng = make_stream(6, 0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<RequestQueue> queues;
    std::vector<double> d;
    for (int i = 0; i < 6; ++i) {
      RequestQueue q = queue_with(draw_unit(rng) * 20.0);
      q.uv_id = i;
      queues.push_back(q);
      d.push_back(draw_unit(rng) * 300.0);
    }
    DppParams lo, hi;
    lo.enforce_staleness = hi.enforce_staleness = false;
    lo.cost_weight = draw_unit(rng) * 2.0;
    hi.cost_weight = lo.cost_weight * (1.0 + draw_unit(rng) * 5.0);
    const auto lo_served = dpp_decide(queues, d, ledger, lo).action.served_uv;
    const auto hi_served = dpp_decide(queues, d, ledger, hi).action.served_uv;
    CHECK(hi_served.size() <= lo_served.size());
    for (int uv : hi_served) {  // serving under hi implies serving under lo
      CHECK(std::find(lo_served.begin(), lo_served.end(), uv) != lo_served.end());
    }
  }
}

TEST_CASE("channel cap keeps the largest scores, ties to the lower id") {
  const AoiLedger ledger = fresh_ledger();
  DppParams params;
  params.enforce_staleness = false;
  params.cost_weight = 1.0;
  params.h_uv_limit = 2;
  std::vector<RequestQueue> queues;
  std::vector<double> d;
  for (int i = 0; i < 4; ++i) {
    RequestQueue q = queue_with(4.0);  // score 16 - distance
    q.uv_id = i;
    queues.push_back(q);
  }
  d = {10.0, 2.0, 10.0, 1.0};  // scores 6, 14, 6, 15
  const auto served = dpp_decide(queues, d, ledger, params).action.served_uv;
  CHECK(served == std::vector<int>{1, 3});

  d = {2.0, 2.0, 2.0, 2.0};  // all tied: lowest ids win
  const auto tied = dpp_decide(queues, d, ledger, params).action.served_uv;
  CHECK(tied == std::vector<int>{0, 1});
}

TEST_CASE("staleness filter blocks expired deliveries") {
  AoiLedger ledger = fresh_ledger();
  ledger.rsu[3] = 20;  // delivery would arrive at 21 > threshold 15
  DppParams params;
  params.cost_weight = 0.0001;
  RequestQueue q = queue_with(9.0, 3);
  const std::vector<RequestQueue> queues = {q};
  const std::vector<double> d = {5.0};
  const auto decision = dpp_decide(queues, d, ledger, params);
  CHECK(decision.action.served_uv.empty());
  CHECK(decision.stale_blocked == std::vector<int>{0});

  ledger.rsu[3] = 14;  // arrives exactly at the threshold: still valid
  const auto fine = dpp_decide(queues, d, ledger, params);
  CHECK(fine.action.serves(0));
  CHECK(fine.stale_blocked.empty());
}

TEST_CASE("latency-only serves everything, cost-only nothing") {
  std::vector<RequestQueue> queues;
  for (int i = 0; i < 3; ++i) {
    RequestQueue q = queue_with(0.0);
    q.uv_id = i;
    queues.push_back(q);
  }
  CHECK(latency_only_policy(queues).served_uv == std::vector<int>{0, 1, 2});
  CHECK(latency_only_policy(queues, 2).served_uv == std::vector<int>{0, 1});
  CHECK(latency_only_policy({}).served_uv.empty());
  CHECK(cost_only_policy(queues).served_uv.empty());
}

TEST_CASE("drift bound examples") {
  SUBCASE("plain arrival is tight") {
    // backlog 3, arrival 1, no departure: drift 3.5 equals the bound 3.5
    const std::vector<std::vector<DriftSlot>> t = {{DriftSlot{1.0, 0.0}}};
    const auto report = drift_bound_check(t, 1.0, 3.0);
    CHECK(report.holds);
    CHECK(report.worst_slack == doctest::Approx(0.0));
    CHECK(report.constant == doctest::Approx(0.5));
  }
  SUBCASE("full flush holds for any backlog") {
    for (double q0 = 0.0; q0 <= 10.0; q0 += 1.0) {
      const std::vector<std::vector<DriftSlot>> t = {{DriftSlot{1.0, q0}}};
      CHECK(drift_bound_check(t, 1.0, q0).holds);
    }
  }
  SUBCASE("zero trajectory") {
    const std::vector<std::vector<DriftSlot>> t = {{DriftSlot{0.0, 0.0}}};
    const auto report = drift_bound_check(t, 1.0);
    CHECK(report.holds);
    CHECK(report.constant == 0.0);
  }
}

TEST_CASE("drift bound holds on random service-like traces") {
  Rng rng = make_stream(8, 0);
  std::vector<std::vector<DriftSlot>> trajectories;
  for (int t = 0; t < 100; ++t) {
    std::vector<DriftSlot> trace;
    double backlog = 0.0;
    for (int s = 0; s < 50; ++s) {
      DriftSlot slot;
      slot.arrival = draw_unit(rng) * 2.0;
      const int mode = draw_int(rng, 0, 2);
      slot.departure = mode == 0 ? 0.0 : (mode == 1 ? backlog : draw_unit(rng) * 5.0);
      backlog = std::max(backlog - slot.departure, 0.0) + slot.arrival;
      trace.push_back(slot);
    }
    trajectories.push_back(std::move(trace));
  }
  const auto report = drift_bound_check(trajectories, 2.0);
  CHECK(report.holds);
  CHECK(report.slots_checked == 5000);
  CHECK(report.constant > 0.0);
}
