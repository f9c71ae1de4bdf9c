#include "doctest.h"

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "aoicache/caching.hpp"

using namespace aoicache;

namespace {

CachingContext simple_ctx(std::vector<double> cv_d, std::vector<double> rsu_d,
                          std::vector<double> pop) {
  CachingContext ctx;
  ctx.cv_distance = std::move(cv_d);
  ctx.rsu_distance = std::move(rsu_d);
  ctx.popularity = std::move(pop);
  return ctx;
}

}  // namespace

TEST_CASE("enumerate: update-only system") {
  const AoiLedger ledger = make_ledger(0, 1, {20, 20});
  const auto actions = enumerate_actions(ledger, ChannelLimits{});
  REQUIRE(actions.size() == 3);  // no-op plus one update per region
  CHECK(actions[0].empty());
  CHECK(actions[1].updates == std::vector<Link>{{0, 0}});
  CHECK(actions[2].updates == std::vector<Link>{{0, 1}});
}

TEST_CASE("enumerate: empty system has only the no-op") {
  const AoiLedger ledger = make_ledger(0, 0, {});
  const auto actions = enumerate_actions(ledger, ChannelLimits{});
  REQUIRE(actions.size() == 1);
  CHECK(actions[0].empty());
}

TEST_CASE("enumerate: upload and update choices multiply") {
  AoiLedger ledger = make_ledger(1, 1, {20, 20});
  ledger.cv_age(0, 0) = 2;
  ledger.cv_age(0, 1) = 5;
  const auto actions = enumerate_actions(ledger, ChannelLimits{});
  CHECK(actions.size() == 9);  // 3 upload choices x 3 update choices
  for (const CachingAction& a : actions) {
    CHECK(action_feasible(ledger, a, ChannelLimits{}));
  }
}

TEST_CASE("enumerate respects channel caps") {
  AoiLedger ledger = make_ledger(2, 2, {20, 20});
  ledger.cv_age(0, 0) = 1;
  ledger.cv_age(1, 0) = 3;  // both CVs hold region 0: never uploaded twice
  for (const CachingAction& a : enumerate_actions(ledger, ChannelLimits{1, 1, 1})) {
    CHECK(a.link_count() <= 1);
  }
  std::size_t dup = 0;
  for (const CachingAction& a : enumerate_actions(ledger, ChannelLimits{})) {
    if (a.uploads.size() == 2) ++dup;
  }
  CHECK(dup == 0);
}

TEST_CASE("utility: threshold-to-age ratio term") {
  AoiLedger ledger = make_ledger(0, 1, {20});
  ledger.rsu = {5};
  const CachingContext ctx = simple_ctx({}, {100.0}, {1.0});
  UtilityParams params;
  params.epsilon = 1.0;
  CHECK(caching_utility(ledger, {}, ctx, params) == doctest::Approx(4.0));
}

TEST_CASE("utility: higher threshold scores higher at equal age") {
  UtilityParams params;
  params.epsilon = 1.0;
  const CachingContext ctx = simple_ctx({}, {100.0}, {1.0});
  AoiLedger first = make_ledger(0, 1, {7});
  first.rsu = {3};
  AoiLedger second = make_ledger(0, 1, {4});
  second.rsu = {3};
  const double u1 = caching_utility(first, {}, ctx, params);
  const double u2 = caching_utility(second, {}, ctx, params);
  CHECK(u1 == doctest::Approx(7.0 / 3.0));
  CHECK(u2 == doctest::Approx(4.0 / 3.0));
  CHECK(u1 > u2);
}

TEST_CASE("utility: epsilon one ignores cost") {
  AoiLedger ledger = make_ledger(1, 1, {10});
  ledger.cv_age(0, 0) = 1;
  ledger.rsu = {4};
  const CachingContext ctx = simple_ctx({500.0}, {900.0}, {1.0});
  UtilityParams params;
  params.epsilon = 1.0;
  params.aoi_scale = 2.0;
  CachingAction expensive;
  expensive.uploads = {{0, 0}};
  const AoiLedger next = advance_aoi(ledger, expensive.uploads, {}, {});
  CHECK(caching_utility(next, expensive, ctx, params) ==
        doctest::Approx(2.0 * (10.0 / 5.0)));
}

TEST_CASE("transition costs") {
  AoiLedger ledger = make_ledger(1, 1, {20});
  ledger.cv_age(0, 0) = 3;
  ledger.mbs = {7};
  ledger.rsu = {9};
  UtilityParams params;

  SUBCASE("no-op is free and everything ages") {
    const auto [next, cost] = transition(ledger, {}, simple_ctx({50}, {60}, {1.0}), params);
    CHECK(cost == 0.0);
    CHECK(next.mbs[0] == 8);
    CHECK(next.rsu[0] == 10);
    CHECK(next.cv_age(0, 0) == 4);
  }
  SUBCASE("update cost scales with inverse popularity") {
    CachingAction action;
    action.updates = {{0, 0}};
    const auto [next, cost] =
        transition(ledger, action, simple_ctx({50}, {200.0}, {0.5}), params);
    CHECK(cost == doctest::Approx(400.0));
    CHECK(next.rsu[0] == 7);
  }
  SUBCASE("upload plus update add up") {
    CachingAction action;
    action.uploads = {{0, 0}};
    action.updates = {{0, 0}};
    const auto [next, cost] =
        transition(ledger, action, simple_ctx({100.0}, {200.0}, {1.0}), params);
    CHECK(cost == doctest::Approx(300.0));
    CHECK(next.mbs[0] == 3);
  }
  SUBCASE("infeasible action is rejected") {
    CachingAction action;
    action.uploads = {{0, 0}};
    AoiLedger empty_cv = ledger;
    empty_cv.cv_age(0, 0) = kNoContent;
    CHECK_THROWS_AS(transition(empty_cv, action, simple_ctx({50}, {60}, {1.0}), params),
                    std::invalid_argument);
  }
}

TEST_CASE("utility strictly decreases as any cached copy ages") {
  Rng rng = make_stream(7, 0);
  const CachingContext ctx = simple_ctx({}, {100.0, 150.0}, {0.3, 0.2, 0.25, 0.25});
  for (auto mode : {UtilityParams::WeightMode::Uniform, UtilityParams::WeightMode::AoiShare}) {
    UtilityParams params;
    params.weight_mode = mode;
    for (int trial = 0; trial < 50; ++trial) {
      AoiLedger ledger = random_initial_ledger(0, 2, {20, 10, 8, 15}, rng);
      const double base = caching_utility(ledger, {}, ctx, params);
      const int h = draw_int(rng, 0, 3);
      AoiLedger older = ledger;
      older.rsu[h] += 1;
      CHECK(caching_utility(older, {}, ctx, params) < base);
    }
  }
}

TEST_CASE("cost is zero exactly for the all-zero action") {
  AoiLedger ledger = make_ledger(1, 2, {20, 10, 8, 15});
  ledger.cv_age(0, 2) = 4;
  const CachingContext ctx = simple_ctx({120.0}, {300.0, 700.0}, {0.25, 0.25, 0.25, 0.25});
  UtilityParams params;
  for (const CachingAction& a : enumerate_actions(ledger, ChannelLimits{})) {
    const double cost = transmission_cost(a, ctx, params);
    CHECK((cost == 0.0) == a.empty());
  }
}

TEST_CASE("myopic holds back when every link loses utility") {
  AoiLedger ledger = make_ledger(0, 1, {20, 20});
  ledger.rsu = {1, 1};
  ledger.mbs = {1, 1};
  const CachingContext ctx = simple_ctx({}, {1e6}, {0.5, 0.5});
  UtilityParams params;
  params.epsilon = 0.5;
  CHECK(myopic_caching_policy(ledger, ctx, params, ChannelLimits{}).empty());
}

TEST_CASE("myopic rescues the stale copy when one channel remains") {
  AoiLedger ledger = make_ledger(0, 1, {20, 20});
  ledger.rsu = {50, 2};  // far past threshold vs nearly fresh
  ledger.mbs = {1, 1};
  const CachingContext ctx = simple_ctx({}, {10.0}, {0.5, 0.5});
  UtilityParams params;
  params.aoi_scale = 50.0;
  const CachingAction action =
      myopic_caching_policy(ledger, ctx, params, ChannelLimits{1, 0, 1});
  REQUIRE(action.updates.size() == 1);
  CHECK(action.updates[0] == Link{0, 0});
}

TEST_CASE("myopic greedy fallback stays feasible and close to exhaustive") {
  Rng rng = make_stream(99, 0);
  for (int trial = 0; trial < 20; ++trial) {
    AoiLedger ledger = random_initial_ledger(2, 2, {20, 10, 8, 15}, rng);
    for (int j = 0; j < 2; ++j) {
      for (int h = 0; h < 4; ++h) {
        if (draw_int(rng, 0, 1)) ledger.cv_age(j, h) = draw_int(rng, 1, ledger.aoi_max[h]);
      }
    }
    const CachingContext ctx =
        simple_ctx({150.0, 420.0}, {260.0, 610.0}, {0.3, 0.2, 0.3, 0.2});
    UtilityParams params;
    params.aoi_scale = 500.0;
    params.mbs_term_weight = 1.0;
    MyopicOptions cramped;
    cramped.exhaustive_bound = 2;  // force the greedy path
    const CachingAction greedy =
        myopic_caching_policy(ledger, ctx, params, ChannelLimits{}, cramped);
    CHECK(action_feasible(ledger, greedy, ChannelLimits{}));
    const CachingAction exact = myopic_caching_policy(ledger, ctx, params, ChannelLimits{});
    const double exact_u = caching_utility(
        advance_aoi(ledger, exact.uploads, exact.updates, {}), exact, ctx, params);
    const double greedy_u = caching_utility(
        advance_aoi(ledger, greedy.uploads, greedy.updates, {}), greedy, ctx, params);
    CHECK(greedy_u <= exact_u + 1e-12);
  }
}

TEST_CASE("aoi-greedy picks the largest raw reduction") {
  AoiLedger ledger = make_ledger(0, 1, {20, 20});
  ledger.rsu = {30, 5};
  ledger.mbs = {2, 5};
  const CachingAction action = aoi_greedy_policy(ledger, ChannelLimits{});
  REQUIRE(action.updates.size() == 1);  // the zero-reduction copy is left alone
  CHECK(action.updates[0] == Link{0, 0});  // reduction 28
}

TEST_CASE("aoi-greedy is idle without any positive reduction") {
  AoiLedger ledger = make_ledger(0, 2, {20, 20});
  ledger.rsu = {4, 9};
  ledger.mbs = {4, 9};
  CHECK(aoi_greedy_policy(ledger, ChannelLimits{}).empty());
}

TEST_CASE("aoi-greedy takes the larger of two reductions under a cap") {
  AoiLedger ledger = make_ledger(0, 2, {20, 20});
  ledger.rsu = {8, 12};
  ledger.mbs = {3, 3};  // reductions 5 and 9
  const CachingAction action = aoi_greedy_policy(ledger, ChannelLimits{1, 1, 1});
  REQUIRE(action.updates.size() == 1);
  CHECK(action.updates[0] == Link{1, 1});
}

TEST_CASE("random policy is reproducible under a seed") {
  AoiLedger ledger = make_ledger(1, 1, {20, 20});
  ledger.cv_age(0, 0) = 2;
  ledger.cv_age(0, 1) = 5;
  Rng a = make_stream(11, 5);
  Rng b = make_stream(11, 5);
  for (int i = 0; i < 50; ++i) {
    CHECK(random_policy(ledger, ChannelLimits{}, a) ==
          random_policy(ledger, ChannelLimits{}, b));
  }
}

TEST_CASE("random policy falls back to sparse construction on huge sets") {
  Rng init = make_stream(41, 0);
  AoiLedger ledger = random_initial_ledger(12, 4, std::vector<int>(20, 20), init);
  for (int j = 0; j < 12; ++j) {
    for (int h = 0; h < 20; h += 3) ledger.cv_age(j, h) = 1 + (j + h) % 8;
  }
  REQUIRE(count_actions(ledger, ChannelLimits{}, 50) >= 50);
  Rng a = make_stream(42, 0);
  Rng b = make_stream(42, 0);
  long long links = 0;
  for (int i = 0; i < 200; ++i) {
    const CachingAction act = random_policy(ledger, ChannelLimits{}, a, 10);
    CHECK(act == random_policy(ledger, ChannelLimits{}, b, 10));
    CHECK(action_feasible(ledger, act, ChannelLimits{}));
    links += act.link_count();
  }
  // Budget drawn uniformly in [0, 6]: the mean link count sits near 3, not
  // pinned to the cap.
  CHECK(links >= 400);
  CHECK(links <= 800);
}

TEST_CASE("random policy returns the no-op when nothing else is feasible") {
  const AoiLedger ledger = make_ledger(0, 1, {20});
  Rng rng = make_stream(3, 0);
  CHECK(random_policy(ledger, ChannelLimits{0, 0, 0}, rng).empty());
}

TEST_CASE("random policy is uniform over a small feasible set") {
  AoiLedger ledger = make_ledger(1, 1, {20, 20});
  ledger.cv_age(0, 0) = 2;
  ledger.cv_age(0, 1) = 5;
  Rng rng = make_stream(17, 0);
  std::map<std::vector<Link>, int> upload_counts;
  std::map<int, int> counts;
  const auto actions = enumerate_actions(ledger, ChannelLimits{});
  REQUIRE(actions.size() == 9);
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    const CachingAction a = random_policy(ledger, ChannelLimits{}, rng);
    for (std::size_t idx = 0; idx < actions.size(); ++idx) {
      if (actions[idx] == a) {
        ++counts[static_cast<int>(idx)];
        break;
      }
    }
  }
  const double expected = draws / 9.0;
  const double sigma = std::sqrt(draws * (1.0 / 9.0) * (8.0 / 9.0));
  for (int idx = 0; idx < 9; ++idx) {
    CHECK(std::abs(counts[idx] - expected) <= 3.0 * sigma);
  }
}

TEST_CASE("every policy emits members of the feasible set") {
  Rng rng = make_stream(23, 0);
  Rng policy_rng = make_stream(23, 1);
  const CachingContext ctx = simple_ctx({100.0}, {200.0, 400.0}, {0.3, 0.2, 0.3, 0.2});
  UtilityParams params;
  params.mbs_term_weight = 1.0;
  const ChannelLimits limits{2, 1, 1};
  for (int trial = 0; trial < 30; ++trial) {
    AoiLedger ledger = random_initial_ledger(1, 2, {20, 10, 8, 15}, rng);
    if (draw_int(rng, 0, 1)) ledger.cv_age(0, draw_int(rng, 0, 3)) = 2;
    const auto actions = enumerate_actions(ledger, limits);
    const auto member = [&](const CachingAction& a) {
      return std::find(actions.begin(), actions.end(), a) != actions.end();
    };
    CHECK(member(myopic_caching_policy(ledger, ctx, params, limits)));
    CHECK(member(aoi_greedy_policy(ledger, limits)));
    CHECK(member(random_policy(ledger, limits, policy_rng)));
  }
}

TEST_CASE("calibration equalizes freshness and cost scales") {
  Rng rng = make_stream(31, 0);
  AoiLedger ledger = random_initial_ledger(0, 1, {20, 10}, rng);
  const CachingContext ctx = simple_ctx({}, {500.0}, {0.5, 0.5});
  UtilityParams params;
  const double scale = calibrate_aoi_scale(ledger, ctx, params, ChannelLimits{});
  CHECK(scale > 0.0);
  // With the calibrated scale, the best single update is priced in the same
  // ballpark as its freshness payoff rather than orders of magnitude away.
  params.aoi_scale = scale;
  const CachingAction action = myopic_caching_policy(ledger, ctx, params, ChannelLimits{});
  CHECK(action.link_count() <= 1);
}
