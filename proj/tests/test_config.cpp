#include "doctest.h"

#include "aoicache/config_file.hpp"

using namespace aoicache;

TEST_CASE("empty config yields the stock scenario") {
  const ScenarioConfig config = parse_config_text("");
  CHECK(config.road_length_m == 2000.0);
  CHECK(config.rsu_count == 4);
  CHECK(config.regions_per_rsu == 5);
  CHECK(config.lane_speeds_kmh == std::vector<double>{30.0, 50.0, 80.0});
  CHECK(config.uv_count == 12);
  CHECK(config.cv_count == 12);
  CHECK(config.slot_seconds == 3.0);
  CHECK(config.horizon == 100);
  CHECK(config.limits.total == 6);
  CHECK(config.limits.cv == 3);
  CHECK(config.limits.rsu == 3);
  CHECK(config.aoi_max_by_kind == std::array<int, 4>{20, 10, 8, 15});
  CHECK(config.stage1 == Stage1Policy::Proposed);
  CHECK(config.stage2 == Stage2Policy::Dpp);
  CHECK(config.utility.epsilon == 0.5);
  CHECK(config.auto_aoi_scale);
  CHECK(config.utility.mbs_term_weight == 1.0);
  CHECK(config.dpp.enforce_staleness);
}

TEST_CASE("keys and comments parse") {
  const std::string text =
      "# single-RSU setup\n"
      "[scenario]\n"
      "road_length_m = 500\n"
      "rsu_count = 1\n"
      "uv_count = 3\n"
      "request_prob = 1.0   # always ask\n"
      "stage1 = aoi-greedy\n"
      "region_kinds = normal traffic_jam accident crowded normal\n"
      "\n"
      "[service]\n"
      "v = heavy\n"
      "enforce_staleness = false\n"
      "\n"
      "[utility]\n"
      "w = 12.5\n";
  const ScenarioConfig config = parse_config_text(text);
  CHECK(config.road_length_m == 500.0);
  CHECK(config.rsu_count == 1);
  CHECK(config.uv_count == 3);
  CHECK(config.request_prob == 1.0);
  CHECK(config.stage1 == Stage1Policy::AoiGreedy);
  CHECK(config.region_kinds.size() == 5);
  CHECK(config.region_kinds[1] == RegionKind::TrafficJam);
  CHECK(config.v_preset == VPreset::Heavy);
  CHECK_FALSE(config.dpp.enforce_staleness);
  CHECK_FALSE(config.auto_aoi_scale);
  CHECK(config.utility.aoi_scale == 12.5);
}

TEST_CASE("unknown keys are rejected with a line number") {
  try {
    parse_config_text("[scenario]\nroad_length_m = 2000\nbogus = 1\n", "test.ini");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("test.ini:3") != std::string::npos);
    CHECK(std::string(e.what()).find("bogus") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config_text("[nonsense]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("x = 1\n"), ConfigError);  // key before section
  CHECK_THROWS_AS(parse_config_text("[scenario]\nhorizon 100\n"), ConfigError);
}

TEST_CASE("region length must tile the road") {
  const std::string good =
      "[scenario]\nroad_length_m = 2000\nregion_length_m = 100\n";
  CHECK(parse_config_text(good).road_length_m == 2000.0);
  const std::string bad =
      "[scenario]\nroad_length_m = 2000\nregion_length_m = 130\n";
  CHECK_THROWS_AS(parse_config_text(bad), ConfigError);
}

TEST_CASE("invariant violations turn into config errors") {
  CHECK_THROWS_AS(parse_config_text("[service]\nv = -2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[scenario]\nhorizon = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[scenario]\nrequest_prob = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[utility]\nepsilon = -0.1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[scenario]\nhorizon = ten\n"), ConfigError);
}

TEST_CASE("config text round-trips") {
  const std::string text =
      "[scenario]\n"
      "rsu_count = 2\n"
      "regions_per_rsu = 4\n"
      "road_length_m = 800\n"
      "seed = 77\n"
      "stage2 = latency-only\n"
      "region_kinds = accident crowded normal normal traffic_jam accident normal crowded\n"
      "[utility]\n"
      "epsilon = 0.25\n"
      "mbs_term_weight = 0.5\n"
      "[service]\n"
      "v = 1.75\n";
  const ScenarioConfig config = parse_config_text(text);
  const ScenarioConfig again = parse_config_text(config_to_text(config));
  CHECK(again.rsu_count == config.rsu_count);
  CHECK(again.seed == config.seed);
  CHECK(again.stage2 == config.stage2);
  CHECK(again.region_kinds == config.region_kinds);
  CHECK(again.utility.epsilon == config.utility.epsilon);
  CHECK(again.utility.mbs_term_weight == config.utility.mbs_term_weight);
  CHECK(again.v_preset == VPreset::Custom);
  CHECK(again.dpp.cost_weight == 1.75);
  CHECK(config_to_text(again) == config_to_text(config));
}

TEST_CASE("missing file raises a config error") {
  CHECK_THROWS_AS(parse_config_file("no_such_file.ini"), ConfigError);
}
