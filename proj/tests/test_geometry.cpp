#include "doctest.h"

#include <stdexcept>

#include "aoicache/geometry.hpp"

using namespace aoicache;

namespace {

RoadLayout default_layout() {
  std::vector<RegionKind> kinds(20, RegionKind::Normal);
  return make_layout(2000.0, 4, 5, kinds, {30.0, 50.0, 80.0});
}

}  // namespace

TEST_CASE("link_distance") {
  CHECK(link_distance({1000, 50}, {1000, 0}) == doctest::Approx(50.0));
  CHECK(link_distance({0, 0}, {3, 4}) == doctest::Approx(5.0));
  CHECK(link_distance({250, 10}, {310, 0}) == doctest::Approx(60.8276253029822));
}

TEST_CASE("region_at") {
  const RoadLayout layout = default_layout();
  CHECK(region_at(layout, 0.0) == 0);
  CHECK(region_at(layout, 250.0) == 2);
  CHECK(region_at(layout, 1999.9) == 19);
  CHECK_THROWS_AS(region_at(layout, -1.0), std::out_of_range);
  CHECK_THROWS_AS(region_at(layout, 2000.0), std::out_of_range);
}

TEST_CASE("layout geometry") {
  const RoadLayout layout = default_layout();
  CHECK(layout.num_regions() == 20);
  CHECK(layout.region_length_m == doctest::Approx(100.0));
  CHECK(layout.total_length_m ==
        doctest::Approx(layout.region_length_m * layout.num_regions()));
  CHECK(layout.regions_per_rsu() == 5);
  CHECK(layout.rsu_of_region(0) == 0);
  CHECK(layout.rsu_of_region(4) == 0);
  CHECK(layout.rsu_of_region(5) == 1);
  CHECK(layout.rsu_of_region(19) == 3);
  CHECK(layout.rsu_positions[0].x == doctest::Approx(250.0));
  CHECK(layout.rsu_positions[3].x == doctest::Approx(1750.0));
  CHECK(layout.mbs_position.x == doctest::Approx(1000.0));
  // km/h to metres per one-second slot
  CHECK(layout.lane_speeds[0] == doctest::Approx(8.3333333333));
  CHECK(layout.lane_speeds[2] == doctest::Approx(22.2222222222));
}

TEST_CASE("layout aoi_max mapping") {
  std::vector<RegionKind> kinds = {RegionKind::Normal, RegionKind::TrafficJam,
                                   RegionKind::Accident, RegionKind::Crowded};
  const RoadLayout layout = make_layout(400.0, 1, 4, kinds, {50.0});
  CHECK(layout.aoi_max == std::vector<int>{20, 10, 8, 15});
}

TEST_CASE("layout rejects bad shapes") {
  std::vector<RegionKind> kinds(3, RegionKind::Normal);
  CHECK_THROWS_AS(make_layout(2000.0, 4, 5, kinds, {30.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_layout(-1.0, 1, 3, kinds, {30.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_layout(300.0, 1, 3, kinds, {30.0}, {0, 10, 8, 15}),
                  std::invalid_argument);
}
