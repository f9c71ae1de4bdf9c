#include "aoicache/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace aoicache {

double link_distance(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

const char* region_kind_name(RegionKind kind) {
  switch (kind) {
    case RegionKind::Normal: return "normal";
    case RegionKind::TrafficJam: return "traffic_jam";
    case RegionKind::Accident: return "accident";
    case RegionKind::Crowded: return "crowded";
  }
  return "?";
}

RoadLayout make_layout(double total_length_m, int rsu_count, int regions_per_rsu,
                       const std::vector<RegionKind>& kinds,
                       const std::vector<double>& lane_speeds_kmh,
                       const std::array<int, 4>& aoi_max_by_kind,
                       double slot_seconds) {
  if (total_length_m <= 0.0 || rsu_count <= 0 || regions_per_rsu <= 0 ||
      slot_seconds <= 0.0) {
    throw std::invalid_argument("layout: counts, length and slot must be positive");
  }
  const int num_regions = rsu_count * regions_per_rsu;
  if (static_cast<int>(kinds.size()) != num_regions) {
    throw std::invalid_argument("layout: region kind list does not match region count");
  }
  for (int m : aoi_max_by_kind) {
    if (m <= 0) throw std::invalid_argument("layout: validity thresholds must be positive");
  }

  RoadLayout layout;
  layout.total_length_m = total_length_m;
  layout.region_length_m = total_length_m / num_regions;
  layout.regions = kinds;
  layout.aoi_max.reserve(kinds.size());
  for (RegionKind k : kinds) {
    layout.aoi_max.push_back(aoi_max_by_kind[static_cast<int>(k)]);
  }
  const double span = total_length_m / rsu_count;
  for (int k = 0; k < rsu_count; ++k) {
    layout.rsu_positions.push_back({span * k + span / 2.0, 10.0});
  }
  layout.mbs_position = {total_length_m / 2.0, 50.0};
  layout.lane_speeds.reserve(lane_speeds_kmh.size());
  for (double v : lane_speeds_kmh) {
    layout.lane_speeds.push_back(v / 3.6 * slot_seconds);  // km/h to m per slot
  }
  return layout;
}

int region_at(const RoadLayout& layout, double position) {
  if (!(position >= 0.0) || position >= layout.total_length_m) {
    throw std::out_of_range("region_at: position off the road");
  }
  int region = static_cast<int>(position / layout.region_length_m);
  // Guard the upper edge against floating point round-up.
  if (region >= layout.num_regions()) region = layout.num_regions() - 1;
  return region;
}

}  // namespace aoicache
