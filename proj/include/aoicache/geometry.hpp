#pragma once

#include <array>
#include <string>
#include <vector>

namespace aoicache {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Euclidean distance in metres.
double link_distance(const Vec2& a, const Vec2& b);

// Road condition of one region. The condition decides how long a content
// item stays a usable description of the region (its validity threshold).
enum class RegionKind { Normal = 0, TrafficJam = 1, Accident = 2, Crowded = 3 };

inline constexpr std::array<int, 4> kDefaultAoiMaxByKind = {20, 10, 8, 15};

const char* region_kind_name(RegionKind kind);

// One-way straight road split into equal-length regions. RSUs tile the road
// with equal contiguous spans, each span covering a whole number of regions,
// so every region has exactly one owning RSU.
struct RoadLayout {
  double total_length_m = 0.0;
  double region_length_m = 0.0;
  std::vector<RegionKind> regions;
  std::vector<int> aoi_max;  // per region, derived from the kind mapping
  std::vector<Vec2> rsu_positions;
  Vec2 mbs_position;
  std::vector<double> lane_speeds;  // metres per slot

  int num_regions() const { return static_cast<int>(regions.size()); }
  int num_rsus() const { return static_cast<int>(rsu_positions.size()); }
  int regions_per_rsu() const { return num_regions() / num_rsus(); }
  int rsu_of_region(int region) const { return region / regions_per_rsu(); }
  int first_region_of_rsu(int rsu) const { return rsu * regions_per_rsu(); }
};

// Builds the layout from counts. RSUs sit at their span centres with a 10 m
// lateral offset, the MBS at the road midpoint 50 m off the road. Lane speeds
// are given in km/h and converted to metres per slot of `slot_seconds`.
RoadLayout make_layout(double total_length_m, int rsu_count, int regions_per_rsu,
                       const std::vector<RegionKind>& kinds,
                       const std::vector<double>& lane_speeds_kmh,
                       const std::array<int, 4>& aoi_max_by_kind = kDefaultAoiMaxByKind,
                       double slot_seconds = 1.0);

/// Region index containing `position`; throws std::out_of_range when the
/// position is off the road.
int region_at(const RoadLayout& layout, double position);

enum class VehicleRole { UserVehicle, ContentVehicle };

struct VehicleState {
  int id = 0;
  VehicleRole role = VehicleRole::UserVehicle;
  double position = 0.0;  // metres along the road, wraps at the end
  int lane = 0;
  double speed = 0.0;  // metres per slot, equals the lane speed
};

}  // namespace aoicache
