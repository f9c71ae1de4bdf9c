#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "aoicache/rng.hpp"

namespace aoicache {

// Freshness bookkeeping for the three content layers. A producer vehicle (CV)
// holds at most one content item per region; the item ages by one slot until
// it is uploaded or reaches the region's validity threshold, at which point
// the CV drops it. The central store (MBS) and the region's owning RSU keep a
// copy forever; their ages keep growing past the threshold, which only marks
// the copy as stale.
//
// A CV slot with no content is kNoContent; the serialized form writes it as 0.
inline constexpr int kNoContent = -1;

// (vehicle-or-rsu index, region) pair naming one transfer link.
using Link = std::pair<int, int>;

// A CV finished traversing `region` this slot and produced a fresh item.
struct PassEvent {
  int cv = 0;
  int region = 0;
};

struct AoiLedger {
  int num_cvs = 0;
  int num_rsus = 0;
  std::vector<int> aoi_max;  // per region validity threshold
  std::vector<int> cv;       // num_cvs x num_regions, kNoContent when empty
  std::vector<int> mbs;      // per region
  std::vector<int> rsu;      // per region, owned by region_owner(h)

  int num_regions() const { return static_cast<int>(aoi_max.size()); }
  int regions_per_rsu() const { return num_rsus == 0 ? 0 : num_regions() / num_rsus; }
  int region_owner(int region) const { return region / regions_per_rsu(); }

  int cv_age(int j, int h) const { return cv[static_cast<std::size_t>(j) * aoi_max.size() + h]; }
  int& cv_age(int j, int h) { return cv[static_cast<std::size_t>(j) * aoi_max.size() + h]; }
  bool cv_has(int j, int h) const { return cv_age(j, h) != kNoContent; }

  bool operator==(const AoiLedger&) const = default;
};

/// Empty-CV ledger with every MBS/RSU age set to 1.
AoiLedger make_ledger(int num_cvs, int num_rsus, std::vector<int> aoi_max);

/// MBS/RSU ages drawn uniformly from [1, aoi_max(h)]; CVs start empty.
AoiLedger random_initial_ledger(int num_cvs, int num_rsus,
                                const std::vector<int>& aoi_max, Rng& rng);

// One slot of the age dynamics. Uploads hand a CV item to the MBS (the MBS
// age becomes the CV age, transmission itself consuming the slot); updates
// copy the current MBS age into the RSU; everything untouched ages by one.
// CV items at the validity threshold that were not uploaded are dropped, and
// pass events insert fresh items with age 1. Pure function; throws
// std::invalid_argument when an upload names a CV slot with no content.
AoiLedger advance_aoi(const AoiLedger& cur, std::span<const Link> uploads,
                      std::span<const Link> updates,
                      std::span<const PassEvent> pass_events);

}  // namespace aoicache
