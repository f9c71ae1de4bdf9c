#include "aoicache/aoi_ledger.hpp"

#include <stdexcept>

namespace aoicache {

AoiLedger make_ledger(int num_cvs, int num_rsus, std::vector<int> aoi_max) {
  if (num_cvs < 0 || num_rsus < 0) {
    throw std::invalid_argument("ledger: counts must be non-negative");
  }
  if ((num_rsus == 0) != aoi_max.empty()) {
    throw std::invalid_argument("ledger: every region needs an owning RSU");
  }
  if (num_rsus > 0 && static_cast<int>(aoi_max.size()) % num_rsus != 0) {
    throw std::invalid_argument("ledger: regions must split evenly across RSUs");
  }
  for (int m : aoi_max) {
    if (m <= 0) throw std::invalid_argument("ledger: validity threshold must be positive");
  }
  AoiLedger ledger;
  ledger.num_cvs = num_cvs;
  ledger.num_rsus = num_rsus;
  ledger.aoi_max = std::move(aoi_max);
  ledger.cv.assign(static_cast<std::size_t>(num_cvs) * ledger.aoi_max.size(), kNoContent);
  ledger.mbs.assign(ledger.aoi_max.size(), 1);
  ledger.rsu.assign(ledger.aoi_max.size(), 1);
  return ledger;
}

AoiLedger random_initial_ledger(int num_cvs, int num_rsus,
                                const std::vector<int>& aoi_max, Rng& rng) {
  AoiLedger ledger = make_ledger(num_cvs, num_rsus, aoi_max);
  for (int h = 0; h < ledger.num_regions(); ++h) {
    ledger.mbs[h] = draw_int(rng, 1, ledger.aoi_max[h]);
  }
  for (int h = 0; h < ledger.num_regions(); ++h) {
    ledger.rsu[h] = draw_int(rng, 1, ledger.aoi_max[h]);
  }
  return ledger;
}

AoiLedger advance_aoi(const AoiLedger& cur, std::span<const Link> uploads,
                      std::span<const Link> updates,
                      std::span<const PassEvent> pass_events) {
  AoiLedger next = cur;
  const int regions = cur.num_regions();

  // MBS layer first: replacement reads the current CV ages.
  for (int h = 0; h < regions; ++h) next.mbs[h] = cur.mbs[h] + 1;
  for (const auto& [j, h] : uploads) {
    if (j < 0 || j >= cur.num_cvs || h < 0 || h >= regions) {
      throw std::invalid_argument("advance_aoi: upload index out of range");
    }
    if (!cur.cv_has(j, h)) {
      throw std::invalid_argument("advance_aoi: upload names an empty CV slot");
    }
    next.mbs[h] = cur.cv_age(j, h);
  }

  // RSU layer: an update copies the current (pre-upload) MBS age.
  for (int h = 0; h < regions; ++h) next.rsu[h] = cur.rsu[h] + 1;
  for (const auto& [k, h] : updates) {
    if (k < 0 || k >= cur.num_rsus || h < 0 || h >= regions ||
        cur.region_owner(h) != k) {
      throw std::invalid_argument("advance_aoi: update does not match the owning RSU");
    }
    next.rsu[h] = cur.mbs[h];
  }

  // CV layer: uploaded items are handed off, items at the threshold expire,
  // the rest age by one. Fresh items from pass events overwrite last.
  for (int j = 0; j < cur.num_cvs; ++j) {
    for (int h = 0; h < regions; ++h) {
      const int age = cur.cv_age(j, h);
      if (age == kNoContent) continue;
      next.cv_age(j, h) = (age >= cur.aoi_max[h]) ? kNoContent : age + 1;
    }
  }
  for (const auto& [j, h] : uploads) next.cv_age(j, h) = kNoContent;
  for (const PassEvent& ev : pass_events) {
    if (ev.cv < 0 || ev.cv >= cur.num_cvs || ev.region < 0 || ev.region >= regions) {
      throw std::invalid_argument("advance_aoi: pass event out of range");
    }
    next.cv_age(ev.cv, ev.region) = 1;
  }
  return next;
}

}  // namespace aoicache
