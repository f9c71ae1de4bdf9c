#include "aoicache/caching.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace aoicache {
namespace {

std::vector<std::vector<int>> cv_choice_lists(const AoiLedger& ledger) {
  std::vector<std::vector<int>> lists(ledger.num_cvs);
  for (int j = 0; j < ledger.num_cvs; ++j) {
    for (int h = 0; h < ledger.num_regions(); ++h) {
      if (ledger.cv_has(j, h)) lists[j].push_back(h);
    }
  }
  return lists;
}

std::vector<std::vector<int>> rsu_choice_lists(const AoiLedger& ledger) {
  std::vector<std::vector<int>> lists(ledger.num_rsus);
  const int rpr = ledger.regions_per_rsu();
  for (int k = 0; k < ledger.num_rsus; ++k) {
    for (int h = k * rpr; h < (k + 1) * rpr; ++h) lists[k].push_back(h);
  }
  return lists;
}

// Walks the feasible set in canonical order: per-entity choices form an
// odometer, the no-link choice ordered before the region choices, CVs before
// RSUs. The visitor returns false to abort the walk.
struct ActionWalk {
  const ChannelLimits& limits;
  std::vector<std::vector<int>> cv_choices;
  std::vector<std::vector<int>> rsu_choices;
  CachingAction current;
  std::vector<char> upload_region_used;

  ActionWalk(const AoiLedger& ledger, const ChannelLimits& lim)
      : limits(lim),
        cv_choices(cv_choice_lists(ledger)),
        rsu_choices(rsu_choice_lists(ledger)),
        upload_region_used(ledger.num_regions(), 0) {}

  template <typename V>
  bool walk_cv(std::size_t j, V&& visit) {
    if (j == cv_choices.size()) return walk_rsu(0, visit);
    if (!walk_cv(j + 1, visit)) return false;
    if (static_cast<int>(current.uploads.size()) <
        std::min(limits.cv, limits.total)) {
      for (int h : cv_choices[j]) {
        if (upload_region_used[h]) continue;
        upload_region_used[h] = 1;
        current.uploads.push_back({static_cast<int>(j), h});
        const bool keep = walk_cv(j + 1, visit);
        current.uploads.pop_back();
        upload_region_used[h] = 0;
        if (!keep) return false;
      }
    }
    return true;
  }

  template <typename V>
  bool walk_rsu(std::size_t k, V&& visit) {
    if (k == rsu_choices.size()) return visit(current);
    if (!walk_rsu(k + 1, visit)) return false;
    if (static_cast<int>(current.updates.size()) < limits.rsu &&
        current.link_count() < limits.total) {
      for (int h : rsu_choices[k]) {
        current.updates.push_back({static_cast<int>(k), h});
        const bool keep = walk_rsu(k + 1, visit);
        current.updates.pop_back();
        if (!keep) return false;
      }
    }
    return true;
  }
};

double floored_popularity(const CachingContext& ctx, const UtilityParams& params, int h) {
  return std::max(ctx.popularity[h], params.popularity_floor);
}

double upload_cost(const CachingContext& ctx, int j) { return ctx.cv_distance[j]; }

double update_cost(const CachingContext& ctx, const UtilityParams& params, int k, int h) {
  return ctx.rsu_distance[k] / floored_popularity(ctx, params, h);
}

// Weighted freshness sum over one layer of copies.
double layer_freshness(const std::vector<int>& ages, const AoiLedger& ledger,
                       const CachingContext& ctx, const UtilityParams& params) {
  const int n = ledger.num_regions();
  double age_sum = 0.0;
  if (params.weight_mode == UtilityParams::WeightMode::AoiShare) {
    for (int h = 0; h < n; ++h) age_sum += std::max(ages[h], 1);
  }
  double term = 0.0;
  for (int h = 0; h < n; ++h) {
    const double age = std::max(ages[h], 1);  // age 0 scored as freshest
    const double weight = params.weight_mode == UtilityParams::WeightMode::Uniform
                              ? 1.0 / n
                              : age / age_sum;
    const double threshold = ledger.aoi_max[h];
    const double score =
        params.freshness_model == UtilityParams::FreshnessModel::ThresholdRatio
            ? threshold / age
            : (threshold - age) / threshold;  // negative past the threshold
    term += score * weight * ctx.popularity[h];
  }
  return term;
}

double freshness_term(const AoiLedger& next, const CachingContext& ctx,
                      const UtilityParams& params) {
  double term = layer_freshness(next.rsu, next, ctx, params);
  if (params.mbs_term_weight != 0.0) {
    term += params.mbs_term_weight * layer_freshness(next.mbs, next, ctx, params);
  }
  return term;
}

}  // namespace

bool action_feasible(const AoiLedger& ledger, const CachingAction& action,
                     const ChannelLimits& limits) {
  if (static_cast<int>(action.uploads.size()) > limits.cv) return false;
  if (static_cast<int>(action.updates.size()) > limits.rsu) return false;
  if (action.link_count() > limits.total) return false;

  std::vector<char> cv_used(ledger.num_cvs, 0);
  std::vector<char> region_uploaded(ledger.num_regions(), 0);
  for (const auto& [j, h] : action.uploads) {
    if (j < 0 || j >= ledger.num_cvs || h < 0 || h >= ledger.num_regions()) return false;
    if (!ledger.cv_has(j, h)) return false;
    if (cv_used[j] || region_uploaded[h]) return false;
    cv_used[j] = region_uploaded[h] = 1;
  }
  std::vector<char> rsu_used(ledger.num_rsus, 0);
  for (const auto& [k, h] : action.updates) {
    if (k < 0 || k >= ledger.num_rsus || h < 0 || h >= ledger.num_regions()) return false;
    if (ledger.region_owner(h) != k) return false;
    if (rsu_used[k]) return false;
    rsu_used[k] = 1;
  }
  return true;
}

std::size_t count_actions(const AoiLedger& ledger, const ChannelLimits& limits,
                          std::size_t bail_at) {
  std::size_t count = 0;
  ActionWalk walk(ledger, limits);
  walk.walk_cv(0, [&](const CachingAction&) { return ++count < bail_at; });
  return count;
}

std::vector<CachingAction> enumerate_actions(const AoiLedger& ledger,
                                             const ChannelLimits& limits) {
  std::vector<CachingAction> actions;
  ActionWalk walk(ledger, limits);
  walk.walk_cv(0, [&](const CachingAction& a) {
    actions.push_back(a);
    return true;
  });
  return actions;
}

std::optional<std::vector<CachingAction>> enumerate_actions_bounded(
    const AoiLedger& ledger, const ChannelLimits& limits, std::size_t max_actions) {
  std::vector<CachingAction> actions;
  ActionWalk walk(ledger, limits);
  const bool complete = walk.walk_cv(0, [&](const CachingAction& a) {
    if (actions.size() >= max_actions) return false;
    actions.push_back(a);
    return true;
  });
  if (!complete) return std::nullopt;
  return actions;
}

double transmission_cost(const CachingAction& action, const CachingContext& ctx,
                         const UtilityParams& params) {
  double cost = 0.0;
  for (const auto& [j, h] : action.uploads) { (void)h; cost += upload_cost(ctx, j); }
  for (const auto& [k, h] : action.updates) cost += update_cost(ctx, params, k, h);
  return cost;
}

double caching_utility(const AoiLedger& next, const CachingAction& action,
                       const CachingContext& ctx, const UtilityParams& params) {
  const double freshness = freshness_term(next, ctx, params);
  const double cost = transmission_cost(action, ctx, params);
  return params.epsilon * freshness * params.aoi_scale - (1.0 - params.epsilon) * cost;
}

TransitionResult transition(const AoiLedger& ledger, const CachingAction& action,
                            const CachingContext& ctx, const UtilityParams& params) {
  if (!action_feasible(ledger, action, ChannelLimits{std::numeric_limits<int>::max(),
                                                     std::numeric_limits<int>::max(),
                                                     std::numeric_limits<int>::max()})) {
    throw std::invalid_argument("transition: infeasible action");
  }
  TransitionResult result{advance_aoi(ledger, action.uploads, action.updates, {}),
                          transmission_cost(action, ctx, params)};
  return result;
}

namespace {

double evaluate(const AoiLedger& ledger, const CachingAction& action,
                const CachingContext& ctx, const UtilityParams& params) {
  return caching_utility(advance_aoi(ledger, action.uploads, action.updates, {}),
                         action, ctx, params);
}

CachingAction with_upload(CachingAction a, Link link) {
  a.uploads.insert(std::lower_bound(a.uploads.begin(), a.uploads.end(), link), link);
  return a;
}

CachingAction with_update(CachingAction a, Link link) {
  a.updates.insert(std::lower_bound(a.updates.begin(), a.updates.end(), link), link);
  return a;
}

CachingAction greedy_marginal(const AoiLedger& ledger, const CachingContext& ctx,
                              const UtilityParams& params, const ChannelLimits& limits) {
  CachingAction chosen;
  double base = evaluate(ledger, chosen, ctx, params);
  while (true) {
    CachingAction best;
    double best_value = base;
    bool found = false;
    const bool room_total = chosen.link_count() < limits.total;
    // Uploads scanned before updates, each ascending, so equal gains resolve
    // to the lexicographically first link.
    if (room_total && static_cast<int>(chosen.uploads.size()) < limits.cv) {
      for (int j = 0; j < ledger.num_cvs; ++j) {
        if (std::any_of(chosen.uploads.begin(), chosen.uploads.end(),
                        [&](const Link& l) { return l.first == j; }))
          continue;
        for (int h = 0; h < ledger.num_regions(); ++h) {
          if (!ledger.cv_has(j, h)) continue;
          if (std::any_of(chosen.uploads.begin(), chosen.uploads.end(),
                          [&](const Link& l) { return l.second == h; }))
            continue;
          CachingAction candidate = with_upload(chosen, {j, h});
          const double value = evaluate(ledger, candidate, ctx, params);
          if (value > best_value) {
            best_value = value;
            best = std::move(candidate);
            found = true;
          }
        }
      }
    }
    if (room_total && static_cast<int>(chosen.updates.size()) < limits.rsu) {
      for (int k = 0; k < ledger.num_rsus; ++k) {
        if (std::any_of(chosen.updates.begin(), chosen.updates.end(),
                        [&](const Link& l) { return l.first == k; }))
          continue;
        const int rpr = ledger.regions_per_rsu();
        for (int h = k * rpr; h < (k + 1) * rpr; ++h) {
          CachingAction candidate = with_update(chosen, {k, h});
          const double value = evaluate(ledger, candidate, ctx, params);
          if (value > best_value) {
            best_value = value;
            best = std::move(candidate);
            found = true;
          }
        }
      }
    }
    if (!found) break;
    chosen = std::move(best);
    base = best_value;
  }
  return chosen;
}

}  // namespace

CachingAction myopic_caching_policy(const AoiLedger& ledger, const CachingContext& ctx,
                                    const UtilityParams& params, const ChannelLimits& limits,
                                    const MyopicOptions& options) {
  const std::size_t count = count_actions(ledger, limits, options.exhaustive_bound + 1);
  if (count > options.exhaustive_bound) {
    return greedy_marginal(ledger, ctx, params, limits);
  }
  const std::vector<CachingAction> actions = enumerate_actions(ledger, limits);
  std::vector<double> utility(actions.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(actions.size()); ++i) {
    utility[i] = evaluate(ledger, actions[i], ctx, params);
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < actions.size(); ++i) {
    if (utility[i] > utility[best]) best = i;  // strict: first maximum wins
  }
  return actions[best];
}

CachingAction aoi_greedy_policy(const AoiLedger& ledger, const ChannelLimits& limits) {
  struct Candidate {
    int reduction;
    bool is_update;
    Link link;
  };
  std::vector<Candidate> candidates;
  for (int j = 0; j < ledger.num_cvs; ++j) {
    for (int h = 0; h < ledger.num_regions(); ++h) {
      if (!ledger.cv_has(j, h)) continue;
      // System-wide age sum: the upload replaces the MBS copy with the CV's
      // and the CV copy leaves the sum, so the item's own age cancels out.
      // The stalest central copy wins regardless of how old the item is.
      candidates.push_back({ledger.mbs[h], false, {j, h}});
    }
  }
  for (int h = 0; h < ledger.num_regions(); ++h) {
    candidates.push_back({ledger.rsu[h] - ledger.mbs[h], true, {ledger.region_owner(h), h}});
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.reduction != b.reduction) return a.reduction > b.reduction;
    if (a.is_update != b.is_update) return !a.is_update;  // uploads first on ties
    return a.link < b.link;
  });

  CachingAction action;
  std::vector<char> cv_used(ledger.num_cvs, 0);
  std::vector<char> rsu_used(ledger.num_rsus, 0);
  std::vector<char> region_uploaded(ledger.num_regions(), 0);
  for (const Candidate& c : candidates) {
    if (c.reduction <= 0) break;
    if (action.link_count() >= limits.total) break;
    if (c.is_update) {
      if (static_cast<int>(action.updates.size()) >= limits.rsu) continue;
      if (rsu_used[c.link.first]) continue;
      rsu_used[c.link.first] = 1;
      action = with_update(std::move(action), c.link);
    } else {
      if (static_cast<int>(action.uploads.size()) >= limits.cv) continue;
      if (cv_used[c.link.first] || region_uploaded[c.link.second]) continue;
      cv_used[c.link.first] = 1;
      region_uploaded[c.link.second] = 1;
      action = with_upload(std::move(action), c.link);
    }
  }
  return action;
}

CachingAction random_policy(const AoiLedger& ledger, const ChannelLimits& limits,
                            Rng& rng, std::size_t enumerate_bound) {
  if (auto actions = enumerate_actions_bounded(ledger, limits, enumerate_bound)) {
    return (*actions)[draw_int(rng, 0, static_cast<int>(actions->size()) - 1)];
  }
  // Too many actions to draw uniformly. Draw a channel budget uniformly in
  // [0, H] and fill it with uniformly chosen feasible links, which keeps the
  // baseline's transfer rate at about half the channel budget instead of
  // pinning it to the cap the way a uniform draw over the set would.
  CachingAction action;
  std::vector<char> cv_used(ledger.num_cvs, 0);
  std::vector<char> rsu_used(ledger.num_rsus, 0);
  std::vector<char> region_uploaded(ledger.num_regions(), 0);
  const int budget = draw_int(rng, 0, limits.total);
  const int rpr = ledger.regions_per_rsu();
  for (int pick = 0; pick < budget; ++pick) {
    std::vector<Link> candidates;
    std::size_t upload_count = 0;
    if (static_cast<int>(action.uploads.size()) < limits.cv) {
      for (int j = 0; j < ledger.num_cvs; ++j) {
        if (cv_used[j]) continue;
        for (int h = 0; h < ledger.num_regions(); ++h) {
          if (ledger.cv_has(j, h) && !region_uploaded[h]) candidates.push_back({j, h});
        }
      }
      upload_count = candidates.size();
    }
    if (static_cast<int>(action.updates.size()) < limits.rsu) {
      for (int k = 0; k < ledger.num_rsus; ++k) {
        if (rsu_used[k]) continue;
        for (int h = k * rpr; h < (k + 1) * rpr; ++h) candidates.push_back({k, h});
      }
    }
    if (candidates.empty()) break;
    const std::size_t c =
        static_cast<std::size_t>(draw_int(rng, 0, static_cast<int>(candidates.size()) - 1));
    if (c < upload_count) {
      cv_used[candidates[c].first] = 1;
      region_uploaded[candidates[c].second] = 1;
      action = with_upload(std::move(action), candidates[c]);
    } else {
      rsu_used[candidates[c].first] = 1;
      action = with_update(std::move(action), candidates[c]);
    }
  }
  return action;
}

double calibrate_aoi_scale(const AoiLedger& ledger, const CachingContext& ctx,
                           const UtilityParams& params, const ChannelLimits& limits) {
  if (params.epsilon <= 0.0 || params.epsilon >= 1.0) return 1.0;
  const AoiLedger idle = advance_aoi(ledger, {}, {}, {});
  const double idle_freshness = freshness_term(idle, ctx, params);

  double gain_sum = 0.0, cost_sum = 0.0;
  int links = 0;
  auto consider = [&](const CachingAction& single, double cost) {
    const AoiLedger next =
        advance_aoi(ledger, single.uploads, single.updates, {});
    const double gain = freshness_term(next, ctx, params) - idle_freshness;
    if (gain <= 0.0) return;
    gain_sum += gain;
    cost_sum += cost;
    ++links;
  };
  for (int j = 0; j < ledger.num_cvs && j < static_cast<int>(ctx.cv_distance.size()); ++j) {
    for (int h = 0; h < ledger.num_regions(); ++h) {
      if (!ledger.cv_has(j, h)) continue;
      CachingAction single;
      single.uploads.push_back({j, h});
      consider(single, upload_cost(ctx, j));
    }
  }
  (void)limits;
  for (int h = 0; h < ledger.num_regions(); ++h) {
    const int k = ledger.region_owner(h);
    CachingAction single;
    single.updates.push_back({k, h});
    consider(single, update_cost(ctx, params, k, h));
  }
  if (links == 0 || gain_sum <= 0.0) return 1.0;
  const double mean_gain = gain_sum / links;
  const double mean_cost = cost_sum / links;
  return ((1.0 - params.epsilon) * mean_cost) / (params.epsilon * mean_gain);
}

}  // namespace aoicache
