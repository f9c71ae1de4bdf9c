#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "aoicache/aoi_ledger.hpp"
#include "aoicache/rng.hpp"

namespace aoicache {

// One slot's transfer selection: CV->MBS uploads and MBS->RSU updates.
// Feasible actions satisfy, per slot: at most one upload per CV, at most one
// CV uploading a given region, at most one update per RSU, and the channel
// budget (total plus separate upload/update caps).
struct CachingAction {
  std::vector<Link> uploads;  // (cv, region), ascending
  std::vector<Link> updates;  // (rsu, region), ascending

  bool empty() const { return uploads.empty() && updates.empty(); }
  int link_count() const { return static_cast<int>(uploads.size() + updates.size()); }
  bool operator==(const CachingAction&) const = default;
};

struct ChannelLimits {
  int total = 6;
  int cv = 3;   // simultaneous uploads
  int rsu = 3;  // simultaneous updates
};

struct UtilityParams {
  // Balance between the freshness utility and the transmission cost; 1.0
  // scores freshness only.
  double epsilon = 0.5;
  // Scale matching the freshness term to the cost term's magnitude.
  double aoi_scale = 1.0;
  // Per-content weight in the freshness sum. Uniform spreads the weight
  // evenly; AoiShare weights each copy by its share of the total layer age,
  // which turns the sum into a pure total-age criterion.
  enum class WeightMode { Uniform, AoiShare } weight_mode = WeightMode::Uniform;
  // Shape of the per-copy freshness score. ThresholdRatio scores
  // threshold/age, which rewards keeping high-threshold regions extremely
  // fresh. ValidityFraction scores (threshold - age)/threshold, the fraction
  // of the copy's validity still remaining, which pays the same for a slot of
  // validity in every region and so favours rescuing copies near or past
  // their threshold. Full-scale runs use ValidityFraction; the ratio form is
  // the default contract.
  enum class FreshnessModel { ThresholdRatio, ValidityFraction } freshness_model =
      FreshnessModel::ThresholdRatio;
  // Lower bound applied to popularity when it divides the update cost.
  double popularity_floor = 0.01;
  // Weight of the MBS freshness term. With 0 the utility scores RSU copies
  // only and a one-step maximizer never uploads (an upload pays its cost this
  // slot while the RSU payoff needs a later update); full-scale runs set this
  // positive so the myopic policy keeps the central store fresh.
  double mbs_term_weight = 0.0;
};

// Slot snapshot the caching decisions price links against.
struct CachingContext {
  std::vector<double> cv_distance;   // CV <-> MBS, metres, per CV
  std::vector<double> rsu_distance;  // RSU <-> MBS, metres, per RSU
  std::vector<double> popularity;    // per region; sums to 1 over each RSU's span
};

bool action_feasible(const AoiLedger& ledger, const CachingAction& action,
                     const ChannelLimits& limits);

// Number of feasible actions, stopping early once `bail_at` is reached.
std::size_t count_actions(const AoiLedger& ledger, const ChannelLimits& limits,
                          std::size_t bail_at);

// Every feasible action in a canonical order (the all-zero action first).
// The order is the tie-break shared by the solvers and the myopic policy.
std::vector<CachingAction> enumerate_actions(const AoiLedger& ledger,
                                             const ChannelLimits& limits);

// enumerate_actions, or nullopt when the feasible set exceeds `max_actions`.
std::optional<std::vector<CachingAction>> enumerate_actions_bounded(
    const AoiLedger& ledger, const ChannelLimits& limits, std::size_t max_actions);

// Caching utility of the post-action ledger: epsilon-weighted freshness gain
// (threshold-to-age ratio, weighted and popularity-scaled) minus the
// (1-epsilon)-weighted transmission cost of the chosen links.
double caching_utility(const AoiLedger& next, const CachingAction& action,
                       const CachingContext& ctx, const UtilityParams& params);

/// Upload cost is the CV distance; update cost is the RSU distance divided by
/// the (floored) popularity of the region's content.
double transmission_cost(const CachingAction& action, const CachingContext& ctx,
                         const UtilityParams& params);

struct TransitionResult {
  AoiLedger next;
  double cost = 0.0;
};

/// Applies the action to the ledger (no pass events) and prices it.
/// Throws std::invalid_argument on an infeasible action.
TransitionResult transition(const AoiLedger& ledger, const CachingAction& action,
                            const CachingContext& ctx, const UtilityParams& params);

struct MyopicOptions {
  // Exhaustive one-step search up to this many feasible actions; above it the
  // policy falls back to greedy marginal-gain link selection.
  std::size_t exhaustive_bound = 20000;
};

// One-step utility maximizer. Exhaustive search ties break on the canonical
// enumeration order, the greedy fallback on ascending (index, region).
CachingAction myopic_caching_policy(const AoiLedger& ledger, const CachingContext& ctx,
                                    const UtilityParams& params, const ChannelLimits& limits,
                                    const MyopicOptions& options = {});

// Picks the links with the largest raw age reductions (RSU age minus MBS age
// for updates, MBS age minus CV age for uploads), ignoring validity
// thresholds and cost. Only strictly positive reductions are taken.
CachingAction aoi_greedy_policy(const AoiLedger& ledger, const ChannelLimits& limits);

// Uniform draw from the feasible set when it enumerates within
// `enumerate_bound`; otherwise a seeded random construction that keeps only
// constraint-respecting links.
CachingAction random_policy(const AoiLedger& ledger, const ChannelLimits& limits,
                            Rng& rng, std::size_t enumerate_bound = 20000);

// Scale for UtilityParams::aoi_scale equalizing the mean single-link
// freshness gain against the mean single-link weighted cost in the given
// state. Returns 1.0 when no link yields a positive gain.
double calibrate_aoi_scale(const AoiLedger& ledger, const CachingContext& ctx,
                           const UtilityParams& params, const ChannelLimits& limits);

}  // namespace aoicache
