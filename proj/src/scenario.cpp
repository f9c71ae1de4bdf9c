#include "aoicache/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aoicache {
namespace {

// Stream tags; the draw schedule of each stream is fixed by the slot loop so
// replays agree for any policy or weight selection.
constexpr std::uint64_t kKindsTag = 1;
constexpr std::uint64_t kVehiclesTag = 2;
constexpr std::uint64_t kLedgerTag = 3;
constexpr std::uint64_t kRequestsTag = 4;
constexpr std::uint64_t kPolicyTag = 5;

CachingContext build_context(const WorldState& world, const RoadLayout& layout,
                             int uv_count, int cv_count) {
  CachingContext ctx;
  ctx.cv_distance.reserve(cv_count);
  for (int j = 0; j < cv_count; ++j) {
    const VehicleState& v = world.vehicles[uv_count + j];
    ctx.cv_distance.push_back(link_distance({v.position, 0.0}, layout.mbs_position));
  }
  ctx.rsu_distance.reserve(layout.num_rsus());
  for (const Vec2& pos : layout.rsu_positions) {
    ctx.rsu_distance.push_back(link_distance(pos, layout.mbs_position));
  }
  ctx.popularity = world.popularity;
  return ctx;
}

bool queue_expired(const RequestQueue& q, int uv_region, const RoadLayout& layout) {
  // Past the target, or wrapped into another RSU's span.
  return uv_region > q.target_region || layout.rsu_of_region(uv_region) != q.rsu_id;
}

}  // namespace

const char* stage1_name(Stage1Policy p) {
  switch (p) {
    case Stage1Policy::Proposed: return "proposed";
    case Stage1Policy::AoiGreedy: return "aoi-greedy";
    case Stage1Policy::Random: return "random";
  }
  return "?";
}

const char* stage2_name(Stage2Policy p) {
  switch (p) {
    case Stage2Policy::Dpp: return "dpp";
    case Stage2Policy::LatencyOnly: return "latency-only";
    case Stage2Policy::CostOnly: return "cost-only";
  }
  return "?";
}

void ScenarioConfig::validate() const {
  if (!(road_length_m > 0.0)) throw std::invalid_argument("config: road_length_m must be positive");
  if (rsu_count < 1) throw std::invalid_argument("config: rsu_count must be positive");
  if (regions_per_rsu < 1) throw std::invalid_argument("config: regions_per_rsu must be positive");
  if (lane_speeds_kmh.empty()) throw std::invalid_argument("config: need at least one lane");
  for (double v : lane_speeds_kmh) {
    if (v < 0.0) throw std::invalid_argument("config: lane speeds must be non-negative");
  }
  if (!(slot_seconds > 0.0)) throw std::invalid_argument("config: slot_seconds must be positive");
  if (uv_count < 1) throw std::invalid_argument("config: uv_count must be positive");
  if (cv_count < 0) throw std::invalid_argument("config: cv_count must be non-negative");
  if (horizon < 0) throw std::invalid_argument("config: horizon must be non-negative");
  if (request_prob < 0.0 || request_prob > 1.0) {
    throw std::invalid_argument("config: request_prob must lie in [0, 1]");
  }
  if (!region_kinds.empty() &&
      static_cast<int>(region_kinds.size()) != rsu_count * regions_per_rsu) {
    throw std::invalid_argument("config: region_kinds must list every region");
  }
  for (int m : aoi_max_by_kind) {
    if (m <= 0) throw std::invalid_argument("config: validity thresholds must be positive");
  }
  if (popularity_window < 1) throw std::invalid_argument("config: popularity_window must be positive");
  if (utility.epsilon < 0.0 || utility.epsilon > 1.0) {
    throw std::invalid_argument("config: epsilon must lie in [0, 1]");
  }
  if (!(utility.popularity_floor > 0.0)) {
    throw std::invalid_argument("config: popularity_floor must be positive");
  }
  if (!(utility.aoi_scale > 0.0)) throw std::invalid_argument("config: w must be positive");
  if (!(aoi_scale_factor > 0.0)) throw std::invalid_argument("config: w_scale must be positive");
  if (limits.total < 0 || limits.cv < 0 || limits.rsu < 0) {
    throw std::invalid_argument("config: channel limits must be non-negative");
  }
  if (dpp.cost_weight < 0.0) throw std::invalid_argument("config: v must be non-negative");
  if (dpp.h_uv_limit < 0) throw std::invalid_argument("config: h_uv_limit must be non-negative");
}

RoadLayout build_layout(const ScenarioConfig& config) {
  std::vector<RegionKind> kinds = config.region_kinds;
  if (kinds.empty()) {
    Rng rng = make_stream(config.seed, kKindsTag);
    const int n = config.rsu_count * config.regions_per_rsu;
    kinds.reserve(n);
    for (int h = 0; h < n; ++h) {
      kinds.push_back(static_cast<RegionKind>(draw_int(rng, 0, 3)));
    }
  }
  return make_layout(config.road_length_m, config.rsu_count, config.regions_per_rsu,
                     kinds, config.lane_speeds_kmh, config.aoi_max_by_kind,
                     config.slot_seconds);
}

WorldState init_world(const ScenarioConfig& config, const RoadLayout& layout) {
  WorldState world;
  Rng vehicle_rng = make_stream(config.seed, kVehiclesTag);
  const int total = config.uv_count + config.cv_count;
  world.vehicles.reserve(total);
  for (int id = 0; id < total; ++id) {
    VehicleState v;
    v.id = id;
    v.role = id < config.uv_count ? VehicleRole::UserVehicle : VehicleRole::ContentVehicle;
    v.position = draw_unit(vehicle_rng) * layout.total_length_m;
    if (v.position >= layout.total_length_m) v.position = 0.0;
    v.lane = draw_int(vehicle_rng, 0, static_cast<int>(layout.lane_speeds.size()) - 1);
    v.speed = layout.lane_speeds[v.lane];
    world.vehicles.push_back(v);
  }
  Rng ledger_rng = make_stream(config.seed, kLedgerTag);
  world.ledger = random_initial_ledger(config.cv_count, config.rsu_count,
                                       layout.aoi_max, ledger_rng);
  world.popularity.assign(layout.num_regions(), 1.0 / layout.regions_per_rsu());
  return world;
}

std::vector<PassEvent> step_world(WorldState& world, const RoadLayout& layout) {
  std::vector<PassEvent> events;
  const double rl = layout.region_length_m;
  const int regions = layout.num_regions();
  int cv_index = 0;
  for (VehicleState& v : world.vehicles) {
    const double old_pos = v.position;
    const double raw = old_pos + v.speed;
    if (v.role == VehicleRole::ContentVehicle) {
      // Every region boundary inside (old, raw] means the CV finished that
      // region this slot and carries a fresh item for it.
      for (int m = static_cast<int>(old_pos / rl) + 1; m * rl <= raw; ++m) {
        events.push_back({cv_index, (m - 1) % regions});
      }
    }
    v.position = std::fmod(raw, layout.total_length_m);
    if (v.role == VehicleRole::ContentVehicle) ++cv_index;
  }
  ++world.clock;
  return events;
}

std::vector<RequestQueue> generate_requests(const WorldState& world,
                                            const RoadLayout& layout,
                                            const ScenarioConfig& config,
                                            Rng& request_rng) {
  std::vector<char> busy(config.uv_count, 0);
  for (const RequestQueue& q : world.queues) busy[q.uv_id] = 1;
  std::vector<RequestQueue> fresh;
  for (int i = 0; i < config.uv_count; ++i) {
    // Both draws are consumed every slot for every UV, used or not.
    const double issue = draw_unit(request_rng);
    const std::uint64_t raw = request_rng();
    if (busy[i] || issue >= config.request_prob) continue;
    const int uv_region = region_at(layout, world.vehicles[i].position);
    const int rsu = layout.rsu_of_region(uv_region);
    const int span_end = layout.first_region_of_rsu(rsu) + layout.regions_per_rsu();
    const int ahead = span_end - uv_region;  // target at or ahead, same span
    RequestQueue q;
    q.uv_id = i;
    q.rsu_id = rsu;
    q.target_region = uv_region + static_cast<int>(raw % ahead);
    q.backlog = 0.0;
    q.created_at = world.clock;
    fresh.push_back(q);
  }
  return fresh;
}

void update_popularity(WorldState& world, const RoadLayout& layout,
                       const ScenarioConfig& config) {
  while (!world.request_window.empty() &&
         world.request_window.front().first <= world.clock - config.popularity_window) {
    world.request_window.pop_front();
  }
  std::vector<int> counts(layout.num_regions(), 0);
  for (const auto& [slot, region] : world.request_window) ++counts[region];
  const double lambda = config.utility.popularity_floor * config.popularity_window;
  const int rpr = layout.regions_per_rsu();
  for (int k = 0; k < layout.num_rsus(); ++k) {
    int total = 0;
    for (int h = k * rpr; h < (k + 1) * rpr; ++h) total += counts[h];
    const double denom = total + lambda * rpr;
    for (int h = k * rpr; h < (k + 1) * rpr; ++h) {
      world.popularity[h] = (counts[h] + lambda) / denom;
    }
  }
}

double resolve_cost_weight(const ScenarioConfig& config, const RoadLayout& layout) {
  if (config.v_preset == VPreset::Custom) return config.dpp.cost_weight;
  // Mean UV-RSU distance over one span (all spans are congruent).
  const double span = layout.total_length_m / layout.num_rsus();
  const Vec2 rsu = layout.rsu_positions.front();
  double mean_distance = 0.0;
  const int samples = 101;
  for (int i = 0; i < samples; ++i) {
    const double x = span * i / (samples - 1);
    mean_distance += link_distance({x, 0.0}, rsu);
  }
  mean_distance /= samples;
  double mean_speed = 0.0;
  for (double v : layout.lane_speeds) mean_speed += v;
  mean_speed /= layout.lane_speeds.size();
  const double traversal_slots = layout.region_length_m / std::max(mean_speed, 1e-9);
  const double half_wait = traversal_slots / 2.0;
  // Serve once backlog^2 exceeds weight*distance, so this weight makes the
  // mean-distance request serveable after half a region traversal.
  const double v0 = half_wait * half_wait / std::max(mean_distance, 1e-9);
  switch (config.v_preset) {
    case VPreset::Light: return v0 / 10.0;
    case VPreset::Normal: return v0;
    case VPreset::Heavy: return v0 * 10.0;
    case VPreset::Custom: break;
  }
  return v0;
}

MetricsLog run_scenario(const ScenarioConfig& config) {
  config.validate();
  const RoadLayout layout = build_layout(config);
  WorldState world = init_world(config, layout);
  Rng request_rng = make_stream(config.seed, kRequestsTag);
  Rng policy_rng = make_stream(config.seed, kPolicyTag);

  UtilityParams params = config.utility;
  DppParams dpp = config.dpp;
  dpp.cost_weight = resolve_cost_weight(config, layout);

  if (config.auto_aoi_scale) {
    // Calibrate on a fixed reference state (just-refreshed MBS copy, mid-life
    // RSU copy, one fresh CV item per region, mean link distances) so the
    // scale depends on the geometry alone and not on the seed's initial ages.
    AoiLedger reference = make_ledger(1, config.rsu_count, layout.aoi_max);
    for (int h = 0; h < reference.num_regions(); ++h) {
      reference.mbs[h] = 2;
      reference.rsu[h] = std::max(1, (layout.aoi_max[h] + 1) / 2);
      reference.cv_age(0, h) = 1;
    }
    CachingContext ref_ctx;
    double mean_cv_distance = 0.0;
    const int samples = 101;
    for (int i = 0; i < samples; ++i) {
      const double x = layout.total_length_m * i / (samples - 1.0);
      mean_cv_distance += link_distance({x, 0.0}, layout.mbs_position);
    }
    ref_ctx.cv_distance = {mean_cv_distance / samples};
    for (const Vec2& pos : layout.rsu_positions) {
      ref_ctx.rsu_distance.push_back(link_distance(pos, layout.mbs_position));
    }
    ref_ctx.popularity.assign(layout.num_regions(), 1.0 / layout.regions_per_rsu());
    params.aoi_scale = calibrate_aoi_scale(reference, ref_ctx, params, config.limits) *
                       config.aoi_scale_factor;
  }

  MetricsLog log;
  MyopicOptions myopic_options{config.exhaustive_bound};

  for (int slot = 1; slot <= config.horizon; ++slot) {
    const std::vector<PassEvent> passes = step_world(world, layout);

    std::vector<RequestQueue> fresh = generate_requests(world, layout, config, request_rng);
    for (const RequestQueue& q : fresh) {
      world.request_window.push_back({world.clock, q.target_region});
      world.queues.push_back(q);
    }
    update_popularity(world, layout, config);

    const CachingContext ctx =
        build_context(world, layout, config.uv_count, config.cv_count);
    CachingAction action;
    switch (config.stage1) {
      case Stage1Policy::Proposed:
        action = myopic_caching_policy(world.ledger, ctx, params, config.limits,
                                       myopic_options);
        break;
      case Stage1Policy::AoiGreedy:
        action = aoi_greedy_policy(world.ledger, config.limits);
        break;
      case Stage1Policy::Random:
        action = random_policy(world.ledger, config.limits, policy_rng,
                               config.exhaustive_bound);
        break;
    }
    const double caching_cost = transmission_cost(action, ctx, params);
    world.ledger = advance_aoi(world.ledger, action.uploads, action.updates, passes);

    int exceed_now = 0;
    for (int h = 0; h < layout.num_regions(); ++h) {
      if (world.ledger.rsu[h] > layout.aoi_max[h]) ++exceed_now;
    }

    // Queue validity: requests whose UV passed the target (or wrapped out of
    // the span) leave unserved; they still count as pending this slot.
    std::vector<RequestQueue> live;
    live.reserve(world.queues.size());
    SlotRow row;
    row.slot = slot;
    for (const RequestQueue& q : world.queues) {
      const int uv_region = region_at(layout, world.vehicles[q.uv_id].position);
      if (queue_expired(q, uv_region, layout)) {
        log.events.push_back(
            {slot, q.uv_id, q.rsu_id, q.target_region, false, 0.0, 0, false, true});
        ++log.summary.cost_save;
      } else {
        live.push_back(q);
      }
    }

    // Stage 2, independently per RSU.
    const int num_rsus = layout.num_rsus();
    std::vector<std::vector<ServiceEvent>> rsu_events(num_rsus);
    std::vector<std::vector<RequestQueue>> rsu_next(num_rsus);
#pragma omp parallel for schedule(static)
    for (int k = 0; k < num_rsus; ++k) {
      std::vector<RequestQueue> mine;
      std::vector<double> distances;
      for (const RequestQueue& q : live) {
        if (q.rsu_id != k) continue;
        mine.push_back(q);
        distances.push_back(link_distance({world.vehicles[q.uv_id].position, 0.0},
                                          layout.rsu_positions[k]));
      }
      ServiceDecision decision;
      switch (config.stage2) {
        case Stage2Policy::Dpp:
          decision = dpp_decide(mine, distances, world.ledger, dpp);
          break;
        case Stage2Policy::LatencyOnly:
          decision.action = latency_only_policy(mine, dpp.h_uv_limit);
          break;
        case Stage2Policy::CostOnly:
          decision.action = cost_only_policy(mine);
          break;
      }
      for (std::size_t i = 0; i < mine.size(); ++i) {
        const RequestQueue& q = mine[i];
        const bool served = decision.action.serves(q.uv_id);
        const bool blocked = std::binary_search(decision.stale_blocked.begin(),
                                                decision.stale_blocked.end(), q.uv_id);
        rsu_events[k].push_back({slot, q.uv_id, k, q.target_region, served,
                                 service_cost(served, distances[i]),
                                 received_aoi(world.ledger.rsu[q.target_region], served),
                                 blocked, false});
        const int uv_region = region_at(layout, world.vehicles[q.uv_id].position);
        if (auto next = queue_step(q, served, uv_region)) {
          rsu_next[k].push_back(*next);
        }
      }
    }

    world.queues.clear();
    for (int k = 0; k < num_rsus; ++k) {
      for (const ServiceEvent& ev : rsu_events[k]) {
        log.events.push_back(ev);
        if (ev.served) {
          ++row.served;
          ++log.summary.service_success;
          row.service_cost += ev.cost;
        } else {
          ++log.summary.cost_save;
          if (ev.stale_blocked) {
            ++row.stale_blocks;
            ++log.summary.stale_blocks;
          }
        }
      }
      for (const RequestQueue& q : rsu_next[k]) world.queues.push_back(q);
    }

    row.uploads = static_cast<int>(action.uploads.size());
    row.updates = static_cast<int>(action.updates.size());
    row.caching_cost = caching_cost;
    row.aoi_exceed = exceed_now;
    row.rsu_aoi = world.ledger.rsu;
    row.uv_backlog.assign(config.uv_count, 0.0);
    for (const RequestQueue& q : world.queues) row.uv_backlog[q.uv_id] = q.backlog;

    log.summary.uploads += row.uploads;
    log.summary.updates += row.updates;
    log.summary.aoi_max_exceed += exceed_now;
    log.summary.caching_cost_total += caching_cost;
    log.summary.service_cost_total += row.service_cost;
    log.rows.push_back(std::move(row));

    if (slot % 10 == 0) {
      for (int kind = 0; kind < 4; ++kind) {
        double sum = 0.0;
        int count = 0, min_age = 0, max_age = 0;
        for (int h = 0; h < layout.num_regions(); ++h) {
          if (static_cast<int>(layout.regions[h]) != kind) continue;
          const int age = world.ledger.rsu[h];
          if (count == 0) {
            min_age = max_age = age;
          } else {
            min_age = std::min(min_age, age);
            max_age = std::max(max_age, age);
          }
          sum += age;
          ++count;
        }
        if (count > 0) {
          log.kind_stats.push_back({slot, static_cast<RegionKind>(kind),
                                    sum / count, min_age, max_age});
        }
      }
    }
  }
  return log;
}

}  // namespace aoicache
