#include "aoicache/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace aoicache {
namespace {

// One-state Bellman backup against the previous table. The accumulation
// order over outcomes is the stored order, so results do not depend on the
// thread schedule.
double backup(const ExplicitMdp& mdp, const std::vector<double>& values,
              std::size_t s, double gamma, int* best_action) {
  const auto& actions = mdp.states[s];
  if (actions.empty()) {
    if (best_action) *best_action = -1;
    return 0.0;
  }
  double best = 0.0;
  int best_idx = -1;
  for (std::size_t a = 0; a < actions.size(); ++a) {
    double q = actions[a].reward;
    for (const MdpOutcome& o : actions[a].outcomes) {
      q += gamma * o.prob * values[o.next];
    }
    if (best_idx < 0 || q > best) {  // strict: lowest index wins ties
      best = q;
      best_idx = static_cast<int>(a);
    }
  }
  if (best_action) *best_action = best_idx;
  return best;
}

ValueIterationResult run_value_iteration(const ExplicitMdp& mdp, const MdpConfig& config,
                                         bool parallel) {
  if (mdp.num_states() > config.max_states) {
    throw std::invalid_argument("value_iteration: state count exceeds the configured budget");
  }
  if (!(config.gamma >= 0.0 && config.gamma < 1.0)) {
    throw std::invalid_argument("value_iteration: discount must lie in [0, 1)");
  }
  if (!(config.theta > 0.0)) {
    throw std::invalid_argument("value_iteration: convergence threshold must be positive");
  }
  for (const auto& actions : mdp.states) {
    for (const MdpAction& a : actions) {
      for (const MdpOutcome& o : a.outcomes) {
        if (o.next >= mdp.num_states()) {
          throw std::invalid_argument("value_iteration: outcome index out of range");
        }
      }
    }
  }

  const long long n = static_cast<long long>(mdp.num_states());
  ValueIterationResult result;
  result.values.assign(mdp.num_states(), 0.0);
  std::vector<double> next_values(mdp.num_states(), 0.0);

  for (int sweep = 0; sweep < config.max_sweeps; ++sweep) {
    if (parallel) {
#pragma omp parallel for schedule(static)
      for (long long s = 0; s < n; ++s) {
        next_values[s] = backup(mdp, result.values, s, config.gamma, nullptr);
      }
    } else {
      for (long long s = 0; s < n; ++s) {
        next_values[s] = backup(mdp, result.values, s, config.gamma, nullptr);
      }
    }
    double residual = 0.0;
    for (long long s = 0; s < n; ++s) {
      residual = std::max(residual, std::abs(next_values[s] - result.values[s]));
    }
    result.values.swap(next_values);
    result.residuals.push_back(residual);
    ++result.sweeps;
    if (residual < config.theta) break;
  }

  result.policy.assign(mdp.num_states(), -1);
  for (long long s = 0; s < n; ++s) {
    int a = -1;
    backup(mdp, result.values, s, config.gamma, &a);
    result.policy[s] = a;
  }
  return result;
}

}  // namespace

ValueIterationResult value_iteration(const ExplicitMdp& mdp, const MdpConfig& config) {
  return run_value_iteration(mdp, config, true);
}

ValueIterationResult value_iteration_serial(const ExplicitMdp& mdp, const MdpConfig& config) {
  return run_value_iteration(mdp, config, false);
}

std::vector<double> finite_horizon_values(const ExplicitMdp& mdp, double gamma, int horizon) {
  std::vector<double> values(mdp.num_states(), 0.0);
  std::vector<double> next(mdp.num_states(), 0.0);
  for (int step = 0; step < horizon; ++step) {
    for (std::size_t s = 0; s < mdp.num_states(); ++s) {
      next[s] = backup(mdp, values, s, gamma, nullptr);
    }
    values.swap(next);
  }
  return values;
}

std::size_t MicroInstance::num_states() const {
  const std::size_t per_region = static_cast<std::size_t>(aoi_cap + 1) * aoi_cap * aoi_cap;
  std::size_t n = 1;
  for (std::size_t h = 0; h < aoi_max.size(); ++h) n *= per_region;
  return n;
}

AoiLedger MicroInstance::state_ledger(std::size_t index) const {
  AoiLedger ledger = make_ledger(1, 1, aoi_max);
  const std::size_t cv_radix = static_cast<std::size_t>(aoi_cap + 1);
  for (int h = 0; h < ledger.num_regions(); ++h) {
    const std::size_t cv_digit = index % cv_radix;
    index /= cv_radix;
    const std::size_t mbs_digit = index % aoi_cap;
    index /= aoi_cap;
    const std::size_t rsu_digit = index % aoi_cap;
    index /= aoi_cap;
    ledger.cv_age(0, h) = cv_digit == 0 ? kNoContent : static_cast<int>(cv_digit);
    ledger.mbs[h] = static_cast<int>(mbs_digit) + 1;
    ledger.rsu[h] = static_cast<int>(rsu_digit) + 1;
  }
  return ledger;
}

std::size_t MicroInstance::state_index(const AoiLedger& ledger) const {
  std::size_t index = 0;
  std::size_t scale = 1;
  const std::size_t cv_radix = static_cast<std::size_t>(aoi_cap + 1);
  for (int h = 0; h < ledger.num_regions(); ++h) {
    const int cv_digit = ledger.cv_has(0, h) ? ledger.cv_age(0, h) : 0;
    index += scale * cv_digit;
    scale *= cv_radix;
    index += scale * (ledger.mbs[h] - 1);
    scale *= aoi_cap;
    index += scale * (ledger.rsu[h] - 1);
    scale *= aoi_cap;
  }
  return index;
}

std::vector<CachingAction> MicroInstance::state_actions(const AoiLedger& ledger) const {
  return enumerate_actions(ledger, limits);
}

CachingContext MicroInstance::context() const {
  CachingContext ctx;
  ctx.cv_distance = {cv_distance};
  ctx.rsu_distance = {rsu_distance};
  ctx.popularity = popularity;
  return ctx;
}

ExplicitMdp build_micro_mdp(const MicroInstance& micro, std::size_t max_states) {
  const int regions = static_cast<int>(micro.aoi_max.size());
  if (regions == 0 || micro.aoi_cap < 1) {
    throw std::invalid_argument("micro mdp: need at least one region and a positive cap");
  }
  for (int m : micro.aoi_max) {
    if (m < 1 || m > micro.aoi_cap) {
      throw std::invalid_argument("micro mdp: validity thresholds must lie in [1, aoi_cap]");
    }
  }
  if (static_cast<int>(micro.popularity.size()) != regions) {
    throw std::invalid_argument("micro mdp: popularity size mismatch");
  }
  if (micro.arrival_prob < 0.0 || micro.arrival_prob > 1.0) {
    throw std::invalid_argument("micro mdp: arrival probability out of range");
  }
  const std::size_t n = micro.num_states();
  if (n > max_states) {
    throw std::invalid_argument("micro mdp: state space exceeds the configured budget");
  }

  const CachingContext ctx = micro.context();
  ExplicitMdp mdp;
  mdp.states.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    const AoiLedger ledger = micro.state_ledger(s);
    const std::vector<CachingAction> actions = enumerate_actions(ledger, micro.limits);
    mdp.states[s].reserve(actions.size());
    for (const CachingAction& action : actions) {
      AoiLedger next = advance_aoi(ledger, action.uploads, action.updates, {});
      MdpAction entry;
      // Reward is priced on the un-capped successor, matching what the
      // myopic policy computes from the same ledger.
      entry.reward = caching_utility(next, action, ctx, micro.params);
      for (int h = 0; h < regions; ++h) {
        next.mbs[h] = std::min(next.mbs[h], micro.aoi_cap);
        next.rsu[h] = std::min(next.rsu[h], micro.aoi_cap);
      }
      // Independent Bernoulli arrival per region; merged by successor index.
      std::map<std::size_t, double> outcomes;
      const int masks = 1 << regions;
      for (int mask = 0; mask < masks; ++mask) {
        double prob = 1.0;
        AoiLedger branch = next;
        for (int h = 0; h < regions; ++h) {
          if (mask & (1 << h)) {
            prob *= micro.arrival_prob;
            branch.cv_age(0, h) = 1;
          } else {
            prob *= 1.0 - micro.arrival_prob;
          }
        }
        if (prob <= 0.0) continue;
        outcomes[micro.state_index(branch)] += prob;
      }
      entry.outcomes.reserve(outcomes.size());
      for (const auto& [idx, prob] : outcomes) entry.outcomes.push_back({idx, prob});
      mdp.states[s].push_back(std::move(entry));
    }
  }
  return mdp;
}

std::string mdp_to_json(const ExplicitMdp& mdp) {
  nlohmann::json root;
  root["format"] = "explicit-mdp-v1";
  nlohmann::json states = nlohmann::json::array();
  for (const auto& actions : mdp.states) {
    nlohmann::json state = nlohmann::json::array();
    for (const MdpAction& a : actions) {
      nlohmann::json entry;
      entry["reward"] = a.reward;
      nlohmann::json outs = nlohmann::json::array();
      for (const MdpOutcome& o : a.outcomes) {
        outs.push_back(nlohmann::json::array({o.next, o.prob}));
      }
      entry["outcomes"] = std::move(outs);
      state.push_back(std::move(entry));
    }
    states.push_back(std::move(state));
  }
  root["states"] = std::move(states);
  return root.dump(2);
}

ExplicitMdp mdp_from_json(const std::string& text) {
  nlohmann::json root = nlohmann::json::parse(text);
  if (root.value("format", "") != "explicit-mdp-v1") {
    throw std::runtime_error("mdp_from_json: unknown format tag");
  }
  ExplicitMdp mdp;
  for (const auto& state : root.at("states")) {
    std::vector<MdpAction> actions;
    for (const auto& entry : state) {
      MdpAction a;
      a.reward = entry.at("reward").get<double>();
      for (const auto& o : entry.at("outcomes")) {
        a.outcomes.push_back({o.at(0).get<std::size_t>(), o.at(1).get<double>()});
      }
      actions.push_back(std::move(a));
    }
    mdp.states.push_back(std::move(actions));
  }
  for (const auto& actions : mdp.states) {
    for (const MdpAction& a : actions) {
      for (const MdpOutcome& o : a.outcomes) {
        if (o.next >= mdp.num_states()) {
          throw std::runtime_error("mdp_from_json: outcome index out of range");
        }
      }
    }
  }
  return mdp;
}

void save_mdp(const ExplicitMdp& mdp, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_mdp: cannot open " + path);
  out << mdp_to_json(mdp) << '\n';
  if (!out) throw std::runtime_error("save_mdp: write failed for " + path);
}

ExplicitMdp load_mdp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_mdp: cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return mdp_from_json(buffer.str());
}

}  // namespace aoicache
