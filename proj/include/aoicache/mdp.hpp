#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "aoicache/caching.hpp"

namespace aoicache {

// Explicit finite MDP: per state a list of actions, each with an immediate
// reward and an outcome distribution over successor states.
struct MdpOutcome {
  std::size_t next = 0;
  double prob = 1.0;
};

struct MdpAction {
  double reward = 0.0;
  std::vector<MdpOutcome> outcomes;
};

struct ExplicitMdp {
  std::vector<std::vector<MdpAction>> states;
  std::size_t num_states() const { return states.size(); }
};

struct MdpConfig {
  double gamma = 0.9;          // discount, in [0, 1)
  double theta = 1e-6;         // convergence threshold on the sweep residual
  std::size_t max_states = 200000;  // refuse larger models
  int max_sweeps = 1000000;
};

struct ValueIterationResult {
  std::vector<double> values;
  std::vector<int> policy;        // greedy action index, lowest index on ties
  std::vector<double> residuals;  // max value change per sweep
  int sweeps = 0;
};

// Jacobi-style value iteration: each sweep computes the new table from the
// previous one, so the result is bit-identical for any thread count. The
// parallel variant splits the sweep across states with OpenMP; the serial
// variant is the reference the tests compare against. Throws
// std::invalid_argument when the state count exceeds config.max_states.
ValueIterationResult value_iteration(const ExplicitMdp& mdp, const MdpConfig& config);
ValueIterationResult value_iteration_serial(const ExplicitMdp& mdp, const MdpConfig& config);

/// Value table after `horizon` applications of the Bellman operator to the
/// all-zero table (finite-horizon optimal values).
std::vector<double> finite_horizon_values(const ExplicitMdp& mdp, double gamma,
                                          int horizon);

// Small caching scenario with one CV and one RSU, discretized by capping
// every age at aoi_cap, used to solve the caching stage exactly. Fresh CV
// content appears per region as an independent Bernoulli(arrival_prob) draw.
struct MicroInstance {
  std::vector<int> aoi_max;  // one cached content per region; entries <= aoi_cap
  int aoi_cap = 3;
  double cv_distance = 100.0;
  double rsu_distance = 200.0;
  std::vector<double> popularity;  // per region, sums to 1
  double arrival_prob = 0.0;
  UtilityParams params;
  ChannelLimits limits;

  std::size_t num_states() const;
  AoiLedger state_ledger(std::size_t index) const;
  std::size_t state_index(const AoiLedger& ledger) const;
  std::vector<CachingAction> state_actions(const AoiLedger& ledger) const;
  CachingContext context() const;
};

/// Expands the micro instance into an explicit MDP. The action order per
/// state is the canonical enumeration order, so greedy-policy indices line up
/// with myopic_caching_policy's tie-break. Throws std::invalid_argument when
/// the state space exceeds `max_states`.
ExplicitMdp build_micro_mdp(const MicroInstance& micro, std::size_t max_states);

// JSON round-trip for cross-checking against external solvers.
std::string mdp_to_json(const ExplicitMdp& mdp);
ExplicitMdp mdp_from_json(const std::string& text);
void save_mdp(const ExplicitMdp& mdp, const std::string& path);
ExplicitMdp load_mdp(const std::string& path);

}  // namespace aoicache
