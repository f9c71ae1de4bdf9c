// Times the OpenMP value-iteration sweep against the serial reference on a
// mid-size caching MDP and checks the tables agree bit for bit.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <omp.h>

#include "aoicache/mdp.hpp"

using namespace aoicache;

namespace {

double run_timed(const ExplicitMdp& mdp, const MdpConfig& config, bool parallel,
                 ValueIterationResult* result) {
  const auto start = std::chrono::steady_clock::now();
  *result = parallel ? value_iteration(mdp, config) : value_iteration_serial(mdp, config);
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count();
}

}  // namespace

int main() {
  MicroInstance micro;
  micro.aoi_max = {6, 6};
  micro.aoi_cap = 6;
  micro.popularity = {0.5, 0.5};
  micro.arrival_prob = 0.3;
  micro.cv_distance = 120.0;
  micro.rsu_distance = 260.0;
  micro.params.epsilon = 0.5;
  micro.params.aoi_scale = 300.0;

  const ExplicitMdp mdp = build_micro_mdp(micro, 500000);
  MdpConfig config;
  config.gamma = 0.95;
  config.theta = 1e-8;

  std::printf("states: %zu, threads: %d\n", mdp.num_states(), omp_get_max_threads());

  ValueIterationResult serial, parallel;
  const double t_serial = run_timed(mdp, config, false, &serial);
  const double t_parallel = run_timed(mdp, config, true, &parallel);

  bool identical = serial.values.size() == parallel.values.size() &&
                   serial.policy == parallel.policy;
  if (identical) {
    for (std::size_t s = 0; s < serial.values.size(); ++s) {
      if (serial.values[s] != parallel.values[s]) {
        identical = false;
        break;
      }
    }
  }

  std::printf("serial:   %8.1f ms (%d sweeps)\n", t_serial, serial.sweeps);
  std::printf("parallel: %8.1f ms (%d sweeps)\n", t_parallel, parallel.sweeps);
  std::printf("speedup:  %.2fx\n", t_serial / t_parallel);
  std::printf("tables bit-identical: %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
