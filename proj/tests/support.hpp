#pragma once

#include "aghet/harness.hpp"
#include "aghet/rng.hpp"

#include <cstdint>
#include <vector>

namespace aghet::test {

/// Randomized cases per property.
inline constexpr int kCases = 1000;

/// Uniform double in [lo, hi).
inline double
uniform(SplitMix64& rng, double lo, double hi)
{
  return lo + (hi - lo) * rng.uniform();
}

inline NodeSet
nodes(Role role, std::vector<Vec3> pos, std::optional<double> tx = std::nullopt)
{
  NodeSet s;
  s.role = role;
  s.positions = std::move(pos);
  s.tx_power_dbm = tx;
  return s;
}

/// Small random scenario: a few cells of each tier and a few dozen UEs on
/// a 1.5 km square.
inline Scenario
small_scenario(std::uint64_t seed, std::size_t n_uabs = 3)
{
  ExperimentConfig cfg = ExperimentConfig::desk();
  cfg.region = { 1500.0, 1500.0 };
  cfg.lambda_mbs = 2.0;
  cfg.lambda_pbs = 4.0;
  cfg.lambda_gue = 20.0;
  cfg.lambda_aue = 2.0;
  cfg.n_uabs = n_uabs;
  cfg.kpi.trials = 2;
  cfg.seed = seed;
  Scenario s = build_scenario(cfg, 25.0);
  if (s.mbs.empty()) {
    s.mbs.positions.push_back({ 750.0, 750.0, cfg.h_mbs_m });
  }
  return s;
}

inline IcicState
random_state(SplitMix64& rng, const Region& region, std::size_t n_uabs)
{
  IcicState s;
  for (std::size_t i = 0; i < n_uabs; ++i) {
    s.uabs_xy.push_back({ uniform(rng, 0.0, region.width_m), uniform(rng, 0.0, region.height_m) });
  }
  s.alpha_mbs = rng.uniform();
  s.beta_mbs = rng.uniform();
  s.rho_mbs_db = uniform(rng, 20.0, 40.0);
  s.alpha_pbs = rng.uniform();
  s.beta_pbs = rng.uniform();
  s.rho_pbs_db = uniform(rng, -10.0, 10.0);
  s.tau_pbs_db = uniform(rng, 0.0, 12.0);
  s.rho_uabs_db = uniform(rng, -5.0, 5.0);
  s.tau_uabs_db = uniform(rng, 0.0, 12.0);
  return s;
}

} // namespace aghet::test
