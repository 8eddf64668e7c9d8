#include "aghet/harness.hpp"
#include "aghet/kpi.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace aghet;
using aghet::test::kCases;
using aghet::test::random_state;
using aghet::test::small_scenario;
using aghet::test::uniform;

TEST_CASE("coverage does not increase with the threshold")
{
  SplitMix64 rng(501);
  KpiConfig cfg;
  cfg.coverage_grid_pitch_m = 300.0;
  for (int c = 0; c < kCases; ++c) {
    const Scenario sc = small_scenario(rng(), 1 + rng() % 4);
    const IcicState st = random_state(rng, sc.region, sc.n_uabs);
    const TrialSnapshot s = snapshot(st, sc, cfg, static_cast<int>(rng() % 3));
    std::vector<double> t(6);
    for (auto& x : t) {
      x = std::pow(10.0, uniform(rng, -4.0, 1.0));
    }
    std::sort(t.begin(), t.end());
    double prev = 1.0;
    for (double x : t) {
      const double cov = trial_coverage(s, x);
      CHECK(cov <= prev);
      CHECK(cov >= 0.0);
      prev = cov;
    }
  }
}

TEST_CASE("fifth percentile never exceeds the median")
{
  SplitMix64 rng(502);
  for (int c = 0; c < kCases; ++c) {
    std::vector<double> v(1 + rng() % 200);
    for (auto& x : v) {
      x = rng.uniform() < 0.1 ? 0.0 : uniform(rng, 0.0, 5.0);
    }
    CHECK(fifth_percentile(v) <= percentile(v, 50.0));
  }
}

TEST_CASE("evaluation is bit-reproducible")
{
  SplitMix64 rng(503);
  KpiConfig cfg;
  cfg.trials = 2;
  cfg.coverage_grid_pitch_m = 500.0;
  for (int c = 0; c < kCases; ++c) {
    const Scenario sc = small_scenario(rng(), 1 + rng() % 4);
    const IcicState st = random_state(rng, sc.region, sc.n_uabs);
    const KpiEvaluator a(sc, cfg);
    const KpiEvaluator b(sc, cfg);
    const auto ra = a.evaluate_both(st);
    const auto rb = b.evaluate_both(st);
    CHECK(ra.fifth_percentile_se.per_trial_values == rb.fifth_percentile_se.per_trial_values);
    CHECK(ra.coverage.per_trial_values == rb.coverage.per_trial_values);
  }
}

TEST_CASE("coverage is resolved at the default probe pitch")
{
  ExperimentConfig cfg = ExperimentConfig::desk();
  const Scenario sc = build_scenario(cfg, 25.0);
  IcicState st = hex_state(cfg, IcicRegime::Feicic);
  KpiConfig coarse = cfg.kpi;
  coarse.trials = 5;
  KpiConfig fine = coarse;
  fine.coverage_grid_pitch_m = coarse.coverage_grid_pitch_m / 2.0;
  // The default threshold and one where about half the area is covered.
  for (double t : { coarse.coverage_threshold_se, 0.3 }) {
    coarse.coverage_threshold_se = fine.coverage_threshold_se = t;
    const double a = coverage_probability(st, sc, coarse);
    const double b = coverage_probability(st, sc, fine);
    CAPTURE(t);
    CAPTURE(a);
    CHECK(std::abs(a - b) < 0.02);
  }
}
