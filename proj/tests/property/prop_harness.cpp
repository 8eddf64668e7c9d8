#include "aghet/harness.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

using namespace aghet;
using aghet::test::kCases;
using aghet::test::uniform;

namespace {

std::vector<std::string>
split(const std::string& line)
{
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) {
    out.push_back(f);
  }
  return out;
}

/// Tiny random experiment; small enough to run many times.
ExperimentConfig
random_config(SplitMix64& rng)
{
  ExperimentConfig c = ExperimentConfig::desk();
  c.region = { uniform(rng, 600.0, 1500.0), uniform(rng, 600.0, 1500.0) };
  c.lambda_gue = uniform(rng, 5.0, 30.0);
  c.lambda_aue = uniform(rng, 0.0, 3.0);
  c.n_uabs = 1 + rng() % 3;
  c.kpi.trials = 1;
  c.kpi.coverage_grid_pitch_m = 400.0;
  c.uabs_heights_m = { 25.0, 50.0 };
  c.uabs_heights_m.resize(1 + rng() % 2);
  const IcicRegime all_regimes[] = { IcicRegime::NoIcic, IcicRegime::Eicic, IcicRegime::Feicic };
  c.regimes = { all_regimes[rng() % 3] };
  const OptimizerKind all_opts[] = { OptimizerKind::HexBrute, OptimizerKind::Ga, OptimizerKind::Ehsga };
  c.optimizers = { all_opts[rng() % 3] };
  c.kpis = { rng() % 2 == 0 ? KpiKind::FifthPercentileSe : KpiKind::Coverage };
  c.ga.pop_size = 2;
  c.ga.generations = 1;
  c.ehsga.hm_size = 2;
  c.ehsga.improvisations = 1;
  c.brute.alpha = { 0.5 };
  c.brute.beta = { 0.5 };
  c.brute.tau = { 0.0, 9.0 };
  c.seed = rng();
  return c;
}

} // namespace

TEST_CASE("rows cover only requested combinations and the seed fixes them")
{
  SplitMix64 rng(701);
  for (int c = 0; c < kCases; ++c) {
    const ExperimentConfig cfg = random_config(rng);
    const auto a = run_experiment(cfg);
    const auto b = run_experiment(cfg);
    REQUIRE(a.size() == b.size());
    CHECK_FALSE(a.empty());
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto& r = a[i];
      CHECK(std::find(cfg.regimes.begin(), cfg.regimes.end(), r.regime) != cfg.regimes.end());
      CHECK(std::find(cfg.optimizers.begin(), cfg.optimizers.end(), r.optimizer) != cfg.optimizers.end());
      CHECK(std::find(cfg.uabs_heights_m.begin(), cfg.uabs_heights_m.end(), r.uabs_height_m) !=
            cfg.uabs_heights_m.end());
      CHECK(std::find(cfg.kpis.begin(), cfg.kpis.end(), r.kpi) != cfg.kpis.end());
      CHECK(r.seed == cfg.seed);
      ReportRow x = r;
      ReportRow y = b[i];
      x.wall_time_s = y.wall_time_s = 0.0;
      CHECK(x.kpi_value == y.kpi_value);
      CHECK(x.tau_pbs_db == y.tau_pbs_db);
      CHECK(x.tau_uabs_db == y.tau_uabs_db);
      CHECK(x.regime == y.regime);
      CHECK(x.optimizer == y.optimizer);
    }
  }
}

TEST_CASE("report CSV keeps at least 12 significant digits")
{
  SplitMix64 rng(702);
  for (int c = 0; c < kCases; ++c) {
    ReportRow r;
    r.uabs_height_m = uniform(rng, 10.0, 300.0);
    r.tau_pbs_db = uniform(rng, 0.0, 12.0);
    r.tau_uabs_db = uniform(rng, 0.0, 12.0);
    r.kpi_value = std::pow(10.0, uniform(rng, -8.0, 3.0));
    r.wall_time_s = uniform(rng, 0.0, 1e4);
    r.seed = rng();
    std::ostringstream out;
    write_report(out, { r });
    std::istringstream in(out.str());
    std::string header;
    std::string line;
    std::getline(in, header);
    std::getline(in, line);
    const auto f = split(line);
    REQUIRE(f.size() == 9);
    auto close = [](double parsed, double v) { return std::abs(parsed - v) <= 1e-12 * std::abs(v); };
    CHECK(close(std::stod(f[2]), r.uabs_height_m));
    CHECK(close(std::stod(f[3]), r.tau_pbs_db));
    CHECK(close(std::stod(f[4]), r.tau_uabs_db));
    CHECK(close(std::stod(f[6]), r.kpi_value));
    CHECK(close(std::stod(f[7]), r.wall_time_s));
    CHECK(std::stoull(f[8]) == r.seed);
  }
}

TEST_CASE("config text round-trips random values exactly")
{
  SplitMix64 rng(703);
  for (int c = 0; c < kCases; ++c) {
    ExperimentConfig cfg = ExperimentConfig::desk();
    cfg.region.width_m = uniform(rng, 100.0, 20'000.0);
    cfg.lambda_gue = uniform(rng, 0.0, 200.0);
    cfg.kpi.coverage_threshold_se = uniform(rng, 1e-4, 1.0);
    cfg.channel.atg.eta_nlos_db = uniform(rng, 0.0, 40.0);
    cfg.ehsga.fret_span = uniform(rng, 0.001, 0.5);
    cfg.brute.tau = { uniform(rng, 0.0, 6.0), uniform(rng, 6.0, 12.0) };
    cfg.seed = rng();
    std::istringstream in(config_to_string(cfg));
    CHECK(parse_config(in) == cfg);
  }
}
