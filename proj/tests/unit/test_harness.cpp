#include "aghet/harness.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

using namespace aghet;

namespace {

ExperimentConfig
tiny()
{
  ExperimentConfig c = ExperimentConfig::desk();
  c.region = { 2000.0, 2000.0 };
  c.n_uabs = 4;
  c.kpi.trials = 1;
  c.uabs_heights_m = { 25.0 };
  c.regimes = { IcicRegime::Feicic };
  c.optimizers = { OptimizerKind::HexBrute, OptimizerKind::Ga, OptimizerKind::Ehsga };
  c.ga.pop_size = 4;
  c.ga.generations = 2;
  c.ehsga.hm_size = 4;
  c.ehsga.improvisations = 2;
  c.brute.alpha = { 0.0, 1.0 };
  c.brute.beta = { 0.5 };
  c.brute.tau = { 0.0, 12.0 };
  return c;
}

std::string
temp_path(const std::string& name)
{
  return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST_CASE("Table 4 defaults")
{
  const ExperimentConfig c = ExperimentConfig::table4();
  CHECK(c.region.area_km2() == doctest::Approx(100.0));
  CHECK(c.lambda_mbs == 4.0);
  CHECK(c.lambda_pbs == 12.0);
  CHECK(c.lambda_gue == 100.0);
  CHECK(c.n_uabs == 60);
  CHECK(c.h_mbs_m == 36.0);
  CHECK(c.h_pbs_m == 15.0);
  CHECK(c.uabs_heights_m == std::vector<double>{ 25.0, 36.0, 50.0 });
  CHECK(c.h_gue_m == 1.5);
  CHECK(c.h_aue_m == 22.5);
  CHECK(c.p_mbs_dbm == 46.0);
  CHECK(c.p_pbs_dbm == 30.0);
  CHECK(c.p_uabs_dbm == 26.0);
  CHECK(c.channel.fc_mhz == 763.0);
  CHECK(c.ga.pop_size == 60);
  CHECK(c.ehsga.hm_size == 60);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("desk preset")
{
  const ExperimentConfig c = ExperimentConfig::desk();
  CHECK(c.region.width_m == 4000.0);
  CHECK(c.lambda_gue == 50.0);
  CHECK(c.lambda_aue == 1.8);
  CHECK(c.n_uabs == 12);
  CHECK(c.ga.pop_size == 20);
  CHECK(c.ga.generations == 30);
  CHECK(c.kpi.trials == 20);
}

TEST_CASE("config round trip")
{
  for (const ExperimentConfig& c : { ExperimentConfig::table4(), ExperimentConfig::desk(), tiny() }) {
    std::istringstream in(config_to_string(c));
    CHECK(parse_config(in) == c);
  }
}

TEST_CASE("config file round trip")
{
  const std::string path = temp_path("aghet_cfg_roundtrip.cfg");
  {
    std::ofstream out(path);
    save_config(out, ExperimentConfig::desk());
  }
  CHECK(load_config(path) == ExperimentConfig::desk());
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_config(temp_path("aghet_no_such_file.cfg")), ConfigError);
}

TEST_CASE("config parsing")
{
  std::istringstream in("preset = desk\n# comment\nuabs_height_m = 50\nregimes = feicic, none\nseed = 9 # trailing\n");
  const ExperimentConfig c = parse_config(in);
  CHECK(c.region.width_m == 4000.0);
  CHECK(c.uabs_heights_m == std::vector<double>{ 50.0 });
  CHECK(c.regimes == std::vector<IcicRegime>{ IcicRegime::Feicic, IcicRegime::NoIcic });
  CHECK(c.seed == 9);

  std::istringstream bad_key("no_such_key = 1\n");
  try {
    parse_config(bad_key);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("no_such_key") != std::string::npos);
  }

  std::istringstream no_eq("trials 5\n");
  CHECK_THROWS_AS(parse_config(no_eq), ConfigError);
  std::istringstream bad_value("trials = many\n");
  CHECK_THROWS_AS(parse_config(bad_value), ConfigError);
  std::istringstream bad_preset("preset = huge\n");
  CHECK_THROWS_AS(parse_config(bad_preset), ConfigError);
  std::istringstream invalid("trials = 0\n");
  CHECK_THROWS_AS(parse_config(invalid), ConfigError);
}

TEST_CASE("set_config_value covers enum keys")
{
  ExperimentConfig c;
  set_config_value(c, "gtg_distance_units", "m");
  CHECK(c.channel.gtg_distance_units == DistanceUnits::Meters);
  set_config_value(c, "ata_fc_units", "ghz");
  CHECK(c.channel.ata_fc_units == FrequencyUnits::GHz);
  set_config_value(c, "schedule_rule", "ge_csf");
  CHECK(c.radio.rule == ScheduleRule::GeCsf);
  set_config_value(c, "loss_mode", "sampled");
  CHECK(c.channel.loss_mode == LossMode::Sampled);
  set_config_value(c, "optimizers", "ga");
  CHECK(c.optimizers == std::vector<OptimizerKind>{ OptimizerKind::Ga });
  set_config_value(c, "brute_tau_db", "0, 6");
  CHECK(c.brute.tau == std::vector<double>{ 0.0, 6.0 });
  CHECK_THROWS_AS(set_config_value(c, "regimes", "abs"), ConfigError);
  CHECK_THROWS_AS(set_config_value(c, "gtg_distance_units", "miles"), ConfigError);
}

TEST_CASE("every key is written")
{
  const std::string text = config_to_string(ExperimentConfig::table4());
  std::set<std::string> names;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    names.insert(line.substr(0, line.find(' ')));
  }
  for (const char* k : { "region_width_m", "lambda_mbs_per_km2", "n_uabs", "h_mbs_m", "uabs_height_m", "p_uabs_dbm",
                         "fc_mhz", "coverage_threshold_se", "trials", "ga_pop_size", "hm_size", "hmcr_min",
                         "brute_alpha", "brute_budget", "seed" }) {
    CAPTURE(k);
    CHECK(names.count(k) == 1);
  }
}

TEST_CASE("scenario draws are frozen across UABS heights")
{
  const ExperimentConfig c = ExperimentConfig::desk();
  const Scenario a = build_scenario(c, 25.0);
  const Scenario b = build_scenario(c, 50.0);
  CHECK(a.mbs.positions == b.mbs.positions);
  CHECK(a.gue.positions == b.gue.positions);
  CHECK(a.fading_seed == b.fading_seed);
  CHECK(b.uabs_height_m == 50.0);
  CHECK(a.n_uabs == 12);

  ExperimentConfig other = c;
  other.seed = 2;
  CHECK(build_scenario(other, 25.0).gue.positions != a.gue.positions);
}

TEST_CASE("hex state pins alpha for the regime")
{
  const ExperimentConfig c = tiny();
  const IcicState s = hex_state(c, IcicRegime::Eicic);
  CHECK(s.uabs_xy.size() == 4);
  CHECK(s.alpha_mbs == 0.0);
  CHECK(hex_layout(c, 36.0).positions.front().z == 36.0);
}

TEST_CASE("smoke run emits rows and is deterministic")
{
  const ExperimentConfig c = tiny();
  const auto rows = run_experiment(c);
  REQUIRE_FALSE(rows.empty());
  // 4 CRE cells per brute KPI, one peak row per heuristic KPI.
  CHECK(rows.size() == 2 * 4 + 2 + 2);
  for (const auto& r : rows) {
    CHECK(r.regime == IcicRegime::Feicic);
    CHECK(r.uabs_height_m == 25.0);
    CHECK(r.seed == c.seed);
  }
  const auto again = run_experiment(c);
  REQUIRE(again.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].kpi_value == again[i].kpi_value);
    CHECK(rows[i].tau_pbs_db == again[i].tau_pbs_db);
  }
}

TEST_CASE("height override reaches the run")
{
  ExperimentConfig c = tiny();
  set_config_value(c, "uabs_height_m", "50");
  c.optimizers = { OptimizerKind::HexBrute };
  for (const auto& cell : run_cells(c)) {
    CHECK(cell.uabs_height_m == 50.0);
  }
}

TEST_CASE("report CSV")
{
  std::ostringstream empty;
  write_report(empty, {});
  CHECK(empty.str() == "regime,optimizer,uabs_height_m,tau_pbs_db,tau_uabs_db,kpi_name,kpi_value,wall_time_s,seed\n");

  ReportRow r;
  r.regime = IcicRegime::Eicic;
  r.optimizer = OptimizerKind::Ehsga;
  r.uabs_height_m = 36.0;
  r.tau_pbs_db = 3.0;
  r.kpi = KpiKind::Coverage;
  r.kpi_value = 0.123456789012345;
  r.wall_time_s = 1.5;
  r.seed = 7;
  std::ostringstream out;
  write_report(out, { r });
  const std::string s = out.str();
  CHECK(s.find("eicic,ehsga,36,3,0,coverage,0.123456789012345") != std::string::npos);
}

TEST_CASE("runtime meter")
{
  CHECK(runtime_meter([] {}) < 1e-3);
  const double t = runtime_meter([] { std::this_thread::sleep_for(std::chrono::milliseconds(5)); }, 3);
  CHECK(t >= 0.005);
  CHECK(t < 0.5);
}

TEST_CASE("path-loss summary covers each link family")
{
  ExperimentConfig c = tiny();
  const auto s = pathloss_summary(c, 25.0);
  REQUIRE(s.size() == 3);
  for (const auto& m : s) {
    CHECK(m.count > 0);
    CHECK(m.min_db <= m.max_db);
    std::size_t total = 0;
    for (auto h : m.histogram) {
      total += h;
    }
    CHECK(total == m.count);
  }
  std::ostringstream out;
  write_pathloss_cdf(out, s);
  CHECK(out.str().rfind("model,pl_db,cdf\n", 0) == 0);
  CHECK(out.str().find("ATG,") != std::string::npos);
}
