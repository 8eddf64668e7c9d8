// Command-line front end: experiments, CRE sweeps, single optimizer runs and
// path-loss CDF data.

#include "aghet/errors.hpp"
#include "aghet/harness.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

struct Options
{
  std::string config;
  std::string preset;
  std::vector<std::string> sets;
  std::string regime;
  std::string optimizer;
  std::string kpi;
  std::optional<double> uabs_height;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::string out;
  bool quiet = false;
};

aghet::ExperimentConfig
make_config(const Options& o)
{
  aghet::ExperimentConfig cfg;
  if (!o.config.empty()) {
    cfg = aghet::load_config(o.config);
  } else if (o.preset == "desk") {
    cfg = aghet::ExperimentConfig::desk();
  } else if (!o.preset.empty() && o.preset != "table4") {
    throw aghet::ConfigError("unknown preset '" + o.preset + "'");
  }
  for (const auto& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw aghet::ConfigError("--set expects key=value, got '" + kv + "'");
    }
    aghet::set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!o.regime.empty()) {
    cfg.regimes = { aghet::regime_from_string(o.regime) };
  }
  if (!o.optimizer.empty()) {
    cfg.optimizers = { aghet::optimizer_from_string(o.optimizer) };
  }
  if (!o.kpi.empty()) {
    cfg.kpis = { aghet::kpi_from_string(o.kpi) };
  }
  if (o.uabs_height) {
    cfg.uabs_heights_m = { *o.uabs_height };
  }
  if (o.seed) {
    cfg.seed = *o.seed;
  }
  if (o.trials) {
    cfg.kpi.trials = *o.trials;
  }
  cfg.validate();
  return cfg;
}

template <class Write>
void
emit(const std::string& path, Write write)
{
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream f(path);
  if (!f) {
    throw aghet::ConfigError("cannot write '" + path + "'");
  }
  write(f);
}

void
add_common(CLI::App* sub, Options& o)
{
  sub->add_option("--config", o.config, "key=value config file");
  sub->add_option("--preset", o.preset, "table4 or desk (ignored with --config)");
  sub->add_option("--set", o.sets, "override one config key, key=value");
  sub->add_option("--regime", o.regime, "none, eicic or feicic");
  sub->add_option("--optimizer", o.optimizer, "hex-brute, ga or ehsga");
  sub->add_option("--kpi", o.kpi, "5pse or coverage");
  sub->add_option("--uabs-height", o.uabs_height, "UABS height in meters");
  sub->add_option("--seed", o.seed, "master seed");
  sub->add_option("--trials", o.trials, "Monte-Carlo trials per evaluation");
  sub->add_option("--out", o.out, "output CSV path (stdout when omitted)");
  sub->add_flag("-q,--quiet", o.quiet, "only log warnings");
}

} // namespace

int
main(int argc, char** argv)
{
  CLI::App app{ "Air-ground HetNet simulator and ICIC/UABS optimizer" };
  app.require_subcommand(1);
  Options o;

  auto* run = app.add_subcommand("run", "run every configured height x regime x optimizer x KPI cell");
  auto* sweep = app.add_subcommand("sweep-cre", "brute-force CRE surface on the hex grid");
  auto* optimize = app.add_subcommand("optimize", "one optimizer run, trace and best state");
  auto* cdf = app.add_subcommand("pathloss-cdf", "path-loss CDF of every realized node pair");
  for (auto* s : { run, sweep, optimize, cdf }) {
    add_common(s, o);
  }

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(o.quiet ? spdlog::level::warn : spdlog::level::info);

  try {
    if (run->parsed()) {
      const auto cfg = make_config(o);
      const auto rows = aghet::run_experiment(cfg);
      emit(o.out, [&](std::ostream& f) { aghet::write_report(f, rows); });
    } else if (sweep->parsed()) {
      auto cfg = make_config(o);
      cfg.optimizers = { aghet::OptimizerKind::HexBrute };
      const auto rows = aghet::run_experiment(cfg);
      emit(o.out, [&](std::ostream& f) { aghet::write_report(f, rows); });
    } else if (optimize->parsed()) {
      auto cfg = make_config(o);
      cfg.regimes.resize(1);
      cfg.optimizers.resize(1);
      cfg.kpis.resize(1);
      cfg.uabs_heights_m.resize(1);
      const auto cells = aghet::run_cells(cfg);
      emit(o.out, [&](std::ostream& f) { aghet::write_optimizer_report(f, cells.front().report); });
    } else if (cdf->parsed()) {
      const auto cfg = make_config(o);
      const auto summaries = aghet::pathloss_summary(cfg, cfg.uabs_heights_m.front());
      for (const auto& s : summaries) {
        spdlog::info("{}: {} pairs, min {:.2f} dB, max {:.2f} dB",
                     aghet::to_string(s.model), s.count, s.min_db, s.max_db);
      }
      emit(o.out, [&](std::ostream& f) { aghet::write_pathloss_cdf(f, summaries); });
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
