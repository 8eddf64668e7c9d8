#pragma once

#include "aghet/channel.hpp"
#include "aghet/kpi.hpp"
#include "aghet/optimizer.hpp"
#include "aghet/radio.hpp"
#include "aghet/topology.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace aghet {

struct ExperimentConfig
{
  Region region;
  double lambda_mbs = 4.0;  ///< per km^2
  double lambda_pbs = 12.0;
  double lambda_gue = 100.0;
  double lambda_aue = 1.8;
  std::size_t n_uabs = 60;

  double h_mbs_m = 36.0;
  double h_pbs_m = 15.0;
  std::vector<double> uabs_heights_m{ 25.0, 36.0, 50.0 };
  double h_gue_m = 1.5;
  double h_aue_m = 22.5;

  double p_mbs_dbm = 46.0;
  double p_pbs_dbm = 30.0;
  double p_uabs_dbm = 26.0;

  ChannelConfig channel;
  RadioConfig radio;
  KpiConfig kpi;  ///< `kind` is ignored, see `kpis`

  std::vector<IcicRegime> regimes{ IcicRegime::NoIcic, IcicRegime::Eicic, IcicRegime::Feicic };
  std::vector<OptimizerKind> optimizers{ OptimizerKind::HexBrute, OptimizerKind::Ga, OptimizerKind::Ehsga };
  std::vector<KpiKind> kpis{ KpiKind::FifthPercentileSe, KpiKind::Coverage };

  GaParams ga;
  EhsgaParams ehsga;
  BruteGrid brute;
  std::size_t brute_budget = 10'000;
  /// Put the hex-grid layout with default ICIC values into the heuristics'
  /// initial population.
  bool seed_hex_layout = false;

  std::uint64_t seed = 1;

  static ExperimentConfig table4();
  static ExperimentConfig desk();

  void validate() const;
  bool operator==(const ExperimentConfig&) const = default;
};

/// Flat key=value form. Every key is written.
void save_config(std::ostream& out, const ExperimentConfig& cfg);
std::string config_to_string(const ExperimentConfig& cfg);

/// Reads key=value lines ('#' starts a comment). A `preset = table4|desk`
/// line picks the defaults; otherwise Table 4 values are used. Unknown keys
/// throw ConfigError; missing keys keep the default and are logged.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

/// Applies one key=value pair.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// PPP draws for MBS, PBS, GUE and AUE; identical for every UABS height.
Scenario build_scenario(const ExperimentConfig& cfg, double uabs_height_m);

/// Hex-grid UABS layout of the configured size.
NodeSet hex_layout(const ExperimentConfig& cfg, double uabs_height_m);

/// Hex layout with default ICIC parameters, alpha pinned for the regime.
IcicState hex_state(const ExperimentConfig& cfg, IcicRegime regime);

struct ReportRow
{
  IcicRegime regime = IcicRegime::NoIcic;
  OptimizerKind optimizer = OptimizerKind::HexBrute;
  double uabs_height_m = 0.0;
  double tau_pbs_db = 0.0;
  double tau_uabs_db = 0.0;
  KpiKind kpi = KpiKind::FifthPercentileSe;
  double kpi_value = 0.0;
  double wall_time_s = 0.0;
  std::uint64_t seed = 0;
};

/// Result of one (height, regime, optimizer, KPI) cell.
struct CellResult
{
  double uabs_height_m = 0.0;
  IcicRegime regime = IcicRegime::NoIcic;
  OptimizerKind optimizer = OptimizerKind::HexBrute;
  KpiKind kpi = KpiKind::FifthPercentileSe;
  OptimizerReport report;
  KpiResult best;  ///< per-trial values of the best state
};

using CellCallback = std::function<void(const CellResult&)>;

std::vector<CellResult> run_cells(const ExperimentConfig& cfg, const CellCallback& on_cell = {});

/// Rows for a list of cells: the full CRE surface for brute force, one peak
/// row per heuristic cell. Sorted by (height, regime, optimizer, KPI, taus).
std::vector<ReportRow> report_rows(const std::vector<CellResult>& cells, std::uint64_t seed);

std::vector<ReportRow> run_experiment(const ExperimentConfig& cfg);

void write_report(std::ostream& out, const std::vector<ReportRow>& rows);
void write_report(const std::string& path, const std::vector<ReportRow>& rows);

/// Mean steady-clock wall time of `task` over `repetitions` runs.
double runtime_meter(const std::function<void()>& task, int repetitions = 1);

/// Path losses of every realized node pair of one link family.
struct PathlossSummary
{
  LinkModel model = LinkModel::Gtg;
  std::size_t count = 0;
  double min_db = 0.0;
  double max_db = 0.0;
  std::vector<std::size_t> histogram;  ///< 1 dB bins starting at 0 dB
};

std::vector<PathlossSummary> pathloss_summary(const ExperimentConfig& cfg, double uabs_height_m);

/// CDF rows `model,pl_db,cdf` at the histogram bin edges.
void write_pathloss_cdf(std::ostream& out, const std::vector<PathlossSummary>& summaries);

} // namespace aghet
