#pragma once

#include "aghet/channel.hpp"
#include "aghet/radio.hpp"
#include "aghet/topology.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace aghet {

enum class KpiKind
{
  FifthPercentileSe,
  Coverage
};

std::string_view to_string(KpiKind k);
KpiKind kpi_from_string(std::string_view s);

struct KpiConfig
{
  KpiKind kind = KpiKind::FifthPercentileSe;
  double coverage_threshold_se = 0.03;  ///< T_C_SE in bps/Hz
  double coverage_grid_pitch_m = 200.0;
  int trials = 20;

  void validate() const;
  bool operator==(const KpiConfig&) const = default;
};

struct KpiResult
{
  double value = 0.0;  ///< mean over trials
  std::vector<double> per_trial_values;
  int trial_count = 0;

  /// Standard error of the mean, 0 for a single trial.
  double std_error() const;
};

/// Frozen part of a network realization. UABS positions come from the state.
struct Scenario
{
  Region region;
  NodeSet mbs;
  NodeSet pbs;
  NodeSet gue;
  NodeSet aue;
  double uabs_height_m = 25.0;
  double uabs_tx_dbm = 26.0;
  double gue_height_m = 1.5;
  std::size_t n_uabs = 0;
  ChannelConfig channel;
  RadioConfig radio;
  std::uint64_t fading_seed = 1;

  NodeSet uabs_nodes(const IcicState& state) const;
};

/// q-th percentile (q in [0, 100]) by linear interpolation between order
/// statistics.
double percentile(std::span<const double> values, double q);
double fifth_percentile(std::span<const double> values);

/// Probe receivers laid on a cell-centred grid, at least 2 x 2.
std::vector<Receiver> probe_grid(const Region& region, double pitch_m, double height_m);

/// Receiver ids of probes start here so their draws never collide with UEs.
inline constexpr std::uint64_t kProbeIdBase = std::uint64_t{ 1 } << 40;

std::uint64_t trial_seed(std::uint64_t fading_seed, int trial);

/// Per-trial outcome for every UE and probe.
struct TrialSnapshot
{
  std::vector<Association> ue_assoc;
  std::vector<double> ue_se;
  std::vector<Association> probe_assoc;
  std::vector<double> probe_se;
};

/// Reference pipeline built on the full link table. Slow; used to inspect a
/// single trial and to cross-check KpiEvaluator.
TrialSnapshot snapshot(const IcicState& state,
                       const Scenario& scenario,
                       const KpiConfig& cfg,
                       int trial,
                       bool with_probes = true);

/// Per-trial KPI values from one snapshot.
double trial_fifth_percentile(const TrialSnapshot& s);
double trial_coverage(const TrialSnapshot& s, double threshold_se);

/// Evaluates states against one frozen scenario. Terrestrial links and all
/// random draws are prepared once; each call only redoes the UABS links.
class KpiEvaluator
{
public:
  KpiEvaluator(Scenario scenario, KpiConfig cfg);

  KpiResult operator()(const IcicState& state) const { return evaluate(state, cfg_.kind); }
  KpiResult evaluate(const IcicState& state, KpiKind kind) const;

  /// Both KPIs in one pass over the trials.
  struct Both
  {
    KpiResult fifth_percentile_se;
    KpiResult coverage;
  };
  Both evaluate_both(const IcicState& state) const;

  const Scenario& scenario() const { return scenario_; }
  const KpiConfig& config() const { return cfg_; }
  std::size_t probe_count() const { return probes_.rx.size(); }

private:
  struct Group
  {
    std::vector<Receiver> rx;
    std::uint64_t id_base = 0;
    std::vector<TierView> mbs;  ///< [trial * rx + i]
    std::vector<TierView> pbs;
    std::vector<LinkDraw> uabs_draws;  ///< [(trial * rx + i) * n_uabs + k]
  };

  struct UabsLink
  {
    double p_los;
    double serving_los_mw;
    double serving_nlos_mw;
    double base_los_db;
    double base_nlos_db;
    double a_v_db;
    double bearing_deg;
  };

  void prepare(Group& g) const;
  void uabs_links(const Group& g, const std::vector<Vec3>& uabs, std::vector<UabsLink>& out) const;
  void associate(const Group& g,
                 const std::vector<UabsLink>& links,
                 int trial,
                 const IcicState& state,
                 std::vector<Association>& out) const;

  Scenario scenario_;
  KpiConfig cfg_;
  std::size_t n_terrestrial_ = 0;
  std::vector<std::uint64_t> seeds_;
  std::vector<double> beams_;  ///< [trial * cells + cell]
  Group ues_;
  Group probes_;
  mutable bool warned_empty_ = false;
};

/// One-shot convenience wrapper around KpiEvaluator.
KpiResult evaluate(const IcicState& state, const Scenario& scenario, const KpiConfig& cfg);

/// Fraction of probes whose SE exceeds the threshold, averaged over trials.
double coverage_probability(const IcicState& state, const Scenario& scenario, const KpiConfig& cfg);

} // namespace aghet
