#pragma once

#include "aghet/channel.hpp"
#include "aghet/topology.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace aghet {

/// Base-station tier; a UE's strongest cell of each tier is its MOI/POI/UOI.
enum class Tier
{
  Mbs = 0,
  Pbs = 1,
  Uabs = 2
};

inline constexpr std::array<Tier, 3> kTiers{ Tier::Mbs, Tier::Pbs, Tier::Uabs };

enum class Subframe
{
  Usf = 0, ///< uncoordinated, full power
  Csf = 1  ///< coordinated, reduced power at MBS/PBS
};

enum class IcicRegime
{
  NoIcic,
  Eicic,
  Feicic
};

/// Direction of the USF/CSF split against a tier's threshold rho.
enum class ScheduleRule
{
  GeUsf,  ///< USF-SIR >= rho goes to USF, every tier
  GeCsf,  ///< USF-SIR >= rho goes to CSF, every tier
  Tiered  ///< MBS and PBS: CSF-SIR >= rho to CSF; UABS: USF-SIR >= rho to USF
};

enum class UeKind
{
  Ground,
  Aerial
};

enum class LinkModel
{
  Gtg,
  Ata,
  Atg
};

std::string_view to_string(Tier t);
std::string_view to_string(Subframe s);
std::string_view to_string(IcicRegime r);
std::string_view to_string(ScheduleRule r);
std::string_view to_string(LinkModel m);
IcicRegime regime_from_string(std::string_view s);
ScheduleRule schedule_rule_from_string(std::string_view s);

/// Joint search state. ICIC parameters are shared by all cells of a tier.
struct IcicState
{
  std::vector<Point2> uabs_xy;
  double alpha_mbs = 1.0;
  double beta_mbs = 0.5;
  double rho_mbs_db = 30.0;
  double alpha_pbs = 1.0;
  double beta_pbs = 0.5;
  double rho_pbs_db = 0.0;
  double tau_pbs_db = 0.0;
  double rho_uabs_db = 0.0;
  double tau_uabs_db = 0.0;

  /// Checks the parameter bands (alpha, beta in [0,1]; tau in [0,12] dB;
  /// rho_mbs in [20,40], rho_pbs in [-10,10], rho_uabs in [-5,5] dB).
  void validate() const;

  bool operator==(const IcicState&) const = default;
};

/// Pins the alpha genes required by a regime.
void apply_regime(IcicState& state, IcicRegime regime);

struct RadioConfig
{
  ScheduleRule rule = ScheduleRule::Tiered;
  double sir_cap_db = 60.0;

  double sir_cap_linear() const;
  bool operator==(const RadioConfig&) const = default;
};

struct Receiver
{
  Vec3 pos;
  UeKind kind = UeKind::Ground;
};

/// GUEs first, then AUEs.
std::vector<Receiver> receivers_from(const NodeSet& gue, const NodeSet& aue);

/// The three base-station tiers. Cells are numbered globally MBS, PBS, UABS.
struct Network
{
  NodeSet mbs;
  NodeSet pbs;
  NodeSet uabs;

  const NodeSet& tier(Tier t) const;
  std::size_t cell_count() const { return mbs.size() + pbs.size() + uabs.size(); }
  std::size_t first_cell(Tier t) const;
};

/// GUE to MBS/PBS is ground-to-ground, GUE to UABS is air-to-ground and
/// anything ending at an aerial UE is any-to-air.
LinkModel link_model(UeKind ue, Tier tier);

/// Random inputs of one link in one trial. Stored in single precision.
struct LinkDraw
{
  float los_uniform = 0.0f;
  float fading_los = 1.0f;
  float fading_nlos = 1.0f;
};

/// Counter-based draw: identical for a given (trial, receiver, cell) no
/// matter in which order links are visited.
LinkDraw draw_link(std::uint64_t trial_seed,
                   std::uint64_t receiver_id,
                   std::uint64_t cell_id,
                   LinkModel model,
                   const FadingModel& fading);

/// Bearing (degrees) of the beam a cell points at its own scheduled UE.
double beam_bearing_deg(std::uint64_t trial_seed, std::uint64_t cell_id);

/// Trial-independent part of a link.
struct LinkGeometry
{
  LinkModel model = LinkModel::Gtg;
  LosSplit loss;              ///< GTG links carry p_los = 0
  double a_v_db = 0.0;        ///< vertical element attenuation
  double serving_gain_db = 0.0;
  double bearing_deg = 0.0;   ///< azimuth from cell to receiver
};

LinkGeometry link_geometry(const Receiver& rx,
                           const Vec3& cell,
                           Tier tier,
                           const ChannelConfig& cfg);

struct LinkPowers
{
  LinkBudget serving;          ///< beam steered at this receiver
  double interferer_mw = 0.0;  ///< beam steered at the cell's own UE
};

/// Gain of a cell towards a receiver at `bearing_deg` while its beam points
/// at `beam_bearing_deg`.
double interferer_gain_db(double bearing_deg,
                          double beam_bearing_deg,
                          double a_v_db,
                          const AntennaPattern& antenna);

LinkPowers link_powers(const LinkGeometry& g,
                       double tx_power_dbm,
                       const LinkDraw& draw,
                       double beam_bearing_deg,
                       const ChannelConfig& cfg);

struct LinkEntry
{
  LinkModel model = LinkModel::Gtg;
  LinkPowers powers;
};

/// Per-UE per-cell received powers for one trial.
class LinkTable
{
public:
  LinkTable(std::size_t ues, std::vector<Tier> cell_tiers);

  std::size_t ue_count() const { return ues_; }
  std::size_t cell_count() const { return tiers_.size(); }
  Tier cell_tier(std::size_t cell) const { return tiers_[cell]; }
  LinkEntry& at(std::size_t ue, std::size_t cell) { return entries_[ue * tiers_.size() + cell]; }
  const LinkEntry& at(std::size_t ue, std::size_t cell) const
  {
    return entries_[ue * tiers_.size() + cell];
  }

private:
  std::size_t ues_;
  std::vector<Tier> tiers_;
  std::vector<LinkEntry> entries_;
};

LinkTable link_matrix(std::span<const Receiver> ues,
                      const Network& net,
                      const ChannelConfig& cfg,
                      std::uint64_t trial_seed,
                      std::uint64_t receiver_id_base = 0);

/// Strongest cell of one tier and the aggregate from the rest of the tier.
struct TierView
{
  double strongest_mw = 0.0;
  long strongest = -1;  ///< index within the tier, -1 if the tier is empty
  double others_mw = 0.0;
};

/// Folds one tier's per-cell powers into a TierView. The strongest cell is
/// picked on serving power; the rest contribute their interferer power.
TierView fold_tier(std::span<const double> serving_mw, std::span<const double> interferer_mw);

struct UeView
{
  std::array<TierView, 3> tiers;

  const TierView& operator[](Tier t) const { return tiers[static_cast<int>(t)]; }
  TierView& operator[](Tier t) { return tiers[static_cast<int>(t)]; }
};

UeView summarize(const LinkTable& table, std::size_t ue);

struct SirSix
{
  std::array<std::array<double, 2>, 3> value{}; ///< [tier][subframe], linear

  double operator()(Tier t, Subframe s) const
  {
    return value[static_cast<int>(t)][static_cast<int>(s)];
  }
};

SirSix sir_six(const UeView& ue, double alpha_mbs, double alpha_pbs, double sir_cap_linear);

struct Association
{
  std::size_t ue_index = 0;
  Tier serving_tier = Tier::Mbs;
  std::size_t serving_cell_index = 0; ///< index within the serving tier
  Subframe subframe = Subframe::Usf;
  double sir_linear = 0.0;            ///< SIR in the scheduled subframe
};

/// CRE-biased tier choice followed by the USF/CSF split.
Association select_cell(std::size_t ue_index,
                        const UeView& ue,
                        const SirSix& sir,
                        const IcicState& state,
                        ScheduleRule rule);

/// Number of UEs in each (cell, subframe) pool.
class LoadCounts
{
public:
  LoadCounts() = default;
  LoadCounts(std::size_t n_mbs, std::size_t n_pbs, std::size_t n_uabs);

  void add(const Association& a);
  int count(Tier t, std::size_t cell, Subframe s) const;
  int cell_total(Tier t, std::size_t cell) const;
  std::size_t cells(Tier t) const { return pools_[static_cast<int>(t)].size(); }

private:
  std::array<std::vector<std::array<int, 2>>, 3> pools_;
};

/// Subframe share of a pool: beta for USF, 1 - beta for CSF; UABS pools use
/// beta_mbs + beta_pbs and 2 - (beta_mbs + beta_pbs).
double subframe_share(Tier t, Subframe s, const IcicState& state);

double spectral_efficiency(Tier t,
                           Subframe s,
                           double sir_linear,
                           const IcicState& state,
                           int pool_count);

double spectral_efficiency(const Association& a, const IcicState& state, const LoadCounts& loads);

void write_associations_csv(std::ostream& out,
                            std::span<const Association> assoc,
                            std::span<const Receiver> ues,
                            std::span<const double> se);

} // namespace aghet
