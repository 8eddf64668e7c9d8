#include "aghet/radio.hpp"

#include "aghet/errors.hpp"
#include "aghet/rng.hpp"

#include <cfloat>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

namespace aghet {

namespace {

constexpr std::uint64_t kBeamTag = 0xbea3000000000000ULL;
constexpr double kDeg = 180.0 / std::numbers::pi;

double
wrap_deg(double a)
{
  a = std::fmod(a + 180.0, 360.0);
  if (a < 0.0) {
    a += 360.0;
  }
  return a - 180.0;
}

double
to_db(double linear)
{
  return linear > 0.0 ? 10.0 * std::log10(linear) : -std::numeric_limits<double>::infinity();
}

double
ratio(double num, double den, double cap)
{
  if (den <= 0.0) {
    return num > 0.0 ? cap : 0.0;
  }
  return std::min(num / den, cap);
}

} // namespace

std::string_view
to_string(Tier t)
{
  switch (t) {
    case Tier::Mbs:
      return "MBS";
    case Tier::Pbs:
      return "PBS";
    case Tier::Uabs:
      return "UABS";
  }
  return "?";
}

std::string_view
to_string(Subframe s)
{
  return s == Subframe::Usf ? "USF" : "CSF";
}

std::string_view
to_string(IcicRegime r)
{
  switch (r) {
    case IcicRegime::NoIcic:
      return "none";
    case IcicRegime::Eicic:
      return "eicic";
    case IcicRegime::Feicic:
      return "feicic";
  }
  return "?";
}

std::string_view
to_string(ScheduleRule r)
{
  switch (r) {
    case ScheduleRule::GeUsf:
      return "ge_usf";
    case ScheduleRule::GeCsf:
      return "ge_csf";
    case ScheduleRule::Tiered:
      return "tiered";
  }
  return "?";
}

std::string_view
to_string(LinkModel m)
{
  switch (m) {
    case LinkModel::Gtg:
      return "GTG";
    case LinkModel::Ata:
      return "ATA";
    case LinkModel::Atg:
      return "ATG";
  }
  return "?";
}

IcicRegime
regime_from_string(std::string_view s)
{
  for (auto r : { IcicRegime::NoIcic, IcicRegime::Eicic, IcicRegime::Feicic }) {
    if (to_string(r) == s) {
      return r;
    }
  }
  throw ConfigError("unknown ICIC regime '" + std::string(s) + "' (expected none, eicic, feicic)");
}

ScheduleRule
schedule_rule_from_string(std::string_view s)
{
  for (auto r : { ScheduleRule::GeUsf, ScheduleRule::GeCsf, ScheduleRule::Tiered }) {
    if (to_string(r) == s) {
      return r;
    }
  }
  throw ConfigError("unknown schedule rule '" + std::string(s) + "'");
}

void
IcicState::validate() const
{
  auto in = [](double v, double lo, double hi) { return v >= lo && v <= hi; };
  if (!in(alpha_mbs, 0, 1) || !in(alpha_pbs, 0, 1)) {
    throw ParameterError("power reduction factors must lie in [0, 1]");
  }
  if (!in(beta_mbs, 0, 1) || !in(beta_pbs, 0, 1)) {
    throw ParameterError("USF duty cycles must lie in [0, 1]");
  }
  if (!in(tau_pbs_db, 0, 12) || !in(tau_uabs_db, 0, 12)) {
    throw ParameterError("range expansion bias must lie in [0, 12] dB");
  }
  if (!in(rho_mbs_db, 20, 40) || !in(rho_pbs_db, -10, 10) || !in(rho_uabs_db, -5, 5)) {
    throw ParameterError("scheduling threshold outside its band");
  }
}

void
apply_regime(IcicState& state, IcicRegime regime)
{
  if (regime == IcicRegime::NoIcic) {
    state.alpha_mbs = state.alpha_pbs = 1.0;
  } else if (regime == IcicRegime::Eicic) {
    state.alpha_mbs = state.alpha_pbs = 0.0;
  }
}

double
RadioConfig::sir_cap_linear() const
{
  return std::pow(10.0, sir_cap_db / 10.0);
}

std::vector<Receiver>
receivers_from(const NodeSet& gue, const NodeSet& aue)
{
  std::vector<Receiver> out;
  out.reserve(gue.size() + aue.size());
  for (const auto& p : gue.positions) {
    out.push_back({ p, UeKind::Ground });
  }
  for (const auto& p : aue.positions) {
    out.push_back({ p, UeKind::Aerial });
  }
  return out;
}

const NodeSet&
Network::tier(Tier t) const
{
  switch (t) {
    case Tier::Mbs:
      return mbs;
    case Tier::Pbs:
      return pbs;
    case Tier::Uabs:
      break;
  }
  return uabs;
}

std::size_t
Network::first_cell(Tier t) const
{
  switch (t) {
    case Tier::Mbs:
      return 0;
    case Tier::Pbs:
      return mbs.size();
    case Tier::Uabs:
      break;
  }
  return mbs.size() + pbs.size();
}

LinkModel
link_model(UeKind ue, Tier tier)
{
  if (ue == UeKind::Aerial) {
    return LinkModel::Ata;
  }
  return tier == Tier::Uabs ? LinkModel::Atg : LinkModel::Gtg;
}

LinkDraw
draw_link(std::uint64_t trial_seed,
          std::uint64_t receiver_id,
          std::uint64_t cell_id,
          LinkModel model,
          const FadingModel& fading)
{
  SplitMix64 gen(derive_seed(trial_seed, { receiver_id, cell_id }));
  auto positive = [](double v) { return std::max(static_cast<float>(v), FLT_MIN); };

  LinkDraw d;
  d.los_uniform = static_cast<float>(gen.uniform());
  if (model == LinkModel::Gtg) {
    d.fading_nlos = positive(sample_nakagami_power(fading.m_nlos, gen));
    d.fading_los = d.fading_nlos;
  } else {
    d.fading_los = positive(sample_nakagami_power(fading.m_los, gen));
    d.fading_nlos = positive(sample_nakagami_power(fading.m_nlos, gen));
  }
  return d;
}

double
beam_bearing_deg(std::uint64_t trial_seed, std::uint64_t cell_id)
{
  SplitMix64 gen(derive_seed(trial_seed, { kBeamTag, cell_id }));
  return gen.uniform() * 360.0 - 180.0;
}

LinkGeometry
link_geometry(const Receiver& rx, const Vec3& cell, Tier tier, const ChannelConfig& cfg)
{
  const Distance d = distance(rx.pos, cell);
  LinkGeometry g;
  g.model = link_model(rx.kind, tier);
  switch (g.model) {
    case LinkModel::Gtg: {
      const double pl = std::max(pl_gtg(d.d2d_m, cfg.fc_mhz, cell.z, rx.pos.z, cfg.gtg_distance_units),
                                 free_space_loss_db(d.d3d_m, cfg.fc_mhz));
      g.loss = { 0.0, pl, pl };
      break;
    }
    case LinkModel::Ata:
      g.loss = ata_loss(d.d2d_m, d.d3d_m, rx.pos.z, cfg.fc_mhz, cfg.ata_fc_units);
      break;
    case LinkModel::Atg:
      g.loss = atg_loss(d.d2d_m, cell.z, rx.pos.z, cfg.atg, cfg.fc_mhz);
      break;
  }
  const double theta = zenith_angle_deg(d.d2d_m, cell.z, rx.pos.z);
  g.a_v_db = vertical_attenuation_db(theta, cfg.antenna);
  g.serving_gain_db = element_gain_db(0.0, g.a_v_db, cfg.antenna);
  g.bearing_deg = std::atan2(rx.pos.y - cell.y, rx.pos.x - cell.x) * kDeg;
  return g;
}

double
interferer_gain_db(double bearing_deg,
                   double beam_bearing_deg,
                   double a_v_db,
                   const AntennaPattern& antenna)
{
  const double a_h = horizontal_attenuation_db(wrap_deg(bearing_deg - beam_bearing_deg), antenna);
  return element_gain_db(a_h, a_v_db, antenna);
}

LinkPowers
link_powers(const LinkGeometry& g,
            double tx_power_dbm,
            const LinkDraw& draw,
            double beam_bearing,
            const ChannelConfig& cfg)
{
  const bool los = static_cast<double>(draw.los_uniform) < g.loss.p_los;
  const double fade = static_cast<double>(los ? draw.fading_los : draw.fading_nlos);
  const double pl = cfg.loss_mode == LossMode::Average ? g.loss.average_db()
                                                       : (los ? g.loss.los_db : g.loss.nlos_db);
  const double base_db = tx_power_dbm - pl;

  const double g_int = interferer_gain_db(g.bearing_deg, beam_bearing, g.a_v_db, cfg.antenna);

  LinkPowers p;
  p.serving.path_loss_db = pl;
  p.serving.antenna_gain_db = g.serving_gain_db;
  p.serving.fading_linear = fade;
  p.serving.rx_power_mw = std::pow(10.0, (base_db + g.serving_gain_db) / 10.0) * fade;
  p.interferer_mw = std::pow(10.0, (base_db + g_int) / 10.0) * fade;
  return p;
}

LinkTable::LinkTable(std::size_t ues, std::vector<Tier> cell_tiers)
  : ues_(ues)
  , tiers_(std::move(cell_tiers))
  , entries_(ues * tiers_.size())
{
}

LinkTable
link_matrix(std::span<const Receiver> ues,
            const Network& net,
            const ChannelConfig& cfg,
            std::uint64_t trial_seed,
            std::uint64_t receiver_id_base)
{
  if (net.cell_count() == 0) {
    throw ParameterError("link table needs at least one cell");
  }
  std::vector<Tier> tiers;
  std::vector<const Vec3*> cells;
  std::vector<double> powers;
  for (Tier t : kTiers) {
    const NodeSet& set = net.tier(t);
    if (!set.empty() && !set.tx_power_dbm) {
      throw ParameterError("base-station tier without transmit power");
    }
    for (const auto& p : set.positions) {
      tiers.push_back(t);
      cells.push_back(&p);
      powers.push_back(*set.tx_power_dbm);
    }
  }

  LinkTable table(ues.size(), tiers);
  std::vector<double> beams(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    beams[c] = beam_bearing_deg(trial_seed, c);
  }
  for (std::size_t u = 0; u < ues.size(); ++u) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const LinkGeometry g = link_geometry(ues[u], *cells[c], tiers[c], cfg);
      const LinkDraw d = draw_link(trial_seed, receiver_id_base + u, c, g.model, cfg.fading);
      LinkEntry& e = table.at(u, c);
      e.model = g.model;
      e.powers = link_powers(g, powers[c], d, beams[c], cfg);
    }
  }
  return table;
}

TierView
fold_tier(std::span<const double> serving_mw, std::span<const double> interferer_mw)
{
  TierView v;
  for (std::size_t i = 0; i < serving_mw.size(); ++i) {
    if (v.strongest < 0 || serving_mw[i] > v.strongest_mw) {
      v.strongest = static_cast<long>(i);
      v.strongest_mw = serving_mw[i];
    }
  }
  for (std::size_t i = 0; i < interferer_mw.size(); ++i) {
    if (static_cast<long>(i) != v.strongest) {
      v.others_mw += interferer_mw[i];
    }
  }
  return v;
}

UeView
summarize(const LinkTable& table, std::size_t ue)
{
  UeView view;
  std::array<std::vector<double>, 3> serving;
  std::array<std::vector<double>, 3> interf;
  for (std::size_t c = 0; c < table.cell_count(); ++c) {
    const int t = static_cast<int>(table.cell_tier(c));
    serving[t].push_back(table.at(ue, c).powers.serving.rx_power_mw);
    interf[t].push_back(table.at(ue, c).powers.interferer_mw);
  }
  for (int t = 0; t < 3; ++t) {
    view.tiers[t] = fold_tier(serving[t], interf[t]);
  }
  return view;
}

SirSix
sir_six(const UeView& ue, double alpha_mbs, double alpha_pbs, double cap)
{
  const double rm = ue[Tier::Mbs].strongest_mw;
  const double rp = ue[Tier::Pbs].strongest_mw;
  const double ru = ue[Tier::Uabs].strongest_mw;
  const double im = ue[Tier::Mbs].others_mw;
  const double ip = ue[Tier::Pbs].others_mw;
  const double iu = ue[Tier::Uabs].others_mw;

  // Frame-synchronised: in the CSF phase every MBS and PBS is scaled.
  const double i_usf = im + ip + iu;
  const double i_csf = alpha_mbs * im + alpha_pbs * ip + iu;

  SirSix s;
  auto& v = s.value;
  v[0][0] = ratio(rm, rp + ru + i_usf, cap);
  v[0][1] = ratio(alpha_mbs * rm, alpha_pbs * rp + ru + i_csf, cap);
  v[1][0] = ratio(rp, rm + ru + i_usf, cap);
  v[1][1] = ratio(alpha_pbs * rp, alpha_mbs * rm + ru + i_csf, cap);
  v[2][0] = ratio(ru, rm + rp + i_usf, cap);
  v[2][1] = ratio(ru, alpha_mbs * rm + alpha_pbs * rp + i_csf, cap);
  return s;
}

Association
select_cell(std::size_t ue_index,
            const UeView& ue,
            const SirSix& sir,
            const IcicState& state,
            ScheduleRule rule)
{
  const std::array<double, 3> bias{ 0.0, state.tau_pbs_db, state.tau_uabs_db };
  const std::array<double, 3> rho{ state.rho_mbs_db, state.rho_pbs_db, state.rho_uabs_db };

  int best = -1;
  double best_score = 0.0;
  for (Tier t : kTiers) {
    const int i = static_cast<int>(t);
    if (ue.tiers[i].strongest < 0) {
      continue;
    }
    const double score = to_db(sir(t, Subframe::Usf)) + bias[i];
    // Strict comparison keeps the MBS > PBS > UABS priority on ties.
    if (best < 0 || score > best_score) {
      best = i;
      best_score = score;
    }
  }
  if (best < 0) {
    throw EvaluationError("UE sees no base station");
  }

  const Tier tier = static_cast<Tier>(best);
  Subframe sf = Subframe::Usf;
  if (rule == ScheduleRule::Tiered && tier != Tier::Uabs) {
    // A UE of a power-reducing tier moves to CSF only if it still clears rho there.
    sf = to_db(sir(tier, Subframe::Csf)) >= rho[best] ? Subframe::Csf : Subframe::Usf;
  } else {
    const bool at_or_above = to_db(sir(tier, Subframe::Usf)) >= rho[best];
    const bool high_to_usf = rule != ScheduleRule::GeCsf;
    sf = (at_or_above == high_to_usf) ? Subframe::Usf : Subframe::Csf;
  }

  Association a;
  a.ue_index = ue_index;
  a.serving_tier = tier;
  a.serving_cell_index = static_cast<std::size_t>(ue.tiers[best].strongest);
  a.subframe = sf;
  a.sir_linear = sir(tier, sf);
  return a;
}

LoadCounts::LoadCounts(std::size_t n_mbs, std::size_t n_pbs, std::size_t n_uabs)
{
  pools_[0].assign(n_mbs, { 0, 0 });
  pools_[1].assign(n_pbs, { 0, 0 });
  pools_[2].assign(n_uabs, { 0, 0 });
}

void
LoadCounts::add(const Association& a)
{
  pools_[static_cast<int>(a.serving_tier)].at(a.serving_cell_index)[static_cast<int>(a.subframe)]++;
}

int
LoadCounts::count(Tier t, std::size_t cell, Subframe s) const
{
  return pools_[static_cast<int>(t)].at(cell)[static_cast<int>(s)];
}

int
LoadCounts::cell_total(Tier t, std::size_t cell) const
{
  const auto& p = pools_[static_cast<int>(t)].at(cell);
  return p[0] + p[1];
}

double
subframe_share(Tier t, Subframe s, const IcicState& state)
{
  const bool usf = s == Subframe::Usf;
  switch (t) {
    case Tier::Mbs:
      return usf ? state.beta_mbs : 1.0 - state.beta_mbs;
    case Tier::Pbs:
      return usf ? state.beta_pbs : 1.0 - state.beta_pbs;
    case Tier::Uabs:
      break;
  }
  const double b = state.beta_mbs + state.beta_pbs;
  return usf ? b : 2.0 - b;
}

double
spectral_efficiency(Tier t, Subframe s, double sir_linear, const IcicState& state, int pool_count)
{
  if (pool_count < 1) {
    throw EvaluationError("scheduled UE in an empty subframe pool");
  }
  return subframe_share(t, s, state) * std::log2(1.0 + sir_linear) / pool_count;
}

double
spectral_efficiency(const Association& a, const IcicState& state, const LoadCounts& loads)
{
  return spectral_efficiency(a.serving_tier,
                             a.subframe,
                             a.sir_linear,
                             state,
                             loads.count(a.serving_tier, a.serving_cell_index, a.subframe));
}

void
write_associations_csv(std::ostream& out,
                       std::span<const Association> assoc,
                       std::span<const Receiver> ues,
                       std::span<const double> se)
{
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << "ue,x,y,tier,cell,subframe,sir_db,se\n";
  for (std::size_t i = 0; i < assoc.size(); ++i) {
    const auto& a = assoc[i];
    const auto& p = ues[a.ue_index].pos;
    out << a.ue_index << ',' << p.x << ',' << p.y << ',' << to_string(a.serving_tier) << ','
        << a.serving_cell_index << ',' << to_string(a.subframe) << ',' << to_db(a.sir_linear) << ','
        << se[i] << '\n';
  }
  out.precision(old_precision);
}

} // namespace aghet
