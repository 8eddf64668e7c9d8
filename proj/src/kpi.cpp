#include "aghet/kpi.hpp"

#include "aghet/errors.hpp"
#include "aghet/rng.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <string>

namespace aghet {

std::string_view
to_string(KpiKind k)
{
  return k == KpiKind::FifthPercentileSe ? "5pse" : "coverage";
}

KpiKind
kpi_from_string(std::string_view s)
{
  if (s == "5pse") {
    return KpiKind::FifthPercentileSe;
  }
  if (s == "coverage") {
    return KpiKind::Coverage;
  }
  throw ConfigError("unknown KPI '" + std::string(s) + "' (expected 5pse, coverage)");
}

void
KpiConfig::validate() const
{
  if (trials < 1) {
    throw ParameterError("KPI trials must be >= 1");
  }
  if (!(coverage_threshold_se > 0.0)) {
    throw ParameterError("coverage threshold must be positive");
  }
  if (!(coverage_grid_pitch_m > 0.0)) {
    throw ParameterError("coverage grid pitch must be positive");
  }
}

double
KpiResult::std_error() const
{
  const auto n = per_trial_values.size();
  if (n < 2) {
    return 0.0;
  }
  double ss = 0.0;
  for (double v : per_trial_values) {
    ss += (v - value) * (v - value);
  }
  return std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
}

NodeSet
Scenario::uabs_nodes(const IcicState& state) const
{
  if (state.uabs_xy.size() != n_uabs) {
    throw ParameterError("state holds " + std::to_string(state.uabs_xy.size()) +
                         " UABS positions, scenario expects " + std::to_string(n_uabs));
  }
  NodeSet set;
  set.role = Role::Uabs;
  set.tx_power_dbm = uabs_tx_dbm;
  set.positions.reserve(n_uabs);
  for (const auto& p : state.uabs_xy) {
    set.positions.push_back({ p.x, p.y, uabs_height_m });
  }
  return set;
}

double
percentile(std::span<const double> values, double q)
{
  if (values.empty()) {
    throw EvaluationError("percentile of an empty list");
  }
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * std::clamp(q, 0.0, 100.0) / 100.0;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= v.size()) {
    return v.back();
  }
  return v[lo] + (h - static_cast<double>(lo)) * (v[lo + 1] - v[lo]);
}

double
fifth_percentile(std::span<const double> values)
{
  return percentile(values, 5.0);
}

std::vector<Receiver>
probe_grid(const Region& region, double pitch_m, double height_m)
{
  region.validate();
  if (!(pitch_m > 0.0)) {
    throw ParameterError("probe pitch must be positive");
  }
  const auto nx = std::max<long>(2, std::lround(std::ceil(region.width_m / pitch_m)));
  const auto ny = std::max<long>(2, std::lround(std::ceil(region.height_m / pitch_m)));
  const double sx = region.width_m / static_cast<double>(nx);
  const double sy = region.height_m / static_cast<double>(ny);
  std::vector<Receiver> out;
  out.reserve(static_cast<std::size_t>(nx * ny));
  for (long j = 0; j < ny; ++j) {
    for (long i = 0; i < nx; ++i) {
      out.push_back({ { (static_cast<double>(i) + 0.5) * sx, (static_cast<double>(j) + 0.5) * sy, height_m },
                      UeKind::Ground });
    }
  }
  return out;
}

std::uint64_t
trial_seed(std::uint64_t fading_seed, int trial)
{
  return derive_seed(fading_seed, { static_cast<std::uint64_t>(trial) });
}

namespace {

Network
network_of(const Scenario& sc, const IcicState& state)
{
  return { sc.mbs, sc.pbs, sc.uabs_nodes(state) };
}

std::vector<Association>
associate_table(const LinkTable& table, const IcicState& state, const RadioConfig& radio)
{
  std::vector<Association> out;
  out.reserve(table.ue_count());
  const double cap = radio.sir_cap_linear();
  for (std::size_t u = 0; u < table.ue_count(); ++u) {
    const UeView view = summarize(table, u);
    const SirSix sir = sir_six(view, state.alpha_mbs, state.alpha_pbs, cap);
    out.push_back(select_cell(u, view, sir, state, radio.rule));
  }
  return out;
}

LoadCounts
loads_of(const Scenario& sc, std::span<const Association> assoc)
{
  LoadCounts loads(sc.mbs.size(), sc.pbs.size(), sc.n_uabs);
  for (const auto& a : assoc) {
    loads.add(a);
  }
  return loads;
}

double
probe_se(const Association& a, const IcicState& state, const LoadCounts& loads)
{
  // A probe is one more UE joining its pool.
  return spectral_efficiency(a.serving_tier,
                             a.subframe,
                             a.sir_linear,
                             state,
                             loads.count(a.serving_tier, a.serving_cell_index, a.subframe) + 1);
}

double
coverage_fraction(std::span<const double> se, double threshold)
{
  if (se.empty()) {
    return 0.0;
  }
  const auto hits = std::count_if(se.begin(), se.end(), [&](double v) { return v > threshold; });
  return static_cast<double>(hits) / static_cast<double>(se.size());
}

KpiResult
finish(std::vector<double> per_trial)
{
  KpiResult r;
  r.trial_count = static_cast<int>(per_trial.size());
  double sum = 0.0;
  for (double v : per_trial) {
    sum += v;
  }
  r.value = per_trial.empty() ? 0.0 : sum / static_cast<double>(per_trial.size());
  r.per_trial_values = std::move(per_trial);
  return r;
}

} // namespace

TrialSnapshot
snapshot(const IcicState& state, const Scenario& scenario, const KpiConfig& cfg, int trial, bool with_probes)
{
  state.validate();
  const Network net = network_of(scenario, state);
  const std::uint64_t seed = trial_seed(scenario.fading_seed, trial);
  const std::vector<Receiver> ues = receivers_from(scenario.gue, scenario.aue);

  TrialSnapshot s;
  const LinkTable table = link_matrix(ues, net, scenario.channel, seed, 0);
  s.ue_assoc = associate_table(table, state, scenario.radio);
  const LoadCounts loads = loads_of(scenario, s.ue_assoc);
  s.ue_se.reserve(s.ue_assoc.size());
  for (const auto& a : s.ue_assoc) {
    s.ue_se.push_back(spectral_efficiency(a, state, loads));
  }

  if (with_probes) {
    const auto probes = probe_grid(scenario.region, cfg.coverage_grid_pitch_m, scenario.gue_height_m);
    const LinkTable ptable = link_matrix(probes, net, scenario.channel, seed, kProbeIdBase);
    s.probe_assoc = associate_table(ptable, state, scenario.radio);
    s.probe_se.reserve(s.probe_assoc.size());
    for (const auto& a : s.probe_assoc) {
      s.probe_se.push_back(probe_se(a, state, loads));
    }
  }
  return s;
}

double
trial_fifth_percentile(const TrialSnapshot& s)
{
  return s.ue_se.empty() ? 0.0 : fifth_percentile(s.ue_se);
}

double
trial_coverage(const TrialSnapshot& s, double threshold_se)
{
  return coverage_fraction(s.probe_se, threshold_se);
}

KpiEvaluator::KpiEvaluator(Scenario scenario, KpiConfig cfg)
  : scenario_(std::move(scenario))
  , cfg_(cfg)
{
  cfg_.validate();
  scenario_.region.validate();
  scenario_.channel.validate();
  if (!scenario_.mbs.empty() && !scenario_.mbs.tx_power_dbm) {
    throw ParameterError("MBS tier without transmit power");
  }
  if (!scenario_.pbs.empty() && !scenario_.pbs.tx_power_dbm) {
    throw ParameterError("PBS tier without transmit power");
  }
  n_terrestrial_ = scenario_.mbs.size() + scenario_.pbs.size();
  const std::size_t cells = n_terrestrial_ + scenario_.n_uabs;
  if (cells == 0) {
    throw ParameterError("scenario has no base stations");
  }

  const auto trials = static_cast<std::size_t>(cfg_.trials);
  seeds_.resize(trials);
  beams_.resize(trials * cells);
  for (std::size_t t = 0; t < trials; ++t) {
    seeds_[t] = trial_seed(scenario_.fading_seed, static_cast<int>(t));
    for (std::size_t c = 0; c < cells; ++c) {
      beams_[t * cells + c] = beam_bearing_deg(seeds_[t], c);
    }
  }

  ues_.rx = receivers_from(scenario_.gue, scenario_.aue);
  ues_.id_base = 0;
  prepare(ues_);
  probes_.rx = probe_grid(scenario_.region, cfg_.coverage_grid_pitch_m, scenario_.gue_height_m);
  probes_.id_base = kProbeIdBase;
  prepare(probes_);
}

void
KpiEvaluator::prepare(Group& g) const
{
  const std::size_t trials = seeds_.size();
  const std::size_t n_rx = g.rx.size();
  const std::size_t n_mbs = scenario_.mbs.size();
  const std::size_t n_pbs = scenario_.pbs.size();
  const std::size_t n_uabs = scenario_.n_uabs;
  const std::size_t cells = n_terrestrial_ + n_uabs;
  const auto& ch = scenario_.channel;

  g.mbs.resize(trials * n_rx);
  g.pbs.resize(trials * n_rx);
  g.uabs_draws.resize(trials * n_rx * n_uabs);

  std::vector<double> serving(trials * n_terrestrial_);
  std::vector<double> interf(trials * n_terrestrial_);
  for (std::size_t i = 0; i < n_rx; ++i) {
    const Receiver& rx = g.rx[i];
    for (std::size_t c = 0; c < n_terrestrial_; ++c) {
      const bool is_mbs = c < n_mbs;
      const Tier tier = is_mbs ? Tier::Mbs : Tier::Pbs;
      const Vec3& pos = is_mbs ? scenario_.mbs.positions[c] : scenario_.pbs.positions[c - n_mbs];
      const double tx = is_mbs ? *scenario_.mbs.tx_power_dbm : *scenario_.pbs.tx_power_dbm;
      const LinkGeometry geo = link_geometry(rx, pos, tier, ch);
      for (std::size_t t = 0; t < trials; ++t) {
        const LinkDraw d = draw_link(seeds_[t], g.id_base + i, c, geo.model, ch.fading);
        const LinkPowers p = link_powers(geo, tx, d, beams_[t * cells + c], ch);
        serving[t * n_terrestrial_ + c] = p.serving.rx_power_mw;
        interf[t * n_terrestrial_ + c] = p.interferer_mw;
      }
    }
    for (std::size_t t = 0; t < trials; ++t) {
      const double* s = serving.data() + t * n_terrestrial_;
      const double* f = interf.data() + t * n_terrestrial_;
      g.mbs[t * n_rx + i] = fold_tier({ s, n_mbs }, { f, n_mbs });
      g.pbs[t * n_rx + i] = fold_tier({ s + n_mbs, n_pbs }, { f + n_mbs, n_pbs });
      const LinkModel model = link_model(rx.kind, Tier::Uabs);
      for (std::size_t k = 0; k < n_uabs; ++k) {
        g.uabs_draws[(t * n_rx + i) * n_uabs + k] =
          draw_link(seeds_[t], g.id_base + i, n_terrestrial_ + k, model, ch.fading);
      }
    }
  }
}

void
KpiEvaluator::uabs_links(const Group& g, const std::vector<Vec3>& uabs, std::vector<UabsLink>& out) const
{
  const auto& ch = scenario_.channel;
  const double tx = scenario_.uabs_tx_dbm;
  out.resize(g.rx.size() * uabs.size());
  for (std::size_t i = 0; i < g.rx.size(); ++i) {
    for (std::size_t k = 0; k < uabs.size(); ++k) {
      const LinkGeometry geo = link_geometry(g.rx[i], uabs[k], Tier::Uabs, ch);
      UabsLink& l = out[i * uabs.size() + k];
      l.p_los = geo.loss.p_los;
      if (ch.loss_mode == LossMode::Average) {
        l.base_los_db = l.base_nlos_db = tx - geo.loss.average_db();
      } else {
        l.base_los_db = tx - geo.loss.los_db;
        l.base_nlos_db = tx - geo.loss.nlos_db;
      }
      l.serving_los_mw = std::pow(10.0, (l.base_los_db + geo.serving_gain_db) / 10.0);
      l.serving_nlos_mw = std::pow(10.0, (l.base_nlos_db + geo.serving_gain_db) / 10.0);
      l.a_v_db = geo.a_v_db;
      l.bearing_deg = geo.bearing_deg;
    }
  }
}

void
KpiEvaluator::associate(const Group& g,
                        const std::vector<UabsLink>& links,
                        int trial,
                        const IcicState& state,
                        std::vector<Association>& out) const
{
  const auto t = static_cast<std::size_t>(trial);
  const std::size_t n_rx = g.rx.size();
  const std::size_t n_uabs = scenario_.n_uabs;
  const std::size_t cells = n_terrestrial_ + n_uabs;
  const double* beams = beams_.data() + t * cells + n_terrestrial_;
  const double cap = scenario_.radio.sir_cap_linear();
  const auto& antenna = scenario_.channel.antenna;

  std::vector<double> serving(n_uabs);
  std::vector<double> interf(n_uabs);
  out.resize(n_rx);
  for (std::size_t i = 0; i < n_rx; ++i) {
    const LinkDraw* draws = g.uabs_draws.data() + (t * n_rx + i) * n_uabs;
    const UabsLink* l = links.data() + i * n_uabs;
    for (std::size_t k = 0; k < n_uabs; ++k) {
      const bool los = static_cast<double>(draws[k].los_uniform) < l[k].p_los;
      const double fade = static_cast<double>(los ? draws[k].fading_los : draws[k].fading_nlos);
      const double base = los ? l[k].base_los_db : l[k].base_nlos_db;
      serving[k] = (los ? l[k].serving_los_mw : l[k].serving_nlos_mw) * fade;
      const double g_int = interferer_gain_db(l[k].bearing_deg, beams[k], l[k].a_v_db, antenna);
      interf[k] = std::pow(10.0, (base + g_int) / 10.0) * fade;
    }
    UeView view;
    view[Tier::Mbs] = g.mbs[t * n_rx + i];
    view[Tier::Pbs] = g.pbs[t * n_rx + i];
    view[Tier::Uabs] = fold_tier(serving, interf);
    const SirSix sir = sir_six(view, state.alpha_mbs, state.alpha_pbs, cap);
    out[i] = select_cell(i, view, sir, state, scenario_.radio.rule);
  }
}

KpiEvaluator::Both
KpiEvaluator::evaluate_both(const IcicState& state) const
{
  state.validate();
  const NodeSet uabs = scenario_.uabs_nodes(state);

  std::vector<UabsLink> ue_links;
  std::vector<UabsLink> probe_links;
  uabs_links(ues_, uabs.positions, ue_links);
  uabs_links(probes_, uabs.positions, probe_links);

  std::vector<double> fifth(seeds_.size());
  std::vector<double> cover(seeds_.size());
  std::vector<Association> ue_assoc;
  std::vector<Association> probe_assoc;
  std::vector<double> se;
  for (std::size_t t = 0; t < seeds_.size(); ++t) {
    associate(ues_, ue_links, static_cast<int>(t), state, ue_assoc);
    const LoadCounts loads = loads_of(scenario_, ue_assoc);

    se.clear();
    for (const auto& a : ue_assoc) {
      se.push_back(spectral_efficiency(a, state, loads));
    }
    if (se.empty()) {
      if (!warned_empty_) {
        spdlog::warn("trial {} has no scheduled UEs; its 5pSE counts as 0", t);
        warned_empty_ = true;
      }
      fifth[t] = 0.0;
    } else {
      fifth[t] = fifth_percentile(se);
    }

    associate(probes_, probe_links, static_cast<int>(t), state, probe_assoc);
    se.clear();
    for (const auto& a : probe_assoc) {
      se.push_back(probe_se(a, state, loads));
    }
    cover[t] = coverage_fraction(se, cfg_.coverage_threshold_se);
  }
  return { finish(std::move(fifth)), finish(std::move(cover)) };
}

KpiResult
KpiEvaluator::evaluate(const IcicState& state, KpiKind kind) const
{
  state.validate();
  const NodeSet uabs = scenario_.uabs_nodes(state);
  const bool want_cover = kind == KpiKind::Coverage;

  std::vector<UabsLink> ue_links;
  std::vector<UabsLink> probe_links;
  uabs_links(ues_, uabs.positions, ue_links);
  if (want_cover) {
    uabs_links(probes_, uabs.positions, probe_links);
  }

  std::vector<double> per_trial(seeds_.size());
  std::vector<Association> ue_assoc;
  std::vector<Association> probe_assoc;
  std::vector<double> se;
  for (std::size_t t = 0; t < seeds_.size(); ++t) {
    associate(ues_, ue_links, static_cast<int>(t), state, ue_assoc);
    const LoadCounts loads = loads_of(scenario_, ue_assoc);
    se.clear();
    if (want_cover) {
      associate(probes_, probe_links, static_cast<int>(t), state, probe_assoc);
      for (const auto& a : probe_assoc) {
        se.push_back(probe_se(a, state, loads));
      }
      per_trial[t] = coverage_fraction(se, cfg_.coverage_threshold_se);
      continue;
    }
    for (const auto& a : ue_assoc) {
      se.push_back(spectral_efficiency(a, state, loads));
    }
    if (se.empty()) {
      if (!warned_empty_) {
        spdlog::warn("trial {} has no scheduled UEs; its 5pSE counts as 0", t);
        warned_empty_ = true;
      }
      per_trial[t] = 0.0;
    } else {
      per_trial[t] = fifth_percentile(se);
    }
  }
  return finish(std::move(per_trial));
}

KpiResult
evaluate(const IcicState& state, const Scenario& scenario, const KpiConfig& cfg)
{
  return KpiEvaluator(scenario, cfg)(state);
}

double
coverage_probability(const IcicState& state, const Scenario& scenario, const KpiConfig& cfg)
{
  return KpiEvaluator(scenario, cfg).evaluate(state, KpiKind::Coverage).value;
}

} // namespace aghet
