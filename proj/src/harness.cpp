#include "aghet/harness.hpp"

#include "aghet/errors.hpp"
#include "aghet/rng.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace aghet {

namespace {

enum SeedTag : std::uint64_t
{
  kTagMbs = 1,
  kTagPbs,
  kTagGue,
  kTagAue,
  kTagFading,
  kTagOptimizer
};

std::string
fmt_double(double v)
{
  std::ostringstream os;
  os.precision(std::numeric_limits<double>::max_digits10);
  os << v;
  return os.str();
}

std::string
trim(std::string s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string>
split_list(const std::string& s)
{
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) {
      out.push_back(item);
    }
  }
  return out;
}

double
parse_double(const std::string& key, const std::string& v)
{
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) {
      throw std::invalid_argument(v);
    }
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': '" + v + "' is not a number");
  }
}

std::uint64_t
parse_uint(const std::string& key, const std::string& v)
{
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("config key '" + key + "': '" + v + "' is not a non-negative integer");
  }
  return out;
}

bool
parse_bool(const std::string& key, const std::string& v)
{
  if (v == "true" || v == "1") {
    return true;
  }
  if (v == "false" || v == "0") {
    return false;
  }
  throw ConfigError("config key '" + key + "': '" + v + "' is not a boolean");
}

std::vector<double>
parse_doubles(const std::string& key, const std::string& v)
{
  std::vector<double> out;
  for (const auto& item : split_list(v)) {
    out.push_back(parse_double(key, item));
  }
  if (out.empty()) {
    throw ConfigError("config key '" + key + "' needs at least one value");
  }
  return out;
}

std::string
join_doubles(const std::vector<double>& v)
{
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out += (i ? "," : "") + fmt_double(v[i]);
  }
  return out;
}

template <class T, class F>
std::string
join_names(const std::vector<T>& v, F name)
{
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out += (i ? "," : "") + std::string(name(v[i]));
  }
  return out;
}

struct Key
{
  const char* name;
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
};

Key
dbl(const char* name, double ExperimentConfig::*field)
{
  return { name,
           [field](const ExperimentConfig& c) { return fmt_double(c.*field); },
           [field](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.*field = parse_double(k, v);
           } };
}

template <class Get>
Key
dbl_ref(const char* name, Get ref)
{
  return { name,
           [ref](const ExperimentConfig& c) { return fmt_double(ref(const_cast<ExperimentConfig&>(c))); },
           [ref](ExperimentConfig& c, const std::string& k, const std::string& v) { ref(c) = parse_double(k, v); } };
}

template <class Get>
Key
int_ref(const char* name, Get ref)
{
  return { name,
           [ref](const ExperimentConfig& c) { return std::to_string(ref(const_cast<ExperimentConfig&>(c))); },
           [ref](ExperimentConfig& c, const std::string& k, const std::string& v) {
             ref(c) = static_cast<std::remove_reference_t<decltype(ref(c))>>(parse_uint(k, v));
           } };
}

template <class Get>
Key
list_ref(const char* name, Get ref)
{
  return { name,
           [ref](const ExperimentConfig& c) { return join_doubles(ref(const_cast<ExperimentConfig&>(c))); },
           [ref](ExperimentConfig& c, const std::string& k, const std::string& v) { ref(c) = parse_doubles(k, v); } };
}

const std::vector<Key>&
keys()
{
  static const std::vector<Key> table = {
    dbl_ref("region_width_m", [](ExperimentConfig& c) -> double& { return c.region.width_m; }),
    dbl_ref("region_height_m", [](ExperimentConfig& c) -> double& { return c.region.height_m; }),
    dbl("lambda_mbs_per_km2", &ExperimentConfig::lambda_mbs),
    dbl("lambda_pbs_per_km2", &ExperimentConfig::lambda_pbs),
    dbl("lambda_gue_per_km2", &ExperimentConfig::lambda_gue),
    dbl("lambda_aue_per_km2", &ExperimentConfig::lambda_aue),
    int_ref("n_uabs", [](ExperimentConfig& c) -> std::size_t& { return c.n_uabs; }),
    dbl("h_mbs_m", &ExperimentConfig::h_mbs_m),
    dbl("h_pbs_m", &ExperimentConfig::h_pbs_m),
    list_ref("uabs_height_m", [](ExperimentConfig& c) -> std::vector<double>& { return c.uabs_heights_m; }),
    dbl("h_gue_m", &ExperimentConfig::h_gue_m),
    dbl("h_aue_m", &ExperimentConfig::h_aue_m),
    dbl("p_mbs_dbm", &ExperimentConfig::p_mbs_dbm),
    dbl("p_pbs_dbm", &ExperimentConfig::p_pbs_dbm),
    dbl("p_uabs_dbm", &ExperimentConfig::p_uabs_dbm),
    dbl_ref("fc_mhz", [](ExperimentConfig& c) -> double& { return c.channel.fc_mhz; }),
    { "ata_fc_units",
      [](const ExperimentConfig& c) { return std::string(c.channel.ata_fc_units == FrequencyUnits::MHz ? "mhz" : "ghz"); },
      [](ExperimentConfig& c, const std::string& k, const std::string& v) {
        if (v != "mhz" && v != "ghz") {
          throw ConfigError("config key '" + k + "' expects mhz or ghz");
        }
        c.channel.ata_fc_units = v == "mhz" ? FrequencyUnits::MHz : FrequencyUnits::GHz;
      } },
    { "gtg_distance_units",
      [](const ExperimentConfig& c) {
        return std::string(c.channel.gtg_distance_units == DistanceUnits::Meters ? "m" : "km");
      },
      [](ExperimentConfig& c, const std::string& k, const std::string& v) {
        if (v != "m" && v != "km") {
          throw ConfigError("config key '" + k + "' expects m or km");
        }
        c.channel.gtg_distance_units = v == "m" ? DistanceUnits::Meters : DistanceUnits::Kilometers;
      } },
    { "loss_mode",
      [](const ExperimentConfig& c) {
        return std::string(c.channel.loss_mode == LossMode::Average ? "average" : "sampled");
      },
      [](ExperimentConfig& c, const std::string& k, const std::string& v) {
        if (v != "average" && v != "sampled") {
          throw ConfigError("config key '" + k + "' expects average or sampled");
        }
        c.channel.loss_mode = v == "average" ? LossMode::Average : LossMode::Sampled;
      } },
    dbl_ref("antenna_gain_max_dbi", [](ExperimentConfig& c) -> double& { return c.channel.antenna.g_e_max_dbi; }),
    dbl_ref("antenna_a_m_db", [](ExperimentConfig& c) -> double& { return c.channel.antenna.a_m_db; }),
    dbl_ref("antenna_slav_db", [](ExperimentConfig& c) -> double& { return c.channel.antenna.slav_db; }),
    dbl_ref("antenna_phi_3db_deg", [](ExperimentConfig& c) -> double& { return c.channel.antenna.phi_3db_deg; }),
    dbl_ref("antenna_theta_3db_deg", [](ExperimentConfig& c) -> double& { return c.channel.antenna.theta_3db_deg; }),
    dbl_ref("antenna_tilt_deg", [](ExperimentConfig& c) -> double& { return c.channel.antenna.theta_tilt_deg; }),
    dbl_ref("nakagami_m_los", [](ExperimentConfig& c) -> double& { return c.channel.fading.m_los; }),
    dbl_ref("nakagami_m_nlos", [](ExperimentConfig& c) -> double& { return c.channel.fading.m_nlos; }),
    dbl_ref("atg_zeta", [](ExperimentConfig& c) -> double& { return c.channel.atg.zeta; }),
    dbl_ref("atg_xi_per_km2", [](ExperimentConfig& c) -> double& { return c.channel.atg.xi; }),
    dbl_ref("atg_omega_m", [](ExperimentConfig& c) -> double& { return c.channel.atg.omega_m; }),
    dbl_ref("atg_a", [](ExperimentConfig& c) -> double& { return c.channel.atg.s_curve_a; }),
    dbl_ref("atg_b", [](ExperimentConfig& c) -> double& { return c.channel.atg.s_curve_b; }),
    dbl_ref("atg_eta_los_db", [](ExperimentConfig& c) -> double& { return c.channel.atg.eta_los_db; }),
    dbl_ref("atg_eta_nlos_db", [](ExperimentConfig& c) -> double& { return c.channel.atg.eta_nlos_db; }),
    { "schedule_rule",
      [](const ExperimentConfig& c) { return std::string(to_string(c.radio.rule)); },
      [](ExperimentConfig& c, const std::string&, const std::string& v) {
        c.radio.rule = schedule_rule_from_string(v);
      } },
    dbl_ref("sir_cap_db", [](ExperimentConfig& c) -> double& { return c.radio.sir_cap_db; }),
    dbl_ref("coverage_threshold_se", [](ExperimentConfig& c) -> double& { return c.kpi.coverage_threshold_se; }),
    dbl_ref("coverage_grid_pitch_m", [](ExperimentConfig& c) -> double& { return c.kpi.coverage_grid_pitch_m; }),
    int_ref("trials", [](ExperimentConfig& c) -> int& { return c.kpi.trials; }),
    { "regimes",
      [](const ExperimentConfig& c) { return join_names(c.regimes, [](IcicRegime r) { return to_string(r); }); },
      [](ExperimentConfig& c, const std::string&, const std::string& v) {
        c.regimes.clear();
        for (const auto& s : split_list(v)) {
          c.regimes.push_back(regime_from_string(s));
        }
      } },
    { "optimizers",
      [](const ExperimentConfig& c) { return join_names(c.optimizers, [](OptimizerKind k) { return to_string(k); }); },
      [](ExperimentConfig& c, const std::string&, const std::string& v) {
        c.optimizers.clear();
        for (const auto& s : split_list(v)) {
          c.optimizers.push_back(optimizer_from_string(s));
        }
      } },
    { "kpis",
      [](const ExperimentConfig& c) { return join_names(c.kpis, [](KpiKind k) { return to_string(k); }); },
      [](ExperimentConfig& c, const std::string&, const std::string& v) {
        c.kpis.clear();
        for (const auto& s : split_list(v)) {
          c.kpis.push_back(kpi_from_string(s));
        }
      } },
    int_ref("ga_pop_size", [](ExperimentConfig& c) -> int& { return c.ga.pop_size; }),
    int_ref("ga_generations", [](ExperimentConfig& c) -> int& { return c.ga.generations; }),
    dbl_ref("ga_crossover_rate", [](ExperimentConfig& c) -> double& { return c.ga.crossover_rate; }),
    dbl_ref("ga_mutation_rate", [](ExperimentConfig& c) -> double& { return c.ga.mutation_rate; }),
    int_ref("hm_size", [](ExperimentConfig& c) -> int& { return c.ehsga.hm_size; }),
    int_ref("ehsga_improvisations", [](ExperimentConfig& c) -> int& { return c.ehsga.improvisations; }),
    dbl_ref("hmcr_min", [](ExperimentConfig& c) -> double& { return c.ehsga.hmcr_min; }),
    dbl_ref("hmcr_max", [](ExperimentConfig& c) -> double& { return c.ehsga.hmcr_max; }),
    dbl_ref("par_min", [](ExperimentConfig& c) -> double& { return c.ehsga.par_min; }),
    dbl_ref("par_max", [](ExperimentConfig& c) -> double& { return c.ehsga.par_max; }),
    dbl_ref("fret", [](ExperimentConfig& c) -> double& { return c.ehsga.fret; }),
    dbl_ref("fret_span", [](ExperimentConfig& c) -> double& { return c.ehsga.fret_span; }),
    list_ref("brute_alpha", [](ExperimentConfig& c) -> std::vector<double>& { return c.brute.alpha; }),
    list_ref("brute_beta", [](ExperimentConfig& c) -> std::vector<double>& { return c.brute.beta; }),
    list_ref("brute_rho_mbs_db", [](ExperimentConfig& c) -> std::vector<double>& { return c.brute.rho_mbs; }),
    list_ref("brute_rho_pbs_db", [](ExperimentConfig& c) -> std::vector<double>& { return c.brute.rho_pbs; }),
    list_ref("brute_rho_uabs_db", [](ExperimentConfig& c) -> std::vector<double>& { return c.brute.rho_uabs; }),
    list_ref("brute_tau_db", [](ExperimentConfig& c) -> std::vector<double>& { return c.brute.tau; }),
    int_ref("brute_budget", [](ExperimentConfig& c) -> std::size_t& { return c.brute_budget; }),
    { "seed_hex_layout",
      [](const ExperimentConfig& c) { return std::string(c.seed_hex_layout ? "true" : "false"); },
      [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.seed_hex_layout = parse_bool(k, v); } },
    int_ref("seed", [](ExperimentConfig& c) -> std::uint64_t& { return c.seed; }),
  };
  return table;
}

const Key*
find_key(const std::string& name)
{
  for (const auto& k : keys()) {
    if (name == k.name) {
      return &k;
    }
  }
  return nullptr;
}

} // namespace

ExperimentConfig
ExperimentConfig::table4()
{
  return {};
}

ExperimentConfig
ExperimentConfig::desk()
{
  ExperimentConfig c;
  c.region = { 4000.0, 4000.0 };
  c.lambda_mbs = 4.0;
  c.lambda_pbs = 12.0;
  c.lambda_gue = 50.0;
  c.lambda_aue = 1.8;
  c.n_uabs = 12;
  c.ga.pop_size = 20;
  c.ga.generations = 30;
  c.ehsga.hm_size = 20;
  c.ehsga.improvisations = 30;
  c.kpi.trials = 20;
  c.brute.alpha = { 0.0, 0.5, 1.0 };
  c.brute.beta = { 0.3, 0.7 };
  c.brute.rho_mbs = { 30.0 };
  c.brute.rho_pbs = { 0.0 };
  c.brute.rho_uabs = { 0.0 };
  return c;
}

void
ExperimentConfig::validate() const
{
  region.validate();
  for (double l : { lambda_mbs, lambda_pbs, lambda_gue, lambda_aue }) {
    if (!(l >= 0.0)) {
      throw ConfigError("densities must be non-negative");
    }
  }
  for (double h : { h_mbs_m, h_pbs_m, h_gue_m, h_aue_m }) {
    if (!(h > 0.0)) {
      throw ConfigError("heights must be positive");
    }
  }
  if (uabs_heights_m.empty()) {
    throw ConfigError("at least one UABS height is required");
  }
  for (double h : uabs_heights_m) {
    if (!(h > h_gue_m)) {
      throw ConfigError("UABS height must exceed the GUE height");
    }
  }
  if (regimes.empty() || optimizers.empty() || kpis.empty()) {
    throw ConfigError("regimes, optimizers and kpis must be non-empty");
  }
  try {
    channel.validate();
    kpi.validate();
    ga.validate();
    ehsga.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
}

void
save_config(std::ostream& out, const ExperimentConfig& cfg)
{
  for (const auto& k : keys()) {
    out << k.name << " = " << k.get(cfg) << '\n';
  }
}

std::string
config_to_string(const ExperimentConfig& cfg)
{
  std::ostringstream os;
  save_config(os, cfg);
  return os.str();
}

void
set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value)
{
  const Key* k = find_key(key);
  if (!k) {
    throw ConfigError("unknown config key '" + key + "'");
  }
  k->set(cfg, key, value);
}

ExperimentConfig
parse_config(std::istream& in)
{
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int lineno = 0;
  ExperimentConfig cfg = ExperimentConfig::table4();
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + " is not key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key == "preset") {
      if (value == "desk") {
        cfg = ExperimentConfig::desk();
      } else if (value == "table4") {
        cfg = ExperimentConfig::table4();
      } else {
        throw ConfigError("unknown preset '" + value + "' (expected table4, desk)");
      }
      continue;
    }
    if (!find_key(key)) {
      throw ConfigError("unknown config key '" + key + "'");
    }
    entries.emplace_back(std::move(key), std::move(value));
  }

  std::set<std::string> seen;
  for (const auto& [k, v] : entries) {
    set_config_value(cfg, k, v);
    seen.insert(k);
  }
  for (const auto& k : keys()) {
    if (!seen.count(k.name)) {
      spdlog::info("config key '{}' missing, using default {}", k.name, k.get(cfg));
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig
load_config(const std::string& path)
{
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  return parse_config(in);
}

Scenario
build_scenario(const ExperimentConfig& cfg, double uabs_height_m)
{
  cfg.validate();
  Scenario sc;
  sc.region = cfg.region;
  sc.mbs = sample_ppp(cfg.lambda_mbs, cfg.region, cfg.h_mbs_m, Role::Mbs, derive_seed(cfg.seed, { kTagMbs }), cfg.p_mbs_dbm);
  sc.pbs = sample_ppp(cfg.lambda_pbs, cfg.region, cfg.h_pbs_m, Role::Pbs, derive_seed(cfg.seed, { kTagPbs }), cfg.p_pbs_dbm);
  sc.gue = sample_ppp(cfg.lambda_gue, cfg.region, cfg.h_gue_m, Role::Gue, derive_seed(cfg.seed, { kTagGue }));
  sc.aue = sample_ppp(cfg.lambda_aue, cfg.region, cfg.h_aue_m, Role::Aue, derive_seed(cfg.seed, { kTagAue }));
  sc.uabs_height_m = uabs_height_m;
  sc.uabs_tx_dbm = cfg.p_uabs_dbm;
  sc.gue_height_m = cfg.h_gue_m;
  sc.n_uabs = cfg.n_uabs;
  sc.channel = cfg.channel;
  sc.radio = cfg.radio;
  sc.fading_seed = derive_seed(cfg.seed, { kTagFading });
  if (sc.mbs.empty()) {
    spdlog::warn("scenario drew no MBS");
  }
  return sc;
}

NodeSet
hex_layout(const ExperimentConfig& cfg, double uabs_height_m)
{
  return hex_grid(cfg.n_uabs, cfg.region, uabs_height_m, Role::Uabs, cfg.p_uabs_dbm);
}

IcicState
hex_state(const ExperimentConfig& cfg, IcicRegime regime)
{
  IcicState s;
  for (const auto& p : hex_layout(cfg, cfg.uabs_heights_m.front()).positions) {
    s.uabs_xy.push_back({ p.x, p.y });
  }
  apply_regime(s, regime);
  return s;
}

namespace {

std::uint64_t
optimizer_seed(const ExperimentConfig& cfg, double height, IcicRegime r, OptimizerKind o, KpiKind k)
{
  return derive_seed(cfg.seed,
                     { kTagOptimizer,
                       static_cast<std::uint64_t>(std::llround(height * 1000.0)),
                       static_cast<std::uint64_t>(r),
                       static_cast<std::uint64_t>(o),
                       static_cast<std::uint64_t>(k) });
}

/// One brute-force pass scoring both KPIs at every grid point.
std::pair<OptimizerReport, OptimizerReport>
brute_both(const KpiEvaluator& ev, const SearchSpace& space, const NodeSet& grid_nodes, const ExperimentConfig& cfg)
{
  std::map<std::vector<double>, double> cover;
  const Objective fifth = [&](const IcicState& s) {
    const auto both = ev.evaluate_both(s);
    cover[encode(s)] = both.coverage.value;
    return both.fifth_percentile_se.value;
  };
  OptimizerReport a = brute_force(fifth, space, grid_nodes, cfg.brute, cfg.brute_budget);
  const Objective lookup = [&](const IcicState& s) { return cover.at(encode(s)); };
  OptimizerReport b = brute_force(lookup, space, grid_nodes, cfg.brute, cfg.brute_budget);
  b.wall_time_s = a.wall_time_s;
  return { std::move(a), std::move(b) };
}

} // namespace

std::vector<CellResult>
run_cells(const ExperimentConfig& cfg, const CellCallback& on_cell)
{
  cfg.validate();
  std::vector<CellResult> out;
  for (double height : cfg.uabs_heights_m) {
    const KpiEvaluator ev(build_scenario(cfg, height), cfg.kpi);
    const NodeSet grid_nodes = hex_layout(cfg, height);
    for (IcicRegime regime : cfg.regimes) {
      const SearchSpace space(cfg.n_uabs, cfg.region, regime);
      Seeds seeds;
      if (cfg.seed_hex_layout) {
        seeds.push_back(hex_state(cfg, regime));
      }
      for (OptimizerKind opt : cfg.optimizers) {
        std::vector<std::pair<KpiKind, OptimizerReport>> reports;
        const bool both = opt == OptimizerKind::HexBrute && cfg.kpis.size() == 2 && cfg.kpis[0] != cfg.kpis[1];
        if (both) {
          auto [fifth, cover] = brute_both(ev, space, grid_nodes, cfg);
          for (KpiKind k : cfg.kpis) {
            reports.emplace_back(k, k == KpiKind::Coverage ? cover : fifth);
          }
        } else {
          for (KpiKind k : cfg.kpis) {
            const Objective f = [&ev, k](const IcicState& s) { return ev.evaluate(s, k).value; };
            const std::uint64_t seed = optimizer_seed(cfg, height, regime, opt, k);
            OptimizerReport r;
            switch (opt) {
              case OptimizerKind::HexBrute:
                r = brute_force(f, space, grid_nodes, cfg.brute, cfg.brute_budget);
                break;
              case OptimizerKind::Ga:
                r = ga_optimize(f, space, cfg.ga, seed, seeds);
                break;
              case OptimizerKind::Ehsga:
                r = ehsga_optimize(f, space, cfg.ehsga, seed, seeds);
                break;
            }
            reports.emplace_back(k, std::move(r));
          }
        }
        for (auto& [k, r] : reports) {
          CellResult cell;
          cell.uabs_height_m = height;
          cell.regime = regime;
          cell.optimizer = opt;
          cell.kpi = k;
          cell.best = ev.evaluate(r.best_state, k);
          cell.report = std::move(r);
          spdlog::info("h={} {} {} {}: best {:.6g} in {:.2f} s ({} evaluations)",
                       height,
                       to_string(regime),
                       to_string(opt),
                       to_string(k),
                       cell.report.best_value,
                       cell.report.wall_time_s,
                       cell.report.evaluations);
          if (on_cell) {
            on_cell(cell);
          }
          out.push_back(std::move(cell));
        }
      }
    }
  }
  return out;
}

std::vector<ReportRow>
report_rows(const std::vector<CellResult>& cells, std::uint64_t seed)
{
  std::vector<ReportRow> rows;
  for (const auto& c : cells) {
    auto row = [&](double tp, double tu, double v) {
      rows.push_back({ c.regime, c.optimizer, c.uabs_height_m, tp, tu, c.kpi, v, c.report.wall_time_s, seed });
    };
    if (c.optimizer == OptimizerKind::HexBrute) {
      for (const auto& cell : c.report.cre_surface) {
        row(cell.tau_pbs_db, cell.tau_uabs_db, cell.best_value);
      }
    } else {
      row(c.report.best_state.tau_pbs_db, c.report.best_state.tau_uabs_db, c.report.best_value);
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
    return std::tuple(a.uabs_height_m, a.regime, a.optimizer, a.kpi, a.tau_pbs_db, a.tau_uabs_db) <
           std::tuple(b.uabs_height_m, b.regime, b.optimizer, b.kpi, b.tau_pbs_db, b.tau_uabs_db);
  });
  return rows;
}

std::vector<ReportRow>
run_experiment(const ExperimentConfig& cfg)
{
  return report_rows(run_cells(cfg), cfg.seed);
}

void
write_report(std::ostream& out, const std::vector<ReportRow>& rows)
{
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << "regime,optimizer,uabs_height_m,tau_pbs_db,tau_uabs_db,kpi_name,kpi_value,wall_time_s,seed\n";
  for (const auto& r : rows) {
    out << to_string(r.regime) << ',' << to_string(r.optimizer) << ',' << r.uabs_height_m << ','
        << r.tau_pbs_db << ',' << r.tau_uabs_db << ',' << to_string(r.kpi) << ',' << r.kpi_value << ','
        << r.wall_time_s << ',' << r.seed << '\n';
  }
  out.precision(old_precision);
}

void
write_report(const std::string& path, const std::vector<ReportRow>& rows)
{
  std::ofstream out(path);
  if (!out) {
    throw ConfigError("cannot write report '" + path + "'");
  }
  write_report(out, rows);
}

double
runtime_meter(const std::function<void()>& task, int repetitions)
{
  repetitions = std::max(1, repetitions);
  double total = 0.0;
  for (int i = 0; i < repetitions; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    task();
    total += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  return total / repetitions;
}

std::vector<PathlossSummary>
pathloss_summary(const ExperimentConfig& cfg, double uabs_height_m)
{
  const Scenario sc = build_scenario(cfg, uabs_height_m);
  const NodeSet uabs = hex_layout(cfg, uabs_height_m);

  std::array<PathlossSummary, 3> acc;
  for (int m = 0; m < 3; ++m) {
    acc[m].model = static_cast<LinkModel>(m);
    acc[m].min_db = std::numeric_limits<double>::infinity();
    acc[m].max_db = -std::numeric_limits<double>::infinity();
  }
  auto add = [&](const Receiver& rx, const NodeSet& cells, Tier tier) {
    for (const auto& c : cells.positions) {
      const LinkGeometry g = link_geometry(rx, c, tier, sc.channel);
      const double pl = g.loss.average_db();
      auto& s = acc[static_cast<int>(g.model)];
      ++s.count;
      s.min_db = std::min(s.min_db, pl);
      s.max_db = std::max(s.max_db, pl);
      const auto bin = static_cast<std::size_t>(std::max(0.0, std::floor(pl)));
      if (bin >= s.histogram.size()) {
        s.histogram.resize(bin + 1, 0);
      }
      ++s.histogram[bin];
    }
  };
  for (const auto& rx : receivers_from(sc.gue, sc.aue)) {
    add(rx, sc.mbs, Tier::Mbs);
    add(rx, sc.pbs, Tier::Pbs);
    add(rx, uabs, Tier::Uabs);
  }
  std::vector<PathlossSummary> out;
  for (auto& s : acc) {
    if (s.count > 0) {
      out.push_back(std::move(s));
    }
  }
  return out;
}

void
write_pathloss_cdf(std::ostream& out, const std::vector<PathlossSummary>& summaries)
{
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << "model,pl_db,cdf\n";
  for (const auto& s : summaries) {
    std::size_t cum = 0;
    for (std::size_t b = 0; b < s.histogram.size(); ++b) {
      cum += s.histogram[b];
      if (cum == 0) {
        continue;
      }
      out << to_string(s.model) << ',' << static_cast<double>(b + 1) << ','
          << static_cast<double>(cum) / static_cast<double>(s.count) << '\n';
    }
  }
  out.precision(old_precision);
}

} // namespace aghet
