#include "aghet/optimizer.hpp"

#include "aghet/errors.hpp"
#include "aghet/rng.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <string>

namespace aghet {

std::string_view
to_string(OptimizerKind k)
{
  switch (k) {
    case OptimizerKind::HexBrute:
      return "hex-brute";
    case OptimizerKind::Ga:
      return "ga";
    case OptimizerKind::Ehsga:
      return "ehsga";
  }
  return "?";
}

OptimizerKind
optimizer_from_string(std::string_view s)
{
  for (auto k : { OptimizerKind::HexBrute, OptimizerKind::Ga, OptimizerKind::Ehsga }) {
    if (to_string(k) == s) {
      return k;
    }
  }
  throw ConfigError("unknown optimizer '" + std::string(s) + "' (expected hex-brute, ga, ehsga)");
}

SearchSpace::SearchSpace(std::size_t n_uabs, const Region& region, IcicRegime regime)
  : n_uabs_(n_uabs)
{
  region.validate();
  bounds_.resize(2 * n_uabs + kIcicGenes);
  for (std::size_t k = 0; k < n_uabs; ++k) {
    bounds_[2 * k] = { 0.0, region.width_m, {} };
    bounds_[2 * k + 1] = { 0.0, region.height_m, {} };
  }
  auto set = [&](Gene g, double lo, double hi) { bounds_[index(g)] = { lo, hi, {} }; };
  set(Gene::AlphaMbs, 0.0, 1.0);
  set(Gene::BetaMbs, 0.0, 1.0);
  set(Gene::RhoMbs, 20.0, 40.0);
  set(Gene::AlphaPbs, 0.0, 1.0);
  set(Gene::BetaPbs, 0.0, 1.0);
  set(Gene::RhoPbs, -10.0, 10.0);
  set(Gene::TauPbs, 0.0, 12.0);
  set(Gene::RhoUabs, -5.0, 5.0);
  set(Gene::TauUabs, 0.0, 12.0);

  if (regime == IcicRegime::NoIcic) {
    pin(Gene::AlphaMbs, 1.0);
    pin(Gene::AlphaPbs, 1.0);
  } else if (regime == IcicRegime::Eicic) {
    pin(Gene::AlphaMbs, 0.0);
    pin(Gene::AlphaPbs, 0.0);
  }
}

void
SearchSpace::pin(Gene g, double value)
{
  pin(index(g), value);
}

void
SearchSpace::pin(std::size_t i, double value)
{
  auto& b = bounds_.at(i);
  b.lo = b.hi = value;
  b.levels.clear();
}

void
SearchSpace::pin_uabs(const std::vector<Point2>& xy)
{
  if (xy.size() != n_uabs_) {
    throw ParameterError("pin_uabs: expected " + std::to_string(n_uabs_) + " positions");
  }
  for (std::size_t k = 0; k < n_uabs_; ++k) {
    pin(2 * k, xy[k].x);
    pin(2 * k + 1, xy[k].y);
  }
}

void
SearchSpace::discretize(Gene g, std::vector<double> levels)
{
  auto& b = bounds_.at(index(g));
  std::sort(levels.begin(), levels.end());
  for (double v : levels) {
    if (v < b.lo || v > b.hi) {
      throw ParameterError("discrete level outside gene bounds");
    }
  }
  b.levels = std::move(levels);
}

double
SearchSpace::project(std::size_t i, double v) const
{
  const auto& b = bounds_[i];
  v = std::clamp(v, b.lo, b.hi);
  if (b.levels.empty()) {
    return v;
  }
  auto it = std::lower_bound(b.levels.begin(), b.levels.end(), v);
  if (it == b.levels.end()) {
    return b.levels.back();
  }
  if (it == b.levels.begin()) {
    return *it;
  }
  const double above = *it;
  const double below = *(it - 1);
  return (v - below <= above - v) ? below : above;
}

void
SearchSpace::validate() const
{
  for (const auto& b : bounds_) {
    if (!(b.lo <= b.hi)) {
      throw ParameterError("gene lower bound exceeds upper bound");
    }
  }
}

std::vector<double>
encode(const IcicState& s)
{
  std::vector<double> g;
  g.reserve(2 * s.uabs_xy.size() + kIcicGenes);
  for (const auto& p : s.uabs_xy) {
    g.push_back(p.x);
    g.push_back(p.y);
  }
  g.insert(g.end(),
           { s.alpha_mbs,
             s.beta_mbs,
             s.rho_mbs_db,
             s.alpha_pbs,
             s.beta_pbs,
             s.rho_pbs_db,
             s.tau_pbs_db,
             s.rho_uabs_db,
             s.tau_uabs_db });
  return g;
}

void
project(std::vector<double>& genes, const SearchSpace& space)
{
  if (genes.size() != space.size()) {
    throw ParameterError("gene vector has length " + std::to_string(genes.size()) + ", expected " +
                         std::to_string(space.size()));
  }
  for (std::size_t i = 0; i < genes.size(); ++i) {
    genes[i] = space.project(i, genes[i]);
  }
}

IcicState
decode(const std::vector<double>& genes, const SearchSpace& space)
{
  std::vector<double> g = genes;
  project(g, space);
  IcicState s;
  s.uabs_xy.resize(space.n_uabs());
  for (std::size_t k = 0; k < space.n_uabs(); ++k) {
    s.uabs_xy[k] = { g[2 * k], g[2 * k + 1] };
  }
  const double* p = g.data() + 2 * space.n_uabs();
  s.alpha_mbs = p[0];
  s.beta_mbs = p[1];
  s.rho_mbs_db = p[2];
  s.alpha_pbs = p[3];
  s.beta_pbs = p[4];
  s.rho_pbs_db = p[5];
  s.tau_pbs_db = p[6];
  s.rho_uabs_db = p[7];
  s.tau_uabs_db = p[8];
  return s;
}

void
write_optimizer_report(std::ostream& out, const OptimizerReport& r)
{
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << "iteration,best_value,evaluations,wall_time_s\n";
  for (const auto& t : r.trace) {
    out << t.iteration << ',' << t.best_value << ',' << t.evaluations << ',' << t.wall_time_s << '\n';
  }
  const auto& s = r.best_state;
  out << "\nbest_value,alpha_mbs,beta_mbs,rho_mbs_db,alpha_pbs,beta_pbs,rho_pbs_db,tau_pbs_db,"
         "rho_uabs_db,tau_uabs_db,uabs_xy\n";
  out << r.best_value << ',' << s.alpha_mbs << ',' << s.beta_mbs << ',' << s.rho_mbs_db << ','
      << s.alpha_pbs << ',' << s.beta_pbs << ',' << s.rho_pbs_db << ',' << s.tau_pbs_db << ','
      << s.rho_uabs_db << ',' << s.tau_uabs_db << ',';
  for (std::size_t k = 0; k < s.uabs_xy.size(); ++k) {
    out << (k ? ";" : "") << s.uabs_xy[k].x << ':' << s.uabs_xy[k].y;
  }
  out << '\n';
  out.precision(old_precision);
}

namespace {

using Clock = std::chrono::steady_clock;

double
seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<double>
levels_for(const SearchSpace& space, Gene g, const BruteGrid& grid)
{
  const auto& b = space.bounds(g);
  if (b.pinned()) {
    return { b.lo };
  }
  const std::vector<double>* src = nullptr;
  switch (g) {
    case Gene::AlphaMbs:
    case Gene::AlphaPbs:
      src = &grid.alpha;
      break;
    case Gene::BetaMbs:
    case Gene::BetaPbs:
      src = &grid.beta;
      break;
    case Gene::RhoMbs:
      src = &grid.rho_mbs;
      break;
    case Gene::RhoPbs:
      src = &grid.rho_pbs;
      break;
    case Gene::RhoUabs:
      src = &grid.rho_uabs;
      break;
    case Gene::TauPbs:
    case Gene::TauUabs:
      src = &grid.tau;
      break;
  }
  std::vector<double> out;
  for (double v : *src) {
    const double p = space.project(space.index(g), v);
    if (std::find(out.begin(), out.end(), p) == out.end()) {
      out.push_back(p);
    }
  }
  if (out.empty()) {
    throw ParameterError("brute-force grid has an empty gene list");
  }
  return out;
}

std::array<std::vector<double>, kIcicGenes>
all_levels(const SearchSpace& space, const BruteGrid& grid)
{
  std::array<std::vector<double>, kIcicGenes> lv;
  for (std::size_t i = 0; i < kIcicGenes; ++i) {
    lv[i] = levels_for(space, static_cast<Gene>(i), grid);
  }
  return lv;
}

/// Memoizing wrapper: one objective call per distinct projected vector.
class CachedObjective
{
public:
  CachedObjective(const Objective& f, const SearchSpace& space)
    : f_(f)
    , space_(space)
  {
  }

  double operator()(std::vector<double>& genes)
  {
    project(genes, space_);
    auto it = cache_.find(genes);
    if (it != cache_.end()) {
      return it->second;
    }
    const double v = f_(decode(genes, space_));
    cache_.emplace(genes, v);
    return v;
  }

  long evaluations() const { return static_cast<long>(cache_.size()); }

private:
  const Objective& f_;
  const SearchSpace& space_;
  std::map<std::vector<double>, double> cache_;
};

struct Member
{
  std::vector<double> genes;
  double value = 0.0;
};

std::vector<double>
random_genes(const SearchSpace& space, SplitMix64& rng)
{
  std::vector<double> g(space.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto& b = space.bounds(i);
    g[i] = (b.hi - b.lo) * rng.uniform() + b.lo;
  }
  return g;
}

std::vector<Member>
initial_population(std::size_t n,
                   const SearchSpace& space,
                   const Seeds& seeds,
                   SplitMix64& rng,
                   CachedObjective& eval)
{
  std::vector<Member> pop;
  pop.reserve(n);
  for (const auto& s : seeds) {
    if (pop.size() == n) {
      break;
    }
    pop.push_back({ encode(s), 0.0 });
  }
  while (pop.size() < n) {
    pop.push_back({ random_genes(space, rng), 0.0 });
  }
  for (auto& m : pop) {
    m.value = eval(m.genes);
  }
  return pop;
}

void
single_point_crossover(std::vector<double>& a, std::vector<double>& b, SplitMix64& rng)
{
  if (a.size() < 2) {
    return;
  }
  const auto cut = 1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(a.size() - 1));
  for (std::size_t i = cut; i < a.size(); ++i) {
    std::swap(a[i], b[i]);
  }
}

std::vector<double>
values_of(const std::vector<Member>& pop)
{
  std::vector<double> v(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) {
    v[i] = pop[i].value;
  }
  return v;
}

struct BestTracker
{
  Member best;
  bool any = false;

  void offer(const Member& m)
  {
    if (!any || m.value > best.value) {
      best = m;
      any = true;
    }
  }
};

} // namespace

std::size_t
roulette_pick(const std::vector<double>& fitness, double u)
{
  if (fitness.empty()) {
    throw ParameterError("roulette selection on an empty population");
  }
  const double lo = *std::min_element(fitness.begin(), fitness.end());
  double total = 0.0;
  for (double f : fitness) {
    total += f - lo;
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    return std::min(fitness.size() - 1, static_cast<std::size_t>(u * static_cast<double>(fitness.size())));
  }
  const double target = u * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < fitness.size(); ++i) {
    const double w = fitness[i] - lo;
    if (w > 0.0) {
      last_positive = i;
    }
    acc += w;
    if (target < acc) {
      return i;
    }
  }
  return last_positive;
}

std::size_t
brute_size(const SearchSpace& space, const BruteGrid& grid)
{
  std::size_t n = 1;
  for (const auto& l : all_levels(space, grid)) {
    n *= l.size();
  }
  return n;
}

std::vector<IcicState>
brute_points(const SearchSpace& space, const std::vector<Point2>& uabs_xy, const BruteGrid& grid)
{
  const auto lv = all_levels(space, grid);
  std::vector<IcicState> out;
  out.reserve(brute_size(space, grid));
  std::array<std::size_t, kIcicGenes> idx{};
  while (true) {
    IcicState s;
    s.uabs_xy = uabs_xy;
    s.alpha_mbs = lv[0][idx[0]];
    s.beta_mbs = lv[1][idx[1]];
    s.rho_mbs_db = lv[2][idx[2]];
    s.alpha_pbs = lv[3][idx[3]];
    s.beta_pbs = lv[4][idx[4]];
    s.rho_pbs_db = lv[5][idx[5]];
    s.tau_pbs_db = lv[6][idx[6]];
    s.rho_uabs_db = lv[7][idx[7]];
    s.tau_uabs_db = lv[8][idx[8]];
    out.push_back(std::move(s));

    std::size_t d = kIcicGenes;
    while (d > 0) {
      --d;
      if (++idx[d] < lv[d].size()) {
        break;
      }
      idx[d] = 0;
      if (d == 0) {
        return out;
      }
    }
  }
}

OptimizerReport
brute_force(const Objective& objective,
            const SearchSpace& space,
            const NodeSet& uabs_grid,
            const BruteGrid& grid,
            std::size_t budget)
{
  space.validate();
  if (uabs_grid.size() != space.n_uabs()) {
    throw ParameterError("UABS grid size does not match the search space");
  }
  const std::size_t n = brute_size(space, grid);
  if (n > budget) {
    throw BudgetError("brute-force grid has " + std::to_string(n) + " points, budget is " +
                      std::to_string(budget));
  }

  std::vector<Point2> xy;
  xy.reserve(uabs_grid.size());
  for (const auto& p : uabs_grid.positions) {
    xy.push_back({ p.x, p.y });
  }

  const auto t0 = Clock::now();
  OptimizerReport r;
  std::map<std::pair<double, double>, double> surface;
  bool any = false;
  long evals = 0;
  for (const IcicState& s : brute_points(space, xy, grid)) {
    const double v = objective(s);
    ++evals;
    if (!any || v > r.best_value) {
      r.best_value = v;
      r.best_state = s;
      any = true;
    }
    auto key = std::make_pair(s.tau_pbs_db, s.tau_uabs_db);
    auto it = surface.find(key);
    if (it == surface.end()) {
      surface.emplace(key, v);
    } else {
      it->second = std::max(it->second, v);
    }
    r.trace.push_back({ static_cast<int>(evals), r.best_value, evals, seconds_since(t0) });
  }
  for (const auto& [key, v] : surface) {
    r.cre_surface.push_back({ key.first, key.second, v });
  }
  r.evaluations = evals;
  r.wall_time_s = seconds_since(t0);
  return r;
}

void
GaParams::validate() const
{
  if (pop_size < 2) {
    throw ParameterError("GA population size must be >= 2");
  }
  if (generations < 0) {
    throw ParameterError("GA generation count must be >= 0");
  }
  if (crossover_rate < 0.0 || crossover_rate > 1.0 || mutation_rate < 0.0 || mutation_rate > 1.0) {
    throw ParameterError("GA rates must lie in [0, 1]");
  }
}

void
EhsgaParams::validate() const
{
  if (hm_size < 2) {
    throw ParameterError("harmony memory size must be >= 2");
  }
  if (improvisations < 0) {
    throw ParameterError("improvisation count must be >= 0");
  }
  auto ordered = [](double lo, double hi) { return 0.0 <= lo && lo <= hi && hi <= 1.0; };
  if (!ordered(hmcr_min, hmcr_max) || !ordered(par_min, par_max)) {
    throw ParameterError("eHSGA rate pairs must satisfy 0 <= min <= max <= 1");
  }
  if (!(fret > 0.0) || !(fret_span > 0.0)) {
    throw ParameterError("fret width must be positive");
  }
}

double
fret_after(double fret0, int iterations)
{
  double fr = fret0;
  for (int i = 0; i < iterations; ++i) {
    fr *= 0.99;
  }
  return fr;
}

OptimizerReport
ga_optimize(const Objective& objective,
            const SearchSpace& space,
            const GaParams& params,
            std::uint64_t seed,
            const Seeds& initial)
{
  params.validate();
  space.validate();
  const auto t0 = Clock::now();
  SplitMix64 rng(seed);
  CachedObjective eval(objective, space);
  const auto n = static_cast<std::size_t>(params.pop_size);

  std::vector<Member> pop = initial_population(n, space, initial, rng, eval);
  BestTracker best;
  for (const auto& m : pop) {
    best.offer(m);
  }
  OptimizerReport r;
  r.trace.push_back({ 0, best.best.value, eval.evaluations(), seconds_since(t0) });

  auto mutate = [&](std::vector<double>& g) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (rng.uniform() < params.mutation_rate) {
        const auto& b = space.bounds(i);
        g[i] = (b.hi - b.lo) * rng.uniform() + b.lo;
      }
    }
  };

  for (int gen = 1; gen <= params.generations; ++gen) {
    const std::vector<double> fitness = values_of(pop);
    std::vector<Member> children;
    children.reserve(n);
    while (children.size() < n) {
      Member c1 = pop[roulette_pick(fitness, rng.uniform())];
      Member c2 = pop[roulette_pick(fitness, rng.uniform())];
      if (rng.uniform() < params.crossover_rate) {
        single_point_crossover(c1.genes, c2.genes, rng);
      }
      mutate(c1.genes);
      mutate(c2.genes);
      children.push_back(std::move(c1));
      if (children.size() < n) {
        children.push_back(std::move(c2));
      }
    }
    for (auto& c : children) {
      c.value = eval(c.genes);
      best.offer(c);
    }
    // Elitism: the best individual found so far survives replacement.
    auto worst = std::min_element(children.begin(), children.end(), [](const Member& a, const Member& b) {
      return a.value < b.value;
    });
    const bool elite_present = std::any_of(children.begin(), children.end(), [&](const Member& c) {
      return c.genes == best.best.genes;
    });
    if (!elite_present) {
      *worst = best.best;
    }
    pop = std::move(children);
    r.trace.push_back({ gen, best.best.value, eval.evaluations(), seconds_since(t0) });
  }

  r.best_state = decode(best.best.genes, space);
  r.best_value = best.best.value;
  r.evaluations = eval.evaluations();
  r.wall_time_s = seconds_since(t0);
  return r;
}

OptimizerReport
ehsga_optimize(const Objective& objective,
               const SearchSpace& space,
               const EhsgaParams& params,
               std::uint64_t seed,
               const Seeds& initial,
               const MemoryObserver& observer)
{
  params.validate();
  space.validate();
  const auto t0 = Clock::now();
  SplitMix64 rng(seed);
  CachedObjective eval(objective, space);
  const auto n = static_cast<std::size_t>(params.hm_size);

  auto by_value = [](const Member& a, const Member& b) { return a.value > b.value; };
  std::vector<Member> hm = initial_population(n, space, initial, rng, eval);
  std::stable_sort(hm.begin(), hm.end(), by_value);

  std::vector<std::size_t> free_genes;
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (!space.bounds(i).pinned()) {
      free_genes.push_back(i);
    }
  }

  auto pick_gene = [&] {
    const auto at = static_cast<std::size_t>(rng.uniform() * static_cast<double>(free_genes.size()));
    return free_genes[std::min(free_genes.size() - 1, at)];
  };

  OptimizerReport r;
  r.trace.push_back({ 0, hm.front().value, eval.evaluations(), seconds_since(t0) });

  double fr = params.fret;
  const int iters = params.improvisations;
  for (int it = 0; it < iters; ++it) {
    const double frac = iters > 1 ? static_cast<double>(it) / static_cast<double>(iters - 1) : 0.0;
    const double hmcr = params.hmcr_max - (params.hmcr_max - params.hmcr_min) * frac;
    const double par = params.par_min + (params.par_max - params.par_min) * frac;
    const std::vector<double> fitness = values_of(hm);

    std::vector<Member> fresh;
    fresh.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
      Member m;
      if (rng.uniform() < hmcr) {
        if (rng.uniform() < par) {
          // Pitch adjustment of one gene of the memory head.
          m.genes = hm.front().genes;
          if (!free_genes.empty()) {
            const std::size_t i = pick_gene();
            const auto& b = space.bounds(i);
            m.genes[i] += (2.0 * rng.uniform() - 1.0) * fr * params.fret_span * (b.hi - b.lo);
          }
        } else {
          m.genes = hm[k].genes;
          std::vector<double> other = hm[roulette_pick(fitness, rng.uniform())].genes;
          single_point_crossover(m.genes, other, rng);
        }
      } else {
        // Random restart of one gene of member k.
        m.genes = hm[k].genes;
        if (!free_genes.empty()) {
          const std::size_t i = pick_gene();
          const auto& b = space.bounds(i);
          m.genes[i] = (b.hi - b.lo) * rng.uniform() + b.lo;
        }
      }
      m.value = eval(m.genes);
      fresh.push_back(std::move(m));
    }

    // Elitist merge of the sorted memory with the new harmonies.
    std::vector<Member> merged = std::move(hm);
    merged.insert(merged.end(), std::make_move_iterator(fresh.begin()), std::make_move_iterator(fresh.end()));
    std::stable_sort(merged.begin(), merged.end(), by_value);
    std::vector<Member> next;
    std::vector<Member> dups;
    next.reserve(n);
    for (auto& m : merged) {
      const bool seen = std::any_of(next.begin(), next.end(), [&](const Member& x) {
        return x.value == m.value && x.genes == m.genes;
      });
      if (seen) {
        dups.push_back(std::move(m));
      } else if (next.size() < n) {
        next.push_back(std::move(m));
      }
    }
    for (auto& d : dups) {
      if (next.size() >= n) {
        break;
      }
      next.push_back(std::move(d));
    }
    std::stable_sort(next.begin(), next.end(), by_value);
    hm = std::move(next);
    if (observer) {
      observer(it + 1, values_of(hm));
    }

    fr *= 0.99;
    r.trace.push_back({ it + 1, hm.front().value, eval.evaluations(), seconds_since(t0) });
  }

  r.best_state = decode(hm.front().genes, space);
  r.best_value = hm.front().value;
  r.evaluations = eval.evaluations();
  r.wall_time_s = seconds_since(t0);
  return r;
}

} // namespace aghet
