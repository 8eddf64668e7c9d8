#pragma once

#include "aghet/radio.hpp"
#include "aghet/topology.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace aghet {

enum class OptimizerKind
{
  HexBrute,
  Ga,
  Ehsga
};

std::string_view to_string(OptimizerKind k);
OptimizerKind optimizer_from_string(std::string_view s);

/// Position of the ICIC genes after the 2 * N_uabs coordinate genes.
enum class Gene : std::size_t
{
  AlphaMbs = 0,
  BetaMbs,
  RhoMbs,
  AlphaPbs,
  BetaPbs,
  RhoPbs,
  TauPbs,
  RhoUabs,
  TauUabs
};

inline constexpr std::size_t kIcicGenes = 9;

struct GeneBounds
{
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> levels;  ///< optional discrete values, sorted; decode snaps to the nearest

  bool pinned() const { return lo == hi; }
};

class SearchSpace
{
public:
  /// Table 4 bands, UABS coordinates over the region, alpha pinned per regime.
  SearchSpace(std::size_t n_uabs, const Region& region, IcicRegime regime);

  std::size_t n_uabs() const { return n_uabs_; }
  std::size_t size() const { return bounds_.size(); }
  const GeneBounds& bounds(std::size_t i) const { return bounds_.at(i); }
  const GeneBounds& bounds(Gene g) const { return bounds_.at(index(g)); }
  std::size_t index(Gene g) const { return 2 * n_uabs_ + static_cast<std::size_t>(g); }

  void pin(Gene g, double value);
  void pin(std::size_t i, double value);
  /// Pins every UABS coordinate to the given positions.
  void pin_uabs(const std::vector<Point2>& xy);
  void discretize(Gene g, std::vector<double> levels);

  /// Clamps and snaps one gene value.
  double project(std::size_t i, double v) const;

  void validate() const;

private:
  std::size_t n_uabs_;
  std::vector<GeneBounds> bounds_;
};

/// Flat gene vector [x1, y1, ..., xN, yN, alpha_mbs, beta_mbs, rho_mbs,
/// alpha_pbs, beta_pbs, rho_pbs, tau_pbs, rho_uabs, tau_uabs].
std::vector<double> encode(const IcicState& state);
IcicState decode(const std::vector<double>& genes, const SearchSpace& space);
/// Clamps and snaps every gene in place.
void project(std::vector<double>& genes, const SearchSpace& space);

using Objective = std::function<double(const IcicState&)>;

struct TracePoint
{
  int iteration = 0;
  double best_value = 0.0;
  long evaluations = 0;
  double wall_time_s = 0.0;
};

/// Best KPI reached in one (tau_pbs, tau_uabs) cell of the brute-force grid.
struct CreCell
{
  double tau_pbs_db = 0.0;
  double tau_uabs_db = 0.0;
  double best_value = 0.0;
};

struct OptimizerReport
{
  IcicState best_state;
  double best_value = 0.0;
  std::vector<TracePoint> trace;
  long evaluations = 0;
  double wall_time_s = 0.0;
  std::vector<CreCell> cre_surface;  ///< brute force only
};

void write_optimizer_report(std::ostream& out, const OptimizerReport& report);

/// Discretization of the ICIC genes for brute force. Genes pinned in the
/// search space ignore their list.
struct BruteGrid
{
  std::vector<double> alpha{ 0.0, 0.25, 0.5, 0.75, 1.0 };
  std::vector<double> beta{ 0.1, 0.3, 0.5, 0.7, 0.9 };
  std::vector<double> rho_mbs{ 20.0, 25.0, 30.0, 35.0, 40.0 };
  std::vector<double> rho_pbs{ -10.0, -5.0, 0.0, 5.0, 10.0 };
  std::vector<double> rho_uabs{ -5.0, -2.5, 0.0, 2.5, 5.0 };
  std::vector<double> tau{ 0.0, 3.0, 6.0, 9.0, 12.0 };

  bool operator==(const BruteGrid&) const = default;
};

/// Every state of the grid, UABS fixed at `uabs_xy`, in enumeration order.
std::vector<IcicState> brute_points(const SearchSpace& space,
                                    const std::vector<Point2>& uabs_xy,
                                    const BruteGrid& grid);

/// Number of states brute_points would produce.
std::size_t brute_size(const SearchSpace& space, const BruteGrid& grid);

/// Exhaustive search. Throws BudgetError when the grid exceeds `budget`.
OptimizerReport brute_force(const Objective& objective,
                            const SearchSpace& space,
                            const NodeSet& uabs_grid,
                            const BruteGrid& grid,
                            std::size_t budget);

struct GaParams
{
  int pop_size = 60;
  int generations = 100;
  double crossover_rate = 0.7;
  double mutation_rate = 0.1;

  void validate() const;
  bool operator==(const GaParams&) const = default;
};

struct EhsgaParams
{
  int hm_size = 60;
  int improvisations = 100;  ///< outer iterations
  double hmcr_min = 0.2;
  double hmcr_max = 0.8;
  double par_min = 0.4;
  double par_max = 0.8;
  double fret = 1.0;
  /// Pitch step bound, per unit of fret, as a fraction of each gene's range.
  double fret_span = 0.05;

  void validate() const;
  bool operator==(const EhsgaParams&) const = default;
};

/// Optional starting members for the heuristics (e.g. the hex-grid layout).
using Seeds = std::vector<IcicState>;

OptimizerReport ga_optimize(const Objective& objective,
                            const SearchSpace& space,
                            const GaParams& params,
                            std::uint64_t seed,
                            const Seeds& initial = {});

/// Called after every merge with the memory's values, best first.
using MemoryObserver = std::function<void(int iteration, const std::vector<double>& values)>;

OptimizerReport ehsga_optimize(const Objective& objective,
                               const SearchSpace& space,
                               const EhsgaParams& params,
                               std::uint64_t seed,
                               const Seeds& initial = {},
                               const MemoryObserver& observer = {});

/// Fret width after `iterations` decays.
double fret_after(double fret0, int iterations);

/// Roulette-wheel pick on fitness shifted by its minimum; uniform when every
/// shifted weight is zero. `u` is uniform in [0, 1).
std::size_t roulette_pick(const std::vector<double>& fitness, double u);

} // namespace aghet
