#include "aghet/topology.hpp"

#include "aghet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <string>

namespace aghet {

std::string_view
to_string(Role role)
{
  switch (role) {
    case Role::Mbs:
      return "MBS";
    case Role::Pbs:
      return "PBS";
    case Role::Uabs:
      return "UABS";
    case Role::Gue:
      return "GUE";
    case Role::Aue:
      return "AUE";
  }
  return "?";
}

Role
role_from_string(std::string_view name)
{
  for (Role r : { Role::Mbs, Role::Pbs, Role::Uabs, Role::Gue, Role::Aue }) {
    if (to_string(r) == name) {
      return r;
    }
  }
  throw ParameterError("unknown node role '" + std::string(name) + "'");
}

void
Region::validate() const
{
  if (!(width_m > 0.0) || !(height_m > 0.0)) {
    throw ParameterError("region dimensions must be positive");
  }
}

Point2
Region::clamp(Point2 p) const
{
  return { std::clamp(p.x, 0.0, width_m), std::clamp(p.y, 0.0, height_m) };
}

NodeSet
sample_ppp(double density_per_km2,
           const Region& region,
           double height_m,
           Role role,
           std::uint64_t seed,
           std::optional<double> tx_power_dbm)
{
  region.validate();
  if (!(density_per_km2 >= 0.0)) {
    throw ParameterError("PPP density must be non-negative");
  }
  if (!(height_m > 0.0)) {
    throw ParameterError("node height must be positive");
  }

  NodeSet set;
  set.role = role;
  set.tx_power_dbm = tx_power_dbm;

  const double mean = density_per_km2 * region.area_km2();
  if (mean == 0.0) {
    return set;
  }

  std::mt19937_64 gen(seed);
  std::poisson_distribution<long> count_dist(mean);
  const long count = count_dist(gen);
  std::uniform_real_distribution<double> ux(0.0, region.width_m);
  std::uniform_real_distribution<double> uy(0.0, region.height_m);

  set.positions.reserve(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    const double x = ux(gen);
    const double y = uy(gen);
    set.positions.push_back({ x, y, height_m });
  }
  return set;
}

double
hex_pitch(std::size_t count, const Region& region)
{
  region.validate();
  if (count == 0) {
    return 0.0;
  }
  const double area = region.width_m * region.height_m;
  return std::sqrt(2.0 * area / (std::sqrt(3.0) * static_cast<double>(count)));
}

namespace {

std::vector<Point2>
lattice_inside(const Region& region, double pitch)
{
  const double cx = 0.5 * region.width_m;
  const double cy = 0.5 * region.height_m;
  const double dy = pitch * std::sqrt(3.0) / 2.0;
  const long rows = static_cast<long>(std::ceil(cy / dy)) + 1;
  const long cols = static_cast<long>(std::ceil(cx / pitch)) + 1;

  std::vector<Point2> pts;
  for (long j = -rows; j <= rows; ++j) {
    const double off = (std::labs(j) % 2 == 1) ? 0.5 * pitch : 0.0;
    for (long i = -cols; i <= cols; ++i) {
      const double x = cx + static_cast<double>(i) * pitch + off;
      const double y = cy + static_cast<double>(j) * dy;
      if (region.contains(x, y)) {
        pts.push_back({ x, y });
      }
    }
  }
  return pts;
}

} // namespace

NodeSet
hex_grid(std::size_t count,
         const Region& region,
         double height_m,
         Role role,
         std::optional<double> tx_power_dbm)
{
  region.validate();
  if (!(height_m > 0.0)) {
    throw ParameterError("node height must be positive");
  }

  NodeSet set;
  set.role = role;
  set.tx_power_dbm = tx_power_dbm;
  if (count == 0) {
    return set;
  }

  double pitch = hex_pitch(count, region);
  std::vector<Point2> pts = lattice_inside(region, pitch);
  while (pts.size() < count) {
    pitch *= 0.98;
    pts = lattice_inside(region, pitch);
  }

  const double cx = 0.5 * region.width_m;
  const double cy = 0.5 * region.height_m;
  std::stable_sort(pts.begin(), pts.end(), [&](const Point2& a, const Point2& b) {
    const double da = (a.x - cx) * (a.x - cx) + (a.y - cy) * (a.y - cy);
    const double db = (b.x - cx) * (b.x - cx) + (b.y - cy) * (b.y - cy);
    if (da != db) {
      return da < db;
    }
    return a.y != b.y ? a.y < b.y : a.x < b.x;
  });
  pts.resize(count);

  // Row-major output order.
  std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
  });

  set.positions.reserve(count);
  for (const auto& p : pts) {
    set.positions.push_back({ p.x, p.y, height_m });
  }
  return set;
}

Distance
distance(const Vec3& a, const Vec3& b)
{
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  const double h2 = dx * dx + dy * dy;
  return { std::sqrt(h2), std::sqrt(h2 + dz * dz) };
}

void
write_nodes_csv(std::ostream& out, const std::vector<const NodeSet*>& sets)
{
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << "role,x_m,y_m,z_m,tx_power_dbm\n";
  for (const NodeSet* set : sets) {
    for (const auto& p : set->positions) {
      out << to_string(set->role) << ',' << p.x << ',' << p.y << ',' << p.z << ',';
      if (set->tx_power_dbm) {
        out << *set->tx_power_dbm;
      }
      out << '\n';
    }
  }
  out.precision(old_precision);
}

} // namespace aghet
