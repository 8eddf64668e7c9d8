#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace aghet {

enum class Role
{
  Mbs,
  Pbs,
  Uabs,
  Gue,
  Aue
};

std::string_view to_string(Role role);
Role role_from_string(std::string_view name);

struct Vec3
{
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const Vec3&) const = default;
};

struct Point2
{
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point2&) const = default;
};

/// Axis-aligned rectangle [0, width] x [0, height], in meters.
struct Region
{
  double width_m = 10'000.0;
  double height_m = 10'000.0;

  void validate() const;
  double area_km2() const { return width_m * height_m * 1e-6; }
  bool contains(double x, double y) const
  {
    return x >= 0.0 && x <= width_m && y >= 0.0 && y <= height_m;
  }
  Point2 clamp(Point2 p) const;

  bool operator==(const Region&) const = default;
};

/// Positions of one tier of nodes. Every node of a set shares one antenna
/// height; base-station tiers carry a transmit power, UE tiers do not.
struct NodeSet
{
  Role role = Role::Gue;
  std::vector<Vec3> positions;
  std::optional<double> tx_power_dbm;

  std::size_t size() const { return positions.size(); }
  bool empty() const { return positions.empty(); }
};

/// Homogeneous 2D Poisson point process over the region at a fixed height.
NodeSet
sample_ppp(double density_per_km2,
           const Region& region,
           double height_m,
           Role role,
           std::uint64_t seed,
           std::optional<double> tx_power_dbm = std::nullopt);

/// Hexagonal lattice of `count` points centred in the region with pitch
/// sqrt(2 A / (sqrt(3) count)). The pitch shrinks when the clipped lattice
/// cannot hold `count` points.
NodeSet
hex_grid(std::size_t count,
         const Region& region,
         double height_m,
         Role role = Role::Uabs,
         std::optional<double> tx_power_dbm = std::nullopt);

/// Nominal lattice pitch used by hex_grid before any shrinking.
double hex_pitch(std::size_t count, const Region& region);

struct Distance
{
  double d2d_m = 0.0;
  double d3d_m = 0.0;
};

Distance distance(const Vec3& a, const Vec3& b);

void write_nodes_csv(std::ostream& out, const std::vector<const NodeSet*>& sets);

} // namespace aghet
