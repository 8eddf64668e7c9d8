#include "aghet/errors.hpp"
#include "aghet/topology.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

using namespace aghet;

TEST_CASE("region validation and clamping")
{
  CHECK_THROWS_AS(Region({ 0.0, 10.0 }).validate(), ParameterError);
  CHECK_THROWS_AS(Region({ 10.0, -1.0 }).validate(), ParameterError);
  Region r{ 100.0, 50.0 };
  CHECK(r.area_km2() == doctest::Approx(0.005));
  CHECK(r.clamp({ -3.0, 70.0 }) == Point2{ 0.0, 50.0 });
  CHECK(r.contains(100.0, 0.0));
  CHECK_FALSE(r.contains(100.1, 0.0));
}

TEST_CASE("role names round trip")
{
  for (Role r : { Role::Mbs, Role::Pbs, Role::Uabs, Role::Gue, Role::Aue }) {
    CHECK(role_from_string(to_string(r)) == r);
  }
  CHECK_THROWS_AS(role_from_string("eNB"), ParameterError);
}

TEST_CASE("PPP with zero density is empty")
{
  NodeSet s = sample_ppp(0.0, Region{}, 36.0, Role::Mbs, 7, 46.0);
  CHECK(s.empty());
  CHECK(s.role == Role::Mbs);
  CHECK(*s.tx_power_dbm == 46.0);
}

TEST_CASE("PPP rejects a negative density or height")
{
  CHECK_THROWS_AS(sample_ppp(-1.0, Region{}, 36.0, Role::Mbs, 1), ParameterError);
  CHECK_THROWS_AS(sample_ppp(1.0, Region{}, 0.0, Role::Mbs, 1), ParameterError);
  CHECK_THROWS_AS(sample_ppp(1.0, Region{ 0.0, 1.0 }, 1.0, Role::Mbs, 1), ParameterError);
}

TEST_CASE("PPP count matches the Poisson mean over many seeds")
{
  // 4 per km^2 on 100 km^2: mean 400, sd 20; the sample mean of 1000 draws
  // has sd 20 / sqrt(1000).
  double sum = 0.0;
  const int runs = 1000;
  for (int seed = 0; seed < runs; ++seed) {
    sum += static_cast<double>(sample_ppp(4.0, Region{}, 36.0, Role::Mbs, seed).size());
  }
  const double mean = sum / runs;
  CHECK(std::abs(mean - 400.0) < 3.0 * 20.0 / std::sqrt(static_cast<double>(runs)));
}

TEST_CASE("PPP heights are the configured height")
{
  NodeSet s = sample_ppp(100.0, Region{}, 1.5, Role::Gue, 3);
  REQUIRE(s.size() > 9000);
  for (const auto& p : s.positions) {
    CHECK(p.z == 1.5);
  }
  CHECK_FALSE(s.tx_power_dbm.has_value());
}

TEST_CASE("hex grid with one point sits at the centre")
{
  NodeSet s = hex_grid(1, Region{}, 25.0);
  REQUIRE(s.size() == 1);
  CHECK(s.positions[0] == Vec3{ 5000.0, 5000.0, 25.0 });
}

TEST_CASE("hex grid of 60 points has the lattice pitch")
{
  const Region region{};
  const double pitch = hex_pitch(60, region);
  CHECK(pitch == doctest::Approx(std::sqrt(2.0e8 / (std::sqrt(3.0) * 60.0))));
  CHECK(pitch == doctest::Approx(1387.6).epsilon(1e-3));

  NodeSet s = hex_grid(60, region, 25.0);
  REQUIRE(s.size() == 60);
  double min_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(region.contains(s.positions[i].x, s.positions[i].y));
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      min_d = std::min(min_d, distance(s.positions[i], s.positions[j]).d2d_m);
    }
  }
  CHECK(std::abs(min_d - pitch) <= 0.05 * pitch);
}

TEST_CASE("hex grid planform does not depend on height")
{
  NodeSet low = hex_grid(60, Region{}, 25.0);
  NodeSet high = hex_grid(60, Region{}, 50.0);
  REQUIRE(low.size() == high.size());
  for (std::size_t i = 0; i < low.size(); ++i) {
    CHECK(low.positions[i].x == high.positions[i].x);
    CHECK(low.positions[i].y == high.positions[i].y);
    CHECK(high.positions[i].z == 50.0);
  }
}

TEST_CASE("hex grid shrinks its pitch to fit the requested count")
{
  const Region thin{ 1000.0, 10.0 };
  NodeSet s = hex_grid(20, thin, 25.0);
  CHECK(s.size() == 20);
  CHECK(hex_grid(0, thin, 25.0).empty());
}

TEST_CASE("distance examples")
{
  Distance same = distance({ 1.0, 2.0, 3.0 }, { 1.0, 2.0, 3.0 });
  CHECK(same.d2d_m == 0.0);
  CHECK(same.d3d_m == 0.0);

  Distance vertical = distance({ 0.0, 0.0, 1.5 }, { 0.0, 0.0, 36.0 });
  CHECK(vertical.d2d_m == 0.0);
  CHECK(vertical.d3d_m == doctest::Approx(34.5));

  Distance slant = distance({ 3000.0, 4000.0, 1.5 }, { 0.0, 0.0, 26.5 });
  CHECK(slant.d2d_m == doctest::Approx(5000.0));
  CHECK(slant.d3d_m == doctest::Approx(5000.0625).epsilon(1e-9));
}

TEST_CASE("node CSV layout")
{
  NodeSet bs;
  bs.role = Role::Pbs;
  bs.positions = { { 1.0, 2.0, 15.0 } };
  bs.tx_power_dbm = 30.0;
  NodeSet ue;
  ue.role = Role::Gue;
  ue.positions = { { 3.5, 4.0, 1.5 } };

  std::ostringstream out;
  write_nodes_csv(out, { &bs, &ue });
  CHECK(out.str() == "role,x_m,y_m,z_m,tx_power_dbm\nPBS,1,2,15,30\nGUE,3.5,4,1.5,\n");
}
