#include "aghet/channel.hpp"

#include <numbers>

namespace aghet {

namespace {

constexpr double kDeg = 180.0 / std::numbers::pi;
constexpr double kSpeedOfLight = 299'792'458.0;

} // namespace

void
AntennaPattern::validate() const
{
  if (!(phi_3db_deg > 0.0) || !(theta_3db_deg > 0.0)) {
    throw ParameterError("antenna beamwidths must be positive");
  }
  if (!(a_m_db > 0.0) || !(slav_db > 0.0)) {
    throw ParameterError("antenna attenuation limits must be positive");
  }
}

double
horizontal_attenuation_db(double phi_deg, const AntennaPattern& p)
{
  const double r = phi_deg / p.phi_3db_deg;
  return -std::min(12.0 * r * r, p.a_m_db);
}

double
vertical_attenuation_db(double theta_deg, const AntennaPattern& p)
{
  const double r = (theta_deg - p.theta_tilt_deg) / p.theta_3db_deg;
  return -std::min(12.0 * r * r, p.slav_db);
}

double
antenna_gain(double phi_deg, double theta_deg, const AntennaPattern& p)
{
  return element_gain_db(horizontal_attenuation_db(phi_deg, p),
                         vertical_attenuation_db(theta_deg, p),
                         p);
}

double
zenith_angle_deg(double d2d_m, double h_tx_m, double h_rx_m)
{
  // Ray leaves the transmitter downward when the receiver is lower.
  return 90.0 + std::atan2(h_tx_m - h_rx_m, d2d_m) * kDeg;
}

void
FadingModel::validate() const
{
  if (!(m_los >= 0.5) || !(m_nlos >= 0.5)) {
    throw ParameterError("Nakagami shapes must be >= 0.5");
  }
}

double
pl_gtg(double d_m, double fc_mhz, double h_bs_m, double h_gue_m, DistanceUnits units)
{
  if (!(fc_mhz > 0.0) || !(h_bs_m > 0.0) || !(h_gue_m > 0.0)) {
    throw ParameterError("GTG loss needs positive frequency and heights");
  }
  double d = std::max(d_m, 1.0);
  if (units == DistanceUnits::Kilometers) {
    d /= 1000.0;
  }
  const double mobile = std::log10(11.75 * h_gue_m);
  return 74.52 + 26.16 * std::log10(fc_mhz) - 20.37 * std::log10(h_bs_m) -
         3.2 * mobile * mobile + 38.35 * std::log10(d);
}

namespace {

void
check_aue_height(double h_aue_m)
{
  if (!(h_aue_m > 10.0) || !(h_aue_m <= 300.0)) {
    throw ParameterError("aerial UE height must lie in (10, 300] m");
  }
}

} // namespace

double
ata_los_probability(double d2d_m, double h_aue_m)
{
  check_aue_height(h_aue_m);
  const double lh = std::log10(h_aue_m);
  const double p1 = 4300.0 * lh - 3800.0;
  const double d1 = std::max(460.0 * lh - 700.0, 18.0);
  const double d = std::min(d2d_m, 4000.0);
  if (d <= d1) {
    return 1.0;
  }
  return d1 / d + std::exp(-d / p1) * (1.0 - d1 / d);
}

LosSplit
ata_loss(double d2d_m,
         double d3d_m,
         double h_aue_m,
         double fc_mhz,
         FrequencyUnits fc_units)
{
  check_aue_height(h_aue_m);
  if (!(fc_mhz > 0.0)) {
    throw ParameterError("carrier frequency must be positive");
  }
  const double fc = fc_units == FrequencyUnits::MHz ? fc_mhz : fc_mhz / 1000.0;
  const double ld = std::log10(std::max(d3d_m, 1.0));

  LosSplit s;
  s.p_los = ata_los_probability(d2d_m, h_aue_m);
  s.los_db = 28.0 + 22.0 * ld + 20.0 * std::log10(fc);
  s.nlos_db = -17.5 + (46.0 - 7.0 * std::log10(h_aue_m)) * ld +
              20.0 * std::log10(40.0 * std::numbers::pi * fc / 3.0);
  return s;
}

double
pl_ata(double d2d_m,
       double d3d_m,
       double h_aue_m,
       double fc_mhz,
       LossMode mode,
       double u,
       FrequencyUnits fc_units)
{
  return ata_loss(d2d_m, d3d_m, h_aue_m, fc_mhz, fc_units).resolve(mode, u);
}

void
AtgEnvironment::validate() const
{
  if (!(zeta > 0.0) || !(zeta <= 1.0)) {
    throw ParameterError("built-up ratio must lie in (0, 1]");
  }
  if (!(xi > 0.0) || !(omega_m > 0.0)) {
    throw ParameterError("building density and height scale must be positive");
  }
}

double
atg_los_probability(double theta_deg, const AtgEnvironment& env)
{
  const double a = env.s_curve_a;
  const double b = env.s_curve_b;
  return 1.0 / (1.0 + a * std::exp(-b * (theta_deg - a)));
}

double
atg_los_probability_screens(double r_m, double h_tx_m, double h_rx_m, const AtgEnvironment& env)
{
  env.validate();
  const double crossings = std::floor(r_m / 1000.0 * std::sqrt(env.zeta * env.xi) - 1.0);
  if (crossings < 0.0) {
    return 1.0;
  }
  const long y = static_cast<long>(crossings);
  const double dh = h_tx_m - h_rx_m;
  const double two_omega2 = 2.0 * env.omega_m * env.omega_m;
  double p = 1.0;
  for (long x = 0; x <= y; ++x) {
    const double h = h_tx_m - (static_cast<double>(x) + 0.5) * dh / static_cast<double>(y + 1);
    p *= 1.0 - std::exp(-(h * h) / two_omega2);
  }
  return p;
}

double
free_space_loss_db(double d_m, double fc_mhz)
{
  const double d = std::max(d_m, 1.0);
  return 20.0 * std::log10(4.0 * std::numbers::pi * d * fc_mhz * 1e6 / kSpeedOfLight);
}

LosSplit
atg_loss(double r_m,
         double h_uabs_m,
         double h_gue_m,
         const AtgEnvironment& env,
         double fc_mhz)
{
  if (!(h_uabs_m > h_gue_m)) {
    throw ParameterError("UABS must fly above the ground UE");
  }
  if (!(r_m >= 0.0)) {
    throw ParameterError("ground distance must be non-negative");
  }
  const double dh = h_uabs_m - h_gue_m;
  const double theta = std::atan2(dh, r_m) * kDeg;
  const double fspl = free_space_loss_db(std::hypot(r_m, dh), fc_mhz);

  LosSplit s;
  s.p_los = atg_los_probability(theta, env);
  s.los_db = fspl + env.eta_los_db;
  s.nlos_db = fspl + env.eta_nlos_db;
  return s;
}

double
pl_atg(double r_m,
       double h_uabs_m,
       double h_gue_m,
       const AtgEnvironment& env,
       double fc_mhz,
       LossMode mode,
       double u)
{
  return atg_loss(r_m, h_uabs_m, h_gue_m, env, fc_mhz).resolve(mode, u);
}

double
received_power(double tx_power_dbm, double pl_db, double antenna_gain_db, double fading_linear)
{
  return dbm_to_mw(tx_power_dbm) * std::pow(10.0, antenna_gain_db / 10.0) * fading_linear /
         std::pow(10.0, pl_db / 10.0);
}

void
ChannelConfig::validate() const
{
  if (!(fc_mhz > 0.0)) {
    throw ParameterError("carrier frequency must be positive");
  }
  antenna.validate();
  fading.validate();
  atg.validate();
}

} // namespace aghet
