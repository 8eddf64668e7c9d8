#pragma once

#include "aghet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace aghet {

/// 3D beamforming element pattern. Angles in degrees: azimuth phi measured
/// from boresight, zenith theta measured from the vertical (90 = horizon).
struct AntennaPattern
{
  double g_e_max_dbi = 8.0;
  double a_m_db = 30.0;
  double slav_db = 30.0;
  double phi_3db_deg = 65.0;
  double theta_3db_deg = 65.0;
  double theta_tilt_deg = 90.0;

  void validate() const;
  bool operator==(const AntennaPattern&) const = default;
};

/// Horizontal element attenuation A_H(phi), in dB (<= 0).
double horizontal_attenuation_db(double phi_deg, const AntennaPattern& p);

/// Vertical element attenuation A_V(theta), in dB (<= 0).
double vertical_attenuation_db(double theta_deg, const AntennaPattern& p);

/// Combines the two element attenuations into the element gain in dBi.
inline double
element_gain_db(double a_h_db, double a_v_db, const AntennaPattern& p)
{
  return p.g_e_max_dbi - std::min(-(a_h_db + a_v_db), p.a_m_db);
}

double antenna_gain(double phi_deg, double theta_deg, const AntennaPattern& p);

/// Zenith angle (degrees) of the ray from a transmitter at height h_tx to a
/// receiver at height h_rx separated by d2d on the ground.
double zenith_angle_deg(double d2d_m, double h_tx_m, double h_rx_m);

struct FadingModel
{
  double m_los = 3.0;
  double m_nlos = 1.0;

  void validate() const;
  bool operator==(const FadingModel&) const = default;
};

/// Nakagami-m power gain: Gamma(shape = m, rate = m), unit mean.
template <class URBG>
double
sample_nakagami_power(double m, URBG& gen)
{
  if (!(m >= 0.5)) {
    throw ParameterError("Nakagami shape m must be >= 0.5");
  }
  std::gamma_distribution<double> gamma(m, 1.0 / m);
  double w = gamma(gen);
  // A zero draw is possible in floating point; keep the power strictly positive.
  return w > 0.0 ? w : std::numeric_limits<double>::min();
}

enum class FrequencyUnits
{
  MHz,
  GHz
};

enum class DistanceUnits
{
  Meters,
  Kilometers
};

/// How a LOS/NLOS mixture is turned into one loss value.
enum class LossMode
{
  Average, ///< P_LOS-weighted expectation
  Sampled  ///< one Bernoulli(P_LOS) draw
};

/// LOS probability with the LOS and NLOS losses it mixes.
struct LosSplit
{
  double p_los = 1.0;
  double los_db = 0.0;
  double nlos_db = 0.0;

  double average_db() const { return p_los * los_db + (1.0 - p_los) * nlos_db; }
  /// `u` is a uniform draw in [0, 1); LOS when u < p_los.
  double sampled_db(double u) const { return u < p_los ? los_db : nlos_db; }
  double resolve(LossMode mode, double u) const
  {
    return mode == LossMode::Average ? average_db() : sampled_db(u);
  }
};

/// Okumura-Hata urban loss for ground-to-ground links. `d_m` is clamped to
/// at least 1 m; `units` selects the unit the distance term is evaluated in.
double pl_gtg(double d_m,
              double fc_mhz,
              double h_bs_m,
              double h_gue_m,
              DistanceUnits units = DistanceUnits::Meters);

/// Urban-macro-with-aerial LOS probability for an aerial UE.
double ata_los_probability(double d2d_m, double h_aue_m);

/// Urban-macro-with-aerial LOS/NLOS losses for any link ending at an aerial UE.
LosSplit ata_loss(double d2d_m,
                  double d3d_m,
                  double h_aue_m,
                  double fc_mhz,
                  FrequencyUnits fc_units = FrequencyUnits::MHz);

double pl_ata(double d2d_m,
              double d3d_m,
              double h_aue_m,
              double fc_mhz,
              LossMode mode,
              double u = 0.5,
              FrequencyUnits fc_units = FrequencyUnits::MHz);

/// Urban statistical environment for UABS-to-ground links.
struct AtgEnvironment
{
  double zeta = 0.3;          // built-up area ratio
  double xi = 500.0;          // buildings per km^2
  double omega_m = 15.0;      // Rayleigh scale of building heights
  double s_curve_a = 9.61;
  double s_curve_b = 0.16;
  double eta_los_db = 1.0;    // excess loss over free space, LOS
  double eta_nlos_db = 20.0;  // excess loss over free space, NLOS

  void validate() const;
  bool operator==(const AtgEnvironment&) const = default;
};

/// Sigmoid LOS probability for elevation angle `theta_deg` (degrees).
double atg_los_probability(double theta_deg, const AtgEnvironment& env);

/// Building-screen LOS probability: product over the buildings crossed on a
/// ground distance r of the probability that each is shorter than the ray.
double atg_los_probability_screens(double r_m,
                                   double h_tx_m,
                                   double h_rx_m,
                                   const AtgEnvironment& env);

double free_space_loss_db(double d_m, double fc_mhz);

LosSplit atg_loss(double r_m,
                  double h_uabs_m,
                  double h_gue_m,
                  const AtgEnvironment& env,
                  double fc_mhz);

double pl_atg(double r_m,
              double h_uabs_m,
              double h_gue_m,
              const AtgEnvironment& env,
              double fc_mhz,
              LossMode mode,
              double u = 0.5);

inline double
dbm_to_mw(double dbm)
{
  return std::pow(10.0, dbm / 10.0);
}

inline double
mw_to_dbm(double mw)
{
  return 10.0 * std::log10(mw);
}

/// Received reference-signal power in mW.
double received_power(double tx_power_dbm,
                      double pl_db,
                      double antenna_gain_db,
                      double fading_linear);

struct LinkBudget
{
  double path_loss_db = 0.0;
  double antenna_gain_db = 0.0;
  double fading_linear = 1.0;
  double rx_power_mw = 0.0;
};

/// Everything the link builder needs besides geometry.
struct ChannelConfig
{
  double fc_mhz = 763.0;
  AntennaPattern antenna;
  FadingModel fading;
  AtgEnvironment atg;
  FrequencyUnits ata_fc_units = FrequencyUnits::MHz;
  DistanceUnits gtg_distance_units = DistanceUnits::Kilometers;
  LossMode loss_mode = LossMode::Average;

  void validate() const;
  bool operator==(const ChannelConfig&) const = default;
};

} // namespace aghet
