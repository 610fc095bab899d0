#pragma once

// Asymptotic decoy-state BB84 over fiber with the Trojan coin imbalance folded
// into the single-photon phase error.

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qcoin/state_prep.hpp"
#include "qcoin/trojan.hpp"

namespace qcoin {

struct ChannelModel {
  double fiber_loss_db_per_km = 0.2;
  double detector_efficiency = 0.1;
  double dark_count_prob = 1e-6;  // per pulse per detector
  double misalignment_error = 0.01;
  double error_correction_efficiency = 1.15;

  void validate() const;
};

struct ProtocolParams {
  double signal_intensity = 0.5;
  double decoy_intensity = 0.1;
  double p_signal = 0.8;
  double p_decoy = 0.1;
  double p_vacuum = 0.1;
  double p_basis_x = 0.5;  // Y' chosen with 1 - p_basis_x
  double n_pulses = 1e12;

  /// Both parties choose the same basis.
  double sift_probability() const { return p_basis_x * p_basis_x + (1 - p_basis_x) * (1 - p_basis_x); }
  void validate() const;
};

struct IntensityObservables {
  double intensity = 0.0;
  double gain = 0.0;
  double qber = 0.0;
};

struct ChannelObservables {
  IntensityObservables signal;
  IntensityObservables decoy;
  IntensityObservables vacuum;
  double transmittance = 0.0;  // eta, detector efficiency included
  double y0 = 0.0;
  double y1 = 0.0;  // true single-photon yield
  double e1 = 0.0;  // true single-photon error rate
};

inline constexpr double kVacuumErrorRate = 0.5;

double transmittance(const ChannelModel& ch, double distance_km);
/// Y_n = 1 - (1 - Y0)(1 - eta)^n.
double photon_yield(const ChannelModel& ch, double distance_km, int n);
/// e_n = (e0 Y0 + e_mis (1 - (1 - eta)^n)) / Y_n.
double photon_error(const ChannelModel& ch, double distance_km, int n);
/// Gain and QBER of a Poissonian pulse of the given mean intensity.
IntensityObservables intensity_observables(const ChannelModel& ch, double distance_km,
                                           double intensity);

ChannelObservables channel_observables(const ChannelModel& ch, const ProtocolParams& p,
                                       double distance_km);

struct DecoyBounds {
  double m1_lower = 0.0;
  double y1_lower = 0.0;
  double e1_upper = 0.5;
  bool vacuum_dominated = false;  // Y1_L <= 0: everything zero, no key
};

/// Vacuum + weak decoy analytic bounds on the single-photon yield and error.
DecoyBounds decoy_single_photon_bounds(const ChannelObservables& obs, const ProtocolParams& p);

double binary_entropy(double x);

enum class Mode { Asymptotic, Finite };

using PrepModel = std::variant<IdealPrep, GaussianPrepModel>;

AliceStates alice_states(const PrepModel& prep);

struct RateOptions {
  Mode mode = Mode::Asymptotic;
  /// Skip the fidelity computation and use this coin imbalance instead.
  std::optional<double> delta_override;
};

struct KeyRateSetup {
  ChannelModel channel;
  ProtocolParams protocol;
  TrojanBudget budget;
  PrepModel prep = IdealPrep{};
  RateOptions options;

  void validate() const;
};

struct KeyRatePoint {
  double distance_km = 0.0;
  double gain_signal = 0.0;
  double qber_signal = 0.0;
  double m1_lower = 0.0;
  double y1 = 0.0;
  double e1_bit = 0.0;
  double mu_out_eff = 0.0;
  double fidelity = 1.0;
  double delta = 0.0;
  double e1_phase = 0.0;
  double rate = 0.0;           // per pulse sent
  double rate_per_click = 0.0;  // rate / Q_mu
  bool phase_bound_vacuous = false;
  std::string diagnostic;  // why the rate was forced to zero, if it was
};

KeyRatePoint secret_key_rate(const KeyRateSetup& setup, double distance_km);
KeyRatePoint secret_key_rate(const ChannelModel& ch, const ProtocolParams& p,
                             const TrojanBudget& budget, const PrepModel& prep, double distance_km,
                             const RateOptions& options = {});

/// One point per distance (ascending), evaluated in parallel.
std::vector<KeyRatePoint> sweep(const KeyRateSetup& setup, std::span<const double> distances);

}  // namespace qcoin
