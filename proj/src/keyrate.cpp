#include "qcoin/keyrate.hpp"

#include <algorithm>
#include <cmath>

#include "qcoin/error.hpp"
#include "qcoin/kernels.hpp"

namespace qcoin {

void ChannelModel::validate() const {
  if (!(fiber_loss_db_per_km >= 0.0)) throw Error(ErrorCode::InvalidArgument, "fiber loss < 0");
  if (!(detector_efficiency > 0.0 && detector_efficiency <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "detector_efficiency must lie in (0, 1]");
  if (!(dark_count_prob >= 0.0 && dark_count_prob <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "dark_count_prob must lie in [0, 1]");
  if (!(misalignment_error >= 0.0 && misalignment_error <= 0.5))
    throw Error(ErrorCode::InvalidArgument, "misalignment_error must lie in [0, 1/2]");
  if (!(error_correction_efficiency >= 1.0))
    throw Error(ErrorCode::InvalidArgument, "error_correction_efficiency must be >= 1");
}

void ProtocolParams::validate() const {
  if (!(decoy_intensity > 0.0)) throw Error(ErrorCode::InvalidArgument, "decoy intensity must be > 0");
  if (!(decoy_intensity < signal_intensity))
    throw Error(ErrorCode::InvalidArgument, "decoy intensity must be below signal intensity");
  for (double q : {p_signal, p_decoy, p_vacuum, p_basis_x})
    if (!(q >= 0.0 && q <= 1.0)) throw Error(ErrorCode::InvalidArgument, "probability outside [0, 1]");
  if (std::abs(p_signal + p_decoy + p_vacuum - 1.0) > 1e-12)
    throw Error(ErrorCode::InvalidArgument, "intensity probabilities must sum to 1");
  if (!(n_pulses > 0.0)) throw Error(ErrorCode::InvalidArgument, "n_pulses must be positive");
}

// ---------------------------------------------------------------------------

double transmittance(const ChannelModel& ch, double distance_km) {
  if (!(distance_km >= 0.0)) throw Error(ErrorCode::InvalidArgument, "distance must be >= 0");
  return ch.detector_efficiency * std::pow(10.0, -ch.fiber_loss_db_per_km * distance_km / 10.0);
}

namespace {

double vacuum_yield(const ChannelModel& ch) {
  return 2.0 * ch.dark_count_prob - ch.dark_count_prob * ch.dark_count_prob;
}

}  // namespace

double photon_yield(const ChannelModel& ch, double distance_km, int n) {
  const double eta = transmittance(ch, distance_km);
  return 1.0 - (1.0 - vacuum_yield(ch)) * std::pow(1.0 - eta, n);
}

double photon_error(const ChannelModel& ch, double distance_km, int n) {
  const double eta = transmittance(ch, distance_km);
  const double y0 = vacuum_yield(ch);
  const double eta_n = -std::expm1(n * std::log1p(-eta));
  const double yn = photon_yield(ch, distance_km, n);
  return yn > 0.0 ? (kVacuumErrorRate * y0 + ch.misalignment_error * eta_n) / yn : kVacuumErrorRate;
}

IntensityObservables intensity_observables(const ChannelModel& ch, double distance_km,
                                           double intensity) {
  const double eta = transmittance(ch, distance_km);
  const double y0 = vacuum_yield(ch);
  const double clicks = -std::expm1(-eta * intensity);  // 1 - e^{-eta a}
  const double gain = y0 + clicks - y0 * clicks;        // 1 - (1 - Y0) e^{-eta a}
  const double errors = kVacuumErrorRate * y0 + ch.misalignment_error * clicks;
  return {intensity, gain, gain > 0.0 ? errors / gain : kVacuumErrorRate};
}

ChannelObservables channel_observables(const ChannelModel& ch, const ProtocolParams& p,
                                       double distance_km) {
  ChannelObservables obs;
  obs.signal = intensity_observables(ch, distance_km, p.signal_intensity);
  obs.decoy = intensity_observables(ch, distance_km, p.decoy_intensity);
  obs.vacuum = intensity_observables(ch, distance_km, 0.0);
  obs.transmittance = transmittance(ch, distance_km);
  obs.y0 = vacuum_yield(ch);
  obs.y1 = photon_yield(ch, distance_km, 1);
  obs.e1 = photon_error(ch, distance_km, 1);
  return obs;
}

DecoyBounds decoy_single_photon_bounds(const ChannelObservables& obs, const ProtocolParams& p) {
  const double mu = obs.signal.intensity;
  const double nu = obs.decoy.intensity;
  if (!(nu > 0.0 && nu < mu))
    throw Error(ErrorCode::InvalidArgument, "decoy bounds need 0 < nu < mu");
  if (obs.decoy.gain > obs.signal.gain)
    throw Error(ErrorCode::InvalidArgument, "decoy gain exceeds signal gain");

  const double y0 = obs.vacuum.gain;
  const double q_mu = obs.signal.gain, q_nu = obs.decoy.gain;
  const double y1 = mu / (mu * nu - nu * nu) *
                    (q_nu * std::exp(nu) - q_mu * std::exp(mu) * nu * nu / (mu * mu) -
                     (mu * mu - nu * nu) / (mu * mu) * y0);
  if (!(y1 > 0.0)) return {0.0, 0.0, 0.5, true};

  const double e1 = (obs.decoy.qber * q_nu * std::exp(nu) - kVacuumErrorRate * y0) / (y1 * nu);
  DecoyBounds b;
  b.y1_lower = std::min(y1, 1.0);
  b.e1_upper = std::clamp(e1, 0.0, 0.5);
  b.m1_lower = p.n_pulses * p.p_signal * mu * std::exp(-mu) * b.y1_lower;
  return b;
}

double binary_entropy(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1 - x) * std::log2(1 - x);
}

AliceStates alice_states(const PrepModel& prep) {
  return std::visit(
      [](const auto& model) -> AliceStates {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, IdealPrep>) return ideal_states(model);
        else return gaussian_states_analytic(model);
      },
      prep);
}

void KeyRateSetup::validate() const {
  channel.validate();
  protocol.validate();
  budget.validate();
  if (const auto* g = std::get_if<GaussianPrepModel>(&prep)) g->validate();
  if (options.delta_override && !(*options.delta_override >= 0.0 && *options.delta_override <= 0.5))
    throw Error(ErrorCode::InvalidArgument, "delta override must lie in [0, 1/2]");
}

KeyRatePoint secret_key_rate(const KeyRateSetup& setup, double distance_km) {
  setup.validate();
  const auto& p = setup.protocol;

  KeyRatePoint pt;
  pt.distance_km = distance_km;
  const auto obs = channel_observables(setup.channel, p, distance_km);
  pt.gain_signal = obs.signal.gain;
  pt.qber_signal = obs.signal.qber;

  const auto decoy = decoy_single_photon_bounds(obs, p);
  pt.m1_lower = decoy.m1_lower;
  pt.y1 = decoy.y1_lower;
  pt.e1_bit = decoy.e1_upper;
  if (decoy.vacuum_dominated) {
    pt.e1_phase = 0.5;
    pt.diagnostic = "vacuum dominated: Y1_L <= 0";
    return pt;
  }

  const double mu_out = setup.budget.mu_out;
  try {
    if (mu_out == 0.0) pt.mu_out_eff = 0.0;
    else if (setup.options.mode == Mode::Asymptotic) pt.mu_out_eff = mu_out;
    else pt.mu_out_eff = effective_mu_out(decoy.m1_lower, mu_out, setup.budget.epsilon);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoSolutionBelowOne) throw;
    pt.mu_out_eff = 1.0;
    pt.e1_phase = 0.5;
    pt.diagnostic = "mu_out_eff >= 1: Trojan side channel leaves no secure key";
    return pt;
  }

  if (setup.options.delta_override) {
    pt.delta = *setup.options.delta_override;
    pt.fidelity = (1 - 2 * pt.delta) * (1 - 2 * pt.delta);
  } else {
    const auto coin = coin_imbalance(alice_states(setup.prep), pt.mu_out_eff);
    pt.delta = coin.delta;
    pt.fidelity = coin.fidelity;
  }

  const auto phase = phase_error_bound(pt.delta, decoy.y1_lower, decoy.e1_upper);
  pt.e1_phase = phase.value;
  pt.phase_bound_vacuous = phase.vacuous;

  const double mu = p.signal_intensity;
  const double single = mu * std::exp(-mu) * decoy.y1_lower * (1 - binary_entropy(pt.e1_phase));
  const double leak = setup.channel.error_correction_efficiency * obs.signal.gain *
                      binary_entropy(obs.signal.qber);
  pt.rate = std::max(0.0, p.sift_probability() * (single - leak));
  pt.rate_per_click = obs.signal.gain > 0.0 ? pt.rate / obs.signal.gain : 0.0;
  if (pt.rate == 0.0) pt.diagnostic = "error correction leakage exceeds privacy-amplified key";
  return pt;
}

KeyRatePoint secret_key_rate(const ChannelModel& ch, const ProtocolParams& p,
                             const TrojanBudget& budget, const PrepModel& prep, double distance_km,
                             const RateOptions& options) {
  return secret_key_rate(KeyRateSetup{ch, p, budget, prep, options}, distance_km);
}

std::vector<KeyRatePoint> sweep(const KeyRateSetup& setup, std::span<const double> distances) {
  setup.validate();
  if (!std::is_sorted(distances.begin(), distances.end()))
    throw Error(ErrorCode::InvalidArgument, "sweep distances must be ascending");
  return kernels::sweep_omp(setup, distances);
}

}  // namespace qcoin
