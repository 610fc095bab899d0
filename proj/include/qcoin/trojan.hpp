#pragma once

// Conservative single-photon side channel bounding an arbitrary Trojan probe,
// the joint Alice-Eve basis states, quantum-coin imbalance and the phase-error
// bound built on it.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qcoin/matrix.hpp"
#include "qcoin/state_prep.hpp"

namespace qcoin {

struct TrojanBudget {
  double input_intensity = 0.0;  // photons per pulse injected (0 when mu_out set directly)
  double attenuation_db = 0.0;   // total loss of the Trojan light inside Alice
  double mu_out = 1e-6;          // mean Trojan photons leaving Alice per pulse
  double epsilon = 1e-10;        // failure probability of each Chernoff bound

  /// mu_out = 10^(-attenuation_db/10) * input_intensity.
  static TrojanBudget from_hardware(double input_intensity, double attenuation_db,
                                    double epsilon = 1e-10);

  /// Throws MuOutOfRange unless 0 <= mu_out < 1, InvalidArgument for a bad epsilon.
  void validate() const;
};

enum class Basis { X, Y };

/// rho_{E,index} in the ordered basis (|H_1ph>, |V_1ph>, |vac>): projector
/// onto sqrt(1-mu)|vac> + sqrt(mu)|s_index>, s = D, A, R, L.
DensityMatrix side_channel_density(double mu_eff, int index);

/// (rho_a (x) rho_{E,a} + rho_b (x) rho_{E,b}) / 2 with (a, b) = (1, 2) for X'
/// and (3, 4) for Y'.
DensityMatrix joint_basis_density(const AliceStates& alice, double mu_eff, Basis basis);

struct CoinImbalance {
  double fidelity = 1.0;
  double delta = 0.0;  // (1 - sqrt F)/2, floored to 0 below 1e-14
};

inline constexpr double kDeltaFloor = 1e-14;

CoinImbalance coin_imbalance(const DensityMatrix& rho_x, const DensityMatrix& rho_y);
CoinImbalance coin_imbalance(const AliceStates& alice, double mu_eff);

struct PhaseErrorBound {
  double value = 0.0;
  bool vacuous = false;  // delta/y1 > 1/2: reported as 1/2
};

/// Single-photon phase-error upper bound from the bit error e1_bit and
/// Delta' = delta / y1, capped at 1/2.
PhaseErrorBound phase_error_bound(double delta, double y1, double e1_bit);

/// mu' solving M mu' - dL(M mu') = M mu + dU(M mu) on [mu, 1] by bisection.
/// epsilon == 0 selects the asymptotic limit and returns mu_out unchanged.
/// Throws NoSolutionBelowOne when even mu' = 1 falls short.
double effective_mu_out(double m1_lower, double mu_out, double epsilon);

/// LHS - RHS of the implicit mu' equation, for residual checks.
double effective_mu_out_residual(double m1_lower, double mu_out, double epsilon, double mu_eff);

struct CoinAnalysis {
  double fidelity = 1.0;
  double delta = 0.0;
  double y1 = 1.0;
  double delta_prime = 0.0;
  double e1_bit = 0.0;
  double e1_phase = 0.0;
  bool vacuous = false;
};

CoinAnalysis analyze_coin(const AliceStates& alice, double mu_eff, double y1, double e1_bit);

// ---------------------------------------------------------------------------
// Photon-number statistics of Trojan light and the pulse-filling simulation.

class PhotonNumberDistribution {
 public:
  enum class Kind { Table, Poisson, Geometric };

  /// P_0 = 1 - mean, P_1 = mean: the conservative side channel.
  static PhotonNumberDistribution two_point(double mean);
  static PhotonNumberDistribution poisson(double mean);
  /// Thermal statistics P_n = m^n / (1 + m)^(n + 1).
  static PhotonNumberDistribution geometric(double mean);
  /// Explicit P_0, P_1, ...; must sum to 1 within 1e-12.
  static PhotonNumberDistribution table(std::vector<double> probabilities);

  Kind kind() const noexcept { return kind_; }
  double pmf(std::uint64_t n) const;
  double mean() const;
  double prob_nonzero() const;
  /// Inverse-CDF draw from a uniform u in [0, 1).
  std::uint64_t sample(double u) const;

 private:
  PhotonNumberDistribution(Kind kind, double mean, std::vector<double> table)
      : kind_(kind), mean_(mean), table_(std::move(table)) {}

  Kind kind_;
  double mean_;
  std::vector<double> table_;
};

/// Weighted mixture of photon-number distributions; a pure probe is a
/// one-component mixture.
class PhotonSource {
 public:
  struct Component {
    double weight;
    PhotonNumberDistribution distribution;
  };

  PhotonSource(PhotonNumberDistribution single);  // NOLINT: implicit on purpose
  explicit PhotonSource(std::vector<Component> components);

  const std::vector<Component>& components() const noexcept { return components_; }
  double mean() const;
  double prob_nonzero() const;
  std::uint64_t sample(std::mt19937_64& rng) const;

 private:
  std::vector<Component> components_;
  std::vector<double> cumulative_;
};

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct FillResult {
  std::uint64_t filled = 0;
  double fraction = 0.0;
};

/// Counts pulses carrying at least one Trojan photon. Deterministic per seed
/// and independent of the thread count.
FillResult simulate_trojan_fill(const PhotonSource& source, std::uint64_t n_pulses,
                                std::uint64_t seed);

struct FillCheck {
  std::string name;
  double mean = 0.0;
  FillResult result;
  double limit = 0.0;  // mu_out + 5 sqrt(mu_out / N)
  bool passed = false;
};

struct FillBattery {
  std::vector<FillCheck> checks;
  bool saturation_ok = false;  // two-point fraction within 5 sigma of its mean
  bool passed = false;
};

/// Two-point, Poisson, geometric and a three-component mixture, all with
/// mean mean_scale * mu_out, checked against mu_out + 5 sqrt(mu_out / N).
FillBattery run_fill_battery(double mu_out, std::uint64_t n_pulses, std::uint64_t seed,
                             double mean_scale = 1.0);

}  // namespace qcoin
