#include "qcoin/trojan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qcoin/error.hpp"
#include "qcoin/kernels.hpp"
#include "qcoin/stat_bounds.hpp"

namespace qcoin {

TrojanBudget TrojanBudget::from_hardware(double input_intensity, double attenuation_db,
                                         double epsilon) {
  TrojanBudget b;
  b.input_intensity = input_intensity;
  b.attenuation_db = attenuation_db;
  b.mu_out = std::pow(10.0, -attenuation_db / 10.0) * input_intensity;
  b.epsilon = epsilon;
  return b;
}

void TrojanBudget::validate() const {
  if (!(mu_out >= 0.0) || !(mu_out < 1.0))
    throw Error(ErrorCode::MuOutOfRange, "mu_out must satisfy 0 <= mu_out < 1");
  if (!(epsilon >= 0.0) || !(epsilon < 1.0))
    throw Error(ErrorCode::InvalidArgument, "epsilon must lie in [0, 1)");
  if (input_intensity < 0.0) throw Error(ErrorCode::InvalidArgument, "input_intensity < 0");
}

// ---------------------------------------------------------------------------

DensityMatrix side_channel_density(double mu_eff, int index) {
  if (index < 1 || index > 4) throw Error(ErrorCode::BadIndex, "side channel index must be 1..4");
  if (!(mu_eff >= 0.0 && mu_eff <= 1.0))
    throw Error(ErrorCode::MuOutOfRange, "side channel intensity must lie in [0, 1]");
  // Polarization of the photon follows the state Alice's modulator prepares.
  static const Complex kPhase[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  const double amp = std::sqrt(mu_eff / 2);
  const Complex v[3] = {amp, amp * kPhase[index - 1], std::sqrt(1.0 - mu_eff)};
  return DensityMatrix(ComplexMatrix::outer(v));
}

DensityMatrix joint_basis_density(const AliceStates& alice, double mu_eff, Basis basis) {
  const int a = basis == Basis::X ? 1 : 3;
  const int b = a + 1;
  ComplexMatrix joint = kron(alice[a - 1].matrix(), side_channel_density(mu_eff, a).matrix());
  joint += kron(alice[b - 1].matrix(), side_channel_density(mu_eff, b).matrix());
  return DensityMatrix(joint * Complex(0.5));
}

CoinImbalance coin_imbalance(const DensityMatrix& rho_x, const DensityMatrix& rho_y) {
  const double f = fidelity(rho_x, rho_y);
  double delta = std::clamp((1.0 - std::sqrt(f)) / 2.0, 0.0, 0.5);
  if (delta < kDeltaFloor) delta = 0.0;
  return {f, delta};
}

CoinImbalance coin_imbalance(const AliceStates& alice, double mu_eff) {
  return coin_imbalance(joint_basis_density(alice, mu_eff, Basis::X),
                        joint_basis_density(alice, mu_eff, Basis::Y));
}

PhaseErrorBound phase_error_bound(double delta, double y1, double e1_bit) {
  if (!(delta >= 0.0)) throw Error(ErrorCode::InvalidArgument, "delta must be >= 0");
  if (!(y1 > 0.0 && y1 <= 1.0)) throw Error(ErrorCode::InvalidArgument, "y1 must lie in (0, 1]");
  if (!(e1_bit >= 0.0 && e1_bit <= 0.5))
    throw Error(ErrorCode::InvalidArgument, "e1_bit must lie in [0, 1/2]");
  const double dp = delta / y1;
  if (dp > 0.5) return {0.5, true};
  const double e = e1_bit;
  const double bound = e + 4 * dp * (1 - dp) * (1 - 2 * e) +
                       4 * (1 - 2 * dp) * std::sqrt(dp * (1 - dp) * e * (1 - e));
  return {std::min(bound, 0.5), false};
}

CoinAnalysis analyze_coin(const AliceStates& alice, double mu_eff, double y1, double e1_bit) {
  const auto coin = coin_imbalance(alice, mu_eff);
  const auto phase = phase_error_bound(coin.delta, y1, e1_bit);
  return {coin.fidelity, coin.delta, y1, coin.delta / y1, e1_bit, phase.value, phase.vacuous};
}

// ---------------------------------------------------------------------------

namespace {

void check_mu_inputs(double m1_lower, double mu_out, double epsilon) {
  if (!(m1_lower > 0.0) || !std::isfinite(m1_lower))
    throw Error(ErrorCode::InvalidArgument, "M1_L must be positive");
  if (!(mu_out > 0.0 && mu_out < 1.0))
    throw Error(ErrorCode::MuOutOfRange, "mu_out must lie in (0, 1)");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw Error(ErrorCode::InvalidArgument, "epsilon must lie in (0, 1)");
}

// Lower Chernoff estimate of side-channel hits at expectation x.
double lower_estimate(double x, double epsilon) {
  return x - chernoff_correction({x, epsilon, Tail::Lower});
}

}  // namespace

double effective_mu_out_residual(double m1_lower, double mu_out, double epsilon, double mu_eff) {
  check_mu_inputs(m1_lower, mu_out, epsilon);
  return lower_estimate(m1_lower * mu_eff, epsilon) - bound_value({m1_lower * mu_out, epsilon, Tail::Upper});
}

double effective_mu_out(double m1_lower, double mu_out, double epsilon) {
  if (epsilon == 0.0) {
    if (!(mu_out >= 0.0 && mu_out < 1.0))
      throw Error(ErrorCode::MuOutOfRange, "mu_out must lie in [0, 1)");
    return mu_out;
  }
  check_mu_inputs(m1_lower, mu_out, epsilon);
  const double rhs = bound_value({m1_lower * mu_out, epsilon, Tail::Upper});
  const auto excess = [&](double mu) { return lower_estimate(m1_lower * mu, epsilon) - rhs; };
  if (excess(1.0) < 0.0)
    throw Error(ErrorCode::NoSolutionBelowOne,
                "side-channel intensity would reach 1; key is insecure");

  double lo = mu_out, hi = 1.0;
  for (int i = 0; i < 2000; ++i) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    (excess(mid) < 0.0 ? lo : hi) = mid;
  }
  return hi;
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::uint64_t kMaxPhotonNumber = 100000;

void check_mean(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean))
    throw Error(ErrorCode::InvalidArgument, "photon-number mean must be >= 0");
}

}  // namespace

PhotonNumberDistribution PhotonNumberDistribution::two_point(double mean) {
  if (!(mean >= 0.0 && mean <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "two-point mean must lie in [0, 1]");
  return table({1.0 - mean, mean});
}

PhotonNumberDistribution PhotonNumberDistribution::poisson(double mean) {
  check_mean(mean);
  return {Kind::Poisson, mean, {}};
}

PhotonNumberDistribution PhotonNumberDistribution::geometric(double mean) {
  check_mean(mean);
  return {Kind::Geometric, mean, {}};
}

PhotonNumberDistribution PhotonNumberDistribution::table(std::vector<double> probabilities) {
  if (probabilities.empty()) throw Error(ErrorCode::InvalidArgument, "empty photon-number table");
  double sum = 0.0, mean = 0.0;
  for (std::size_t n = 0; n < probabilities.size(); ++n) {
    if (!(probabilities[n] >= 0.0))
      throw Error(ErrorCode::InvalidArgument, "negative photon-number probability");
    sum += probabilities[n];
    mean += static_cast<double>(n) * probabilities[n];
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw Error(ErrorCode::InvalidArgument, "photon-number probabilities must sum to 1");
  return {Kind::Table, mean, std::move(probabilities)};
}

double PhotonNumberDistribution::pmf(std::uint64_t n) const {
  switch (kind_) {
    case Kind::Table:
      return n < table_.size() ? table_[n] : 0.0;
    case Kind::Poisson:
      if (mean_ == 0.0) return n == 0 ? 1.0 : 0.0;
      return std::exp(static_cast<double>(n) * std::log(mean_) - mean_ -
                      std::lgamma(static_cast<double>(n) + 1.0));
    case Kind::Geometric: {
      const double q = mean_ / (1.0 + mean_);
      return (1.0 - q) * std::pow(q, static_cast<double>(n));
    }
  }
  return 0.0;
}

double PhotonNumberDistribution::mean() const { return mean_; }

double PhotonNumberDistribution::prob_nonzero() const {
  switch (kind_) {
    case Kind::Table: return 1.0 - table_.front();
    case Kind::Poisson: return -std::expm1(-mean_);
    case Kind::Geometric: return mean_ / (1.0 + mean_);
  }
  return 0.0;
}

std::uint64_t PhotonNumberDistribution::sample(double u) const {
  double cdf = 0.0;
  switch (kind_) {
    case Kind::Table:
      for (std::uint64_t n = 0; n < table_.size(); ++n) {
        cdf += table_[n];
        if (u < cdf) return n;
      }
      return table_.size() - 1;
    case Kind::Poisson: {
      double p = std::exp(-mean_);
      for (std::uint64_t n = 0; n < kMaxPhotonNumber; ++n) {
        cdf += p;
        if (u < cdf) return n;
        p *= mean_ / static_cast<double>(n + 1);
      }
      return kMaxPhotonNumber;
    }
    case Kind::Geometric: {
      const double q = mean_ / (1.0 + mean_);
      double p = 1.0 - q;
      for (std::uint64_t n = 0; n < kMaxPhotonNumber; ++n) {
        cdf += p;
        if (u < cdf) return n;
        p *= q;
      }
      return kMaxPhotonNumber;
    }
  }
  return 0;
}

PhotonSource::PhotonSource(PhotonNumberDistribution single)
    : PhotonSource(std::vector<Component>{{1.0, std::move(single)}}) {}

PhotonSource::PhotonSource(std::vector<Component> components) : components_(std::move(components)) {
  if (components_.empty()) throw Error(ErrorCode::InvalidArgument, "empty photon source");
  double total = 0.0;
  for (const auto& c : components_) {
    if (!(c.weight >= 0.0)) throw Error(ErrorCode::InvalidArgument, "negative mixture weight");
    total += c.weight;
    cumulative_.push_back(total);
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw Error(ErrorCode::InvalidArgument, "mixture weights must sum to 1");
}

double PhotonSource::mean() const {
  double m = 0.0;
  for (const auto& c : components_) m += c.weight * c.distribution.mean();
  return m;
}

double PhotonSource::prob_nonzero() const {
  double p = 0.0;
  for (const auto& c : components_) p += c.weight * c.distribution.prob_nonzero();
  return p;
}

std::uint64_t PhotonSource::sample(std::mt19937_64& rng) const {
  std::size_t k = 0;
  if (components_.size() > 1) {
    const double u = uniform01(rng) * cumulative_.back();
    while (k + 1 < components_.size() && u >= cumulative_[k]) ++k;
  }
  return components_[k].distribution.sample(uniform01(rng));
}

FillResult simulate_trojan_fill(const PhotonSource& source, std::uint64_t n_pulses,
                                std::uint64_t seed) {
  if (source.mean() > 1.0 + 1e-12)
    throw Error(ErrorCode::InvalidArgument, "Trojan photon-number mean must not exceed 1");
  if (n_pulses < 10000) throw Error(ErrorCode::InvalidArgument, "n_pulses must be >= 1e4");
  const auto filled = kernels::count_filled_omp(source, n_pulses, seed);
  return {filled, static_cast<double>(filled) / static_cast<double>(n_pulses)};
}

FillBattery run_fill_battery(double mu_out, std::uint64_t n_pulses, std::uint64_t seed,
                             double mean_scale) {
  using D = PhotonNumberDistribution;
  const double m = mu_out * mean_scale;
  // Mixture means 0.4m, m, 2.5m with weights 0.5, 0.3, 0.2 average to m.
  const std::vector<std::pair<std::string, PhotonSource>> sources = {
      {"two-point", D::two_point(m)},
      {"poisson", D::poisson(m)},
      {"geometric", D::geometric(m)},
      {"mixture", PhotonSource({{0.5, D::two_point(0.4 * m)},
                                {0.3, D::poisson(m)},
                                {0.2, D::geometric(2.5 * m)}})},
  };

  FillBattery battery;
  const double n = static_cast<double>(n_pulses);
  const double limit = mu_out + 5.0 * std::sqrt(mu_out / n);
  battery.passed = true;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const auto& [name, source] = sources[i];
    FillCheck check{name, source.mean(), simulate_trojan_fill(source, n_pulses, seed + i), limit, false};
    check.passed = check.result.fraction <= limit;
    battery.passed = battery.passed && check.passed;
    battery.checks.push_back(std::move(check));
  }
  const double sigma = std::sqrt(m * (1.0 - m) / n);
  battery.saturation_ok = std::abs(battery.checks.front().result.fraction - m) <= 5.0 * sigma;
  return battery;
}

}  // namespace qcoin
