#include "qcoin/state_prep.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qcoin/error.hpp"
#include "qcoin/kernels.hpp"
#include "qcoin/quadrature.hpp"

namespace qcoin {

BlochAngles BlochAngles::make(double phi, double theta) {
  if (!std::isfinite(phi) || !std::isfinite(theta))
    throw Error(ErrorCode::InvalidArgument, "Bloch angles must be finite");
  if (theta < 0.0 || theta > kPi) throw Error(ErrorCode::InvalidArgument, "theta outside [0, pi]");
  double reduced = std::fmod(phi, 2 * kPi);
  if (reduced < 0.0) reduced += 2 * kPi;
  return {reduced, theta};
}

void GaussianPrepModel::validate() const {
  auto check_sigma = [](double s, const char* name) {
    if (!(s >= 0.0) || s > kMaxSigma)
      throw Error(ErrorCode::InvalidArgument, std::string(name) + " must lie in [0, 0.3] rad");
  };
  for (double s : phi_sigma) check_sigma(s, "phi_sigma");
  check_sigma(theta_sigma, "theta_sigma");
  for (double m : phi_mean)
    if (!std::isfinite(m)) throw Error(ErrorCode::InvalidArgument, "phi_mean must be finite");
  if (!(theta_mean >= 0.0 && theta_mean <= kPi))
    throw Error(ErrorCode::InvalidArgument, "theta_mean outside [0, pi]");
}

namespace {

void check_index(int index) {
  if (index < 1 || index > 4) throw Error(ErrorCode::BadIndex, "state index must be 1..4");
}

}  // namespace

DensityMatrix bloch_state(const BlochAngles& angles) {
  const Complex v[2] = {std::cos(angles.theta / 2),
                        std::polar(1.0, angles.phi) * std::sin(angles.theta / 2)};
  return DensityMatrix(ComplexMatrix::outer(v));
}

DensityMatrix ideal_state(const IdealPrep& prep, int index) {
  check_index(index);
  return bloch_state(BlochAngles::make(prep.phi0 + kStateOffsets[index - 1], kPi / 2));
}

AliceStates ideal_states(const IdealPrep& prep) {
  return {ideal_state(prep, 1), ideal_state(prep, 2), ideal_state(prep, 3), ideal_state(prep, 4)};
}

DensityMatrix gaussian_state_analytic(const GaussianPrepModel& model, int index) {
  check_index(index);
  model.validate();
  const double sp = model.phi_sigma[index - 1];
  const double st = model.theta_sigma;
  const double z = std::exp(-st * st / 2) * std::cos(model.theta_mean);
  const Complex coherence = std::polar(std::exp(-(sp * sp + st * st) / 2) * std::sin(model.theta_mean) / 2,
                                       -model.phi_mean[index - 1]);
  return DensityMatrix(ComplexMatrix{{(1 + z) / 2, coherence}, {std::conj(coherence), (1 - z) / 2}});
}

AliceStates gaussian_states_analytic(const GaussianPrepModel& model) {
  return {gaussian_state_analytic(model, 1), gaussian_state_analytic(model, 2),
          gaussian_state_analytic(model, 3), gaussian_state_analytic(model, 4)};
}

namespace {

// One axis of the truncated Gaussian: rule over [lo, hi] with panel edges at
// multiples of sigma around the mean, and the erf normalization of the box.
struct GaussianAxis {
  double mean;
  double sigma;
  double lo;
  double hi;
  double coefficient = 0.0;

  GaussianAxis(double mean_, double sigma_, double lo_, double hi_)
      : mean(mean_), sigma(sigma_), lo(lo_), hi(hi_) {
    if (sigma > 0.0) coefficient = 1.0 / (sigma * std::sqrt(2 * kPi) * normalization());
  }

  QuadratureRule rule(int points) const {
    if (sigma == 0.0) return {{mean}, {1.0}};
    static constexpr double kSigmaSteps[] = {-12, -8, -6, -4, -3, -2, -1, 0, 1, 2, 3, 4, 6, 8, 12};
    std::vector<double> edges{lo, hi};
    for (double k : kSigmaSteps) {
      const double x = mean + k * sigma;
      if (x > lo && x < hi) edges.push_back(x);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    const int panels = static_cast<int>(edges.size()) - 1;
    const int per_panel = std::max(2, (points + panels - 1) / panels);
    return composite_gauss_legendre(edges, per_panel);
  }

  double normalization() const {
    if (sigma == 0.0) return 1.0;
    const double s = std::sqrt(2.0) * sigma;
    return 0.5 * (std::erf((mean - lo) / s) + std::erf((hi - mean) / s));
  }

  double density(double x) const {
    if (sigma == 0.0) return 1.0;
    const double u = (x - mean) / sigma;
    return coefficient * std::exp(-0.5 * u * u);
  }
};

ComplexMatrix to_matrix(const kernels::ProjectorAverage& avg) {
  return ComplexMatrix{{avg.hh, avg.hv}, {std::conj(avg.hv), avg.vv}};
}

}  // namespace

DensityMatrix gaussian_state_quadrature(const GaussianPrepModel& model, int index,
                                        const QuadratureSpec& spec) {
  check_index(index);
  model.validate();
  if (spec.points_per_axis < 200)
    throw Error(ErrorCode::InvalidArgument, "quadrature needs at least 200 points per axis");

  // |psi><psi| is 2pi-periodic in phi, so the phi window is centred on the mean.
  const double phi_mean = model.phi_mean[index - 1];
  const GaussianAxis phi_axis{phi_mean, model.phi_sigma[index - 1], phi_mean - kPi, phi_mean + kPi};
  const GaussianAxis theta_axis{model.theta_mean, model.theta_sigma, 0.0, kPi};
  const auto density = [&](double phi, double theta) {
    return phi_axis.density(phi) * theta_axis.density(theta);
  };

  int points = spec.points_per_axis;
  ComplexMatrix previous = to_matrix(kernels::average_projector_omp(
      phi_axis.rule(points), theta_axis.rule(points), density));
  for (int k = 0; k < spec.max_doublings; ++k) {
    points *= 2;
    ComplexMatrix current = to_matrix(kernels::average_projector_omp(
        phi_axis.rule(points), theta_axis.rule(points), density));
    if ((current - previous).max_abs() < spec.tolerance) return DensityMatrix(std::move(current));
    previous = std::move(current);
  }
  throw Error(ErrorCode::QuadratureUnderResolved,
              "entries still changing after " + std::to_string(spec.max_doublings) + " doublings");
}

BasisAverages basis_average(const AliceStates& states) {
  const auto half = Complex(0.5);
  return {DensityMatrix((states[0].matrix() + states[1].matrix()) * half),
          DensityMatrix((states[2].matrix() + states[3].matrix()) * half)};
}

}  // namespace qcoin
