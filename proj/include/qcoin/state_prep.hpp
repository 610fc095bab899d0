#pragma once

// Alice's four polarization states: ideal pure states and Gaussian-averaged
// mixed states, plus the per-basis averages.

#include <array>
#include <functional>

#include "qcoin/matrix.hpp"

namespace qcoin {

inline constexpr double kPi = 3.14159265358979323846;

/// Point on the Bloch sphere. phi is reduced to [0, 2pi); theta must lie in [0, pi].
struct BlochAngles {
  double phi = 0.0;
  double theta = 0.0;

  static BlochAngles make(double phi, double theta);
};

/// Relative phases of the four protocol states: X' = {1, 2}, Y' = {3, 4}.
inline constexpr std::array<double, 4> kStateOffsets = {0.0, kPi, kPi / 2, 3 * kPi / 2};

struct IdealPrep {
  double phi0 = 0.0;
};

struct GaussianPrepModel {
  static constexpr double kMaxSigma = 0.3;

  std::array<double, 4> phi_mean = kStateOffsets;
  std::array<double, 4> phi_sigma = {0.05, 0.05, 0.05, 0.05};
  double theta_mean = kPi / 2;
  double theta_sigma = 0.05;

  /// Throws InvalidArgument for negative sigmas or sigmas above kMaxSigma.
  void validate() const;
};

using AliceStates = std::array<DensityMatrix, 4>;

DensityMatrix bloch_state(const BlochAngles& angles);

/// index is 1-based (1..4), as are all state indices in this library.
DensityMatrix ideal_state(const IdealPrep& prep, int index);
AliceStates ideal_states(const IdealPrep& prep);

/// Closed-form Gaussian average; normalization of the truncated density is
/// taken as 1.
DensityMatrix gaussian_state_analytic(const GaussianPrepModel& model, int index);
AliceStates gaussian_states_analytic(const GaussianPrepModel& model);

struct QuadratureSpec {
  int points_per_axis = 200;  // initial resolution, at least 200
  int max_doublings = 4;
  double tolerance = 1e-8;    // max entrywise change between resolutions
};

/// Numerical average of |psi(phi,theta)><psi(phi,theta)| against the
/// normalized truncated Gaussian product density. Doubles the resolution until
/// consecutive results agree within spec.tolerance; throws
/// QuadratureUnderResolved otherwise.
DensityMatrix gaussian_state_quadrature(const GaussianPrepModel& model, int index,
                                        const QuadratureSpec& spec = {});

struct BasisAverages {
  DensityMatrix rho_x;
  DensityMatrix rho_y;
};

/// (rho_1 + rho_2)/2 and (rho_3 + rho_4)/2.
BasisAverages basis_average(const AliceStates& states);

}  // namespace qcoin
