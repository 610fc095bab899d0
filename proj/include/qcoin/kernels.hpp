#pragma once

// Data-parallel kernels. Every OpenMP kernel has a serial twin with the same
// contract; tests hold the pairs against each other and bench/ times them.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qcoin/keyrate.hpp"
#include "qcoin/matrix.hpp"
#include "qcoin/quadrature.hpp"
#include "qcoin/trojan.hpp"

namespace qcoin::kernels {

/// Density-weighted average of |psi(phi,theta)><psi(phi,theta)| over a
/// tensor-product grid, as its three independent entries.
struct ProjectorAverage {
  double hh = 0.0;
  double vv = 0.0;
  Complex hv = 0.0;
  double mass = 0.0;  // integral of the density itself
};

using Density2D = std::function<double(double phi, double theta)>;

ProjectorAverage average_projector_serial(const QuadratureRule& phi, const QuadratureRule& theta,
                                          const Density2D& density);
ProjectorAverage average_projector_omp(const QuadratureRule& phi, const QuadratureRule& theta,
                                       const Density2D& density);

/// Pulses are split into this many shards, each with its own generator, so
/// counts do not depend on the thread count.
inline constexpr std::uint64_t kFillShards = 256;

std::uint64_t count_filled_serial(const PhotonSource& source, std::uint64_t n_pulses,
                                  std::uint64_t seed);
std::uint64_t count_filled_omp(const PhotonSource& source, std::uint64_t n_pulses,
                               std::uint64_t seed);

std::vector<KeyRatePoint> sweep_serial(const KeyRateSetup& setup, std::span<const double> distances);
std::vector<KeyRatePoint> sweep_omp(const KeyRateSetup& setup, std::span<const double> distances);

}  // namespace qcoin::kernels
