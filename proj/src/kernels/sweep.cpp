#include <exception>

#include "qcoin/kernels.hpp"

namespace qcoin::kernels {

std::vector<KeyRatePoint> sweep_serial(const KeyRateSetup& setup, std::span<const double> distances) {
  std::vector<KeyRatePoint> out;
  out.reserve(distances.size());
  for (double d : distances) out.push_back(secret_key_rate(setup, d));
  return out;
}

std::vector<KeyRatePoint> sweep_omp(const KeyRateSetup& setup, std::span<const double> distances) {
  std::vector<KeyRatePoint> out(distances.size());
  std::exception_ptr failure;
  const auto n = static_cast<std::ptrdiff_t>(distances.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = secret_key_rate(setup, distances[i]);
    } catch (...) {
#pragma omp critical(qcoin_sweep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace qcoin::kernels
