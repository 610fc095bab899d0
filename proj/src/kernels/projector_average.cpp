#include <cmath>

#include "qcoin/kernels.hpp"

namespace qcoin::kernels {

namespace {

// |psi><psi| entries for cos(t/2)|H> + e^{i p} sin(t/2)|V>:
// hh = cos^2(t/2) = (1 + cos t)/2, vv = (1 - cos t)/2, hv = e^{-i p} sin(t)/2.
struct ThetaTerms {
  double hh, vv, half_sin;
};

ThetaTerms theta_terms(double theta) {
  const double c = std::cos(theta);
  return {(1 + c) / 2, (1 - c) / 2, std::sin(theta) / 2};
}

}  // namespace

ProjectorAverage average_projector_serial(const QuadratureRule& phi, const QuadratureRule& theta,
                                          const Density2D& density) {
  double hh = 0, vv = 0, hv_re = 0, hv_im = 0, mass = 0;
  for (std::size_t i = 0; i < phi.nodes.size(); ++i) {
    const double p = phi.nodes[i];
    const double cp = std::cos(p), sp = std::sin(p);
    for (std::size_t j = 0; j < theta.nodes.size(); ++j) {
      const auto t = theta_terms(theta.nodes[j]);
      const double w = phi.weights[i] * theta.weights[j] * density(p, theta.nodes[j]);
      hh += w * t.hh;
      vv += w * t.vv;
      hv_re += w * t.half_sin * cp;
      hv_im -= w * t.half_sin * sp;
      mass += w;
    }
  }
  return {hh, vv, {hv_re, hv_im}, mass};
}

ProjectorAverage average_projector_omp(const QuadratureRule& phi, const QuadratureRule& theta,
                                       const Density2D& density) {
  double hh = 0, vv = 0, hv_re = 0, hv_im = 0, mass = 0;
  const auto n_phi = static_cast<std::ptrdiff_t>(phi.nodes.size());
#pragma omp parallel for reduction(+ : hh, vv, hv_re, hv_im, mass) schedule(static)
  for (std::ptrdiff_t i = 0; i < n_phi; ++i) {
    const double p = phi.nodes[i];
    const double cp = std::cos(p), sp = std::sin(p);
    for (std::size_t j = 0; j < theta.nodes.size(); ++j) {
      const auto t = theta_terms(theta.nodes[j]);
      const double w = phi.weights[i] * theta.weights[j] * density(p, theta.nodes[j]);
      hh += w * t.hh;
      vv += w * t.vv;
      hv_re += w * t.half_sin * cp;
      hv_im -= w * t.half_sin * sp;
      mass += w;
    }
  }
  return {hh, vv, {hv_re, hv_im}, mass};
}

}  // namespace qcoin::kernels
