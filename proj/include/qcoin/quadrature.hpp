#pragma once

#include <span>
#include <vector>

namespace qcoin {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

/// Composite Gauss-Legendre: the same n-point rule on every panel between
/// consecutive breakpoints (which must be ascending).
QuadratureRule composite_gauss_legendre(std::span<const double> breakpoints, int points_per_panel);

}  // namespace qcoin
