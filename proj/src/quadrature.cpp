#include "qcoin/quadrature.hpp"

#include <cmath>

#include "qcoin/error.hpp"

namespace qcoin {

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "gauss_legendre needs n >= 1");
  QuadratureRule rule{std::vector<double>(n), std::vector<double>(n)};
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const int m = (n + 1) / 2;
  for (int i = 1; i <= m; ++i) {
    double z = std::cos(3.14159265358979323846 * (i - 0.25) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      dp = n * (z * p1 - p2) / (z * z - 1.0);
      const double step = p1 / dp;
      z -= step;
      if (std::abs(step) < 1e-16) break;
    }
    rule.nodes[i - 1] = mid - half * z;
    rule.nodes[n - i] = mid + half * z;
    rule.weights[i - 1] = 2.0 * half / ((1.0 - z * z) * dp * dp);
    rule.weights[n - i] = rule.weights[i - 1];
  }
  return rule;
}

QuadratureRule composite_gauss_legendre(std::span<const double> breakpoints, int points_per_panel) {
  QuadratureRule out;
  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    if (!(breakpoints[k] < breakpoints[k + 1]))
      throw Error(ErrorCode::InvalidArgument, "breakpoints must be strictly ascending");
    const auto panel = gauss_legendre(points_per_panel, breakpoints[k], breakpoints[k + 1]);
    out.nodes.insert(out.nodes.end(), panel.nodes.begin(), panel.nodes.end());
    out.weights.insert(out.weights.end(), panel.weights.begin(), panel.weights.end());
  }
  return out;
}

}  // namespace qcoin
