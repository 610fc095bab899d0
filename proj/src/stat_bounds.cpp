#include "qcoin/stat_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qcoin/error.hpp"

namespace qcoin {

namespace {

constexpr double kE = 2.71828182845904523536;

void validate(const ChernoffQuery& q) {
  if (!(q.x > 0.0) || !std::isfinite(q.x))
    throw Error(ErrorCode::InvalidArgument, "Chernoff expectation x must be positive");
  if (!(q.epsilon > 0.0) || q.epsilon > 1.0)
    throw Error(ErrorCode::InvalidArgument, "epsilon must lie in (0, 1]");
}

template <class F>
double bisect(F&& increasing, double lo, double hi) {
  // increasing(lo) < 0 <= increasing(hi); runs to adjacent doubles.
  for (int i = 0; i < 2000; ++i) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    (increasing(mid) < 0.0 ? lo : hi) = mid;
  }
  return lo + 0.5 * (hi - lo);
}

}  // namespace

double chernoff_rate(double t) {
  if (std::abs(t) < 0.1) {
    // sum_{k>=2} (-1)^k t^k / (k (k-1))
    double term = t * t;
    double sum = 0.0;
    for (int k = 2; k < 60; ++k) {
      const double add = term / (k * (k - 1.0));
      sum += add;
      if (std::abs(add) < 1e-18 * std::abs(sum)) break;
      term *= -t;
    }
    return sum;
  }
  if (t == -1.0) return 1.0;
  return (1.0 + t) * std::log1p(t) - t;
}

double chernoff_delta_numeric(const ChernoffQuery& q) {
  validate(q);
  const double target = -std::log(q.epsilon);  // x * rate(+-delta) = ln(1/eps)
  if (target == 0.0) return 0.0;
  const auto residual = [&](double sign) {
    return [&, sign](double d) { return q.x * chernoff_rate(sign * d) - target; };
  };

  if (q.side == Tail::Upper) {
    double hi = std::max(10.0, 3.0 * target / q.x + 10.0);
    const auto f = residual(1.0);
    while (f(hi) < 0.0) hi *= 2.0;
    return bisect(f, 0.0, hi);
  }
  // Lower tail: rate(-d) rises from 0 to 1 on (0, 1).
  if (target > q.x)
    throw Error(ErrorCode::NoSolution, "lower Chernoff bound: epsilon < e^-x");
  if (target == q.x) return 1.0;
  return bisect(residual(-1.0), 0.0, 1.0);
}

double lambert_w0_plus_one(double s) {
  if (!(s >= 0.0)) throw Error(ErrorCode::OutOfDomain, "W0 argument below -1/e");
  if (s == 0.0) return 0.0;
  if (s >= 1.0) return 1.0 + lambert_w0((s - 1.0) / kE);

  // Solve g(v) = 1 - (1 - v) e^v = s for v = 1 + w in (0, 1).
  const auto g = [](double v) {
    if (v < 0.5) {
      double term = v * v / 2.0, sum = 0.0;  // sum_{k>=2} (k-1) v^k / k!
      for (int k = 2; k < 60; ++k) {
        const double add = (k - 1) * term;
        sum += add;
        if (add < 1e-18 * sum) break;
        term *= v / (k + 1);
      }
      return sum;
    }
    return 1.0 - (1.0 - v) * std::exp(v);
  };
  const double p = std::sqrt(2.0 * s);
  double v = p - p * p / 3.0 + 11.0 * p * p * p / 72.0;
  for (int iter = 0; iter < 60; ++iter) {
    const double ev = std::exp(v);
    const double f = g(v) - s;
    const double d1 = v * ev;
    const double d2 = (1.0 + v) * ev;
    const double step = 2.0 * f * d1 / (2.0 * d1 * d1 - f * d2);
    v -= step;
    if (std::abs(step) <= 1e-16 * std::abs(v)) break;
  }
  return v;
}

double lambert_w0(double y) {
  constexpr double kBranch = -1.0 / kE;
  if (!std::isfinite(y) || y < kBranch - 1e-12)
    throw Error(ErrorCode::OutOfDomain, "W0 argument below -1/e");
  if (y == 0.0) return 0.0;
  if (y <= -0.25) return lambert_w0_plus_one(std::max(0.0, std::fma(kE, y, 1.0))) - 1.0;

  double w;
  if (y < 3.0) {
    w = std::log1p(y);
  } else {
    const double l1 = std::log(y), l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }
  for (int iter = 0; iter < 100; ++iter) {
    const double ew = std::exp(w);
    const double f = w * ew - y;
    const double step = f / (ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0));
    w -= step;
    if (std::abs(step) <= 1e-16 * (1.0 + std::abs(w))) break;
  }
  return w;
}

double chernoff_delta_closed_form(double x, double epsilon) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw Error(ErrorCode::InvalidArgument, "Chernoff expectation x must be positive");
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  // -(x + ln eps)/(e x) = (s - 1)/e with s = -ln(eps)/x; domain is s >= 0.
  const double s = -std::log(epsilon) / x;
  if (s < 0.0)
    throw Error(ErrorCode::OutOfDomain,
                "W0 argument " + std::to_string((s - 1.0) / kE) + " below -1/e");
  return std::expm1(lambert_w0_plus_one(s));
}

double bound_value(const ChernoffQuery& q) {
  if (q.side == Tail::Upper) return q.x * (1.0 + chernoff_delta_numeric(q));
  return q.x - chernoff_correction(q);
}

double chernoff_correction(const ChernoffQuery& q) {
  if (q.side == Tail::Lower) {
    try {
      return std::min(q.x, q.x * chernoff_delta_numeric(q));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoSolution) throw;
      return q.x;
    }
  }
  return q.x * chernoff_delta_numeric(q);
}

}  // namespace qcoin
