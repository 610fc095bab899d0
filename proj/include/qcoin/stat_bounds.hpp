#pragma once

// Multiplicative Chernoff corrections delta(x) for an expectation x at failure
// probability epsilon, by bisection and by the Lambert-W0 closed form.

namespace qcoin {

enum class Tail { Upper, Lower };

struct ChernoffQuery {
  double x = 0.0;        // expectation, > 0
  double epsilon = 0.0;  // failure probability, (0, 1]
  Tail side = Tail::Upper;
};

/// (1 + t) ln(1 + t) - t, accurate for small |t|; t in [-1, inf).
double chernoff_rate(double t);

/// Upper: delta > 0 with [e^d / (1+d)^(1+d)]^x = epsilon.
/// Lower: delta in (0, 1) with [e^-d / (1-d)^(1-d)]^x = epsilon; throws
/// NoSolution when epsilon < e^-x.
double chernoff_delta_numeric(const ChernoffQuery& q);

/// Upper-tail delta(x) = exp(1 + W0(-(x + ln eps)/(e x))) - 1. Throws
/// OutOfDomain when the W0 argument falls below -1/e (epsilon > 1).
double chernoff_delta_closed_form(double x, double epsilon);

/// Principal branch: w >= -1 with w e^w = y. Throws OutOfDomain for
/// y < -1/e beyond 1e-12 slack.
double lambert_w0(double y);

/// 1 + W0((s - 1)/e) for s >= 0, i.e. W0 parameterized by the distance s/e
/// from its branch point. Stays accurate as s -> 0 where forming y loses
/// digits.
double lambert_w0_plus_one(double s);

/// Upper: x (1 + delta); lower: x (1 - delta), or 0 when no lower solution.
double bound_value(const ChernoffQuery& q);

/// Absolute correction delta * x, 0 on a lower-side NoSolution.
double chernoff_correction(const ChernoffQuery& q);

}  // namespace qcoin
