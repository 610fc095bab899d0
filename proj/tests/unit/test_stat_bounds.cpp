#include <doctest.h>

#include <cmath>
#include <random>

#include "qcoin/error.hpp"
#include "qcoin/stat_bounds.hpp"

using namespace qcoin;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// [e^d / (1+d)^(1+d)]^x in log form.
double log_upper_lhs(double x, double d) { return x * (d - (1 + d) * std::log1p(d)); }

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidArgument;
}

}  // namespace

// 50-digit mpmath solutions, frozen.
TEST_CASE("numeric Chernoff corrections against high-precision values") {
  CHECK(rel(chernoff_delta_numeric({1e6, 1e-10, Tail::Upper}), 0.0067938113754312710847) < 1e-13);
  CHECK(rel(chernoff_delta_numeric({100, 1e-6, Tail::Upper}), 0.56992547017951444507) < 1e-13);
  CHECK(rel(chernoff_delta_numeric({50, 1e-6, Tail::Upper}), 0.83068153903703955758) < 1e-13);
  CHECK(rel(chernoff_delta_numeric({1e4, 1e-10, Tail::Upper}), 0.068624668829723414745) < 1e-13);
  CHECK(rel(chernoff_delta_numeric({1e6, 1e-10, Tail::Lower}), 0.0067784607924352072872) < 1e-12);
  CHECK(rel(chernoff_delta_numeric({100, 1e-6, Tail::Lower}), 0.47723135708072230713) < 1e-13);
}

TEST_CASE("numeric Chernoff examples") {
  SUBCASE("epsilon = 1 forces delta = 0") {
    CHECK(chernoff_delta_numeric({10, 1.0, Tail::Upper}) == 0.0);
    CHECK(chernoff_delta_numeric({10, 1.0, Tail::Lower}) == 0.0);
    CHECK(chernoff_delta_numeric({10, 1 - 1e-12, Tail::Upper}) < 1e-6);
  }
  SUBCASE("leading-order behaviour for large x") {
    const double d = chernoff_delta_numeric({1e6, 1e-10, Tail::Upper});
    CHECK(rel(d, std::sqrt(2 * std::log(1e10) / 1e6)) < 0.01);
  }
  SUBCASE("plug-back residual") {
    const double d = chernoff_delta_numeric({100, 1e-6, Tail::Upper});
    CHECK(std::abs(std::exp(log_upper_lhs(100, d)) - 1e-6) <= 1e-12 * 1e-6);
  }
  SUBCASE("lower tail without a solution") {
    CHECK(code_of([] { chernoff_delta_numeric({2, 1e-3, Tail::Lower}); }) == ErrorCode::NoSolution);
    CHECK(bound_value({2, 1e-3, Tail::Lower}) == 0.0);
  }
  SUBCASE("invalid queries") {
    CHECK(code_of([] { chernoff_delta_numeric({0, 0.1, Tail::Upper}); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { chernoff_delta_numeric({1, 0, Tail::Upper}); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { chernoff_delta_numeric({1, 1.5, Tail::Upper}); }) == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("chernoff_rate series and closed form agree at the switch") {
  for (double t : {-0.0999999, -0.1, 0.0999999, 0.1}) {
    const double direct = (1 + t) * std::log1p(t) - t;
    CHECK(rel(chernoff_rate(t), direct) < 1e-13);
  }
  CHECK(chernoff_rate(-1.0) == 1.0);
  CHECK(chernoff_rate(1e-9) == doctest::Approx(0.5e-18).epsilon(1e-12));
}

TEST_CASE("Lambert W0") {
  CHECK(lambert_w0(0.0) == 0.0);
  CHECK(lambert_w0(std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(lambert_w0(-1.0 / std::exp(1.0)) == doctest::Approx(-1.0).epsilon(1e-7));
  CHECK(rel(lambert_w0(1.0), 0.567143290409783873) < 1e-15);
  CHECK(rel(lambert_w0(10.0), 1.7455280027406993831) < 1e-15);
  CHECK(rel(lambert_w0(-0.3), -0.48940222718021493357) < 1e-14);
  CHECK(rel(lambert_w0(1000.0), 5.2496028524015962271) < 1e-15);
  CHECK(code_of([] { lambert_w0(-0.5); }) == ErrorCode::OutOfDomain);

  SUBCASE("defining identity on random arguments") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0 / std::exp(1.0), 1e3);
    for (int i = 0; i < 2000; ++i) {
      const double y = u(rng);
      const double w = lambert_w0(y);
      CHECK(w >= -1.0);
      CHECK(std::abs(w * std::exp(w) - y) <= 1e-12 * std::max(std::abs(y), 1e-300));
    }
  }
  SUBCASE("offset form near the branch point") {
    // mpmath: W0(-1/e + 1e-8) = -0.99976685372178274818, i.e. s = e * 1e-8.
    const double s = std::exp(1.0) * 1e-8;
    CHECK(rel(lambert_w0_plus_one(s), 1 - 0.99976685372178274818) < 1e-11);
    CHECK(lambert_w0_plus_one(0.0) == 0.0);
    CHECK(rel(lambert_w0_plus_one(1.0), 1.0) < 1e-16);
    CHECK(rel(lambert_w0_plus_one(1 + std::exp(1.0) * std::exp(1.0)), 2.0) < 1e-15);
  }
}

TEST_CASE("closed form matches bisection") {
  CHECK(chernoff_delta_closed_form(10, 1.0) == 0.0);
  CHECK(rel(chernoff_delta_closed_form(1e4, 1e-10), chernoff_delta_numeric({1e4, 1e-10, Tail::Upper})) < 1e-10);
  CHECK(rel(chernoff_delta_closed_form(50, 1e-6), chernoff_delta_numeric({50, 1e-6, Tail::Upper})) < 1e-10);
  CHECK(code_of([] { chernoff_delta_closed_form(10, 2.0); }) == ErrorCode::OutOfDomain);

  for (double lx = 1; lx <= 12; lx += 0.5) {
    for (double le = -15; le <= -1; le += 1) {
      const double x = std::pow(10.0, lx), eps = std::pow(10.0, le);
      CHECK(rel(chernoff_delta_closed_form(x, eps), chernoff_delta_numeric({x, eps, Tail::Upper})) < 1e-10);
    }
  }
}

TEST_CASE("bound values") {
  CHECK(bound_value({123.0, 1.0, Tail::Upper}) == 123.0);
  CHECK(bound_value({1e6, 1e-10, Tail::Upper}) > 1e6);
  CHECK(bound_value({1e6, 1e-10, Tail::Lower}) < 1e6);
  CHECK(chernoff_correction({2, 1e-3, Tail::Lower}) == 2.0);
}

TEST_CASE("bounds increase with the expectation") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> lu(-2.0, 9.0);
  for (double eps : {1e-10, 1e-3}) {
    for (int i = 0; i < 500; ++i) {
      double x = std::pow(10.0, lu(rng)), y = std::pow(10.0, lu(rng));
      if (x == y) continue;
      if (x < y) std::swap(x, y);
      CHECK(bound_value({x, eps, Tail::Upper}) > bound_value({y, eps, Tail::Upper}));
      CHECK(bound_value({x, eps, Tail::Lower}) >= bound_value({y, eps, Tail::Lower}));
      // Strict once both lower bounds exist.
      if (bound_value({y, eps, Tail::Lower}) > 0.0)
        CHECK(bound_value({x, eps, Tail::Lower}) > bound_value({y, eps, Tail::Lower}));
    }
  }
}

TEST_CASE("derivative of the upper bound is (z - 1)/ln z") {
  for (double x : {30.0, 1e3, 1e5, 1e7}) {
    for (double eps : {1e-10, 1e-4}) {
      const double h = 1e-4 * x;
      const double fd = (bound_value({x + h, eps, Tail::Upper}) - bound_value({x - h, eps, Tail::Upper})) / (2 * h);
      const double z = 1 + chernoff_delta_numeric({x, eps, Tail::Upper});
      CHECK(std::abs(fd - (z - 1) / std::log(z)) < 1e-6);
    }
  }
}
