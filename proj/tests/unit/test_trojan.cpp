#include <doctest.h>

#include <cmath>
#include <random>

#include "qcoin/error.hpp"
#include "qcoin/stat_bounds.hpp"
#include "qcoin/trojan.hpp"

using namespace qcoin;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// |psi_i> (x) |e_i> for ideal prep, as a 6-vector in the kron ordering.
std::vector<Complex> joint_ket(double phi0, double mu, int index) {
  static const Complex kPhase[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  const Complex alice[2] = {1 / std::sqrt(2.0), std::polar(1 / std::sqrt(2.0), phi0) * kPhase[index - 1]};
  const Complex eve[3] = {std::sqrt(mu / 2), std::sqrt(mu / 2) * kPhase[index - 1], std::sqrt(1 - mu)};
  std::vector<Complex> v;
  for (const auto& a : alice)
    for (const auto& e : eve) v.push_back(a * e);
  return v;
}

// Each basis state is (|a><a| + |b><b|)/2, so with A = [a b]/sqrt2 and
// B = [c d]/sqrt2, sqrt F = ||A^dagger B||_1. For a 2x2 M the trace norm is
// sqrt(||M||_F^2 + 2 |det M|).
double sqrt_fidelity_ideal_oracle(double phi0, double mu) {
  const auto a = joint_ket(phi0, mu, 1), b = joint_ket(phi0, mu, 2);
  const auto c = joint_ket(phi0, mu, 3), d = joint_ket(phi0, mu, 4);
  auto dot = [](const std::vector<Complex>& x, const std::vector<Complex>& y) {
    Complex s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
    return s / 2.0;
  };
  const Complex m00 = dot(a, c), m01 = dot(a, d), m10 = dot(b, c), m11 = dot(b, d);
  const double frob2 = std::norm(m00) + std::norm(m01) + std::norm(m10) + std::norm(m11);
  return std::sqrt(frob2 + 2 * std::abs(m00 * m11 - m01 * m10));
}

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

TEST_CASE("budget from hardware") {
  const auto b = TrojanBudget::from_hardware(2.5e12, 172.0);
  CHECK(rel(b.mu_out, 2.5e12 * std::pow(10.0, -17.2)) < 1e-15);
  CHECK_NOTHROW(b.validate());
  TrojanBudget bad;
  bad.mu_out = 1.0;
  CHECK(code_of([&] { bad.validate(); }) == ErrorCode::MuOutOfRange);
}

TEST_CASE("side channel densities") {
  SUBCASE("vacuum limit") {
    for (int i = 1; i <= 4; ++i)
      CHECK((side_channel_density(0.0, i).matrix() - ComplexMatrix::diagonal({0, 0, 1})).max_abs() == 0.0);
  }
  SUBCASE("full intensity index 1 is |D> in the photon block") {
    const auto r = side_channel_density(1.0, 1);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) CHECK(std::abs(r(i, j) - 0.5) < 1e-15);
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(r(2, k) == Complex(0.0));
      CHECK(r(k, 2) == Complex(0.0));
    }
  }
  SUBCASE("entries match the closed form") {
    const double mu = 0.3;
    const Complex ph[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (int i = 1; i <= 4; ++i) {
      const auto r = side_channel_density(mu, i);
      const Complex p = ph[i - 1];
      const double c = std::sqrt(mu * (1 - mu) / 2);
      CHECK(std::abs(r(0, 0) - mu / 2) < 1e-15);
      CHECK(std::abs(r(0, 1) - mu / 2 * std::conj(p)) < 1e-15);
      CHECK(std::abs(r(1, 1) - mu / 2) < 1e-15);
      CHECK(std::abs(r(0, 2) - c) < 1e-15);
      CHECK(std::abs(r(1, 2) - c * p) < 1e-15);
      CHECK(std::abs(r(2, 2) - (1 - mu)) < 1e-15);
      CHECK(std::abs(r.purity() - 1) < 1e-15);
      CHECK(std::abs(r.matrix().trace() - 1.0) < 1e-15);
    }
  }
  SUBCASE("errors") {
    CHECK(code_of([] { side_channel_density(0.1, 0); }) == ErrorCode::BadIndex);
    CHECK(code_of([] { side_channel_density(1.1, 1); }) == ErrorCode::MuOutOfRange);
  }
}

TEST_CASE("joint basis densities") {
  const auto alice = ideal_states({0.0});
  SUBCASE("vacuum side channel") {
    const auto expect = kron(ComplexMatrix::identity(2) * Complex(0.5), ComplexMatrix::diagonal({0, 0, 1}));
    CHECK((joint_basis_density(alice, 0.0, Basis::X).matrix() - expect).max_abs() < 1e-15);
    CHECK((joint_basis_density(alice, 0.0, Basis::Y).matrix() - expect).max_abs() < 1e-15);
    CHECK(coin_imbalance(alice, 0.0).delta == 0.0);
  }
  SUBCASE("valid at mu = 1e-6") {
    for (auto basis : {Basis::X, Basis::Y}) {
      const auto rho = joint_basis_density(alice, 1e-6, basis);
      CHECK(std::abs(rho.matrix().trace() - 1.0) < 1e-15);
      CHECK(hermitian_eig(rho.matrix()).values.front() >= -1e-10);
    }
  }
}

TEST_CASE("coin imbalance") {
  SUBCASE("identical and orthogonal inputs") {
    const DensityMatrix a(ComplexMatrix::diagonal({0.5, 0.5, 0, 0}));
    const DensityMatrix b(ComplexMatrix::diagonal({0, 0, 0.5, 0.5}));
    CHECK(coin_imbalance(a, a).delta == 0.0);
    CHECK(coin_imbalance(a, b).delta == 0.5);
  }
  SUBCASE("ideal prep equals the pure-state mixture oracle") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> lmu(-12.0, -0.3), phi(0.0, 2 * kPi);
    for (int t = 0; t < 200; ++t) {
      const double mu = std::pow(10.0, lmu(rng)), phi0 = phi(rng);
      const double expect = (1 - sqrt_fidelity_ideal_oracle(phi0, mu)) / 2;
      const double got = coin_imbalance(ideal_states({phi0}), mu).delta;
      CHECK(std::abs(got - expect) <= 1e-9 * expect + 2e-15);
    }
  }
  SUBCASE("ideal prep gives delta = mu/4") {
    // 1 - sqrt(F) cancels, so small imbalances carry an absolute error near 1e-16.
    for (double mu : {1e-10, 1e-8, 1e-6, 1e-4, 1e-2}) {
      for (double phi0 : {0.0, 1.234}) {
        const double d = coin_imbalance(ideal_states({phi0}), mu).delta;
        CHECK(std::abs(d - mu / 4) <= 1e-8 * mu / 4 + 1e-15);
      }
    }
  }
  SUBCASE("below the numerical floor") {
    CHECK(coin_imbalance(ideal_states({0.0}), 1e-20).delta == 0.0);
  }
  SUBCASE("delta is nondecreasing in mu for ideal prep") {
    const auto alice = ideal_states({0.0});
    double last = -1.0;
    for (int k = 0; k <= 200; ++k) {
      const double mu = 1e-2 * k / 200;
      const double d = coin_imbalance(alice, mu).delta;
      CHECK(d >= last);
      last = d;
    }
  }
  // mpmath at 80 digits with sigma_phi = (0.05, 0.19165, 0.05, 0.19165), sigma_theta = 0.05.
  SUBCASE("asymmetric Gaussian prep against high-precision values") {
    GaussianPrepModel g;
    g.phi_sigma = {0.05, 0.19165, 0.05, 0.19165};
    g.theta_sigma = 0.05;
    const auto alice = gaussian_states_analytic(g);
    CHECK(rel(coin_imbalance(alice, 1e-6).delta, 9.1992301840022015767e-6) < 1e-9);
    CHECK(rel(coin_imbalance(alice, 1e-100).delta, 8.9537902086819688568e-6) < 1e-9);
  }
  SUBCASE("equal widths shrink delta below the ideal value") {
    GaussianPrepModel g;  // all sigmas 0.05
    CHECK(rel(coin_imbalance(gaussian_states_analytic(g), 1e-3).delta, 0.00024875249884963937248) < 1e-9);
  }
}

TEST_CASE("phase error bound") {
  CHECK(phase_error_bound(0.0, 0.5, 0.03).value == 0.03);
  CHECK(phase_error_bound(0.01, 1.0, 0.0).value == doctest::Approx(0.0396).epsilon(1e-14));
  CHECK(phase_error_bound(0.005, 0.5, 0.0).value == doctest::Approx(0.0396).epsilon(1e-14));

  SUBCASE("vacuous above one half") {
    const auto b = phase_error_bound(0.3, 0.5, 0.01);
    CHECK(b.vacuous);
    CHECK(b.value == 0.5);
  }
  SUBCASE("plug-back into the coin inequality holds with equality") {
    const double dp = 1e-3, e = 0.02, y1 = 0.7;
    const double eph = phase_error_bound(dp * y1, y1, e).value;
    const double rhs = 1 - y1 + y1 * (std::sqrt(eph * e) + std::sqrt((1 - eph) * (1 - e)));
    const double sqrt_f = 1 - 2 * dp * y1;
    CHECK(std::abs(rhs - sqrt_f) < 1e-9);
  }
  SUBCASE("inputs validated") {
    CHECK_THROWS_AS(phase_error_bound(-1e-3, 0.5, 0.1), Error);
    CHECK_THROWS_AS(phase_error_bound(1e-3, 0.0, 0.1), Error);
    CHECK_THROWS_AS(phase_error_bound(1e-3, 0.5, 0.6), Error);
  }
}

TEST_CASE("analyze_coin assembles the pieces") {
  const auto a = analyze_coin(ideal_states({0.0}), 1e-6, 0.1, 0.02);
  CHECK(rel(a.delta, 2.5e-7) < 1e-8);
  CHECK(rel(a.delta_prime, 2.5e-6) < 1e-8);
  CHECK(a.e1_phase == phase_error_bound(a.delta, 0.1, 0.02).value);
  CHECK(a.fidelity <= 1.0);
}

TEST_CASE("effective side-channel intensity") {
  SUBCASE("asymptotic mode") {
    CHECK(effective_mu_out(1e12, 1e-6, 0.0) == 1e-6);
    CHECK(effective_mu_out(1e12, 0.0, 0.0) == 0.0);
  }
  // mpmath bisection at 50 digits.
  SUBCASE("high-precision values") {
    CHECK(rel(effective_mu_out(1e12, 1e-6, 1e-10), 1.0136183238698324857e-6) < 1e-12);
    CHECK(rel(effective_mu_out(1e9, 1e-6, 1e-10), 1.4749721430527811697e-6) < 1e-12);
  }
  SUBCASE("independent bisection on the residual") {
    const double m = 1e12, mu = 1e-6, eps = 1e-10;
    double lo = mu, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (effective_mu_out_residual(m, mu, eps, mid) < 0 ? lo : hi) = mid;
    }
    CHECK(rel(effective_mu_out(m, mu, eps), hi) < 1e-12);
  }
  SUBCASE("residual, ordering and the asymptotic limit") {
    for (double m : {1e7, 1e9, 1e11, 1e13}) {
      for (double mu : {1e-6, 1e-4, 1e-2}) {
        const double me = effective_mu_out(m, mu, 1e-10);
        CHECK(me >= mu);
        const double rhs = bound_value({m * mu, 1e-10, Tail::Upper});
        CHECK(std::abs(effective_mu_out_residual(m, mu, 1e-10, me)) <= 1e-9 * rhs);
      }
    }
    CHECK(effective_mu_out(1e14, 1e-6, 1e-10) / 1e-6 < 1.01);
  }
  SUBCASE("no solution below one") {
    CHECK(code_of([] { effective_mu_out(10, 0.5, 1e-10); }) == ErrorCode::NoSolutionBelowOne);
  }
}

TEST_CASE("photon-number distributions") {
  using D = PhotonNumberDistribution;
  const auto p = D::poisson(0.3), g = D::geometric(0.3), t = D::two_point(0.3);
  double sp = 0, sg = 0, mp = 0, mg = 0;
  for (std::uint64_t n = 0; n < 200; ++n) {
    sp += p.pmf(n);
    sg += g.pmf(n);
    mp += n * p.pmf(n);
    mg += n * g.pmf(n);
  }
  CHECK(std::abs(sp - 1) < 1e-12);
  CHECK(std::abs(sg - 1) < 1e-12);
  CHECK(std::abs(mp - 0.3) < 1e-12);
  CHECK(std::abs(mg - 0.3) < 1e-12);
  CHECK(t.prob_nonzero() == doctest::Approx(0.3));
  CHECK(p.prob_nonzero() == doctest::Approx(1 - std::exp(-0.3)).epsilon(1e-15));
  // Among distributions of equal mean the two-point one fills the most pulses.
  CHECK(t.prob_nonzero() >= p.prob_nonzero());
  CHECK(t.prob_nonzero() >= g.prob_nonzero());
  CHECK(D::poisson(0.0).pmf(0) == 1.0);
  CHECK_THROWS_AS(D::table({0.5, 0.6}), Error);
  CHECK_THROWS_AS(D::two_point(1.5), Error);
  CHECK(t.sample(0.0) == 0);
  CHECK(t.sample(0.71) == 1);
}

TEST_CASE("pulse filling simulation") {
  using D = PhotonNumberDistribution;
  SUBCASE("vacuum fills nothing") {
    CHECK(simulate_trojan_fill(D::two_point(0.0), 100000, 1).filled == 0);
  }
  SUBCASE("two-point matches the binomial mean") {
    const auto r = simulate_trojan_fill(D::two_point(1e-3), 10000000, 42);
    const double sigma = std::sqrt(1e-3 * (1 - 1e-3) / 1e7);
    CHECK(std::abs(r.fraction - 1e-3) <= 5 * sigma);
  }
  SUBCASE("Poisson matches 1 - e^-mu, which stays below mu") {
    const auto r = simulate_trojan_fill(D::poisson(1e-3), 10000000, 43);
    const double p = -std::expm1(-1e-3);
    CHECK(std::abs(r.fraction - p) <= 5 * std::sqrt(p * (1 - p) / 1e7));
    CHECK(r.fraction <= 1e-3 + 5 * std::sqrt(1e-3 / 1e7));
  }
  SUBCASE("deterministic per seed") {
    const auto a = simulate_trojan_fill(D::geometric(0.01), 200000, 7);
    const auto b = simulate_trojan_fill(D::geometric(0.01), 200000, 7);
    const auto c = simulate_trojan_fill(D::geometric(0.01), 200000, 8);
    CHECK(a.filled == b.filled);
    CHECK(a.filled != c.filled);
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(simulate_trojan_fill(D::poisson(1.5), 100000, 1), Error);
    CHECK_THROWS_AS(simulate_trojan_fill(D::poisson(0.1), 9999, 1), Error);
  }
}

TEST_CASE("fill battery") {
  const auto ok = run_fill_battery(1e-3, 1000000, 42);
  CHECK(ok.passed);
  CHECK(ok.saturation_ok);
  REQUIRE(ok.checks.size() == 4);
  CHECK(ok.checks[3].mean == doctest::Approx(1e-3).epsilon(1e-12));

  const auto boosted = run_fill_battery(1e-3, 1000000, 42, 2.0);
  CHECK_FALSE(boosted.passed);
}
