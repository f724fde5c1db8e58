#include <doctest.h>

#include <cmath>

#include "psurf/reference.hpp"

using namespace psurf;
using namespace psurf::reference;

namespace {
constexpr double kPi = 3.14159265358979323846;

// long power-series oracle, independent of the implementation's switching
double i0_series_oracle(double x) {
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= 60; ++k) {
    term *= (x * x / 4.0) / (static_cast<double>(k) * k);
    sum += term;
  }
  return sum;
}
}  // namespace

TEST_CASE("bessel I0 values") {
  CHECK(bessel_i0(0.0) == 1.0);
  CHECK(bessel_i0(2.0) == doctest::Approx(i0_series_oracle(2.0)).epsilon(1e-12));
  CHECK(bessel_i0(2.0) == doctest::Approx(2.2795853).epsilon(1e-7));
  // series and asymptotic branches agree across the switch
  CHECK(bessel_i0(15.0 - 1e-9) == doctest::Approx(bessel_i0(15.0 + 1e-9)).epsilon(1e-8));
  CHECK(bessel_i0(15.0) == doctest::Approx(i0_series_oracle(15.0)).epsilon(1e-10));
}

TEST_CASE("bessel I0 is strictly increasing") {
  double prev = bessel_i0(0.0);
  for (double x = 0.1; x < 20.0; x += 0.1) {
    const double v = bessel_i0(x);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("bessel I0 inverse") {
  CHECK(bessel_i0_inv(1.0) == 0.0);
  for (const double x : {0.5, 2.0, 10.0})
    CHECK(bessel_i0_inv(bessel_i0(x)) == doctest::Approx(x).epsilon(1e-9));
  CHECK(bessel_i0_inv(2.2795853) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK_THROWS_AS(bessel_i0_inv(0.5), std::domain_error);
}

TEST_CASE("painleve solver crossing points") {
  // frozen from an independent high-order integrator (DOP853, rtol 1e-12)
  const auto sol = painleve_iii(kPi / 100, 10.0);
  REQUIRE(sol.z_star.has_value());
  CHECK(*sol.z_star == doctest::Approx(6.754175).epsilon(5e-4));
  const auto sol3 = painleve_iii(kPi / 1000, 12.0);
  REQUIRE(sol3.z_star.has_value());
  CHECK(*sol3.z_star == doctest::Approx(9.198052).epsilon(5e-4));
}

TEST_CASE("painleve crossing offset z* + log(phi0) stays in a narrow band") {
  // the asymptotic matching predicts z* ~ -log(phi0) + log(4 sqrt(2 pi z*));
  // over [pi/1000, pi/10] the offset sits near 3.3
  for (const double phi0 : {kPi / 10, kPi / 100, kPi / 1000}) {
    const auto sol = painleve_iii(phi0, 14.0);
    REQUIRE(sol.z_star.has_value());
    const double offset = *sol.z_star + std::log(phi0);
    CHECK(offset > 3.0);
    CHECK(offset < 3.6);
  }
}

TEST_CASE("painleve two-sided bessel bounds") {
  const double phi0 = kPi / 100;
  const auto sol = painleve_iii(phi0, 10.0);
  const double phi_cap = 3 * kPi / 4;
  const double C = std::sqrt(std::sin(phi_cap) / phi_cap);
  for (const auto& s : sol.samples) {
    if (s.phi > phi_cap) break;
    CHECK(s.phi <= phi0 * bessel_i0(s.z) * (1 + 1e-9) + 1e-12);
    CHECK(s.phi >= phi0 * bessel_i0(C * s.z) * (1 - 1e-9) - 1e-12);
  }
}

TEST_CASE("painleve step refinement") {
  const auto a = painleve_iii(kPi / 3, 3.2, 1e-3);
  const auto b = painleve_iii(kPi / 3, 3.2, 5e-4);
  CHECK(std::abs(a.at(3.0) - b.at(3.0)) < 1e-8);
}

TEST_CASE("painleve asymptotics") {
  const double phi0 = kPi / 100;
  // inner regime
  const auto inner = painleve_asymptotic(phi0, 0.3);
  CHECK(inner.regime == 0);
  CHECK(inner.phi == doctest::Approx(phi0 * (1 + 0.3 * 0.3 / 4)).epsilon(1e-12));
  // against the ODE on [0, z*]
  const auto sol = painleve_iii(phi0, 8.0);
  double worst = 0;
  for (const auto& s : sol.samples) {
    if (sol.z_star && s.z > *sol.z_star) break;
    if (s.z <= 0) continue;
    worst = std::max(worst, std::abs(painleve_asymptotic(phi0, s.z).phi - s.phi));
  }
  CHECK(worst < 0.15);
  // matched z* lands near the true crossing
  CHECK(painleve_asymptotic_zstar(phi0) == doctest::Approx(*sol.z_star).epsilon(0.02));
  // pendulum amplitude tends to 2 as phi0 -> 0: recover A from the
  // sinusoidal branch just below the crossing
  const double zs = painleve_asymptotic_zstar(kPi / 1000);
  const auto pend = painleve_asymptotic(kPi / 1000, zs - 0.5);
  CHECK(pend.regime == 2);
  const double amp = (kPi - pend.phi) / std::sin(0.5);
  CHECK(amp == doctest::Approx(2.0).epsilon(1e-4));
  // validity flag for large phi0
  CHECK(!painleve_asymptotic(0.5, 1.0).valid);
}

TEST_CASE("bobbin profile") {
  const auto bp = bobbin_profile(3.0, 8.0);
  CHECK(bp.half_width == doctest::Approx(std::asinh(3.0)).epsilon(1e-14));
  CHECK(std::abs(bp.s_max - std::asinh(3.0)) < 1e-6);
  CHECK(bp.energy_residual < 1e-8);
  // rho = cosh(s)/kappa along the orbit
  for (size_t i = 0; i < bp.samples.size(); i += 1000)
    CHECK(bp.samples[i].rho == doctest::Approx(std::cosh(bp.samples[i].s) / 3.0).epsilon(1e-12));
}

TEST_CASE("bobbin profile solves the sine-Gordon reduction") {
  const auto bp = bobbin_profile(3.0, 6.0, 1e-3);
  const double h = 1e-3;
  double worst = 0;
  for (size_t i = 1; i + 1 < bp.samples.size(); ++i) {
    const auto& s = bp.samples[i];
    // stay away from the turning points where sigma jumps
    if (std::abs(std::abs(s.s) - bp.half_width) < 0.1) continue;
    if (bp.samples[i - 1].sigma != bp.samples[i + 1].sigma) continue;
    const double ddphi = (bp.samples[i + 1].phi - 2 * s.phi + bp.samples[i - 1].phi) / (h * h);
    worst = std::max(worst, std::abs(ddphi - s.sigma * std::sin(s.phi)));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("bobbin energy bound") {
  CHECK(bobbin_energy_bound(0.0).value == doctest::Approx(1.0).epsilon(1e-12));
  // golden-section oracle over kappa
  for (const double R : {1.0, 3.0, 6.0}) {
    auto f = [&](double k) {
      const double sh = std::sinh(R), ch = std::cosh(R);
      return std::max(k, ch / std::sqrt(k * k - sh * sh));
    };
    const double sh = std::sinh(R);
    double a = sh * (1 + 1e-12) + 1e-12, b = sh + 10 + 2 * std::cosh(R);
    const double gr = (std::sqrt(5.0) - 1) / 2;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    for (int it = 0; it < 300; ++it) {
      if (f(c) < f(d))
        b = d;
      else
        a = c;
      c = b - gr * (b - a);
      d = a + gr * (b - a);
    }
    const double oracle = f(0.5 * (a + b));
    CHECK(bobbin_energy_bound(R).value == doctest::Approx(oracle).epsilon(1e-8));
  }
  // log-slope ~ 1 for large R
  const double slope =
      (std::log(bobbin_energy_bound(8.0).value) - std::log(bobbin_energy_bound(6.0).value)) / 2.0;
  CHECK(slope > 0.9);
  CHECK(slope < 1.1);
}

TEST_CASE("amsler recursion bound") {
  CHECK(amsler_recursion_bound(0.75, 0.75, 2.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK_THROWS_AS(amsler_recursion_bound(0.9, 0.5, 1.0), std::domain_error);
  // closer to the boundary means a stronger kick
  CHECK(amsler_recursion_bound(0.5, 2.0, 1.0) > amsler_recursion_bound(0.5, 2.0, 4.0));
}

TEST_CASE("alpha star and its supporting quadratic") {
  const double astar = alpha_star();
  CHECK(1.0 / (astar * astar) == doctest::Approx(0.73).epsilon(0.01));
  // supporting property: (w/alpha*)^2 <= I0(2w^2)/3 everywhere
  for (double w = 0.05; w < 2.5; w += 0.05)
    CHECK(w * w / (astar * astar) <= bessel_i0(2 * w * w) / 3.0 + 1e-12);
}
