#pragma once

#include <optional>
#include <vector>

#include "psurf/poincare.hpp"

namespace psurf {
namespace reference {

/// Modified Bessel function I0. Power series for x <= 15, asymptotic
/// expansion e^x/sqrt(2 pi x) (1 + 1/(8x) + ...) beyond.
double bessel_i0(double x);

/// Inverse of I0 on [1, inf). Throws std::domain_error for y < 1.
double bessel_i0_inv(double y);

/// Self-similar sine-Gordon reduction phi'' + phi'/z - sin(phi) = 0.
struct PainleveSample {
  double z;
  double phi;
  double dphi;
};

struct PainleveSolution {
  double phi0 = 0;
  std::vector<PainleveSample> samples;
  std::optional<double> z_star;  // first crossing of pi, linearly interpolated
  double at(double z) const;     // linear interpolation over the samples
};

/// Fixed-step RK4 from z0 = 10*step, seeded with phi ~ phi0 + sin(phi0) z^2/4.
PainleveSolution painleve_iii(Angle phi0, double z_max, double step = 1e-3);

/// Piecewise asymptotic description (inner Bessel / outer Bessel / pendulum).
struct PainleveAsymptotic {
  double phi;
  int regime;  // 0 inner, 1 outer, 2 pendulum
  bool valid;  // false when phi0 > 0.1 (outside the small-angle regime)
};

PainleveAsymptotic painleve_asymptotic(Angle phi0, double z);

/// z* implied by the asymptotic matching (outer Bessel handed to the pendulum).
double painleve_asymptotic_zstar(Angle phi0);

/// Minding-bobbin meridian profile, integrated as the conservative system
/// s'' = -cosh(s) sinh(s)/(kappa^2+1) at energy level 1.
struct BobbinSample {
  double xi;
  double s;
  double ds;       // s'(xi)
  double rho;      // cosh(s)/kappa
  double z_height;
  double phi;      // asymptotic angle of the sine-Gordon reduction
  int sigma;       // sign(s')
};

struct BobbinProfile {
  double kappa = 0;
  double half_width = 0;  // L = arcsinh(kappa)
  double s_max = 0;       // observed max |s| (parabola-refined at turning points)
  double energy_residual = 0;
  std::vector<BobbinSample> samples;
};

BobbinProfile bobbin_profile(double kappa, double xi_max, double step = 1e-3);

/// inf over kappa >= sinh(R) of max(kappa, cosh(R) (kappa^2 - sinh^2 R)^{-1/2}),
/// in closed form via the balance point kappa^2 = (sinh^2 R + sqrt(sinh^4 R + 4 cosh^2 R))/2.
struct BobbinBound {
  double value;
  double kappa;
};

BobbinBound bobbin_energy_bound(HypLength R);

/// Guaranteed lower bound on phi_{n+1}/phi_n for an Amsler sector:
/// (1/3) I0( C(phi*)/(2 s_n) * (I0^{-1}(phi*/phi_n))^2 ), C = sqrt(sin phi*/phi*).
double amsler_recursion_bound(Angle phi_n, Angle phi_star, HypLength s_n);

/// alpha* = sup_{w>=0} w / sqrt(I0(2 w^2)/3); the supporting quadratic of the
/// Amsler frontier curve is (alpha/alpha*)^2.
double alpha_star();

}  // namespace reference
}  // namespace psurf
