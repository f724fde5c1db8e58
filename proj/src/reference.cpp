#include "psurf/reference.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace psurf {
namespace reference {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double bessel_i0(double x) {
  if (x < 0) throw std::domain_error("bessel_i0: x >= 0 required");
  if (x <= 15.0) {
    // power series sum_k (x/2)^{2k} / (k!)^2
    const double q = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 200; ++k) {
      term *= q / (static_cast<double>(k) * k);
      sum += term;
      if (term < sum * 1e-17) break;
    }
    return sum;
  }
  // asymptotic: e^x/sqrt(2 pi x) * sum_k prod_{j<=k}(2j-1)^2 / (k! (8x)^k)
  double term = 1.0, sum = 1.0, prev = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= odd * odd / (8.0 * x * k);
    if (term > prev) break;  // series started diverging
    sum += term;
    prev = term;
    if (term < sum * 1e-17) break;
  }
  return std::exp(x) / std::sqrt(2.0 * kPi * x) * sum;
}

double bessel_i0_inv(double y) {
  if (y < 1.0) throw std::domain_error("bessel_i0_inv: y >= 1 required");
  if (y == 1.0) return 0.0;
  // bracket: I0(x) <= e^x, so x >= log(y); expand upward
  double lo = 0.0, hi = std::max(1.0, std::log(y));
  while (bessel_i0(hi) < y) {
    lo = hi;
    hi *= 2.0;
  }
  // Newton with bisection safeguard; I0' = I1 > 0 so monotone
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double f = bessel_i0(x) - y;
    if (f > 0)
      hi = x;
    else
      lo = x;
    // derivative I1 via central difference is good enough at this accuracy,
    // but use the series-free identity I1 ~ (I0(x+h)-I0(x-h))/(2h)
    const double h = std::max(1e-6, 1e-8 * x);
    const double d = (bessel_i0(x + h) - bessel_i0(x - h)) / (2.0 * h);
    double step = (d > 0) ? f / d : 0.0;
    double xn = x - step;
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    if (std::abs(xn - x) < 1e-14 * (1.0 + x)) {
      x = xn;
      break;
    }
    x = xn;
  }
  return x;
}

double PainleveSolution::at(double z) const {
  if (samples.empty()) throw std::logic_error("PainleveSolution::at: empty");
  if (z <= samples.front().z) return samples.front().phi;
  if (z >= samples.back().z) return samples.back().phi;
  // fixed step: index directly
  const double z0 = samples.front().z;
  const double h = samples.size() > 1 ? samples[1].z - z0 : 1.0;
  size_t i = std::min(samples.size() - 2, static_cast<size_t>((z - z0) / h));
  while (i + 1 < samples.size() && samples[i + 1].z < z) ++i;
  while (i > 0 && samples[i].z > z) --i;
  const auto& a = samples[i];
  const auto& b = samples[i + 1];
  const double t = (z - a.z) / (b.z - a.z);
  return a.phi + t * (b.phi - a.phi);
}

PainleveSolution painleve_iii(Angle phi0, double z_max, double step) {
  if (!(phi0 > 0 && phi0 < kPi)) throw std::domain_error("painleve_iii: phi0 in (0,pi)");
  if (!(step > 0 && z_max > 0)) throw std::domain_error("painleve_iii: positive step, z_max");
  PainleveSolution sol;
  sol.phi0 = phi0;
  const double z0 = 10.0 * step;
  double z = z0;
  double phi = phi0 + std::sin(phi0) * z0 * z0 / 4.0;
  double dphi = std::sin(phi0) * z0 / 2.0;
  sol.samples.push_back({0.0, phi0, 0.0});
  sol.samples.push_back({z, phi, dphi});
  auto rhs = [](double z, double p, double dp, double& out_dp, double& out_ddp) {
    out_dp = dp;
    out_ddp = std::sin(p) - dp / z;
  };
  while (z < z_max) {
    double k1p, k1d, k2p, k2d, k3p, k3d, k4p, k4d;
    rhs(z, phi, dphi, k1p, k1d);
    rhs(z + step / 2, phi + step / 2 * k1p, dphi + step / 2 * k1d, k2p, k2d);
    rhs(z + step / 2, phi + step / 2 * k2p, dphi + step / 2 * k2d, k3p, k3d);
    rhs(z + step, phi + step * k3p, dphi + step * k3d, k4p, k4d);
    const double phin = phi + step / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
    const double dphin = dphi + step / 6.0 * (k1d + 2 * k2d + 2 * k3d + k4d);
    if (!sol.z_star && phi < kPi && phin >= kPi) {
      const double t = (kPi - phi) / (phin - phi);
      sol.z_star = z + t * step;
    }
    phi = phin;
    dphi = dphin;
    z += step;
    sol.samples.push_back({z, phi, dphi});
  }
  return sol;
}

namespace {

double outer_bessel(double phi0, double z) {
  return phi0 * std::exp(z) / std::sqrt(2.0 * kPi * z) * (1.0 + 1.0 / (8.0 * z));
}

}  // namespace

double painleve_asymptotic_zstar(Angle phi0) {
  // self-consistent matching of the outer Bessel tail to the pendulum kink:
  // z* = log( 4 sqrt(2 pi z*) (1 + 1/(8 z*)) / phi0 )
  double z = 8.0;
  for (int it = 0; it < 6; ++it)
    z = std::log(4.0 * std::sqrt(2.0 * kPi * z) * (1.0 + 1.0 / (8.0 * z)) / phi0);
  return z;
}

PainleveAsymptotic painleve_asymptotic(Angle phi0, double z) {
  if (!(phi0 > 0 && phi0 < kPi)) throw std::domain_error("painleve_asymptotic: phi0 in (0,pi)");
  PainleveAsymptotic out;
  out.valid = phi0 <= 0.1;
  const double zs = painleve_asymptotic_zstar(phi0);
  // pendulum amplitude from the energy level at a small-angle matching point
  double delta = 0.2;
  {
    // z_m with outer(z_m) = 0.2, bisection on (0.2, zs)
    double lo = 0.2, hi = zs;
    if (outer_bessel(phi0, lo) < 0.2) {
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (outer_bessel(phi0, mid) < 0.2 ? lo : hi) = mid;
      }
      delta = outer_bessel(phi0, 0.5 * (lo + hi));
    }
  }
  const double A = 2.0 * std::sqrt(1.0 + delta * delta * delta * delta / 48.0);
  auto pendulum = [&](double z) {
    const double arg = zs - z;
    if (arg >= kPi / 2) return kPi - A;
    return kPi - A * std::sin(std::max(arg, 0.0));
  };
  if (z <= 0.5) {
    out.phi = phi0 * (1.0 + z * z / 4.0);
    out.regime = 0;
    return out;
  }
  // outer until it crosses the pendulum branch
  const double po = outer_bessel(phi0, z);
  if (po < pendulum(z)) {
    out.phi = po;
    out.regime = 1;
  } else {
    out.phi = pendulum(z);
    out.regime = 2;
  }
  return out;
}

BobbinProfile bobbin_profile(double kappa, double xi_max, double step) {
  if (!(kappa > 0)) throw std::domain_error("bobbin_profile: kappa > 0 required");
  BobbinProfile bp;
  bp.kappa = kappa;
  bp.half_width = std::asinh(kappa);
  const double k2p1 = kappa * kappa + 1.0;
  // state (s, v = s', z); energy v^2 + cosh^2(s)/(kappa^2+1) = 1
  double s = 0.0, v = kappa / std::sqrt(k2p1), z = 0.0, xi = 0.0;
  auto zprime = [&](double s) {
    return (kappa * kappa - std::sinh(s) * std::sinh(s)) / (kappa * std::sqrt(k2p1));
  };
  auto accel = [&](double s) { return -std::cosh(s) * std::sinh(s) / k2p1; };
  auto record = [&](double xi, double s, double v, double z) {
    const double c = std::cosh(s) / std::sqrt(k2p1);
    const int sigma = v >= 0 ? 1 : -1;
    const double phi =
        (1 + sigma) * std::asin(std::min(c, 1.0)) + (1 - sigma) * std::acos(std::min(c, 1.0));
    bp.samples.push_back({xi, s, v, std::cosh(s) / kappa, z, phi, sigma});
    const double resid = std::abs(v * v + c * c - 1.0);
    bp.energy_residual = std::max(bp.energy_residual, resid);
  };
  record(xi, s, v, z);
  while (xi < xi_max) {
    // RK4 on (s, v, z)
    auto f = [&](double s, double v, double& ds, double& dv, double& dz) {
      ds = v;
      dv = accel(s);
      dz = zprime(s);
    };
    double k1s, k1v, k1z, k2s, k2v, k2z, k3s, k3v, k3z, k4s, k4v, k4z;
    f(s, v, k1s, k1v, k1z);
    f(s + step / 2 * k1s, v + step / 2 * k1v, k2s, k2v, k2z);
    f(s + step / 2 * k2s, v + step / 2 * k2v, k3s, k3v, k3z);
    f(s + step * k3s, v + step * k3v, k4s, k4v, k4z);
    s += step / 6.0 * (k1s + 2 * k2s + 2 * k3s + k4s);
    v += step / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    z += step / 6.0 * (k1z + 2 * k2z + 2 * k3z + k4z);
    xi += step;
    record(xi, s, v, z);
  }
  // refine |s|max through the turning points with a parabola over triples
  double smax = 0.0;
  const auto& S = bp.samples;
  for (size_t i = 1; i + 1 < S.size(); ++i) {
    smax = std::max(smax, std::abs(S[i].s));
    if ((S[i].s - S[i - 1].s) * (S[i + 1].s - S[i].s) < 0) {
      const double y0 = S[i - 1].s, y1 = S[i].s, y2 = S[i + 1].s;
      const double denom = y0 - 2 * y1 + y2;
      if (denom != 0) {
        const double t = 0.5 * (y0 - y2) / denom;
        const double yext = y1 - 0.25 * (y0 - y2) * t;
        smax = std::max(smax, std::abs(yext));
      }
    }
  }
  bp.s_max = smax;
  return bp;
}

BobbinBound bobbin_energy_bound(HypLength R) {
  if (R < 0) throw std::domain_error("bobbin_energy_bound: R >= 0 required");
  const double sh = std::sinh(R), ch = std::cosh(R);
  const double k2 = 0.5 * (sh * sh + std::sqrt(sh * sh * sh * sh + 4.0 * ch * ch));
  const double kappa = std::sqrt(k2);
  const double value = std::max(kappa, ch / std::sqrt(k2 - sh * sh));
  return {value, kappa};
}

double amsler_recursion_bound(Angle phi_n, Angle phi_star, HypLength s_n) {
  // equality phi_n = phi_star is allowed and gives the bare factor 1/3
  if (!(phi_n > 0 && phi_n <= phi_star && phi_star < kPi))
    throw std::domain_error("amsler_recursion_bound: need 0 < phi_n <= phi_star < pi");
  if (!(s_n > 0)) throw std::domain_error("amsler_recursion_bound: s_n > 0 required");
  const double C = std::sqrt(std::sin(phi_star) / phi_star);
  const double r = bessel_i0_inv(phi_star / phi_n);
  return bessel_i0(C / (2.0 * s_n) * r * r) / 3.0;
}

double alpha_star() {
  static const double cached = [] {
    // golden-section maximum of g(w) = w / sqrt(I0(2 w^2)/3) on (0, 3)
    auto g = [](double w) { return w / std::sqrt(bessel_i0(2.0 * w * w) / 3.0); };
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 1e-3, b = 3.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    for (int it = 0; it < 200; ++it) {
      if (g(c) > g(d))
        b = d;
      else
        a = c;
      c = b - gr * (b - a);
      d = a + gr * (b - a);
      if (b - a < 1e-14) break;
    }
    return g(0.5 * (a + b));
  }();
  return cached;
}

}  // namespace reference
}  // namespace psurf
