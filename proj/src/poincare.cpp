#include "psurf/poincare.hpp"

namespace psurf {

DiskPoint mobius(const DiskPoint& z, const DiskPoint& z0) {
  const std::complex<double> num = z.value() + z0.value();
  const std::complex<double> den = 1.0 + z.value() * std::conj(z0.value());
  if (std::abs(den) < 1e-300)
    throw std::logic_error("mobius: vanishing denominator for interior points");
  return DiskPoint(num / den);
}

HypLength hyp_distance(const DiskPoint& z1, const DiskPoint& z2) {
  const double d2 = std::norm(z1.value() - z2.value());
  const double a = 1.0 - std::norm(z1.value());
  const double b = 1.0 - std::norm(z2.value());
  return std::acosh(1.0 + 2.0 * d2 / (a * b));
}

std::vector<DiskPoint> geodesic_points(const DiskPoint& base, Angle direction,
                                       HypLength delta, int count) {
  if (count < 1) throw std::invalid_argument("geodesic_points: count >= 1 required");
  if (!(delta > 0)) throw std::invalid_argument("geodesic_points: delta > 0 required");
  std::vector<DiskPoint> pts;
  pts.reserve(static_cast<size_t>(count));
  const std::complex<double> dir = std::polar(1.0, direction);
  for (int k = 0; k < count; ++k) {
    const double t = std::tanh(0.5 * k * delta);
    pts.push_back(mobius(DiskPoint(dir * t), base));  // throws on disk overflow
  }
  return pts;
}

Completion complete_rhombus(const DiskPoint& zeta0, const DiskPoint& zeta1,
                            const DiskPoint& zeta2) {
  const DiskPoint neg0 = -zeta0;
  const std::complex<double> w1 = mobius(zeta1, neg0).value();
  const std::complex<double> w2 = mobius(zeta2, neg0).value();
  const std::complex<double> s = w1 + w2;
  if (std::abs(s) < 1e-12 * (std::abs(w1) + std::abs(w2))) {
    return Completion{zeta0, true};  // antipodal fold: w12 = 0 maps back to zeta0
  }
  const std::complex<double> w12 = s / (1.0 + std::abs(w1 * w2));
  return Completion{mobius(DiskPoint(w12), zeta0), false};
}

Angle vertex_angle(const DiskPoint& zeta0, const DiskPoint& zeta1,
                   const DiskPoint& zeta2) {
  const DiskPoint neg0 = -zeta0;
  const std::complex<double> w1 = mobius(zeta1, neg0).value();
  const std::complex<double> w2 = mobius(zeta2, neg0).value();
  if (std::abs(w1) == 0.0 || std::abs(w2) == 0.0)
    throw std::invalid_argument("vertex_angle: neighbor coincides with center");
  return std::arg(w2 * std::conj(w1));
}

bool detect_reversal(const DiskPoint& center, const DiskPoint& ju_plus,
                     const DiskPoint& ju_minus, const DiskPoint& kv_plus,
                     const DiskPoint& kv_minus) {
  const DiskPoint neg = -center;
  const std::complex<double> up = mobius(ju_plus, neg).value();
  const std::complex<double> um = mobius(ju_minus, neg).value();
  const std::complex<double> vp = mobius(kv_plus, neg).value();
  const std::complex<double> vm = mobius(kv_minus, neg).value();
  const double prod = orientation_form(up, vp) * orientation_form(vp, um) *
                      orientation_form(um, vm) * orientation_form(vm, up);
  return prod <= 0.0;
}

}  // namespace psurf
