#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace psurf {

using Angle = double;      // radians
using HypLength = double;  // hyperbolic length, curvature -1 normalization

constexpr double kDiskBoundaryMargin = 1e-12;

struct disk_overflow_error : std::domain_error {
  using std::domain_error::domain_error;
};

/// A point of the open Poincaré disk. Construction rejects points within
/// 1e-12 of the unit circle so that arctanh/Möbius denominators stay sane.
class DiskPoint {
public:
  DiskPoint() : z_(0.0, 0.0) {}
  explicit DiskPoint(std::complex<double> z) : z_(z) {
    if (std::abs(z) >= 1.0 - kDiskBoundaryMargin)
      throw disk_overflow_error("DiskPoint: |z| too close to unit circle");
  }
  DiskPoint(double re, double im) : DiskPoint(std::complex<double>(re, im)) {}

  std::complex<double> value() const { return z_; }
  double re() const { return z_.real(); }
  double im() const { return z_.imag(); }
  double abs() const { return std::abs(z_); }
  DiskPoint operator-() const { return DiskPoint(-z_); }

  friend bool operator==(const DiskPoint& a, const DiskPoint& b) { return a.z_ == b.z_; }

private:
  std::complex<double> z_;
};

/// Isometry z |-> (z + z0)/(1 + z conj(z0)) of the disk (rotation-free Möbius map).
DiskPoint mobius(const DiskPoint& z, const DiskPoint& z0);

/// Geodesic distance between two disk points,
/// arccosh(1 + 2|z1-z2|^2 / ((1-|z1|^2)(1-|z2|^2))).
HypLength hyp_distance(const DiskPoint& z1, const DiskPoint& z2);

/// Equally spaced points on the geodesic leaving `base` in the given direction:
/// the k-th point is mobius(e^{i dir} tanh(k delta/2), base), k = 0..count-1.
/// Throws disk_overflow_error if a point lands within 1e-12 of the boundary.
std::vector<DiskPoint> geodesic_points(const DiskPoint& base, Angle direction,
                                       HypLength delta, int count);

/// Fourth vertex of a hyperbolic rhombus. `degenerate` is set when the two
/// Möbius-centered edges are antipodal (fold-through); the returned point then
/// coincides with zeta0 and downstream reversal detection picks it up.
struct Completion {
  DiskPoint point;
  bool degenerate = false;
};

/// Given zeta0 and its two neighbors at equal hyperbolic distance, returns the
/// opposite vertex: w_j = mobius(zeta_j, -zeta0), w12 = (w1+w2)/(1+|w1 w2|),
/// result = mobius(w12, zeta0). All four sides come out equal.
Completion complete_rhombus(const DiskPoint& zeta0, const DiskPoint& zeta1,
                            const DiskPoint& zeta2);

/// Signed angle at zeta0 from the zeta1-direction to the zeta2-direction:
/// arg(w2 conj(w1)) in (-pi, pi] with w_j = mobius(zeta_j, -zeta0).
/// The sign carries the net orientation sigma; the geometric angle is |phi|.
Angle vertex_angle(const DiskPoint& zeta0, const DiskPoint& zeta1,
                   const DiskPoint& zeta2);

/// Orientation form Im(conj(a) b) of two Möbius-centered edge vectors.
inline double orientation_form(std::complex<double> a, std::complex<double> b) {
  return (std::conj(a) * b).imag();
}

/// Reversal test at an interior vertex with all four grid neighbors present:
/// true iff the product of the orientation forms over the four incident quads
/// is <= 0, i.e. the net folds through itself at this vertex.
bool detect_reversal(const DiskPoint& center, const DiskPoint& ju_plus,
                     const DiskPoint& ju_minus, const DiskPoint& kv_plus,
                     const DiskPoint& kv_minus);

}  // namespace psurf
