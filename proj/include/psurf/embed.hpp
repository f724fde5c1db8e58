#pragma once

#include <array>
#include <vector>

#include "psurf/complex.hpp"

namespace psurf {

struct Vec3 {
  double x = 0, y = 0, z = 0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(const Vec3& a) { return a * (1.0 / norm(a)); }
/// Rotation of v about the unit axis by the given angle.
inline Vec3 rodrigues(const Vec3& v, const Vec3& axis, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return v * c + cross(axis, v) * s + axis * (dot(axis, v) * (1.0 - c));
}

/// Per-sector ragged grid of values aligned with the complex's rows.
template <typename T>
struct GridField {
  std::vector<std::vector<std::vector<T>>> sectors;
  std::vector<std::vector<std::vector<uint8_t>>> valid;

  void shape_like(const AsymptoticComplex& cx) {
    sectors.assign(cx.sectors.size(), {});
    valid.assign(cx.sectors.size(), {});
    for (size_t s = 0; s < cx.sectors.size(); ++s) {
      sectors[s].resize(cx.sectors[s].rows.size());
      valid[s].resize(cx.sectors[s].rows.size());
      for (size_t k = 0; k < cx.sectors[s].rows.size(); ++k) {
        sectors[s][k].assign(cx.sectors[s].rows[k].size(), T{});
        valid[s][k].assign(cx.sectors[s].rows[k].size(), 0);
      }
    }
  }
  bool has(int sector, int j, int k) const {
    const auto& vs = valid[static_cast<size_t>(sector)];
    return k >= 0 && k < static_cast<int>(vs.size()) && j >= 0 &&
           j < static_cast<int>(vs[static_cast<size_t>(k)].size()) &&
           vs[static_cast<size_t>(k)][static_cast<size_t>(j)] != 0;
  }
  const T& at(int sector, int j, int k) const {
    return sectors[static_cast<size_t>(sector)][static_cast<size_t>(k)][static_cast<size_t>(j)];
  }
  void set(int sector, int j, int k, const T& v) {
    sectors[static_cast<size_t>(sector)][static_cast<size_t>(k)][static_cast<size_t>(j)] = v;
    valid[static_cast<size_t>(sector)][static_cast<size_t>(k)][static_cast<size_t>(j)] = 1;
  }
};

struct degenerate_normal_error : std::domain_error {
  using std::domain_error::domain_error;
};

/// Fourth normal of a spherical quad: the reflection 2<s,N0>/<s,s> s - N0 with
/// s = N1 + N2. Preserves unit norm; if <N0,N1> = <N0,N2> = cos(delta) the
/// completed quad is a spherical rhombus. Throws degenerate_normal_error when
/// N1 + N2 vanishes.
Vec3 complete_normal(const Vec3& n0, const Vec3& n1, const Vec3& n2);

/// The Gauss map of the complex: unit normals with every grid edge pair at
/// spherical distance delta (= the hyperbolic step).
struct SphericalNet : GridField<Vec3> {
  double delta = 0;
};

/// The 3D discrete K-surface: positions on the same grids.
struct KSurface : GridField<Vec3> {
  double delta = 0;
};

/// Builds the spherical Chebyshev net over the complex: initial rays rotate at
/// rate delta about the base normal, surgery seams copy parent normals, fresh
/// daughter rays rotate about the branch normal with trisected tangents, and
/// interiors fill by Householder completion in the same sweep order as the
/// hyperbolic net. `frame` optionally rotates the whole construction.
SphericalNet build_spherical_net(const AsymptoticComplex& complex, int threads = 1,
                                 const std::array<Vec3, 3>& frame = {Vec3{1, 0, 0}, Vec3{0, 1, 0},
                                                                     Vec3{0, 0, 1}});

/// Sums the discrete Lelieuvre steps r1 - r0 = N1 x N0 (u-edges),
/// r2 - r0 = -N2 x N0 (v-edges) over a per-sector spanning tree, crossing each
/// seam once at its attaching copy.
KSurface integrate_lelieuvre(const SphericalNet& net, const AsymptoticComplex& complex,
                             const Vec3& r_origin = {0, 0, 0}, int threads = 1);

/// True when all six quads incident on the branch vertex are present.
bool branch_star_complete(const AsymptoticComplex& complex, const BranchRecord& branch);

/// Signed angle sum of the normal image around the branch vertex, computed
/// from the N-edge tangents of the six incident quads; equals 2 pi (1 - m_p)
/// = -4 pi for the degree-6 vertices the generator produces.
double gauss_angle_sum_at_branch(const SphericalNet& net, const KSurface& surf,
                                 const AsymptoticComplex& complex, const BranchRecord& branch);

/// Worst-case diagnostics of the embedding against its defining relations.
struct EmbedReport {
  double max_edge_length_err = 0;  // | |r_b - r_a| - sin(delta) |
  double max_planarity_err = 0;    // | <r_b - r_a, N_a> |
  double max_quad_closure = 0;     // | (N1 + N2) x (N0 + N12) |
  double max_angle_mismatch = 0;   // 3D vertex angle vs hyperbolic |phi|
  int reversal_count = 0;          // hyperbolic reversal flags
  int colocated_reversals = 0;     // with a 3D orientation flip in the 1-ring
};

EmbedReport validate_embedding(const KSurface& surf, const SphericalNet& net,
                               const AsymptoticComplex& complex);

}  // namespace psurf
