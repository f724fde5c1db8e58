#include "psurf/embed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "psurf/netgen.hpp"
#include "psurf/parallel.hpp"

namespace psurf {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Vec3 complete_normal(const Vec3& n0, const Vec3& n1, const Vec3& n2) {
  const Vec3 s = n1 + n2;
  const double ss = dot(s, s);
  if (std::sqrt(ss) < 1e-9) throw degenerate_normal_error("complete_normal: antipodal pair");
  const double nu = 2.0 * dot(s, n0) / ss;
  return s * nu - n0;
}

namespace {

struct NetBuilder {
  const AsymptoticComplex& cx;
  SphericalNet& net;
  std::array<Vec3, 3> frame;

  Vec3 tangent_of(double beta) const {
    return frame[0] * std::cos(beta) + frame[1] * std::sin(beta);
  }

  // boundary normals of an Amsler ray: rotation at rate delta about `n`,
  // signed by the asymptotic family of the ray
  Vec3 ray_normal(const Vec3& n, const Vec3& t, bool is_u, int step) const {
    const double a = step * net.delta;
    const Vec3 nxt = cross(n, t);
    return is_u ? n * std::cos(a) + nxt * std::sin(a) : n * std::cos(a) - nxt * std::sin(a);
  }

  void set_row0(int s, const std::vector<Vec3>& vals) {
    const auto& rows = cx.sectors[static_cast<size_t>(s)].rows;
    const size_t n = std::min(vals.size(), rows.empty() ? size_t{0} : rows[0].size());
    for (size_t j = 0; j < n; ++j) net.set(s, static_cast<int>(j), 0, vals[j]);
  }
  void set_col0(int s, const std::vector<Vec3>& vals) {
    const auto& rows = cx.sectors[static_cast<size_t>(s)].rows;
    const size_t n = std::min(vals.size(), rows.size());
    for (size_t k = 0; k < n; ++k) net.set(s, 0, static_cast<int>(k), vals[k]);
  }

  std::vector<Vec3> make_ray(const Vec3& n, const Vec3& t, bool is_u, size_t count) const {
    std::vector<Vec3> out(count);
    for (size_t i = 0; i < count; ++i) out[i] = ray_normal(n, t, is_u, static_cast<int>(i));
    return out;
  }

  void boundaries_initial(int s) {
    const auto dirs = netgen::initial_directions(cx.params);
    const auto& grid = cx.sectors[static_cast<size_t>(s)];
    const Vec3 n = frame[2];
    const size_t rlen = grid.rows.empty() ? 0 : grid.rows[0].size();
    set_row0(s, make_ray(n, tangent_of(dirs[static_cast<size_t>(s)]), grid.j_is_u, rlen));
    set_col0(s, make_ray(n, tangent_of(dirs[static_cast<size_t>(s) + 1]), !grid.j_is_u,
                         grid.rows.size()));
  }

  /// Surface tangent of the grid edge q -> neighbor, from the Lelieuvre step.
  Vec3 edge_tangent(const Vec3& nq, const Vec3& nb, bool edge_is_u) const {
    const Vec3 step = edge_is_u ? cross(nb, nq) : -cross(nb, nq);
    return normalized(step);
  }

  void boundaries_branch(const BranchRecord& br) {
    const auto& parent = cx.sectors[static_cast<size_t>(br.parent_sector)];
    const int js = br.j_star, ks = br.k_star;
    const Vec3 nb = net.at(br.parent_sector, js, ks);
    const Vec3 t1 =
        edge_tangent(nb, net.at(br.parent_sector, js + 1, ks), parent.j_is_u);
    const Vec3 t2 =
        edge_tangent(nb, net.at(br.parent_sector, js, ks + 1), !parent.j_is_u);
    const double sense = dot(nb, cross(t1, t2)) >= 0 ? 1.0 : -1.0;
    // trisection angles reused from the branch record keep the two nets in sync
    const Vec3 e_col = rodrigues(t1, nb, sense * br.phi_parent / 3.0);
    const Vec3 e_row = rodrigues(t1, nb, sense * 2.0 * br.phi_parent / 3.0);

    const int a_id = br.daughter_sectors[0], b_id = br.daughter_sectors[1],
              c_id = br.daughter_sectors[2];
    const auto& A = cx.sectors[static_cast<size_t>(a_id)];
    const auto& B = cx.sectors[static_cast<size_t>(b_id)];
    const auto& C = cx.sectors[static_cast<size_t>(c_id)];
    const bool j_u = B.j_is_u;  // daughters inherit the parent's family split

    // middle daughter: two fresh rays about the branch normal
    set_row0(b_id, make_ray(nb, e_row, j_u, B.rows.empty() ? 0 : B.rows[0].size()));
    set_col0(b_id, make_ray(nb, e_col, !j_u, B.rows.size()));
    // flanks copy the parent lines beyond the cut and share the fresh rays
    {
      std::vector<Vec3> row;
      const size_t n = A.rows.empty() ? 0 : A.rows[0].size();
      for (size_t j = 0; j < n && net.has(br.parent_sector, js + static_cast<int>(j), ks); ++j)
        row.push_back(net.at(br.parent_sector, js + static_cast<int>(j), ks));
      set_row0(a_id, row);
      std::vector<Vec3> col;
      const size_t m = std::min(A.rows.size(), B.rows.size());
      for (size_t k = 0; k < m && net.has(b_id, 0, static_cast<int>(k)); ++k)
        col.push_back(net.at(b_id, 0, static_cast<int>(k)));
      set_col0(a_id, col);
    }
    {
      std::vector<Vec3> row;
      const size_t n = std::min(C.rows.empty() ? size_t{0} : C.rows[0].size(),
                                B.rows.empty() ? size_t{0} : B.rows[0].size());
      for (size_t j = 0; j < n && net.has(b_id, static_cast<int>(j), 0); ++j)
        row.push_back(net.at(b_id, static_cast<int>(j), 0));
      set_row0(c_id, row);
      std::vector<Vec3> col;
      for (size_t k = 0;
           k < C.rows.size() && net.has(br.parent_sector, js, ks + static_cast<int>(k)); ++k)
        col.push_back(net.at(br.parent_sector, js, ks + static_cast<int>(k)));
      set_col0(c_id, col);
    }
  }

  void fill_interior(int s) {
    const auto& grid = cx.sectors[static_cast<size_t>(s)];
    for (int k = 1; k < static_cast<int>(grid.rows.size()); ++k) {
      const int len = static_cast<int>(grid.rows[static_cast<size_t>(k)].size());
      for (int j = 1; j < len; ++j) {
        if (!net.has(s, j - 1, k - 1) || !net.has(s, j, k - 1) || !net.has(s, j - 1, k)) continue;
        try {
          net.set(s, j, k,
                  complete_normal(net.at(s, j - 1, k - 1), net.at(s, j, k - 1),
                                  net.at(s, j - 1, k)));
        } catch (const degenerate_normal_error&) {
          // left invalid; downstream stencils skip it
        }
      }
    }
  }
};

}  // namespace

SphericalNet build_spherical_net(const AsymptoticComplex& cx, int threads,
                                 const std::array<Vec3, 3>& frame) {
  SphericalNet net;
  net.delta = cx.params.delta;
  net.shape_like(cx);
  NetBuilder nb{cx, net, frame};

  int max_gen = 0;
  for (const auto& s : cx.sectors) max_gen = std::max(max_gen, s.generation);
  for (int gen = 0; gen <= max_gen; ++gen) {
    // boundary data for this wave (serial: branch rays read parent interiors)
    if (gen == 0) {
      for (const auto& s : cx.sectors)
        if (s.generation == 0) nb.boundaries_initial(s.id);
    } else {
      for (const auto& br : cx.branches)
        if (br.generation == gen) nb.boundaries_branch(br);
    }
    std::vector<int> wave;
    for (const auto& s : cx.sectors)
      if (s.generation == gen) wave.push_back(s.id);
    parallel_for(threads, static_cast<int>(wave.size()),
                 [&](int i) { nb.fill_interior(wave[static_cast<size_t>(i)]); });
  }
  return net;
}

namespace {

struct Integrator {
  const SphericalNet& net;
  const AsymptoticComplex& cx;
  KSurface& surf;

  Vec3 step(int s, const Vec3& from, const Vec3& n_from, const Vec3& n_to, bool jstep) const {
    const bool is_u = cx.sectors[static_cast<size_t>(s)].j_is_u == jstep;
    const Vec3 d = cross(n_to, n_from);
    return is_u ? from + d : from - d;
  }

  void integrate_row0(int s) {
    const auto& grid = cx.sectors[static_cast<size_t>(s)];
    const int len = grid.rows.empty() ? 0 : static_cast<int>(grid.rows[0].size());
    for (int j = 1; j < len; ++j) {
      if (!surf.has(s, j - 1, 0) || !net.has(s, j, 0) || !net.has(s, j - 1, 0)) break;
      surf.set(s, j, 0, step(s, surf.at(s, j - 1, 0), net.at(s, j - 1, 0), net.at(s, j, 0), true));
    }
  }
  void integrate_col0(int s) {
    const auto& grid = cx.sectors[static_cast<size_t>(s)];
    for (int k = 1; k < static_cast<int>(grid.rows.size()); ++k) {
      if (!surf.has(s, 0, k - 1) || !net.has(s, 0, k) || !net.has(s, 0, k - 1)) break;
      surf.set(s, 0, k,
               step(s, surf.at(s, 0, k - 1), net.at(s, 0, k - 1), net.at(s, 0, k), false));
    }
  }

  void copy_row0(int to, int from_sector, int j0, int k0, int dj, int dk) {
    const auto& grid = cx.sectors[static_cast<size_t>(to)];
    const int len = grid.rows.empty() ? 0 : static_cast<int>(grid.rows[0].size());
    for (int t = 0; t < len; ++t) {
      const int j = j0 + t * dj, k = k0 + t * dk;
      if (!surf.has(from_sector, j, k)) break;
      surf.set(to, t, 0, surf.at(from_sector, j, k));
    }
  }
  void copy_col0(int to, int from_sector, int j0, int k0, int dj, int dk) {
    const auto& grid = cx.sectors[static_cast<size_t>(to)];
    for (int t = 0; t < static_cast<int>(grid.rows.size()); ++t) {
      const int j = j0 + t * dj, k = k0 + t * dk;
      if (!surf.has(from_sector, j, k)) break;
      surf.set(to, 0, t, surf.at(from_sector, j, k));
    }
  }

  void fill_interior(int s) {
    const auto& grid = cx.sectors[static_cast<size_t>(s)];
    for (int k = 1; k < static_cast<int>(grid.rows.size()); ++k) {
      const int len = static_cast<int>(grid.rows[static_cast<size_t>(k)].size());
      for (int j = 1; j < len; ++j) {
        if (!net.has(s, j, k)) continue;
        if (surf.has(s, j, k - 1) && net.has(s, j, k - 1)) {
          surf.set(s, j, k,
                   step(s, surf.at(s, j, k - 1), net.at(s, j, k - 1), net.at(s, j, k), false));
        } else if (surf.has(s, j - 1, k) && net.has(s, j - 1, k)) {
          surf.set(s, j, k,
                   step(s, surf.at(s, j - 1, k), net.at(s, j - 1, k), net.at(s, j, k), true));
        }
      }
    }
  }
};

}  // namespace

KSurface integrate_lelieuvre(const SphericalNet& net, const AsymptoticComplex& cx,
                             const Vec3& r_origin, int threads) {
  KSurface surf;
  surf.delta = net.delta;
  surf.shape_like(cx);
  Integrator ig{net, cx, surf};

  int max_gen = 0;
  for (const auto& s : cx.sectors) max_gen = std::max(max_gen, s.generation);
  for (int gen = 0; gen <= max_gen; ++gen) {
    if (gen == 0) {
      const int M = 2 * cx.params.m;
      for (int s = 0; s < M && s < static_cast<int>(cx.sectors.size()); ++s) {
        if (s == 0) {
          surf.set(0, 0, 0, r_origin);
          ig.integrate_row0(0);
        } else {
          // the shared fan ray: this sector's row is the previous one's column
          ig.copy_row0(s, s - 1, 0, 0, 0, 1);
        }
        ig.integrate_col0(s);
      }
    } else {
      for (const auto& br : cx.branches) {
        if (br.generation != gen) continue;
        const int a = br.daughter_sectors[0], b = br.daughter_sectors[1],
                  c = br.daughter_sectors[2];
        surf.set(b, 0, 0, surf.at(br.parent_sector, br.j_star, br.k_star));
        ig.integrate_row0(b);
        ig.integrate_col0(b);
        ig.copy_row0(a, br.parent_sector, br.j_star, br.k_star, 1, 0);
        ig.copy_col0(a, b, 0, 0, 0, 1);
        ig.copy_row0(c, b, 0, 0, 1, 0);
        ig.copy_col0(c, br.parent_sector, br.j_star, br.k_star, 0, 1);
      }
    }
    std::vector<int> wave;
    for (const auto& s : cx.sectors)
      if (s.generation == gen) wave.push_back(s.id);
    parallel_for(threads, static_cast<int>(wave.size()),
                 [&](int i) { ig.fill_interior(wave[static_cast<size_t>(i)]); });
  }
  return surf;
}

bool branch_star_complete(const AsymptoticComplex& cx, const BranchRecord& br) {
  const auto& p = cx.sectors[static_cast<size_t>(br.parent_sector)];
  const int js = br.j_star, ks = br.k_star;
  if (js < 1 || ks < 1) return false;
  if (!p.quad_defined(js - 1, ks - 1) || !p.quad_defined(js, ks - 1) ||
      !p.quad_defined(js - 1, ks))
    return false;
  for (int d : br.daughter_sectors) {
    if (!cx.sectors[static_cast<size_t>(d)].quad_defined(0, 0)) return false;
  }
  return true;
}

double gauss_angle_sum_at_branch(const SphericalNet& net, const KSurface& surf,
                                 const AsymptoticComplex& cx, const BranchRecord& br) {
  (void)cx;
  const int p = br.parent_sector;
  const int js = br.j_star, ks = br.k_star;
  const int a = br.daughter_sectors[0], b = br.daughter_sectors[1], c = br.daughter_sectors[2];
  if (!net.has(p, js, ks) || !surf.has(p, js, ks))
    return std::numeric_limits<double>::quiet_NaN();
  const Vec3 nq = net.at(p, js, ks);
  const Vec3 rq = surf.at(p, js, ks);

  struct QuadAtVertex {
    int s1, j1, k1;  // first edge neighbor
    int s2, j2, k2;  // second edge neighbor
  };
  const QuadAtVertex quads[6] = {
      {a, 1, 0, a, 0, 1},                          // A(0,0)
      {b, 1, 0, b, 0, 1},                          // B(0,0)
      {c, 1, 0, c, 0, 1},                          // C(0,0)
      {p, js - 1, ks, p, js, ks + 1},              // parent (j*-1, k*)
      {p, js - 1, ks, p, js, ks - 1},              // parent (j*-1, k*-1)
      {p, js + 1, ks, p, js, ks - 1},              // parent (j*, k*-1)
  };

  const double cd = std::cos(net.delta);
  auto tangent_p = [&](int s, int j, int k) {
    // N-edge direction in the tangent plane of the sphere at nq
    return normalized(net.at(s, j, k) - nq * cd);
  };
  auto tangent_r = [&](int s, int j, int k) { return normalized(surf.at(s, j, k) - rq); };

  for (const auto& q : quads) {
    if (!net.has(q.s1, q.j1, q.k1) || !net.has(q.s2, q.j2, q.k2) || !surf.has(q.s1, q.j1, q.k1) ||
        !surf.has(q.s2, q.j2, q.k2))
      return std::numeric_limits<double>::quiet_NaN();
  }

  double sum = 0;
  for (const auto& q : quads) {
    Vec3 ta = tangent_r(q.s1, q.j1, q.k1), tb = tangent_r(q.s2, q.j2, q.k2);
    Vec3 pa = tangent_p(q.s1, q.j1, q.k1), pb = tangent_p(q.s2, q.j2, q.k2);
    if (dot(nq, cross(ta, tb)) < 0) {
      std::swap(ta, tb);
      std::swap(pa, pb);
    }
    // surface corner positively oriented; its N-image angle lands in (-pi, 0)
    sum += std::atan2(dot(nq, cross(pa, pb)), dot(pa, pb));
  }
  return sum;
}

EmbedReport validate_embedding(const KSurface& surf, const SphericalNet& net,
                               const AsymptoticComplex& cx) {
  EmbedReport rep;
  const double sd = std::sin(net.delta);
  for (const auto& grid : cx.sectors) {
    const int s = grid.id;
    for (int k = 0; k < static_cast<int>(grid.rows.size()); ++k) {
      for (int j = 0; j < static_cast<int>(grid.rows[static_cast<size_t>(k)].size()); ++j) {
        if (!surf.has(s, j, k)) continue;
        const Vec3 r0 = surf.at(s, j, k);
        for (int d = 0; d < 2; ++d) {
          const int jn = j + (d == 0 ? 1 : 0), kn = k + (d == 0 ? 0 : 1);
          if (!surf.has(s, jn, kn) || !grid.active(j, k) || !grid.active(jn, kn)) continue;
          const Vec3 e = surf.at(s, jn, kn) - r0;
          rep.max_edge_length_err = std::max(rep.max_edge_length_err, std::abs(norm(e) - sd));
          if (net.has(s, j, k))
            rep.max_planarity_err = std::max(rep.max_planarity_err, std::abs(dot(e, net.at(s, j, k))));
          if (net.has(s, jn, kn))
            rep.max_planarity_err =
                std::max(rep.max_planarity_err, std::abs(dot(e, net.at(s, jn, kn))));
        }
        if (net.has(s, j, k) && net.has(s, j + 1, k) && net.has(s, j, k + 1) &&
            net.has(s, j + 1, k + 1)) {
          const Vec3 res = cross(net.at(s, j + 1, k) + net.at(s, j, k + 1),
                                 net.at(s, j, k) + net.at(s, j + 1, k + 1));
          rep.max_quad_closure = std::max(rep.max_quad_closure, norm(res));
        }
        if (grid.phi_defined(j, k) && surf.has(s, j + 1, k) && surf.has(s, j, k + 1)) {
          const Vec3 tu = surf.at(s, j + 1, k) - r0;
          const Vec3 tv = surf.at(s, j, k + 1) - r0;
          const double ang3 = std::atan2(norm(cross(tu, tv)), dot(tu, tv));
          rep.max_angle_mismatch =
              std::max(rep.max_angle_mismatch, std::abs(ang3 - std::abs(grid.phi(j, k))));
        }
      }
    }
  }
  // reversal co-location: every hyperbolic reversal should see a 3D star flip
  // within its immediate ring
  auto flip3d = [&](int s, int j, int k) -> int {
    if (!surf.has(s, j, k) || !surf.has(s, j + 1, k) || !surf.has(s, j - 1, k) ||
        !surf.has(s, j, k + 1) || !surf.has(s, j, k - 1) || !net.has(s, j, k))
      return -1;
    const Vec3 n = net.at(s, j, k);
    const Vec3 r0 = surf.at(s, j, k);
    const Vec3 up = surf.at(s, j + 1, k) - r0, um = surf.at(s, j - 1, k) - r0,
               vp = surf.at(s, j, k + 1) - r0, vm = surf.at(s, j, k - 1) - r0;
    const double prod = dot(n, cross(up, vp)) * dot(n, cross(vp, um)) * dot(n, cross(um, vm)) *
                        dot(n, cross(vm, up));
    return prod <= 0 ? 1 : 0;
  };
  for (const auto& grid : cx.sectors) {
    const int s = grid.id;
    for (int k = 1; k + 1 < static_cast<int>(grid.rows.size()); ++k) {
      const int len = static_cast<int>(grid.rows[static_cast<size_t>(k)].size());
      for (int j = 1; j + 1 < len; ++j) {
        if (!grid.active(j, k) || !grid.active(j + 1, k) || !grid.active(j - 1, k) ||
            !grid.active(j, k + 1) || !grid.active(j, k - 1))
          continue;
        if (!detect_reversal(grid.point(j, k), grid.point(j + 1, k), grid.point(j - 1, k),
                             grid.point(j, k + 1), grid.point(j, k - 1)))
          continue;
        rep.reversal_count++;
        bool found = false;
        for (int dj = -1; dj <= 1 && !found; ++dj)
          for (int dk = -1; dk <= 1 && !found; ++dk)
            if (flip3d(s, j + dj, k + dk) == 1) found = true;
        if (found) rep.colocated_reversals++;
      }
    }
  }
  return rep;
}

}  // namespace psurf
