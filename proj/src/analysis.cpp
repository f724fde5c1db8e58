#include "psurf/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "psurf/reference.hpp"

namespace psurf {
namespace analysis {

namespace {
constexpr double kPi = 3.14159265358979323846;

/// The flip-invariant angle of the sine-Gordon theory: phi > 0 keeps its
/// value, phi < 0 maps to pi + phi. sin stays nonnegative either way.
double phi_invariant(double phi_signed) { return phi_signed > 0 ? phi_signed : kPi + phi_signed; }
}  // namespace

std::pair<double, double> principal_curvatures(Angle phi) {
  const double a = std::abs(phi);
  if (a <= 1e-9 || a >= kPi - 1e-9)
    throw singular_angle_error("principal_curvatures: angle at singular value");
  return {std::tan(a / 2.0), -1.0 / std::tan(a / 2.0)};
}

EnergyMax energy_max(const AsymptoticComplex& cx) {
  EnergyMax out;
  out.min_abs_phi = kPi;
  const DiskPoint origin;
  const double R = cx.disk_radius;
  for (const auto& s : cx.sectors) {
    s.for_each_active([&](int j, int k, const SectorGrid::Vertex& v) {
      if (!(v.flags & SectorGrid::kPhiDefined)) return;
      if (hyp_distance(origin, DiskPoint(v.pos)) > R) return;
      const double a = std::abs(v.phi);
      out.min_abs_phi = std::min(out.min_abs_phi, a);
      out.max_abs_phi = std::max(out.max_abs_phi, a);
      const auto [k1, k2] = principal_curvatures(a);
      out.e_inf = std::max(out.e_inf, std::max(k1, -k2));
      (void)j;
      (void)k;
    });
  }
  double phi_min_opening = kPi;
  for (const auto& s : cx.sectors)
    if (s.generation == 0) phi_min_opening = std::min(phi_min_opening, s.opening_angle);
  for (const auto& b : cx.branches) phi_min_opening = std::min(phi_min_opening, b.phi_daughter);
  out.e_inf_formula =
      std::max(1.0 / std::tan(phi_min_opening / 2.0), std::tan(cx.params.phi_star / 2.0));
  return out;
}

double energy_willmore(const AsymptoticComplex& cx) {
  const DiskPoint origin;
  const double R = cx.disk_radius;
  const double d2 = cx.params.delta * cx.params.delta;
  double sum = 0;
  for (const auto& s : cx.sectors) {
    for (int k = 0; k + 1 < static_cast<int>(s.rows.size()); ++k)
      for (int j = 0; j + 1 < static_cast<int>(s.rows[static_cast<size_t>(k)].size()); ++j) {
        if (!s.quad_defined(j, k)) continue;
        bool in = true;
        double mean = 0;
        int cnt = 0;
        static constexpr std::pair<int, int> kCorners[4] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
        for (const auto& [dj, dk] : kCorners) {
          if (hyp_distance(origin, s.point(j + dj, k + dk)) > R) in = false;
          if (s.phi_defined(j + dj, k + dk)) {
            mean += std::abs(s.phi(j + dj, k + dk));
            ++cnt;
          }
        }
        if (!in || cnt == 0) continue;
        mean /= cnt;
        const auto [k1, k2] = principal_curvatures(mean);
        sum += (k1 * k1 + k2 * k2) * std::sin(mean) * d2;
      }
  }
  return sum;
}

Angle singular_proximity(const AsymptoticComplex& cx) {
  double prox = kPi / 2;
  const DiskPoint origin;
  const double R = cx.disk_radius;
  for (const auto& s : cx.sectors) {
    s.for_each_active([&](int j, int k, const SectorGrid::Vertex& v) {
      (void)j;
      (void)k;
      if (!(v.flags & SectorGrid::kPhiDefined)) return;
      if (hyp_distance(origin, DiskPoint(v.pos)) > R) return;
      const double a = std::abs(v.phi);
      prox = std::min(prox, std::min(a, kPi - a));
    });
  }
  return prox;
}

std::vector<std::vector<std::vector<uint8_t>>> reversal_flags(const AsymptoticComplex& cx) {
  std::vector<std::vector<std::vector<uint8_t>>> flags(cx.sectors.size());
  for (size_t si = 0; si < cx.sectors.size(); ++si) {
    const auto& s = cx.sectors[si];
    flags[si].resize(s.rows.size());
    for (size_t k = 0; k < s.rows.size(); ++k) flags[si][k].assign(s.rows[k].size(), 0);
    for (int k = 1; k + 1 < static_cast<int>(s.rows.size()); ++k)
      for (int j = 1; j < static_cast<int>(s.rows[static_cast<size_t>(k)].size()); ++j) {
        if (!s.active(j, k) || !s.active(j + 1, k) || !s.active(j - 1, k) ||
            !s.active(j, k + 1) || !s.active(j, k - 1))
          continue;
        if (detect_reversal(s.point(j, k), s.point(j + 1, k), s.point(j - 1, k),
                            s.point(j, k + 1), s.point(j, k - 1)))
          flags[si][static_cast<size_t>(k)][static_cast<size_t>(j)] = 1;
      }
  }
  return flags;
}

namespace {

struct LoopGeometry {
  std::vector<std::complex<double>> polygon;
  double shoelace = 0;
  bool inside(std::complex<double> p) const {
    // even-odd crossing rule
    bool in = false;
    const size_t n = polygon.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
      const auto a = polygon[j], b = polygon[i];
      if ((b.imag() > p.imag()) != (a.imag() > p.imag())) {
        const double x =
            b.real() + (p.imag() - b.imag()) * (a.real() - b.real()) / (a.imag() - b.imag());
        if (p.real() < x) in = !in;
      }
    }
    return in;
  }
};

}  // namespace

HazzidakisResult hazzidakis_check(const AsymptoticComplex& cx, const LatticeLoop& loop) {
  const size_t n = loop.vertices.size();
  if (n < 4) throw loop_error("OPEN_LOOP: too few vertices");
  CanonicalIndex idx(cx);

  // edge family per step; verify adjacency (same sector step or seam hop)
  std::vector<uint8_t> edge_is_u(n);
  for (size_t i = 0; i < n; ++i) {
    const VertexRef& a = loop.vertices[i];
    const VertexRef& b = loop.vertices[(i + 1) % n];
    const int ca = idx.canonical(a.sector, a.j, a.k), cb = idx.canonical(b.sector, b.j, b.k);
    if (ca < 0 || cb < 0) throw loop_error("OPEN_LOOP: inactive vertex on path");
    bool classified = false;
    // same-sector grid step (possibly after resolving b into a's sector copy)
    if (a.sector == b.sector) {
      const int dj = b.j - a.j, dk = b.k - a.k;
      if (std::abs(dj) + std::abs(dk) != 1) throw loop_error("OPEN_LOOP: non-adjacent step");
      const bool jstep = dj != 0;
      edge_is_u[i] = (cx.sectors[static_cast<size_t>(a.sector)].j_is_u == jstep) ? 1 : 0;
      classified = true;
    } else {
      // seam hop: the two refs must be copies of adjacent vertices; find the
      // grid step on either side
      const std::pair<VertexRef, VertexRef> sides[2] = {{a, b}, {b, a}};
      static constexpr std::pair<int, int> kSteps[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
      for (const auto& [s_ref, o_ref] : sides) {
        const auto& grid = cx.sectors[static_cast<size_t>(s_ref.sector)];
        for (const auto& [dj, dk] : kSteps) {
          const int jn = s_ref.j + dj, kn = s_ref.k + dk;
          if (!grid.active(jn, kn)) continue;
          if (idx.canonical(s_ref.sector, jn, kn) ==
              idx.canonical(o_ref.sector, o_ref.j, o_ref.k)) {
            edge_is_u[i] = (grid.j_is_u == (dj != 0)) ? 1 : 0;
            classified = true;
            break;
          }
        }
        if (classified) break;
      }
      if (!classified) throw loop_error("OPEN_LOOP: seam step is not an edge");
    }
  }

  const auto rflags = reversal_flags(cx);
  LoopGeometry geo;
  geo.polygon.reserve(n);
  for (const auto& v : loop.vertices) {
    const auto& grid = cx.sectors[static_cast<size_t>(v.sector)];
    if (rflags[static_cast<size_t>(v.sector)][static_cast<size_t>(v.k)][static_cast<size_t>(v.j)])
      throw loop_error("MIXED: loop passes a reversal-flagged vertex");
    geo.polygon.push_back(grid.pos(v.j, v.k));
  }
  // the corner angles of a Hamburger polygon are ill-defined at branch points
  for (const auto& b : cx.branches)
    for (const auto& p : geo.polygon)
      if (p == b.location.value())
        throw loop_error("MIXED: loop passes through a branch point");
  for (size_t i = 0; i < n; ++i) {
    const auto a = geo.polygon[i], b = geo.polygon[(i + 1) % n];
    geo.shoelace += a.real() * b.imag() - b.real() * a.imag();
  }
  const double orient = geo.shoelace >= 0 ? 1.0 : -1.0;

  HazzidakisResult out;
  // corners: vertices where the edge family switches; parity alternates with
  // +1 where a u-arc starts (under the omega-positive traversal)
  int corner_count = 0;
  for (size_t i = 0; i < n; ++i) {
    const uint8_t in_fam = edge_is_u[(i + n - 1) % n];
    const uint8_t out_fam = edge_is_u[i];
    if (in_fam == out_fam) continue;
    ++corner_count;
    const VertexRef& v = loop.vertices[i];
    const auto& grid = cx.sectors[static_cast<size_t>(v.sector)];
    if (!grid.phi_defined(v.j, v.k)) throw loop_error("MIXED: corner without a defined angle");
    // the stored angle runs from the +j to the +k edge; the invariant angle of
    // the sine-Gordon theory runs from the u- to the v-family
    const double raw = grid.j_is_u ? grid.phi(v.j, v.k) : -grid.phi(v.j, v.k);
    const double val = phi_invariant(raw);
    const double parity = (out_fam == 1) ? 1.0 : -1.0;  // u-arc starts here
    out.delta_gamma += parity * val;
  }
  if (corner_count == 0 || corner_count % 2 != 0)
    throw loop_error("MIXED: runs do not alternate between families");
  out.delta_gamma *= orient;

  // enclosed branch points
  for (const auto& b : cx.branches) {
    if (geo.inside(b.location.value())) {
      out.enclosed_branches++;
      out.correction += kPi;  // (m_i - 2) pi with m_i = 3
    }
  }

  // enclosed quads: candidate sectors are those on the loop plus daughters of
  // enclosed branches (transitively)
  std::unordered_set<int> cand;
  for (const auto& v : loop.vertices) cand.insert(v.sector);
  {
    std::vector<int> stack(cand.begin(), cand.end());
    std::unordered_set<int> seen_branch;
    while (!stack.empty()) {
      stack.pop_back();
      for (const auto& b : cx.branches) {
        if (!geo.inside(b.location.value()) || seen_branch.count(b.id)) continue;
        seen_branch.insert(b.id);
        for (int d : b.daughter_sectors)
          if (cand.insert(d).second) stack.push_back(d);
        if (cand.insert(b.parent_sector).second) stack.push_back(b.parent_sector);
      }
    }
  }
  const double d2 = cx.params.delta * cx.params.delta;
  for (int sid : cand) {
    const auto& s = cx.sectors[static_cast<size_t>(sid)];
    for (int k = 0; k + 1 < static_cast<int>(s.rows.size()); ++k)
      for (int j = 0; j + 1 < static_cast<int>(s.rows[static_cast<size_t>(k)].size()); ++j) {
        if (!s.quad_defined(j, k)) continue;
        const auto centroid = 0.25 * (s.pos(j, k) + s.pos(j + 1, k) + s.pos(j, k + 1) +
                                      s.pos(j + 1, k + 1));
        if (!geo.inside(centroid)) continue;
        double mean = 0;
        int cnt = 0;
        static constexpr std::pair<int, int> kCorners[4] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
        for (const auto& [dj, dk] : kCorners)
          if (s.phi_defined(j + dj, k + dk)) {
            mean += std::abs(s.phi(j + dj, k + dk));
            ++cnt;
          }
        if (cnt > 0) out.area += std::sin(mean / cnt) * d2;
      }
  }
  return out;
}

std::optional<LatticeLoop> make_rect_loop(const AsymptoticComplex& cx, int sector, int a, int b,
                                          int c, int d) {
  const auto& s = cx.sectors[static_cast<size_t>(sector)];
  if (!(a < c && b < d)) return std::nullopt;
  for (int j = a; j <= c; ++j)
    for (int k = b; k <= d; ++k)
      if (!s.active(j, k)) return std::nullopt;
  const std::pair<int, int> corners[4] = {{a, b}, {c, b}, {c, d}, {a, d}};
  for (const auto& [j, k] : corners)
    if (!s.phi_defined(j, k)) return std::nullopt;
  LatticeLoop loop;
  for (int j = a; j < c; ++j) loop.vertices.push_back({sector, j, b});
  for (int k = b; k < d; ++k) loop.vertices.push_back({sector, c, k});
  for (int j = c; j > a; --j) loop.vertices.push_back({sector, j, d});
  for (int k = d; k > b; --k) loop.vertices.push_back({sector, a, k});
  return loop;
}

std::optional<LatticeLoop> make_branch_loop(const AsymptoticComplex& cx, int branch_id, int rho) {
  if (branch_id < 0 || branch_id >= static_cast<int>(cx.branches.size())) return std::nullopt;
  const auto& br = cx.branches[static_cast<size_t>(branch_id)];
  const int p = br.parent_sector;
  const int js = br.j_star, ks = br.k_star;
  const int A = br.daughter_sectors[0], B = br.daughter_sectors[1], C = br.daughter_sectors[2];
  if (js < rho || ks < rho) return std::nullopt;
  auto active = [&](int s, int j, int k) {
    return cx.sectors[static_cast<size_t>(s)].active(j, k);
  };
  auto phi_def = [&](int s, int j, int k) {
    return cx.sectors[static_cast<size_t>(s)].phi_defined(j, k);
  };
  // corners needed with defined angles
  const std::tuple<int, int, int> corners[6] = {{A, rho, rho},           {B, rho, rho},
                                                {C, rho, rho},           {p, js - rho, ks + rho},
                                                {p, js - rho, ks - rho}, {p, js + rho, ks - rho}};
  for (const auto& [s, j, k] : corners)
    if (!phi_def(s, j, k)) return std::nullopt;

  LatticeLoop loop;
  auto push = [&](int s, int j, int k) {
    loop.vertices.push_back({s, j, k});
    return active(s, j, k);
  };
  bool ok = true;
  // around the branch vertex: A corner, A->B along k=rho, B corner, B->C along
  // j=rho, C corner, into the parent along its row/column lines
  for (int k = 0; k < rho; ++k) ok &= push(A, rho, k);
  for (int j = rho; j > 0; --j) ok &= push(A, j, rho);
  for (int j = 0; j < rho; ++j) ok &= push(B, j, rho);
  for (int k = rho; k > 0; --k) ok &= push(B, rho, k);
  for (int k = 0; k < rho; ++k) ok &= push(C, rho, k);
  for (int j = rho; j > 0; --j) ok &= push(C, j, rho);
  for (int j = 0; j < rho; ++j) ok &= push(p, js - j, ks + rho);
  for (int k = rho; k > -rho; --k) ok &= push(p, js - rho, ks + k);
  for (int j = 0; j < 2 * rho; ++j) ok &= push(p, js - rho + j, ks - rho);
  for (int k = 0; k < rho; ++k) ok &= push(p, js + rho, ks - rho + k);
  if (!ok) return std::nullopt;
  return loop;
}

std::vector<FrontierRecord> frontier_records(const AsymptoticComplex& cx) {
  std::vector<FrontierRecord> out;
  out.reserve(cx.branches.size());
  for (const auto& b : cx.branches) {
    const auto& parent = cx.sectors[static_cast<size_t>(b.parent_sector)];
    FrontierRecord r;
    r.branch_id = b.id;
    r.generation = b.generation;
    r.node_kind = (parent.u_source == BoundarySource::Amsler &&
                   parent.v_source == BoundarySource::Amsler)
                      ? NodeKind::AmslerDiagonal
                      : NodeKind::PseudoAmsler;
    r.phi_n = parent.opening_angle;
    r.ratio = b.phi_daughter / parent.opening_angle;
    r.alpha_sq = b.alpha_sq;
    // boundary distance of the generation-n node (the cut sector's root)
    r.s_n = cx.disk_radius - hyp_distance(DiskPoint(), parent.origin);
    r.branch_radius = hyp_distance(DiskPoint(), b.location);
    out.push_back(r);
  }
  return out;
}

EnergyReport make_energy_report(const AsymptoticComplex& cx) {
  EnergyReport rep;
  const EnergyMax em = energy_max(cx);
  rep.e_inf = em.e_inf;
  rep.e_inf_formula = em.e_inf_formula;
  rep.min_phi = em.min_abs_phi;
  rep.max_phi = em.max_abs_phi;
  rep.e_willmore = energy_willmore(cx);
  rep.proximity = singular_proximity(cx);
  rep.n_vertices = cx.total_active_vertices();
  rep.n_quads = cx.total_defined_quads();
  rep.n_branches = cx.branches.size();
  rep.cut_depth = cut_depth(cx);
  rep.non_terminated = cx.non_terminated;
  const int depth = rep.cut_depth;
  rep.phi_min_by_generation.assign(static_cast<size_t>(depth) + 1, 0.0);
  std::vector<double> mins(static_cast<size_t>(depth) + 1, kPi);
  double gen0 = kPi;
  for (const auto& s : cx.sectors)
    if (s.generation == 0) gen0 = std::min(gen0, s.opening_angle);
  mins[0] = gen0;
  for (const auto& b : cx.branches)
    mins[static_cast<size_t>(b.generation)] =
        std::min(mins[static_cast<size_t>(b.generation)], b.phi_daughter);
  rep.phi_min_by_generation.assign(mins.begin(), mins.end());
  return rep;
}

}  // namespace analysis
}  // namespace psurf
