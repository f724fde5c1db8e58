#include "psurf/netgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "psurf/parallel.hpp"
#include "psurf/reference.hpp"

namespace psurf {
namespace netgen {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool inside_disk(const std::complex<double>& z, double R) {
  return hyp_distance(DiskPoint(), DiskPoint(z)) < R;
}

/// Equally spaced geodesic points from `base`, stopped one step past the
/// geodesic disk of radius R (the discard rule would drop the rest anyway).
std::vector<std::complex<double>> ray_points(const DiskPoint& base, Angle dir, HypLength delta,
                                             HypLength R, int max_count) {
  std::vector<std::complex<double>> pts{base.value()};
  const std::complex<double> e = std::polar(1.0, dir);
  for (int n = 1; n <= max_count; ++n) {
    if (!inside_disk(pts.back(), R)) break;
    pts.push_back(mobius(DiskPoint(e * std::tanh(0.5 * n * delta)), base).value());
  }
  return pts;
}

void recompute_angle_mask(SectorGrid& g) {
  for (int k = 0; k < static_cast<int>(g.rows.size()); ++k)
    for (int j = 0; j < static_cast<int>(g.rows[k].size()); ++j) {
      auto& v = g.rows[k][j];
      if ((v.flags & SectorGrid::kActive) && g.active(j + 1, k) && g.active(j, k + 1))
        v.flags |= SectorGrid::kPhiDefined;
      else
        v.flags &= static_cast<uint8_t>(~SectorGrid::kPhiDefined);
    }
}

void compute_angles(SectorGrid& g) {
  for (int k = 0; k < static_cast<int>(g.rows.size()); ++k)
    for (int j = 0; j < static_cast<int>(g.rows[k].size()); ++j) {
      auto& v = g.rows[k][j];
      if (!(v.flags & SectorGrid::kActive)) continue;
      if (g.active(j + 1, k) && g.active(j, k + 1)) {
        v.phi = vertex_angle(DiskPoint(v.pos), DiskPoint(g.pos(j + 1, k)),
                             DiskPoint(g.pos(j, k + 1)));
        v.flags |= SectorGrid::kPhiDefined;
      }
    }
}

}  // namespace

void fill_sector(SectorGrid& g, const std::vector<std::complex<double>>& row0,
                 const std::vector<std::complex<double>>& col0, HypLength R) {
  g.rows.clear();
  if (row0.empty() || col0.empty()) return;
  const int N = g.extent;

  // boundary lines survive while their predecessor on the line is inside
  std::vector<SectorGrid::Vertex> r0;
  r0.push_back({row0[0], 0.0, SectorGrid::kActive});
  for (int j = 1; j < static_cast<int>(row0.size()) && j <= N; ++j) {
    if (!inside_disk(row0[static_cast<size_t>(j - 1)], R)) break;
    r0.push_back({row0[static_cast<size_t>(j)], 0.0, SectorGrid::kActive});
  }
  std::vector<std::complex<double>> c0{col0[0]};
  for (int k = 1; k < static_cast<int>(col0.size()) && k <= N; ++k) {
    if (!inside_disk(col0[static_cast<size_t>(k - 1)], R)) break;
    c0.push_back(col0[static_cast<size_t>(k)]);
  }

  g.rows.push_back(std::move(r0));
  for (int k = 1; k < static_cast<int>(c0.size()); ++k) {
    const auto& prev = g.rows[static_cast<size_t>(k - 1)];
    std::vector<SectorGrid::Vertex> row;
    row.push_back({c0[static_cast<size_t>(k)], 0.0, SectorGrid::kActive});
    // a vertex stays active while a predecessor is active and inside the disk;
    // inactive predecessors count as outside. Positions of discarded vertices
    // are still completed while the stencil exists, since the discard rule can
    // revive a row through the (j, k-1) route.
    int last_live_prev = -1;
    for (int j = 0; j < static_cast<int>(prev.size()); ++j)
      if ((prev[static_cast<size_t>(j)].flags & SectorGrid::kActive) &&
          inside_disk(prev[static_cast<size_t>(j)].pos, R))
        last_live_prev = j;
    for (int j = 1; j < static_cast<int>(prev.size()) && j <= N; ++j) {
      const auto& left = row[static_cast<size_t>(j - 1)];
      const auto& below = prev[static_cast<size_t>(j)];
      const bool via_row = (left.flags & SectorGrid::kActive) && inside_disk(left.pos, R);
      const bool via_col = (below.flags & SectorGrid::kActive) && inside_disk(below.pos, R);
      const bool live = via_row || via_col;
      if (!live && j > last_live_prev) break;  // nothing downstream can revive
      const Completion c = complete_rhombus(DiskPoint(prev[static_cast<size_t>(j - 1)].pos),
                                            DiskPoint(below.pos), DiskPoint(left.pos));
      uint8_t flags = live ? SectorGrid::kActive : 0;
      if (c.degenerate) flags |= SectorGrid::kDegenerate;
      row.push_back({c.point.value(), 0.0, flags});
    }
    g.rows.push_back(std::move(row));
  }
  compute_angles(g);
  if (g.phi_defined(0, 0)) g.opening_angle = std::abs(g.phi(0, 0));
}

std::optional<CutLocation> find_cut(const SectorGrid& g, Angle phi_star) {
  int jmin = -1, kmin = -1;
  for (int k = 0; k < static_cast<int>(g.rows.size()); ++k)
    for (int j = 0; j < static_cast<int>(g.rows[k].size()); ++j) {
      if (!g.phi_defined(j, k)) continue;
      if (std::abs(g.rows[static_cast<size_t>(k)][static_cast<size_t>(j)].phi) > phi_star) {
        if (jmin < 0 || j < jmin) jmin = j;
        if (kmin < 0 || k < kmin) kmin = k;
      }
    }
  if (jmin < 0) return std::nullopt;
  if (jmin == 0 || kmin == 0)
    throw inconsistent_cut_error("find_cut: cutoff angle exceeded on a sector boundary");
  return CutLocation{g.id, jmin - 1, kmin - 1};
}

std::pair<Angle, Angle> trisect_angles(std::complex<double> w1, std::complex<double> w2) {
  if (std::abs(w1) == 0.0 || std::abs(w2) == 0.0)
    throw std::invalid_argument("trisect_angles: zero edge vector");
  const double d = std::arg(w2 * std::conj(w1));  // signed, lands in the excised wedge
  if (std::abs(d) < 1e-9) throw degenerate_trisection_error("trisect_angles: collinear edges");
  const double a1 = std::arg(w1);
  return {a1 + d / 3.0, a1 + 2.0 * d / 3.0};
}

BranchRecord& spawn_daughters(AsymptoticComplex& cx, const CutLocation& cut) {
  const int js = cut.j_star, ks = cut.k_star;
  const int parent_id = cut.sector;
  double phi_signed, parent_opening, parent_root_s;
  DiskPoint zeta0;
  bool parent_j_is_u;
  int parent_gen;
  std::complex<double> w1, w2;
  std::vector<std::complex<double>> row_a, col_c;
  {
    // all parent reads happen before the sector vector may reallocate
    SectorGrid& parent = cx.sectors[static_cast<size_t>(parent_id)];
    if (!parent.phi_defined(js, ks))
      throw std::invalid_argument("spawn_daughters: cut vertex has no angle");
    zeta0 = parent.point(js, ks);
    phi_signed = parent.phi(js, ks);
    parent_opening = parent.opening_angle;
    parent_root_s = cx.disk_radius - hyp_distance(DiskPoint(), parent.origin);
    parent_j_is_u = parent.j_is_u;
    parent_gen = parent.generation;
    w1 = mobius(parent.point(js + 1, ks), -zeta0).value();
    w2 = mobius(parent.point(js, ks + 1), -zeta0).value();

    // excise {j > j*, k > k*}
    for (int k = ks + 1; k < static_cast<int>(parent.rows.size()); ++k) {
      auto& row = parent.rows[static_cast<size_t>(k)];
      if (static_cast<int>(row.size()) > js + 1) row.resize(static_cast<size_t>(js + 1));
    }
    recompute_angle_mask(parent);

    const auto& prow = parent.rows[static_cast<size_t>(ks)];
    for (int j = js; j < static_cast<int>(prow.size()); ++j) {
      if (!(prow[static_cast<size_t>(j)].flags & SectorGrid::kActive)) break;
      row_a.push_back(prow[static_cast<size_t>(j)].pos);
    }
    for (int k = ks; k < static_cast<int>(parent.rows.size()); ++k) {
      if (!parent.active(js, k)) break;
      col_c.push_back(parent.pos(js, k));
    }
  }
  const auto [dir1, dir2] = trisect_angles(w1, w2);

  const double R = cx.disk_radius;
  const double delta = cx.params.delta;
  const int N = cx.params.extent();

  // fresh trisected rays for the middle daughter; the flanks copy the parent
  // lines beyond the cut and share the fresh rays
  const auto row_b = ray_points(zeta0, dir2, delta, R, N);
  const auto col_b = ray_points(zeta0, dir1, delta, R, N);

  const int base_id = static_cast<int>(cx.sectors.size());
  const int branch_id = static_cast<int>(cx.branches.size());
  const int gen = parent_gen + 1;

  auto make_daughter = [&](int id, BoundarySource us, BoundarySource vs) {
    SectorGrid d;
    d.id = id;
    d.generation = gen;
    d.parent_branch = branch_id;
    d.origin = zeta0;
    d.j_is_u = parent_j_is_u;
    d.u_source = us;
    d.v_source = vs;
    d.extent = N;
    d.opening_angle = std::abs(phi_signed) / 3.0;
    return d;
  };
  SectorGrid a = make_daughter(base_id, BoundarySource::Copied, BoundarySource::Amsler);
  SectorGrid b = make_daughter(base_id + 1, BoundarySource::Amsler, BoundarySource::Amsler);
  SectorGrid c = make_daughter(base_id + 2, BoundarySource::Amsler, BoundarySource::Copied);
  fill_sector(a, row_a, col_b, R);
  fill_sector(b, row_b, col_b, R);
  fill_sector(c, row_b, col_c, R);
  auto rows_len = [](const SectorGrid& s) { return static_cast<int>(s.rows.size()); };
  auto row0_len = [](const SectorGrid& s) {
    return s.rows.empty() ? 0 : static_cast<int>(s.rows[0].size());
  };
  cx.attachings.push_back({a.id, true, parent_id, js, ks, 1, 0, row0_len(a)});
  cx.attachings.push_back({a.id, false, b.id, 0, 0, 0, 1, std::min(rows_len(a), rows_len(b))});
  cx.attachings.push_back({c.id, true, b.id, 0, 0, 1, 0, std::min(row0_len(c), row0_len(b))});
  cx.attachings.push_back({c.id, false, parent_id, js, ks, 0, 1, rows_len(c)});

  BranchRecord rec;
  rec.id = branch_id;
  rec.location = zeta0;
  rec.generation = gen;
  rec.parent_sector = parent_id;
  rec.j_star = js;
  rec.k_star = ks;
  rec.daughter_sectors = {a.id, b.id, c.id};
  rec.phi_parent = std::abs(phi_signed);
  rec.phi_daughter = rec.phi_parent / 3.0;
  rec.s_n = R - hyp_distance(DiskPoint(), zeta0);
  // alpha of this cut is measured at the generation-n node: the cut sector's
  // root, whose boundary distance caps the sector extents u_max, v_max
  if (parent_root_s > 0 && parent_opening > 0 && cx.params.phi_star / parent_opening >= 1.0) {
    const double r = reference::bessel_i0_inv(cx.params.phi_star / parent_opening);
    rec.alpha_sq = r * r / (4.0 * parent_root_s);
  } else {
    rec.alpha_sq = std::numeric_limits<double>::quiet_NaN();
  }
  cx.sectors.push_back(std::move(a));
  cx.sectors.push_back(std::move(b));
  cx.sectors.push_back(std::move(c));
  cx.branches.push_back(rec);
  return cx.branches.back();
}

std::vector<double> initial_directions(const GreedyParams& params) {
  const int M = 2 * params.m;
  std::vector<double> dirs(static_cast<size_t>(M) + 1);
  dirs[0] = 0.0;
  dirs[1] = params.phi0;
  const double other = (2.0 * kPi - params.phi0) / (2.0 * params.m - 1);
  for (int n = 2; n <= M; ++n)
    dirs[static_cast<size_t>(n)] = dirs[static_cast<size_t>(n - 1)] + other;
  return dirs;
}

AsymptoticComplex init_sectors(const GreedyParams& params, int threads) {
  params.validate();
  AsymptoticComplex cx;
  cx.params = params;
  cx.disk_radius = params.R;
  const int M = 2 * params.m;
  const int N = params.extent();

  const std::vector<double> dirs = initial_directions(params);

  std::vector<std::vector<std::complex<double>>> rays(static_cast<size_t>(M));
  for (int n = 0; n < M; ++n)
    rays[static_cast<size_t>(n)] = ray_points(DiskPoint(), dirs[static_cast<size_t>(n)],
                                              params.delta, params.R, N);

  cx.sectors.resize(static_cast<size_t>(M));
  parallel_for(threads, M, [&](int i) {
    SectorGrid& s = cx.sectors[static_cast<size_t>(i)];
    s.id = i;
    s.generation = 0;
    s.origin = DiskPoint();
    s.j_is_u = (i % 2 == 0);
    s.extent = N;
    fill_sector(s, rays[static_cast<size_t>(i)], rays[static_cast<size_t>((i + 1) % M)], params.R);
    if (!s.phi_defined(0, 0))
      s.opening_angle = dirs[static_cast<size_t>(i + 1)] - dirs[static_cast<size_t>(i)];
  });

  for (int i = 0; i < M; ++i) {
    const int prev = (i + M - 1) % M;
    const int count =
        std::min(cx.sectors[static_cast<size_t>(i)].rows.empty()
                     ? 0
                     : static_cast<int>(cx.sectors[static_cast<size_t>(i)].rows[0].size()),
                 static_cast<int>(cx.sectors[static_cast<size_t>(prev)].rows.size()));
    cx.attachings.push_back({i, true, prev, 0, 0, 0, 1, count});
  }
  return cx;
}

AsymptoticComplex run_greedy(const GreedyParams& params, int threads) {
  AsymptoticComplex cx = init_sectors(params, threads);
  for (size_t qi = 0; qi < cx.sectors.size(); ++qi) {
    std::optional<CutLocation> cut;
    try {
      cut = find_cut(cx.sectors[qi], params.phi_star);
    } catch (const inconsistent_cut_error&) {
      // a violation touching the sector boundary cannot be excised; leave the
      // sector as is and report the run as not fully terminated
      cx.non_terminated = true;
      continue;
    }
    if (!cut) continue;
    if (cx.sectors[qi].generation + 1 > params.max_generations) {
      cx.non_terminated = true;
      continue;
    }
    spawn_daughters(cx, *cut);
  }
  return cx;
}

AsymptoticComplex build_periodic_amsler(HypLength R, int m0, HypLength delta, int threads) {
  if (m0 < 2) throw std::invalid_argument("build_periodic_amsler: m0 >= 2 required");
  GreedyParams p;
  p.R = R;
  p.m = m0;
  p.phi0 = kPi / m0;
  p.phi_star = kPi * (1.0 - 1e-9);
  p.delta = delta;
  p.max_generations = 0;
  return init_sectors(p, threads);
}

bool covers_disk(const AsymptoticComplex& cx, HypLength R) {
  const DiskPoint origin;
  for (const auto& s : cx.sectors) {
    for (int k = 0; k < static_cast<int>(s.rows.size()); ++k)
      for (int j = 0; j < static_cast<int>(s.rows[k].size()); ++j) {
        if (!s.active(j, k)) continue;
        if (hyp_distance(origin, s.point(j, k)) > R) continue;
        if (s.degenerate(j, k)) return false;
        if (s.phi_defined(j, k) && std::abs(s.phi(j, k)) >= kPi - 1e-6) return false;
        if (s.active(j + 1, k) && s.active(j - 1, k) && s.active(j, k + 1) && s.active(j, k - 1)) {
          if (detect_reversal(s.point(j, k), s.point(j + 1, k), s.point(j - 1, k),
                              s.point(j, k + 1), s.point(j, k - 1)))
            return false;
        }
      }
  }
  return true;
}

int minimal_periodic_order(HypLength R, HypLength delta, int threads) {
  auto admissible = [&](int m0) {
    // all 2 m0 sectors are congruent; probing one is enough
    GreedyParams p;
    p.R = R;
    p.m = m0;
    p.phi0 = kPi / m0;
    p.phi_star = kPi * (1.0 - 1e-9);
    p.delta = delta;
    SectorGrid s;
    s.id = 0;
    s.extent = p.extent();
    const auto r0 = ray_points(DiskPoint(), 0.0, delta, R, p.extent());
    const auto c0 = ray_points(DiskPoint(), kPi / m0, delta, R, p.extent());
    fill_sector(s, r0, c0, R);
    AsymptoticComplex probe;
    probe.disk_radius = R;
    probe.params = p;
    probe.sectors.push_back(std::move(s));
    return covers_disk(probe, R);
  };
  (void)threads;
  int lo = 2, hi = 2;
  if (admissible(2)) return 2;
  while (!admissible(hi)) {
    lo = hi;
    hi *= 2;
    if (hi > 1 << 20) throw std::runtime_error("minimal_periodic_order: no admissible m0 found");
  }
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    (admissible(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace netgen
}  // namespace psurf
