#include "psurf/complex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <unordered_set>

namespace psurf {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void GreedyParams::validate() const {
  if (!(R > 0)) throw std::invalid_argument("params: R > 0 required");
  if (m < 2) throw std::invalid_argument("params: 2m >= 4 required");
  if (!(delta > 0)) throw std::invalid_argument("params: delta > 0 required");
  if (!(phi_star > kPi / m && phi_star < kPi))
    throw std::invalid_argument("params: phi_star in (pi/m, pi) required");
  if (!(phi0 > 0 && phi0 < kPi)) throw std::invalid_argument("params: phi0 in (0, pi) required");
  if (max_generations < 0) throw std::invalid_argument("params: max_generations >= 0");
  // every initial opening must sit below the cutoff, or the first cut is impossible
  const double other = (2.0 * kPi - phi0) / (2.0 * m - 1);
  if (!(phi0 < phi_star) || !(other < phi_star))
    throw std::invalid_argument("params: initial sector openings must stay below phi_star");
}

size_t SectorGrid::active_count() const {
  size_t n = 0;
  for (const auto& row : rows)
    for (const auto& v : row)
      if (v.flags & kActive) ++n;
  return n;
}

double SectorGrid::max_abs_phi() const {
  double m = 0.0;
  for (const auto& row : rows)
    for (const auto& v : row)
      if (v.flags & kPhiDefined) m = std::max(m, std::abs(v.phi));
  return m;
}

size_t AsymptoticComplex::total_active_vertices() const {
  CanonicalIndex idx(*this);
  return static_cast<size_t>(idx.vertex_count());
}

size_t AsymptoticComplex::total_defined_quads() const {
  size_t n = 0;
  for (const auto& s : sectors)
    for (int k = 0; k + 1 < static_cast<int>(s.rows.size()); ++k)
      for (int j = 0; j + 1 < static_cast<int>(s.rows[k].size()); ++j)
        if (s.quad_defined(j, k)) ++n;
  return n;
}

// ---------------------------------------------------------------------------
// CanonicalIndex

int CanonicalIndex::local_id(int sector, int j, int k) const {
  const auto& s = cx_.sectors[static_cast<size_t>(sector)];
  if (!s.active(j, k)) return -1;
  return static_cast<int>(row_base_[static_cast<size_t>(sector)][static_cast<size_t>(k)]) + j;
}

namespace {
int uf_find(std::vector<int>& parent, int x) {
  while (parent[static_cast<size_t>(x)] != x) {
    parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
    x = parent[static_cast<size_t>(x)];
  }
  return x;
}
void uf_union(std::vector<int>& parent, int a, int b) {
  a = uf_find(parent, a);
  b = uf_find(parent, b);
  if (a != b) parent[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
}
}  // namespace

CanonicalIndex::CanonicalIndex(const AsymptoticComplex& complex) : cx_(complex) {
  size_t total = 0;
  row_base_.resize(cx_.sectors.size());
  for (size_t s = 0; s < cx_.sectors.size(); ++s) {
    row_base_[s].resize(cx_.sectors[s].rows.size());
    for (size_t k = 0; k < cx_.sectors[s].rows.size(); ++k) {
      row_base_[s][k] = total;
      total += cx_.sectors[s].rows[k].size();
    }
  }
  std::vector<int> parent(total);
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& at : cx_.attachings) {
    for (int t = 0; t < at.count; ++t) {
      const int j_from = at.from_is_row ? t : 0;
      const int k_from = at.from_is_row ? 0 : t;
      const int a = local_id(at.from_sector, j_from, k_from);
      const int b = local_id(at.to_sector, at.j0 + t * at.dj, at.k0 + t * at.dk);
      if (a >= 0 && b >= 0) uf_union(parent, a, b);
    }
  }
  class_of_.assign(total, -1);
  reps_.clear();
  for (size_t s = 0; s < cx_.sectors.size(); ++s) {
    const auto& grid = cx_.sectors[s];
    for (int k = 0; k < static_cast<int>(grid.rows.size()); ++k)
      for (int j = 0; j < static_cast<int>(grid.rows[k].size()); ++j) {
        if (!grid.active(j, k)) continue;
        const int lid = local_id(static_cast<int>(s), j, k);
        const int root = uf_find(parent, lid);
        if (class_of_[static_cast<size_t>(root)] < 0) {
          class_of_[static_cast<size_t>(root)] = n_classes_++;
          reps_.push_back({static_cast<int>(s), j, k});
        }
        class_of_[static_cast<size_t>(lid)] = class_of_[static_cast<size_t>(root)];
      }
  }
  // degree and face counts per class via deduplicated edge/face sets
  degree_.assign(static_cast<size_t>(n_classes_), 0);
  face_count_.assign(static_cast<size_t>(n_classes_), 0);
  std::unordered_set<uint64_t> edges;
  auto add_edge = [&](int a, int b) {
    const uint64_t key =
        (static_cast<uint64_t>(std::min(a, b)) << 32) | static_cast<uint32_t>(std::max(a, b));
    if (edges.insert(key).second) {
      degree_[static_cast<size_t>(a)]++;
      degree_[static_cast<size_t>(b)]++;
    }
  };
  for (size_t s = 0; s < cx_.sectors.size(); ++s) {
    const auto& grid = cx_.sectors[s];
    for (int k = 0; k < static_cast<int>(grid.rows.size()); ++k)
      for (int j = 0; j < static_cast<int>(grid.rows[k].size()); ++j) {
        if (!grid.active(j, k)) continue;
        const int c = canonical(static_cast<int>(s), j, k);
        if (grid.active(j + 1, k)) add_edge(c, canonical(static_cast<int>(s), j + 1, k));
        if (grid.active(j, k + 1)) add_edge(c, canonical(static_cast<int>(s), j, k + 1));
        if (grid.quad_defined(j, k)) {
          face_count_[static_cast<size_t>(c)]++;
          face_count_[static_cast<size_t>(canonical(static_cast<int>(s), j + 1, k))]++;
          face_count_[static_cast<size_t>(canonical(static_cast<int>(s), j, k + 1))]++;
          face_count_[static_cast<size_t>(canonical(static_cast<int>(s), j + 1, k + 1))]++;
        }
      }
  }
}

int CanonicalIndex::canonical(int sector, int j, int k) const {
  const int lid = local_id(sector, j, k);
  return lid < 0 ? -1 : class_of_[static_cast<size_t>(lid)];
}

int CanonicalIndex::degree(int canonical_id) const {
  return degree_.at(static_cast<size_t>(canonical_id));
}

bool CanonicalIndex::interior(int canonical_id) const {
  // closed link: as many incident faces as incident edges
  return face_count_.at(static_cast<size_t>(canonical_id)) == degree(canonical_id);
}

// ---------------------------------------------------------------------------
// Validation

ValidationReport validate_complex(const AsymptoticComplex& cx) {
  ValidationReport rep;
  auto issue = [&](std::string code, std::string where) {
    rep.issues.push_back({std::move(code), std::move(where)});
  };

  for (const auto& at : cx.attachings) {
    const bool direct = (at.dj == 1 && at.dk == 0) || (at.dj == 0 && at.dk == 1);
    if (!direct) {
      issue("UNSUPPORTED_REFLECTED_ATTACHING",
            "attaching from sector " + std::to_string(at.from_sector));
      continue;
    }
    const auto& from = cx.sectors[static_cast<size_t>(at.from_sector)];
    const auto& to = cx.sectors[static_cast<size_t>(at.to_sector)];
    for (int t = 0; t < at.count; ++t) {
      const int jf = at.from_is_row ? t : 0;
      const int kf = at.from_is_row ? 0 : t;
      const int jt = at.j0 + t * at.dj;
      const int kt = at.k0 + t * at.dk;
      if (!from.active(jf, kf) || !to.active(jt, kt)) continue;
      if (from.pos(jf, kf) != to.pos(jt, kt)) {
        issue("SEAM_COPY_MISMATCH", "sector " + std::to_string(at.from_sector) + " t=" +
                                        std::to_string(t));
        break;
      }
    }
  }

  CanonicalIndex idx(cx);

  // rhombus property on every quad
  const double tol = 1e-9;
  for (const auto& s : cx.sectors) {
    for (int k = 0; k + 1 < static_cast<int>(s.rows.size()); ++k)
      for (int j = 0; j + 1 < static_cast<int>(s.rows[k].size()); ++j) {
        if (!s.quad_defined(j, k) || s.degenerate(j + 1, k + 1)) continue;
        const DiskPoint a = s.point(j, k), b = s.point(j + 1, k), c = s.point(j, k + 1),
                        d = s.point(j + 1, k + 1);
        const double l1 = hyp_distance(a, b), l2 = hyp_distance(a, c), l3 = hyp_distance(b, d),
                     l4 = hyp_distance(c, d);
        const double lo = std::min(std::min(l1, l2), std::min(l3, l4));
        const double hi = std::max(std::max(l1, l2), std::max(l3, l4));
        if (hi - lo > tol) {
          issue("QUAD_NOT_RHOMBIC", "sector " + std::to_string(s.id) + " quad (" +
                                        std::to_string(j) + "," + std::to_string(k) + ")");
        }
      }
  }

  // even degree at interior vertices
  for (int c = 0; c < idx.vertex_count(); ++c) {
    if (idx.interior(c) && idx.degree(c) % 2 != 0) {
      const auto& r = idx.representatives()[static_cast<size_t>(c)];
      issue("ODD_INTERIOR_DEGREE", "sector " + std::to_string(r.sector) + " (" +
                                       std::to_string(r.j) + "," + std::to_string(r.k) + ")");
    }
  }

  // checkerboard 2-colorability of the face adjacency graph
  {
    struct FaceRef {
      int sector, j, k;
    };
    std::vector<FaceRef> faces;
    std::unordered_map<uint64_t, int> face_id;  // (sector, j, k) packed
    auto pack = [](int s, int j, int k) {
      return (static_cast<uint64_t>(static_cast<uint32_t>(s)) << 40) |
             (static_cast<uint64_t>(static_cast<uint32_t>(j)) << 20) |
             static_cast<uint64_t>(static_cast<uint32_t>(k));
    };
    std::unordered_map<uint64_t, std::vector<int>> edge_faces;
    auto edge_key = [](int a, int b) {
      return (static_cast<uint64_t>(std::min(a, b)) << 32) | static_cast<uint32_t>(std::max(a, b));
    };
    for (const auto& s : cx.sectors) {
      for (int k = 0; k + 1 < static_cast<int>(s.rows.size()); ++k)
        for (int j = 0; j + 1 < static_cast<int>(s.rows[k].size()); ++j) {
          if (!s.quad_defined(j, k)) continue;
          const int fid = static_cast<int>(faces.size());
          faces.push_back({s.id, j, k});
          face_id[pack(s.id, j, k)] = fid;
          const int v00 = idx.canonical(s.id, j, k), v10 = idx.canonical(s.id, j + 1, k),
                    v01 = idx.canonical(s.id, j, k + 1), v11 = idx.canonical(s.id, j + 1, k + 1);
          edge_faces[edge_key(v00, v10)].push_back(fid);
          edge_faces[edge_key(v00, v01)].push_back(fid);
          edge_faces[edge_key(v10, v11)].push_back(fid);
          edge_faces[edge_key(v01, v11)].push_back(fid);
        }
    }
    for (const auto& [key, fs] : edge_faces) {
      (void)key;
      if (fs.size() > 2) {
        issue("NONMANIFOLD_EDGE", "more than two faces share an edge");
        break;
      }
    }
    std::vector<int> color(faces.size(), -1);
    for (size_t seed = 0; seed < faces.size(); ++seed) {
      if (color[seed] >= 0) continue;
      color[seed] = 0;
      std::queue<int> q;
      q.push(static_cast<int>(seed));
      while (!q.empty()) {
        const int f = q.front();
        q.pop();
        const auto& fr = faces[static_cast<size_t>(f)];
        const auto& s = cx.sectors[static_cast<size_t>(fr.sector)];
        const int corners[4] = {idx.canonical(fr.sector, fr.j, fr.k),
                                idx.canonical(fr.sector, fr.j + 1, fr.k),
                                idx.canonical(fr.sector, fr.j, fr.k + 1),
                                idx.canonical(fr.sector, fr.j + 1, fr.k + 1)};
        (void)s;
        const uint64_t keys[4] = {edge_key(corners[0], corners[1]), edge_key(corners[0], corners[2]),
                                  edge_key(corners[1], corners[3]), edge_key(corners[2], corners[3])};
        for (const auto& key : keys) {
          for (int g : edge_faces[key]) {
            if (g == f) continue;
            if (color[static_cast<size_t>(g)] < 0) {
              color[static_cast<size_t>(g)] = 1 - color[static_cast<size_t>(f)];
              q.push(g);
            } else if (color[static_cast<size_t>(g)] == color[static_cast<size_t>(f)]) {
              issue("NOT_CHECKERBOARD", "odd face cycle");
            }
          }
        }
      }
    }
  }

  return rep;
}

int branch_index(const AsymptoticComplex& cx, const CanonicalIndex& idx, const VertexRef& v) {
  const int c = idx.canonical(v.sector, v.j, v.k);
  if (c < 0) throw std::invalid_argument("branch_index: inactive vertex");
  if (!idx.interior(c)) throw boundary_vertex_error("branch_index: boundary vertex");
  (void)cx;
  const int deg = idx.degree(c);
  return 1 - deg / 2;
}

int cut_depth(const AsymptoticComplex& cx) {
  int depth = 0;
  for (const auto& b : cx.branches) depth = std::max(depth, b.generation);
  return depth;
}

}  // namespace psurf
