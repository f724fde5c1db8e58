#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "psurf/poincare.hpp"

namespace psurf {

enum class BoundarySource : uint8_t { Amsler, Copied };

/// One rectangular asymptotic patch of the complex. Storage is ragged
/// (rows trimmed to their last live vertex); the active mask carries the
/// staircase geometry produced by the disk-discard rule.
struct SectorGrid {
  enum Flag : uint8_t { kActive = 1, kPhiDefined = 2, kDegenerate = 4 };

  struct Vertex {
    std::complex<double> pos{0.0, 0.0};
    double phi = 0.0;  // signed angle arg(w_k conj(w_j)); |phi| is geometric
    uint8_t flags = 0;
  };

  int id = -1;
  int generation = 0;
  std::optional<int> parent_branch;
  DiskPoint origin;
  double opening_angle = 0.0;  // |phi| at the sector corner
  bool j_is_u = true;          // global asymptotic family of the +j axis
  BoundarySource u_source = BoundarySource::Amsler;
  BoundarySource v_source = BoundarySource::Amsler;
  int extent = 0;  // index cap N = ceil(2R/delta)

  std::vector<std::vector<Vertex>> rows;  // rows[k][j]

  bool in_range(int j, int k) const {
    return k >= 0 && k < static_cast<int>(rows.size()) && j >= 0 &&
           j < static_cast<int>(rows[k].size());
  }
  bool active(int j, int k) const {
    return in_range(j, k) && (rows[k][j].flags & kActive);
  }
  bool phi_defined(int j, int k) const {
    return in_range(j, k) && (rows[k][j].flags & kPhiDefined);
  }
  bool degenerate(int j, int k) const {
    return in_range(j, k) && (rows[k][j].flags & kDegenerate);
  }
  std::complex<double> pos(int j, int k) const { return rows[k][j].pos; }
  double phi(int j, int k) const { return rows[k][j].phi; }
  DiskPoint point(int j, int k) const { return DiskPoint(rows[k][j].pos); }

  /// Quad (j,k) has corners (j,k),(j+1,k),(j,k+1),(j+1,k+1), all active.
  bool quad_defined(int j, int k) const {
    return active(j, k) && active(j + 1, k) && active(j, k + 1) && active(j + 1, k + 1);
  }

  size_t active_count() const;
  double max_abs_phi() const;

  template <typename F>
  void for_each_active(F&& f) const {
    for (int k = 0; k < static_cast<int>(rows.size()); ++k)
      for (int j = 0; j < static_cast<int>(rows[k].size()); ++j)
        if (rows[k][j].flags & kActive) f(j, k, rows[k][j]);
  }
};

/// Record of one surgery. phi_parent is the geometric angle at the cut vertex
/// before trisection; the three daughters open with phi_parent/3 each.
struct BranchRecord {
  int id = -1;
  DiskPoint location;
  int generation = 0;  // cut depth of this node
  int parent_sector = -1;
  int j_star = 0, k_star = 0;  // cut corner in the parent grid
  std::array<int, 3> daughter_sectors{-1, -1, -1};
  double phi_parent = 0.0;    // |phi(u*, v*)|
  double phi_daughter = 0.0;  // phi_parent / 3
  HypLength s_n = 0.0;        // R - hyp_distance(0, location)
  double alpha_sq = 0.0;      // (1/(4 s_n)) (I0^{-1}(phi*/phi_n))^2
};

/// Identification of a boundary line of `from_sector` with a lattice line in
/// `to_sector`: index t along the from-boundary maps to (j0 + t dj, k0 + t dk).
/// Only direct attachings (dj,dk in {(1,0),(0,1)}) are produced or supported.
struct Attaching {
  int from_sector;
  bool from_is_row;  // true: (t,0) row; false: (0,t) column
  int to_sector;
  int j0, k0, dj, dk;
  int count;
};

struct GreedyParams {
  HypLength R = 3.0;
  int m = 2;  // half the initial sector count
  Angle phi0 = 1.5707963267948966;
  Angle phi_star = 2.356194490192345;
  HypLength delta = 0.05;
  int max_generations = 64;

  int extent() const { return static_cast<int>(std::ceil(2.0 * R / delta)); }
  void validate() const;
};

struct AsymptoticComplex {
  std::vector<SectorGrid> sectors;
  std::vector<BranchRecord> branches;
  std::vector<Attaching> attachings;
  HypLength disk_radius = 0.0;
  GreedyParams params;
  bool non_terminated = false;

  const SectorGrid& sector(int id) const { return sectors.at(static_cast<size_t>(id)); }
  size_t total_active_vertices() const;  // counting duplicated seam copies once
  size_t total_defined_quads() const;
};

/// Address of a vertex: sector id plus grid indices.
struct VertexRef {
  int sector;
  int j, k;
  friend bool operator==(const VertexRef& a, const VertexRef& b) {
    return a.sector == b.sector && a.j == b.j && a.k == b.k;
  }
};

/// Global vertex numbering: seam-duplicated copies are merged through the
/// attaching records (union-find), giving one dense index per geometric vertex.
class CanonicalIndex {
public:
  explicit CanonicalIndex(const AsymptoticComplex& complex);

  /// Dense id of the vertex class; -1 for inactive vertices.
  int canonical(int sector, int j, int k) const;
  int vertex_count() const { return n_classes_; }
  /// Number of distinct undirected edges incident on the class.
  int degree(int canonical_id) const;
  /// True when the vertex link is closed (edge count == face count).
  bool interior(int canonical_id) const;
  const std::vector<VertexRef>& representatives() const { return reps_; }

private:
  int local_id(int sector, int j, int k) const;
  const AsymptoticComplex& cx_;
  std::vector<size_t> sector_offset_;          // into row_offset_
  std::vector<std::vector<size_t>> row_base_;  // per sector, per row: base local id
  std::vector<int> class_of_;                  // local id -> dense class id
  std::vector<VertexRef> reps_;
  std::vector<int> degree_;
  std::vector<int> face_count_;
  int n_classes_ = 0;
};

struct ValidationIssue {
  std::string code;
  std::string where;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
};

/// Structural and metric validation: checkerboard 2-colorability of the face
/// graph, even interior vertex degrees, bit-identical attached copies, and the
/// equal-side rhombus property of every quad (within 1e-9).
ValidationReport validate_complex(const AsymptoticComplex& complex);

struct boundary_vertex_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Ramification index J_p = 1 - m_p at an interior vertex of degree 2 m_p.
/// Throws boundary_vertex_error on the boundary.
int branch_index(const AsymptoticComplex& complex, const CanonicalIndex& index,
                 const VertexRef& v);

/// Maximum generation over branch records; 0 when no surgery was performed.
int cut_depth(const AsymptoticComplex& complex);

}  // namespace psurf
