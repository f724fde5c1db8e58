#pragma once

#include <optional>
#include <string>
#include <vector>

#include "psurf/complex.hpp"

namespace psurf {
namespace analysis {

struct singular_angle_error : std::domain_error {
  using std::domain_error::domain_error;
};

/// Principal curvatures (tan(|phi|/2), -cot(|phi|/2)); product is -1.
/// Throws singular_angle_error within 1e-9 of the singular values 0, pi.
std::pair<double, double> principal_curvatures(Angle phi);

struct EnergyMax {
  double e_inf = 0;             // max over vertices of max(tan, cot) of |phi|/2
  double e_inf_formula = 0;     // max(cot(phi_min_opening/2), tan(phi_star/2))
  double min_abs_phi = 0;
  double max_abs_phi = 0;
};

/// Vertex-wise max principal curvature over the complex, restricted to the
/// geodesic disk of radius `complex.disk_radius` that the net was built for.
EnergyMax energy_max(const AsymptoticComplex& complex);

/// Sum over quads (inside the target disk) of
/// (tan^2(phibar/2) + cot^2(phibar/2)) sin(phibar) delta^2, with phibar the
/// mean of the quad's defined corner angles.
double energy_willmore(const AsymptoticComplex& complex);

/// min over vertices of min(|phi|, pi - |phi|); E_inf = cot(proximity/2).
Angle singular_proximity(const AsymptoticComplex& complex);

/// Per-sector reversal flags at interior vertices (all four neighbors active).
std::vector<std::vector<std::vector<uint8_t>>> reversal_flags(const AsymptoticComplex& complex);

/// Closed lattice path on the complex; consecutive vertices are grid
/// neighbors, possibly hopping sectors across an attaching seam.
struct LatticeLoop {
  std::vector<VertexRef> vertices;  // closed: last connects back to first
};

struct loop_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct HazzidakisResult {
  double delta_gamma = 0;  // alternating corner sum (omega-positive traversal)
  double area = 0;         // sum of sin(phibar) delta^2 over enclosed quads
  double correction = 0;   // pi * sum (m_i - 2) over enclosed branch points
  int enclosed_branches = 0;
  double residual() const { return std::abs(delta_gamma - area + correction); }
};

/// Checks the branched sine-Gordon identity Delta_Gamma = A(Gamma) - sum (m_i-2) pi
/// on a Hamburger polygon given as a lattice loop. Throws loop_error on open
/// loops (OPEN_LOOP), runs mixing edge families (MIXED), or corners without a
/// defined angle; refuses loops through reversal-flagged vertices.
HazzidakisResult hazzidakis_check(const AsymptoticComplex& complex, const LatticeLoop& loop);

/// Axis-aligned rectangle loop [a,c] x [b,d] within one sector; corners need
/// defined angles. Returns nullopt when the rectangle is not fully active.
std::optional<LatticeLoop> make_rect_loop(const AsymptoticComplex& complex, int sector, int a,
                                          int b, int c, int d);

/// Hexagonal loop of combinatorial radius rho around a branch vertex, passing
/// through the parent and all three daughters. Returns nullopt when any needed
/// vertex or corner angle is missing.
std::optional<LatticeLoop> make_branch_loop(const AsymptoticComplex& complex, int branch_id,
                                            int rho);

enum class NodeKind { AmslerDiagonal, PseudoAmsler };

struct FrontierRecord {
  int branch_id = -1;
  int generation = 0;
  NodeKind node_kind = NodeKind::PseudoAmsler;
  double phi_n = 0;       // opening angle of the cut (parent) sector
  double ratio = 0;       // phi_{n+1} / phi_n
  double alpha_sq = 0;    // (1/(4 s_n)) (I0^{-1}(phi*/phi_n))^2
  double s_n = 0;
  double branch_radius = 0;
};

/// One record per branch point; node kind is Amsler-diagonal exactly when the
/// cut sector's both boundary lines are fresh geodesics.
std::vector<FrontierRecord> frontier_records(const AsymptoticComplex& complex);

struct EnergyReport {
  double e_inf = 0;
  double e_inf_formula = 0;
  double e_willmore = 0;
  double min_phi = 0;
  double max_phi = 0;
  double proximity = 0;
  size_t n_vertices = 0;
  size_t n_quads = 0;
  size_t n_branches = 0;
  int cut_depth = 0;
  bool non_terminated = false;
  std::vector<double> phi_min_by_generation;  // min branch opening per generation
};

EnergyReport make_energy_report(const AsymptoticComplex& complex);

}  // namespace analysis
}  // namespace psurf
