#pragma once

#include <optional>
#include <utility>

#include "psurf/complex.hpp"

namespace psurf {
namespace netgen {

struct CutLocation {
  int sector = -1;
  int j_star = 0;
  int k_star = 0;
};

struct inconsistent_cut_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct degenerate_trisection_error : std::domain_error {
  using std::domain_error::domain_error;
};

/// Ray directions of the initial fan: beta_0 = 0, beta_1 = phi0, and the
/// remaining openings share (2 pi - phi0) equally; size 2m + 1 with the last
/// entry at 2 pi. phi0 = pi/m reproduces the symmetric start.
std::vector<double> initial_directions(const GreedyParams& params);

/// The 2m initial sectors rooted at the origin, boundary rays filled with
/// Amsler data and interiors completed.
AsymptoticComplex init_sectors(const GreedyParams& params, int threads = 1);

/// Prunes the boundary lines by the disk-discard rule, completes the interior
/// in anti-diagonal sweeps, and computes the vertex angles where both forward
/// neighbors are active. Boundary data is passed as raw point lists; the grid
/// keeps only what survives.
void fill_sector(SectorGrid& grid, const std::vector<std::complex<double>>& row0,
                 const std::vector<std::complex<double>>& col0, HypLength R);

/// Max-prefix cut location; nullopt when no defined |phi| exceeds phi_star.
/// Throws inconsistent_cut_error when the violating region touches j=0 or k=0
/// (no valid cut corner exists; the cutoff is below the sector opening).
std::optional<CutLocation> find_cut(const SectorGrid& grid, Angle phi_star);

/// Directions trisecting the angle from w1 to w2 (both Möbius-centered edge
/// vectors): (arg w1 + d/3, arg w1 + 2d/3) with d the positive relative angle.
std::pair<Angle, Angle> trisect_angles(std::complex<double> w1, std::complex<double> w2);

/// Excises {j > j*, k > k*} from the cut sector and spawns the three daughter
/// sectors (fresh trisected geodesic rays for the middle one, copied parent
/// lines for the flanks), appending the attachings and the branch record.
/// Daughter interiors are left unfilled; run_greedy fills them.
BranchRecord& spawn_daughters(AsymptoticComplex& complex, const CutLocation& cut);

/// Algorithm: greedy cuts in FIFO order over sector ids until no sector
/// exceeds phi_star, or max_generations is hit (complex.non_terminated set).
AsymptoticComplex run_greedy(const GreedyParams& params, int threads = 1);

/// 2 m0 equal Amsler sectors at the origin, no surgery, clipped to radius R.
AsymptoticComplex build_periodic_amsler(HypLength R, int m0, HypLength delta, int threads = 1);

/// Smallest m0 whose periodic Amsler net stays fold-free (no reversal, all
/// |phi| < pi) on the geodesic disk of radius R.
int minimal_periodic_order(HypLength R, HypLength delta, int threads = 1);

/// True when the net has no reversal-flagged vertex and no near-singular angle
/// within hyperbolic radius R of the origin.
bool covers_disk(const AsymptoticComplex& complex, HypLength R);

}  // namespace netgen
}  // namespace psurf
