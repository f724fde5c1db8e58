#pragma once

#include <string>

#include "psurf/analysis.hpp"
#include "psurf/embed.hpp"

namespace psurf {
namespace io {

/// Shortest round-trip decimal form with '.' separator, 17 significant digits.
std::string fmt(double v);

struct write_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MeshStats {
  size_t n_vertices = 0;
  size_t n_faces = 0;
};

/// Geometry-only OBJ ("v x y z", quad faces, 1-based) with a companion CSV of
/// per-vertex scalars keyed by the OBJ vertex index. Seam copies collapse to a
/// single vertex through the canonical index; iteration order is sector-major,
/// row-major, so output is deterministic.
MeshStats write_obj_with_scalars(const std::string& obj_path, const std::string& csv_path,
                                 const KSurface& surf, const AsymptoticComplex& complex);

void write_report_json(const std::string& path, const analysis::EnergyReport& report,
                       const AsymptoticComplex& complex, const std::string& config_echo);

void write_branches_json(const std::string& path, const AsymptoticComplex& complex);

void write_frontier_csv(const std::string& path,
                        const std::vector<analysis::FrontierRecord>& records);

/// Reference curves f1(alpha) = I0(2 alpha^2)/3 and f2 = (alpha/alpha*)^2
/// sampled over [0, alpha_sq_max].
void write_frontier_curves_csv(const std::string& path, double alpha_sq_max, int samples);

}  // namespace io
}  // namespace psurf
