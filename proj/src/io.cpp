#include "psurf/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "psurf/analysis.hpp"
#include "psurf/reference.hpp"

namespace psurf {
namespace io {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw write_error("cannot open for writing: " + path);
  return out;
}

}  // namespace

MeshStats write_obj_with_scalars(const std::string& obj_path, const std::string& csv_path,
                                 const KSurface& surf, const AsymptoticComplex& cx) {
  CanonicalIndex idx(cx);
  std::vector<int> obj_index(static_cast<size_t>(idx.vertex_count()), 0);
  std::vector<VertexRef> emit_ref(static_cast<size_t>(idx.vertex_count()));

  auto out_obj = open_out(obj_path);
  auto out_csv = open_out(csv_path);

  // first copy encountered in sector-major row-major order owns the vertex
  int next = 1;  // OBJ indices are 1-based
  for (const auto& s : cx.sectors) {
    for (int k = 0; k < static_cast<int>(s.rows.size()); ++k)
      for (int j = 0; j < static_cast<int>(s.rows[static_cast<size_t>(k)].size()); ++j) {
        if (!s.active(j, k)) continue;
        const int c = idx.canonical(s.id, j, k);
        if (obj_index[static_cast<size_t>(c)] != 0) continue;
        obj_index[static_cast<size_t>(c)] = next++;
        emit_ref[static_cast<size_t>(c)] = {s.id, j, k};
      }
  }
  MeshStats stats;
  stats.n_vertices = static_cast<size_t>(next - 1);

  out_csv << "obj_index,sector,j,k,phi,kappa_max,generation\n";
  for (int c = 0; c < idx.vertex_count(); ++c) {
    const VertexRef& r = emit_ref[static_cast<size_t>(c)];
    const auto& s = cx.sectors[static_cast<size_t>(r.sector)];
    Vec3 p{0, 0, 0};
    if (surf.has(r.sector, r.j, r.k)) p = surf.at(r.sector, r.j, r.k);
    out_obj << "v " << fmt(p.x) << ' ' << fmt(p.y) << ' ' << fmt(p.z) << '\n';
    out_csv << obj_index[static_cast<size_t>(c)] << ',' << r.sector << ',' << r.j << ',' << r.k
            << ',';
    if (s.phi_defined(r.j, r.k)) {
      const double a = std::abs(s.phi(r.j, r.k));
      const double kmax = std::max(std::tan(a / 2), 1.0 / std::tan(a / 2));
      out_csv << fmt(s.phi(r.j, r.k)) << ',' << fmt(kmax);
    } else {
      out_csv << "nan,nan";
    }
    out_csv << ',' << s.generation << '\n';
  }
  for (const auto& s : cx.sectors) {
    for (int k = 0; k + 1 < static_cast<int>(s.rows.size()); ++k)
      for (int j = 0; j + 1 < static_cast<int>(s.rows[static_cast<size_t>(k)].size()); ++j) {
        if (!s.quad_defined(j, k)) continue;
        const int a = obj_index[static_cast<size_t>(idx.canonical(s.id, j, k))];
        const int b = obj_index[static_cast<size_t>(idx.canonical(s.id, j + 1, k))];
        const int c = obj_index[static_cast<size_t>(idx.canonical(s.id, j + 1, k + 1))];
        const int d = obj_index[static_cast<size_t>(idx.canonical(s.id, j, k + 1))];
        out_obj << "f " << a << ' ' << b << ' ' << c << ' ' << d << '\n';
        stats.n_faces++;
      }
  }
  if (!out_obj || !out_csv) throw write_error("write failed: " + obj_path);
  return stats;
}

void write_report_json(const std::string& path, const analysis::EnergyReport& rep,
                       const AsymptoticComplex& cx, const std::string& config_echo) {
  nlohmann::ordered_json j;
  j["config"] = nlohmann::ordered_json::parse(config_echo);
  j["e_inf"] = rep.e_inf;
  j["e_inf_branch_formula"] = rep.e_inf_formula;
  j["e_willmore"] = rep.e_willmore;
  j["min_phi"] = rep.min_phi;
  j["max_phi"] = rep.max_phi;
  j["singular_proximity"] = rep.proximity;
  j["n_vertices"] = rep.n_vertices;
  j["n_quads"] = rep.n_quads;
  j["n_branches"] = rep.n_branches;
  j["cut_depth"] = rep.cut_depth;
  j["status"] = rep.non_terminated ? "NON_TERMINATED" : "TERMINATED";
  j["phi_min_by_generation"] = rep.phi_min_by_generation;
  j["disk_radius"] = cx.disk_radius;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_branches_json(const std::string& path, const AsymptoticComplex& cx) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& b : cx.branches) {
    nlohmann::ordered_json e;
    e["id"] = b.id;
    e["location"] = {{"re", b.location.re()}, {"im", b.location.im()}};
    e["generation"] = b.generation;
    e["parent_sector"] = b.parent_sector;
    e["daughter_sectors"] = b.daughter_sectors;
    e["phi_parent"] = b.phi_parent;
    e["phi_daughter"] = b.phi_daughter;
    e["s_n"] = b.s_n;
    e["alpha_sq"] = b.alpha_sq;
    arr.push_back(e);
  }
  auto out = open_out(path);
  out << arr.dump(2) << '\n';
}

void write_frontier_csv(const std::string& path,
                        const std::vector<analysis::FrontierRecord>& records) {
  auto out = open_out(path);
  out << "generation,node_kind,phi_n,phi_ratio,alpha_sq,s_n,branch_radius\n";
  for (const auto& r : records) {
    out << r.generation << ','
        << (r.node_kind == analysis::NodeKind::AmslerDiagonal ? "amsler" : "pseudo") << ','
        << fmt(r.phi_n) << ',' << fmt(r.ratio) << ',' << fmt(r.alpha_sq) << ',' << fmt(r.s_n)
        << ',' << fmt(r.branch_radius) << '\n';
  }
}

void write_frontier_curves_csv(const std::string& path, double alpha_sq_max, int samples) {
  auto out = open_out(path);
  out << "alpha_sq,f1,f2\n";
  const double astar = reference::alpha_star();
  for (int i = 0; i <= samples; ++i) {
    const double a2 = alpha_sq_max * i / samples;
    const double f1 = reference::bessel_i0(2.0 * a2) / 3.0;
    const double f2 = a2 / (astar * astar);
    out << fmt(a2) << ',' << fmt(f1) << ',' << fmt(f2) << '\n';
  }
}

}  // namespace io
}  // namespace psurf
