#include "psurf/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <regex>

#include <CLI11.hpp>
#include <json.hpp>

#include "psurf/analysis.hpp"
#include "psurf/embed.hpp"
#include "psurf/io.hpp"
#include "psurf/netgen.hpp"
#include "psurf/reference.hpp"

namespace psurf {
namespace cli {

namespace {
constexpr double kPi = 3.14159265358979323846;

std::string config_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["command"] = c.command;
  j["radius"] = c.radius;
  j["phi0"] = c.phi0;
  j["phi_star"] = c.phi_star;
  j["delta"] = c.delta;
  j["sectors"] = c.sectors;
  j["max_generations"] = c.max_generations;
  j["threads"] = c.threads;
  return j.dump();
}

std::filesystem::path out_path(const RunConfig& c, const std::string& name) {
  std::filesystem::create_directories(c.out_dir);
  return std::filesystem::path(c.out_dir) / name;
}

}  // namespace

GreedyParams RunConfig::greedy() const {
  GreedyParams p;
  p.R = radius;
  p.m = sectors / 2;
  p.phi0 = phi0;
  p.phi_star = phi_star;
  p.delta = delta;
  p.max_generations = max_generations;
  return p;
}

double parse_angle(const std::string& text) {
  static const std::regex pi_form(R"(^\s*([0-9]*\.?[0-9]*)\s*pi\s*(?:/\s*([0-9]*\.?[0-9]+))?\s*$)");
  std::smatch m;
  if (std::regex_match(text, m, pi_form)) {
    const double num = m[1].str().empty() ? 1.0 : std::stod(m[1].str());
    const double den = m[2].str().empty() ? 1.0 : std::stod(m[2].str());
    return num * kPi / den;
  }
  size_t pos = 0;
  const double v = std::stod(text, &pos);
  if (pos != text.size()) throw std::invalid_argument("parse_angle: cannot parse '" + text + "'");
  return v;
}

int cmd_build(const RunConfig& config) {
  const AsymptoticComplex cx = netgen::run_greedy(config.greedy(), config.threads);
  const SphericalNet net = build_spherical_net(cx, config.threads);
  const KSurface surf = integrate_lelieuvre(net, cx, {0, 0, 0}, config.threads);
  const analysis::EnergyReport rep = analysis::make_energy_report(cx);

  const auto obj = out_path(config, "surface.obj");
  const auto csv = out_path(config, "scalars.csv");
  const auto branches = out_path(config, "branches.json");
  const auto report = config.report_path.empty() ? out_path(config, "report.json").string()
                                                 : config.report_path;
  const io::MeshStats stats = io::write_obj_with_scalars(obj.string(), csv.string(), surf, cx);
  io::write_branches_json(branches.string(), cx);
  io::write_report_json(report, rep, cx, config_json(config));
  std::cout << "build: R=" << config.radius << " sectors=" << cx.sectors.size()
            << " branches=" << cx.branches.size() << " cut_depth=" << rep.cut_depth
            << " e_inf=" << rep.e_inf << " vertices=" << stats.n_vertices
            << " faces=" << stats.n_faces
            << (cx.non_terminated ? " status=NON_TERMINATED" : "") << "\n";
  return kExitOk;
}

int cmd_energy_scan(const RunConfig& config) {
  if (config.r_list.empty()) {
    std::cerr << "energy-scan: --r-list required\n";
    return kExitBadConfig;
  }
  auto out = std::ofstream(out_path(config, "energy_scan.csv"), std::ios::binary);
  if (!out) return kExitIo;
  out << "R,e_inf_branched,e_willmore,e_inf_bobbin_bound,e_inf_periodic_amsler,cut_depth,"
         "n_branches,n_vertices,wall_ms,status\n";
  for (const double R : config.r_list) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      RunConfig c = config;
      c.radius = R;
      const AsymptoticComplex cx = netgen::run_greedy(c.greedy(), config.threads);
      const analysis::EnergyReport rep = analysis::make_energy_report(cx);
      const auto bound = reference::bobbin_energy_bound(R);
      const int m0 = netgen::minimal_periodic_order(R, config.delta, config.threads);
      const AsymptoticComplex pa = netgen::build_periodic_amsler(R, m0, config.delta,
                                                                 config.threads);
      const double e_pa = analysis::energy_max(pa).e_inf;
      const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
      out << io::fmt(R) << ',' << io::fmt(rep.e_inf) << ',' << io::fmt(rep.e_willmore) << ','
          << io::fmt(bound.value) << ',' << io::fmt(e_pa) << ',' << rep.cut_depth << ','
          << rep.n_branches << ',' << rep.n_vertices << ',' << ms << ','
          << (rep.non_terminated ? "NON_TERMINATED" : "OK") << '\n';
      std::cout << "R=" << R << ": e_inf=" << rep.e_inf << " periodic(m0=" << m0 << ")=" << e_pa
                << " bobbin_bound=" << bound.value << " depth=" << rep.cut_depth << "\n";
    } catch (const std::exception& e) {
      out << io::fmt(R) << ",nan,nan,nan,nan,0,0,0,0,FAILED\n";
      std::cerr << "R=" << R << " failed: " << e.what() << "\n";
    }
  }
  return kExitOk;
}

int cmd_frontier(const RunConfig& config) {
  const AsymptoticComplex cx = netgen::run_greedy(config.greedy(), config.threads);
  const auto records = analysis::frontier_records(cx);
  if (records.size() < 10) std::cerr << "frontier: TOO_FEW_BRANCHES (" << records.size() << ")\n";
  io::write_frontier_csv(out_path(config, "frontier.csv").string(), records);
  double a2max = 0;
  for (const auto& r : records)
    if (std::isfinite(r.alpha_sq)) a2max = std::max(a2max, r.alpha_sq);
  io::write_frontier_curves_csv(out_path(config, "frontier_curves.csv").string(),
                                std::max(a2max, 1.0), 200);

  const double astar = reference::alpha_star();
  size_t above = 0, amsler_total = 0, amsler_above = 0;
  for (const auto& r : records) {
    const double f2 = std::max(1.0 / 3.0, r.alpha_sq / (astar * astar));
    if (r.ratio >= 0.95 * f2) ++above;
    if (r.node_kind == analysis::NodeKind::AmslerDiagonal) {
      ++amsler_total;
      const double f1 = reference::bessel_i0(2.0 * r.alpha_sq) / 3.0;
      if (r.ratio >= 0.95 * f1) ++amsler_above;
    }
  }
  nlohmann::ordered_json j;
  j["n_records"] = records.size();
  j["fraction_above_f2"] = records.empty() ? 1.0 : double(above) / double(records.size());
  j["amsler_records"] = amsler_total;
  j["amsler_fraction_above_f1"] =
      amsler_total == 0 ? 1.0 : double(amsler_above) / double(amsler_total);
  std::ofstream(out_path(config, "frontier_summary.json"), std::ios::binary) << j.dump(2) << '\n';
  std::cout << "frontier: " << records.size() << " records, above-f2 fraction "
            << j["fraction_above_f2"] << ", amsler above-f1 fraction "
            << j["amsler_fraction_above_f1"] << "\n";
  return kExitOk;
}

int cmd_bobbin(const RunConfig& config) {
  const auto bp = reference::bobbin_profile(config.kappa, config.xi_max, config.ode_step);
  auto out = std::ofstream(out_path(config, "bobbin.csv"), std::ios::binary);
  if (!out) return kExitIo;
  out << "xi,s,rho,z_height,phi,sigma\n";
  for (const auto& s : bp.samples)
    out << io::fmt(s.xi) << ',' << io::fmt(s.s) << ',' << io::fmt(s.rho) << ','
        << io::fmt(s.z_height) << ',' << io::fmt(s.phi) << ',' << s.sigma << '\n';
  std::cout << "bobbin: kappa=" << config.kappa << " |s|max=" << bp.s_max
            << " arcsinh(kappa)=" << bp.half_width << " energy_residual=" << bp.energy_residual
            << "\n";
  return kExitOk;
}

int cmd_amsler(const RunConfig& config) {
  const auto sol = reference::painleve_iii(config.phi0, config.z_max, config.ode_step);
  auto out = std::ofstream(out_path(config, "amsler.csv"), std::ios::binary);
  if (!out) return kExitIo;
  out << "z,phi,dphi\n";
  for (const auto& s : sol.samples)
    out << io::fmt(s.z) << ',' << io::fmt(s.phi) << ',' << io::fmt(s.dphi) << '\n';
  std::cout << "amsler: phi0=" << config.phi0;
  if (sol.z_star)
    std::cout << " z_star=" << *sol.z_star;
  else
    std::cout << " z_star=not-reached";
  std::cout << "\n";
  return kExitOk;
}

int cmd_verify(const RunConfig& config) {
  std::string failed;
  auto require = [&](bool ok, const std::string& name) {
    if (!ok && failed.empty()) failed = name;
    std::cout << (ok ? "  ok: " : "  FAIL: ") << name << "\n";
  };
  const AsymptoticComplex cx = netgen::run_greedy(config.greedy(), config.threads);
  const auto validation = validate_complex(cx);
  require(validation.ok(), "complex validation (checkerboard, degrees, seams, rhombi)");
  if (!validation.ok())
    for (const auto& is : validation.issues) std::cout << "    " << is.code << " " << is.where << "\n";

  const SphericalNet net = build_spherical_net(cx, config.threads);
  const KSurface surf = integrate_lelieuvre(net, cx, {0, 0, 0}, config.threads);
  const EmbedReport er = validate_embedding(surf, net, cx);
  require(er.max_edge_length_err < 1e-9, "edge lengths = sin(delta) within 1e-9");
  require(er.max_planarity_err < 1e-9, "vertex-star planarity within 1e-9");
  require(er.max_quad_closure < 1e-9, "quad closure residual < 1e-9");
  require(er.max_angle_mismatch < 5 * config.delta, "3D vertex angles track |phi| within 5 delta");

  bool gauss_ok = true;
  for (const auto& b : cx.branches) {
    if (!branch_star_complete(cx, b)) continue;
    const double sum = gauss_angle_sum_at_branch(net, surf, cx, b);
    if (std::abs(sum + 4.0 * kPi) > 1e-6) gauss_ok = false;
  }
  require(gauss_ok, "Gauss map angle sum -4pi at branch vertices");

  // Hazzidakis on sampled rectangles and branch loops
  std::mt19937 rng(12345);
  int checked = 0;
  bool haz_ok = true;
  for (int attempt = 0; attempt < 400 && checked < 30; ++attempt) {
    const int sid = static_cast<int>(rng() % cx.sectors.size());
    const auto& s = cx.sectors[static_cast<size_t>(sid)];
    if (s.rows.size() < 4) continue;
    const int a = static_cast<int>(rng() % 8), b = static_cast<int>(rng() % 8);
    const int c = a + 1 + static_cast<int>(rng() % 5), d = b + 1 + static_cast<int>(rng() % 5);
    const auto loop = analysis::make_rect_loop(cx, sid, a, b, c, d);
    if (!loop) continue;
    try {
      const auto res = analysis::hazzidakis_check(cx, *loop);
      const double tol = 10.0 * config.delta * config.delta * 2.0 * ((c - a) + (d - b));
      if (res.residual() > tol) haz_ok = false;
      ++checked;
    } catch (const analysis::loop_error&) {
    }
  }
  require(haz_ok && checked > 0, "Hazzidakis identity on sampled rectangles");
  int bchecked = 0;
  bool bhaz_ok = true;
  for (const auto& b : cx.branches) {
    const auto loop = analysis::make_branch_loop(cx, b.id, 2);
    if (!loop) continue;
    try {
      const auto res = analysis::hazzidakis_check(cx, *loop);
      const double tol = 10.0 * config.delta * config.delta * 24.0;
      if (res.enclosed_branches < 1 || res.residual() > tol) bhaz_ok = false;
      ++bchecked;
    } catch (const analysis::loop_error&) {
    }
  }
  require(bhaz_ok, "branched Hazzidakis identity around branch vertices (" +
                       std::to_string(bchecked) + " loops)");

  if (!failed.empty()) {
    std::cerr << "verify: first failing invariant: " << failed << "\n";
    return kExitInvariant;
  }
  std::cout << "verify: all invariants hold\n";
  return kExitOk;
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"branched pseudospherical surface construction and analysis"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string phi0_text = "pi/2", phi_star_text = "3pi/4";
  std::vector<std::string> r_list_text;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--radius", cfg.radius, "geodesic disk radius R");
    sub->add_option("--phi0", phi0_text, "initial sector angle (radians or e.g. pi/2)");
    sub->add_option("--phi-star", phi_star_text, "cutoff angle (radians or e.g. 3pi/4)");
    sub->add_option("--delta", cfg.delta, "grid step");
    sub->add_option("--sectors", cfg.sectors, "number of initial sectors (2m)");
    sub->add_option("--max-generations", cfg.max_generations, "surgery generation cap");
    sub->add_option("--out", cfg.out_dir, "output directory");
    sub->add_option("--report", cfg.report_path, "report.json path override");
    sub->add_option("--threads", cfg.threads, "worker threads (0 = auto)");
  };

  auto* build = app.add_subcommand("build", "construct a branched surface and export it");
  add_common(build);
  auto* scan = app.add_subcommand("energy-scan", "energy comparison over a list of radii");
  add_common(scan);
  scan->add_option("--r-list", r_list_text, "radii, comma or space separated")->delimiter(',');
  auto* frontier = app.add_subcommand("frontier", "branch-angle recursion records");
  add_common(frontier);
  auto* bobbin = app.add_subcommand("bobbin", "Minding-bobbin reference profile");
  bobbin->add_option("--kappa", cfg.kappa, "throat curvature");
  bobbin->add_option("--xi-max", cfg.xi_max, "integration range");
  bobbin->add_option("--step", cfg.ode_step, "RK4 step");
  bobbin->add_option("--out", cfg.out_dir, "output directory");
  auto* amsler = app.add_subcommand("amsler", "Painleve III reference solution");
  amsler->add_option("--phi0", phi0_text, "initial angle");
  amsler->add_option("--z-max", cfg.z_max, "integration range");
  amsler->add_option("--step", cfg.ode_step, "RK4 step");
  amsler->add_option("--out", cfg.out_dir, "output directory");
  auto* verify = app.add_subcommand("verify", "run the invariant suites");
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitBadConfig;
  }

  try {
    cfg.phi0 = parse_angle(phi0_text);
    cfg.phi_star = parse_angle(phi_star_text);
    for (const auto& t : r_list_text) cfg.r_list.push_back(std::stod(t));
    if (build->parsed()) {
      cfg.command = "build";
      return cmd_build(cfg);
    }
    if (scan->parsed()) {
      cfg.command = "energy-scan";
      return cmd_energy_scan(cfg);
    }
    if (frontier->parsed()) {
      cfg.command = "frontier";
      return cmd_frontier(cfg);
    }
    if (bobbin->parsed()) {
      cfg.command = "bobbin";
      return cmd_bobbin(cfg);
    }
    if (amsler->parsed()) {
      cfg.command = "amsler";
      return cmd_amsler(cfg);
    }
    if (verify->parsed()) {
      cfg.command = "verify";
      return cmd_verify(cfg);
    }
  } catch (const io::write_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "bad config: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvariant;
  }
  return kExitBadConfig;
}

}  // namespace cli
}  // namespace psurf
