#pragma once

#include <string>
#include <vector>

#include "psurf/complex.hpp"

namespace psurf {
namespace cli {

// exit codes: 0 success, 1 invariant failure, 2 bad config, 3 I/O
constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitBadConfig = 2;
constexpr int kExitIo = 3;

struct RunConfig {
  std::string command;
  double radius = 3.0;
  double phi0 = 1.5707963267948966;
  double phi_star = 2.356194490192345;
  double delta = 0.05;
  int sectors = 4;  // 2m
  int max_generations = 64;
  std::string out_dir = ".";
  std::string report_path;  // default: <out>/report.json
  int threads = 0;          // 0 = available parallelism
  std::vector<double> r_list;
  // bobbin / amsler parameters
  double kappa = 3.0;
  double z_max = 12.0;
  double xi_max = 8.0;
  double ode_step = 1e-3;

  GreedyParams greedy() const;
};

/// Accepts plain radians or fractions of pi like "3pi/4", "pi/2", "0.5pi".
double parse_angle(const std::string& text);

int cmd_build(const RunConfig& config);
int cmd_energy_scan(const RunConfig& config);
int cmd_frontier(const RunConfig& config);
int cmd_bobbin(const RunConfig& config);
int cmd_amsler(const RunConfig& config);
int cmd_verify(const RunConfig& config);

/// Full argv-level entry point (parses flags, dispatches subcommands).
int run_cli(int argc, const char* const* argv);

}  // namespace cli
}  // namespace psurf
