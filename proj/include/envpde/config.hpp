#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "envpde/geometry.hpp"
#include "envpde/solver.hpp"

namespace envpde {

enum class Command {
  Solve,
  Obstacle,
  OracleCompare,
  PucciSweep,
  McValue,
  Analyze,
  ConvergenceStudy,
};

// One batch run, parsed from a `key = value` document.  Datum/obstacle specs
// stay textual until run time (the sampled datum reads a file); their syntax
// is validated at parse time.
struct RunConfig {
  Command command = Command::Solve;
  std::optional<Domain> domain;
  std::string datum_spec;     // "saddle" | "powercone E" | "absx" |
                              // "affine AX AY B" | "constant C" |
                              // "sampled PATH TOL"
  std::string obstacle_spec;  // obstacle command only: datum forms (closed
                              // only) or "squarenorm" | "doublewell"
  int n = 65;
  int width = 2;
  double tol = 1e-8;
  int max_iter = 100000;
  SweepKind sweep = SweepKind::GaussSeidel;
  InitKind init = InitKind::ConstantMinG;
  int m = 256;                        // boundary samples for oracle work
  double gamma = 1.0;                 // pucci-sweep
  std::vector<double> big_gammas{1.0, 4.0, 16.0, 64.0, 256.0};
  Point x0 = Point::Zero();           // mc-value start
  double dt = 1e-4;
  int n_paths = 10000;
  std::vector<std::string> policies{"feedback"};  // ex | ey | fixed:VX:VY |
                                                  // feedback
  double alpha = 0.8;                 // analyze
  int n_pairs = 100000;
  double holder_margin = 0.5;         // boundary clearance of the region
  std::uint64_t seed = 0;
  std::string out = "out";
  bool quiet = false;
};

// Throws ConfigError naming the offending key and line.
RunConfig parse_config(const std::string& text);

// Executes the command, writing CSV artifacts and summary.txt under
// config.out (summary.txt is written even on failure, with the error
// recorded).  Returns the process exit code: 0 success, 2 configuration
// error, 3 non-convergence or simulation failure, 4 IO error.
int run(const RunConfig& config);

}  // namespace envpde
