// Shared helpers for the unit tests.
#pragma once

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>

#include "envpde/grid.hpp"
#include "envpde/solver.hpp"

namespace testutil {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Synthetic solution field: fn evaluated at every interior node, NaN outside.
inline envpde::SolutionField make_field(
    const envpde::Grid2D& grid,
    const std::function<double(const envpde::Point&)>& fn) {
  envpde::SolutionField f;
  f.grid = grid;
  f.values.setConstant(grid.nx, grid.ny, kNaN);
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      if (grid.is_interior(i, j)) f.values(i, j) = fn(grid.node(i, j));
  f.iterations = 0;
  f.final_residual = 0.0;
  f.converged = true;
  return f;
}

// Sup of |field - fn| over interior nodes.
inline double sup_error(const envpde::SolutionField& f,
                        const std::function<double(const envpde::Point&)>& fn) {
  double sup = 0.0;
  for (int j = 0; j < f.grid.ny; ++j)
    for (int i = 0; i < f.grid.nx; ++i)
      if (f.grid.is_interior(i, j))
        sup = std::max(sup, std::abs(f.values(i, j) - fn(f.grid.node(i, j))));
  return sup;
}

// Fresh directory under the system temp root; caller removes it.
inline std::filesystem::path temp_dir(const std::string& tag) {
  static int counter = 0;
  const auto base = std::filesystem::temp_directory_path() /
                    ("envpde_" + tag + "_" + std::to_string(::getpid()) + "_" +
                     std::to_string(counter++));
  std::filesystem::create_directories(base);
  return base;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace testutil
