// Iterative monotone solver for the smallest-eigenvalue Dirichlet problem and
// its obstacle variant.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "envpde/boundary.hpp"
#include "envpde/geometry.hpp"
#include "envpde/grid.hpp"
#include "envpde/stencil.hpp"

namespace envpde {

struct BoundaryProblem {
  Domain domain;
  BoundaryDatum datum;
};

enum class SweepKind { GaussSeidel, Jacobi };
enum class InitKind { ConstantMinG, Zero };

struct SolverConfig {
  double tol = 1e-8;       // sup-norm update threshold
  int max_iter = 100000;   // sweep cap
  SweepKind sweep = SweepKind::GaussSeidel;
  InitKind init = InitKind::ConstantMinG;
};

struct SolutionField {
  Grid2D grid;
  Eigen::ArrayXXd values;  // NaN at non-interior nodes
  int iterations = 0;
  double final_residual = std::numeric_limits<double>::infinity();
  bool converged = false;
  std::vector<double> residual_history;  // per-sweep sup update
};

// Per-node fixed point: the smallest zero-second-difference value over the
// stencil, (h_minus * forward + k_plus * backward) / (h_minus + k_plus).
// Nondecreasing in every forward/backward value.
double local_update(const std::vector<DirectionalStep>& steps);

SolutionField solve_dirichlet(const BoundaryProblem& problem, const Grid2D& grid,
                              const DirectionSet& dirs, const SolverConfig& cfg);
// Warm-started variant: initial supplies the starting interior values
// (shape must match the grid); cfg.init is ignored.
SolutionField solve_dirichlet(const BoundaryProblem& problem, const Grid2D& grid,
                              const DirectionSet& dirs, const SolverConfig& cfg,
                              const Eigen::ArrayXXd& initial);

// Envelope of a function on the closed domain: at every node the update is
// capped by the obstacle; boundary-truncated arms evaluate the obstacle at
// the exact boundary intersection.
SolutionField solve_obstacle(const Domain& domain,
                             const std::function<double(const Point&)>& obstacle,
                             const Grid2D& grid, const DirectionSet& dirs,
                             const SolverConfig& cfg);

// Smallest directional second difference at every interior node (NaN outside).
Eigen::ArrayXXd residual_field(const SolutionField& field,
                               const BoundaryProblem& problem,
                               const DirectionSet& dirs);

// Bilinear interpolation of a coarse-grid field onto fine-grid nodes, for
// warm-starting refinement ladders.  Cell corners that carry no value (NaN,
// e.g. exterior nodes) drop out of the weighting; fill is used when no
// corner has one.
Eigen::ArrayXXd prolong_bilinear(const Eigen::ArrayXXd& coarse,
                                 const Grid2D& coarse_grid,
                                 const Grid2D& fine_grid, double fill);

// CSV with header i,j,x,y,u over all grid nodes, row-major in j (then i);
// non-interior nodes leave u empty.
void write_field_csv(const std::string& path, const SolutionField& field);
// CSV with header iter,residual (1-based sweep index).
void write_residuals_csv(const std::string& path,
                         const std::vector<double>& residual_history);

}  // namespace envpde
