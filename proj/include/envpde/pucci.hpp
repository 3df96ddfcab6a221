#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "envpde/solver.hpp"
#include "envpde/stencil.hpp"

namespace envpde {

// Ellipticity bounds for the extremal (minimal) Pucci operator.  Requires
// 0 < gamma <= Gamma.
struct PucciParams {
  double gamma = 1.0;
  double Gamma = 1.0;
};

void validate(const PucciParams& params);

// Minimal Pucci operator applied to a Hessian spectrum, in the convention
// where the operator is nonincreasing in the eigenvalues:
//   -(gamma * sum(max(lambda, 0)) + Gamma * sum(min(lambda, 0))).
// A convex function therefore has a nonpositive value.
double pucci_minimal_value(const Eigen::Ref<const Eigen::VectorXd>& eigenvalues,
                           const PucciParams& params);

// Discrete counterpart on the stencil: for each orthogonal direction pair the
// two second differences stand in for the spectrum; the extremal combination
// is taken over pairs.  Exterior nodes are NaN.
Eigen::ArrayXXd pucci_minimal_approx(const SolutionField& field,
                                     const Domain& domain,
                                     const BoundaryDatum& datum,
                                     const DirectionSet& dirs,
                                     const PucciParams& params);

// Solve pucci_minimal_approx[u] = 0 with the problem's Dirichlet data, by
// sweeping the per-node closed-form root of the pair-wise extremal
// combination.  Same iteration controls and failure mode as solve_dirichlet.
SolutionField solve_pucci_min(const BoundaryProblem& problem,
                              const Grid2D& grid, const DirectionSet& dirs,
                              const PucciParams& params,
                              const SolverConfig& config);

SolutionField solve_pucci_min(const BoundaryProblem& problem,
                              const Grid2D& grid, const DirectionSet& dirs,
                              const PucciParams& params,
                              const SolverConfig& config,
                              const Eigen::ArrayXXd& initial);

// Distance of the extremal-operator solution to a reference field as the
// ellipticity ratio Gamma/gamma grows.  Each solve warm-starts from the
// previous one; the sup-distance is taken over interior nodes at least
// three grid spacings from the boundary, where arm truncation plays no role.
// NaN reference entries are skipped; throws SimulationError if any solve in
// the sweep fails to converge.
struct RatioSweepResult {
  std::vector<double> ratios;         // Gamma / gamma, in input order
  std::vector<double> sup_distances;  // sup-norm gaps to the reference
};

RatioSweepResult ratio_sweep(const BoundaryProblem& problem, const Grid2D& grid,
                             const DirectionSet& dirs, double gamma,
                             const std::vector<double>& Gammas,
                             const SolverConfig& config,
                             const Eigen::ArrayXXd& reference);

// CSV with header "ratio,sup_distance", one row per sweep entry.
void write_sweep_csv(const std::string& path, const RatioSweepResult& sweep);

}  // namespace envpde
