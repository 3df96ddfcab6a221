#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include <Eigen/Dense>

#include "envpde/geometry.hpp"
#include "envpde/grid.hpp"
#include "envpde/solver.hpp"
#include "envpde/stencil.hpp"

namespace envpde {

// Per-node count of stencil directions whose second difference vanishes
// within flat_tol, and whether some flat direction extends, affinely within
// trace_tol, to the boundary data in at least one orientation.
struct ContactScan {
  Eigen::ArrayXXi n_flat;  // -1 outside the interior
  Eigen::Array<unsigned char, Eigen::Dynamic, Eigen::Dynamic> segment_hit;
  double flat_tol = 0.0;
  double trace_tol = 0.0;
};

// flat_tol is in second-difference units (curvature); the default scales a
// solver tolerance by the 2/h^2 weight of the center coefficient.
inline double default_flat_tol(double h, double solver_tol) {
  return 10.0 * solver_tol * 2.0 / (h * h);
}
// trace_tol is in solution units; proportional to h and to the datum range.
inline double default_trace_tol(double h, double datum_range) {
  return 5.0 * h * datum_range;
}

ContactScan contact_scan(const SolutionField& field,
                         const BoundaryProblem& problem,
                         const DirectionSet& dirs, double flat_tol,
                         double trace_tol);

// CSV with header "i,j,n_flat,segment_hit", one row per interior node.
void write_contact_csv(const std::string& path, const ContactScan& scan);

// Axis gradients from the nonuniform centered first difference (boundary
// arms evaluate the datum at the exact cut).  kink flags nodes where the
// forward and backward slopes differ by more than kink_tol along either
// axis; kink_tol < 0 selects half the interior field range.
struct GradientField {
  Eigen::ArrayXXd gx, gy;  // NaN outside the interior
  Eigen::Array<unsigned char, Eigen::Dynamic, Eigen::Dynamic> kink;
};

GradientField gradient_field(const SolutionField& field,
                             const BoundaryProblem& problem,
                             double kink_tol = -1.0);

// sup |grad u(x1) - grad u(x2)| / |x1 - x2|^alpha over sampled node pairs
// inside a region, with the pair attaining it.  Kink-flagged nodes are
// excluded (the quotient concerns C^1 regions).  All pairs are used when
// there are at most n_pairs of them; otherwise n_pairs independent draws
// from the given seed.
struct HolderResult {
  double sup_quotient = 0.0;
  Point x1 = Point::Zero(), x2 = Point::Zero();  // witness pair
};

HolderResult holder_quotient(const GradientField& grad, const Grid2D& grid,
                             const std::function<bool(const Point&)>& region,
                             double alpha, int n_pairs, std::uint64_t seed);

// Convenience region: nodes at least min_boundary_distance inside the domain.
HolderResult holder_quotient(const GradientField& grad, const Grid2D& grid,
                             const Domain& domain, double alpha,
                             double min_boundary_distance, int n_pairs,
                             std::uint64_t seed);

// Largest jump between a node value and the datum at one of its truncated
// arm cuts: where the solution does not attain the boundary data, this
// stays order one as the grid refines.
struct BoundaryGapResult {
  double max_gap = 0.0;
  Point location = Point::Zero();  // boundary cut realizing the maximum
  int i = -1, j = -1;              // node of the arm
};

BoundaryGapResult boundary_gap(const SolutionField& field,
                               const BoundaryProblem& problem,
                               const DirectionSet& dirs);

// Determinant of the centered-difference Hessian; NaN where the 3x3 node
// neighborhood is not fully interior.
Eigen::ArrayXXd ma_residual(const SolutionField& field);

// Mean of |values| over interior nodes at least min_boundary_distance
// inside the domain (NaN entries skipped).
double masked_mean_abs(const Eigen::ArrayXXd& values, const Grid2D& grid,
                       const Domain& domain, double min_boundary_distance);

// Sup of |a - b| over the same mask (entries where either is NaN skipped).
double masked_sup_abs_diff(const Eigen::ArrayXXd& a, const Eigen::ArrayXXd& b,
                           const Grid2D& grid, const Domain& domain,
                           double min_boundary_distance);

}  // namespace envpde
