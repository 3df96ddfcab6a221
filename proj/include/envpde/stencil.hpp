// Wide-stencil lattice directions and monotone directional second differences.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "envpde/boundary.hpp"
#include "envpde/geometry.hpp"
#include "envpde/grid.hpp"

namespace envpde {

struct Direction {
  int p = 0, q = 0;
  Point unit() const {
    const double n = norm();
    return Point(p / n, q / n);
  }
  double norm() const { return std::sqrt(double(p) * p + double(q) * q); }
  bool operator==(const Direction&) const = default;
};

struct DirectionSet {
  int width = 0;
  // Coprime offsets with |p| + |q| <= width, one per antipodal pair,
  // sorted by (|p| + |q|, angle mod pi).
  std::vector<Direction> dirs;
  // Covering radius: worst-case angle from an arbitrary unit vector to the
  // nearest stencil ray.  Always <= pi / dirs.size().
  double dtheta = 0.0;
  // Index of the orthogonal lattice partner of each direction (-1 if absent;
  // for these L1 balls a partner always exists).
  std::vector<int> orth_partner;
};

// width in 1..8.  width 1 -> {(1,0),(0,1)}; width 2 adds {(1,1),(1,-1)};
// width 3 adds {(2,1),(1,2),(1,-2),(2,-1)}.
DirectionSet make_directions(int width);

// Geometry of the two arms of a stencil direction at a node: either the
// neighbor node itself or the exact ray/boundary intersection when the
// neighbor leaves the domain.  Boundary data enters only through these
// truncated arms.
struct ArmCut {
  bool fwd_interior = false;
  int fi = 0, fj = 0;      // neighbor indices when fwd_interior
  double k_plus = 0.0;     // forward step length (= |(p,q)| h untruncated)
  Point fwd_cut;           // boundary intersection when truncated
  bool bwd_interior = false;
  int bi = 0, bj = 0;
  double h_minus = 0.0;
  Point bwd_cut;
};

ArmCut arm_cut(const Grid2D& grid, const Domain& domain, int i, int j,
               const Direction& d);

struct DirectionalStep {
  Point v;                     // unit direction
  double k_plus = 0.0;         // forward step length
  double h_minus = 0.0;        // backward step length
  double forward_value = 0.0;
  double backward_value = 0.0;
  bool forward_on_boundary = false;
  bool backward_on_boundary = false;
};

// pre: (i, j) interior.  Truncated arms evaluate the datum at the exact
// ray/boundary intersection; 0 < step length <= |(p,q)| h always.
DirectionalStep directional_step(const Eigen::ArrayXXd& field,
                                 const Grid2D& grid, const Domain& domain,
                                 const BoundaryDatum& datum, int i, int j,
                                 const Direction& d);

// Nonuniform three-point second difference along the step's direction:
//   2/(h+k) * [ (forward - center)/k + (backward - center)/h ].
// Exact on quadratics; coefficients 2/((h+k)k), 2/((h+k)h), -2/(hk) are a
// positive/positive/negative monotone triple.
double second_difference(const DirectionalStep& step, double center);

struct Lambda1Result {
  double value = 0.0;
  Direction dir;   // argmin direction (ties resolved to the smallest index)
  int dir_index = -1;
};

// Smallest directional second difference over the stencil.
Lambda1Result lambda1_approx(const Eigen::ArrayXXd& field, const Grid2D& grid,
                             const Domain& domain, const BoundaryDatum& datum,
                             int i, int j, const DirectionSet& dirs);

struct EigenPairResult {
  double lam1 = 0.0, lam2 = 0.0;
  Direction dir1, dir2;  // argmin direction and its orthogonal partner
};

// lam1 minimizes the second difference over directions that have an
// orthogonal lattice partner; lam2 is the second difference along the
// argmin's partner.
EigenPairResult eigen_pair_approx(const Eigen::ArrayXXd& field,
                                  const Grid2D& grid, const Domain& domain,
                                  const BoundaryDatum& datum, int i, int j,
                                  const DirectionSet& dirs);

}  // namespace envpde
