// Exact-geometry envelope oracle: direct minimization over segments and
// triangles of boundary samples, independent of the PDE solver.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "envpde/boundary.hpp"
#include "envpde/geometry.hpp"
#include "envpde/grid.hpp"

namespace envpde {

struct EnvelopeWitness {
  double value = 0.0;
  // 2 (segment) or 3 (triangle) support points with positive weights that
  // combine to the query point; weights sum to 1.
  std::vector<Point> support_points;
  std::vector<double> weights;
  // Supporting plane a . y + b: below every sample (within 1e-9), equal to
  // value at the query point.
  Point plane_a = Point::Zero();
  double plane_b = 0.0;
};

// Envelope of the sampled boundary data at x, by brute force over all sample
// pairs whose segment passes through x (within 1e-9) and all sample triples
// whose triangle contains x.  Ties prefer the segment.
// pre: x strictly inside the convex hull of the trace points.
EnvelopeWitness envelope_value(const Point& x, const BoundaryTrace& trace);

// envelope_value at every interior node (NaN elsewhere).  Nodes that fall
// outside the sample hull (possible within a sliver of the boundary) are NaN.
Eigen::ArrayXXd envelope_grid(const BoundaryTrace& trace, const Grid2D& grid);

// Samples whose gap to the witness plane is at most contact_tol; always
// includes the support points.  Default tolerance: 1e-6 * (max g - min g).
std::vector<Point> contact_points(const EnvelopeWitness& witness,
                                  const BoundaryTrace& trace,
                                  double contact_tol = -1.0);

}  // namespace envpde
