#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "envpde/boundary.hpp"
#include "envpde/geometry.hpp"
#include "envpde/solver.hpp"
#include "envpde/stencil.hpp"

namespace envpde {

// State-feedback choice of the diffusion direction.  direction(x) must
// return a unit vector for any point inside the domain.
struct ControlPolicy {
  std::function<Point(const Point&)> direction;
};

// Constant direction (the argument is normalized; must be nonzero).
ControlPolicy fixed_policy(const Point& v);

// Direction of smallest directional second difference of a solved field,
// tabulated per interior node at construction; queries snap to the nearest
// node (ring search outward when the rounded node is not interior).
ControlPolicy policy_from_solution(const SolutionField& field,
                                   const Domain& domain,
                                   const BoundaryDatum& datum,
                                   const DirectionSet& dirs);

struct PathResult {
  Point exit_point;       // on the boundary (exact segment crossing)
  double exit_time = 0.0; // fractional final step
  long steps = 0;
};

// One Euler path of dX = sqrt(2) * theta(X) dW from x0 (strictly interior),
// advanced until the segment to the next iterate crosses the boundary.
// Throws SimulationError if the path exceeds 1e7 steps.
PathResult simulate_path(const Domain& domain, const ControlPolicy& policy,
                         const Point& x0, double dt, std::uint64_t seed);

struct ValueEstimate {
  Point x0;
  std::string policy;      // label for reporting, set by the caller
  double mean = 0.0;       // sample mean of the exit cost g(X_tau)
  double std_error = 0.0;  // standard error of the mean
  int n_paths = 0;
  double dt = 0.0;
  double mean_exit_time = 0.0;
};

// Independent paths with seeds seed, seed+1, ...; cost is the datum at the
// exit point.  Accumulation is pairwise, so the result does not depend on
// summation order.  Requires n_paths >= 2.
ValueEstimate estimate_value(const Domain& domain, const BoundaryDatum& datum,
                             const ControlPolicy& policy, const Point& x0,
                             double dt, int n_paths, std::uint64_t seed);

// CSV with header "x0x,x0y,policy,mean,stderr,n_paths,dt,mean_exit_time".
void write_estimates_csv(const std::string& path,
                         const std::vector<ValueEstimate>& rows);

}  // namespace envpde
