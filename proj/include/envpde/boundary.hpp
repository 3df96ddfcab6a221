// Boundary data: analytic datum families, boundary sampling, CSV round trip.
#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "envpde/geometry.hpp"

namespace envpde {

class BoundaryDatum {
 public:
  enum class Kind { Saddle, PowerCone, AbsX, Affine, Constant, Sampled };

  static BoundaryDatum saddle();                  // g = x^2 - y^2
  static BoundaryDatum power_cone(double eps);    // g = -(1 + x)^(1 - eps), 0 < eps < 1/2
  static BoundaryDatum abs_x();                   // g = |x|
  static BoundaryDatum affine(const Point& a, double b);  // g = a . x + b
  static BoundaryDatum constant(double c);
  // Points must lie on some domain boundary; lookup accepts query points
  // within lookup_tol of the nearest sample (ties by lowest index).
  static BoundaryDatum sampled(std::vector<Point> points,
                               Eigen::VectorXd values, double lookup_tol);

  Kind kind() const { return kind_; }
  double eps() const { return eps_; }
  const Point& affine_slope() const { return affine_a_; }
  double offset() const { return const_b_; }
  const std::vector<Point>& sample_points() const { return points_; }
  const Eigen::VectorXd& sample_values() const { return values_; }
  double lookup_tol() const { return lookup_tol_; }

 private:
  BoundaryDatum() = default;
  Kind kind_ = Kind::Constant;
  double eps_ = 0.0;
  Point affine_a_ = Point::Zero();
  double const_b_ = 0.0;
  std::vector<Point> points_;
  Eigen::VectorXd values_;
  double lookup_tol_ = 0.0;
};

// Evaluate the datum at a boundary point.  Analytic kinds use their closed
// forms; Sampled looks up the nearest stored point and throws
// std::domain_error when the query is farther than lookup_tol from every
// sample.  pre (callers'): y on the domain boundary within 1e-9.
double eval_g(const BoundaryDatum& datum, const Point& y);

struct BoundaryTrace {
  int m = 0;                  // sample count
  std::vector<Point> points;  // ordered by boundary arclength parameter
  Eigen::VectorXd values;
  double max_gap = 0.0;       // max consecutive arclength gap
};

// m >= 3 approximately equispaced-by-arclength samples with values.
// Disk: exactly equispaced angles starting at angle 0.  Square: the four
// corners are always included; ceil(m/4) equispaced points per side.
BoundaryTrace sample_boundary(const Domain& domain, const BoundaryDatum& datum,
                              int m);

// Wrap a trace as a Sampled datum (lookup tolerance = trace.max_gap).
BoundaryDatum sampled_from_trace(const BoundaryTrace& trace);

// (min, max) of the datum over a dense boundary sampling.
std::pair<double, double> datum_range(const Domain& domain,
                                      const BoundaryDatum& datum,
                                      int m = 4096);

// CSV with header x,y,g.
void write_trace_csv(const std::string& path, const BoundaryTrace& trace);
// Reads a trace; every point must lie on the domain boundary within 1e-9.
BoundaryTrace read_trace_csv(const std::string& path, const Domain& domain);

}  // namespace envpde
