// Convex domains (disk, axis-aligned square) and exact boundary geometry.
#pragma once

#include <Eigen/Dense>

namespace envpde {

using Point = Eigen::Vector2d;

// Membership classification tolerance: |signed level| below this is Boundary.
inline constexpr double kClassifyTol = 1e-12;
// Looser tolerance used when accepting externally supplied boundary points.
inline constexpr double kBoundaryTol = 1e-9;

enum class Region { Interior, Boundary, Exterior };

class Domain {
 public:
  enum class Kind { Disk, Square };

  static Domain disk(double radius, const Point& center = Point::Zero());
  static Domain square(double half_width, const Point& center = Point::Zero());

  Kind kind() const { return kind_; }
  // Radius for disks, half-width for squares.
  double scale() const { return scale_; }
  const Point& center() const { return center_; }

  // Negative inside, zero on the boundary, positive outside.
  // Disk: |x - c| - r.  Square: max(|x1 - c1|, |x2 - c2|) - w.
  double signed_level(const Point& x) const;

  // Exactly one of Interior / Boundary / Exterior; Boundary within kClassifyTol.
  Region classify(const Point& x) const;

  // Euclidean distance from an interior point to the boundary.
  double boundary_distance(const Point& x) const;

  // Smallest t > 0 with classify(x + t*v) == Boundary, computed analytically.
  // pre: x strictly inside, v a unit vector.
  double ray_exit(const Point& x, const Point& v) const;

  double perimeter() const;

  // Point at arclength s (mod perimeter), counterclockwise.
  // Disk: starts at angle 0.  Square: starts at the (-w, -w) corner.
  Point boundary_point(double s) const;

 private:
  Domain(Kind kind, double scale, const Point& center);

  Kind kind_;
  double scale_;
  Point center_;
};

}  // namespace envpde
