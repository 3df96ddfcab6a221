#include "envpde/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace envpde {

Domain::Domain(Kind kind, double scale, const Point& center)
    : kind_(kind), scale_(scale), center_(center) {
  if (!(scale > 0.0)) throw std::invalid_argument("Domain: scale must be > 0");
}

Domain Domain::disk(double radius, const Point& center) {
  return Domain(Kind::Disk, radius, center);
}

Domain Domain::square(double half_width, const Point& center) {
  return Domain(Kind::Square, half_width, center);
}

double Domain::signed_level(const Point& x) const {
  const Point d = x - center_;
  if (kind_ == Kind::Disk) return d.norm() - scale_;
  return d.cwiseAbs().maxCoeff() - scale_;
}

Region Domain::classify(const Point& x) const {
  const double level = signed_level(x);
  if (std::abs(level) <= kClassifyTol) return Region::Boundary;
  return level < 0.0 ? Region::Interior : Region::Exterior;
}

double Domain::boundary_distance(const Point& x) const {
  // For interior points of both kinds the nearest boundary point lies along
  // a coordinate axis (square) or the radial ray (disk), so -level is exact.
  return -signed_level(x);
}

double Domain::ray_exit(const Point& x, const Point& v) const {
  const Point d = x - center_;
  if (kind_ == Kind::Disk) {
    // |d + t v|^2 = r^2 with |v| = 1; interior start makes c0 < 0, so the
    // discriminant is positive and the + root is the forward exit.
    const double b = d.dot(v);
    const double c0 = d.squaredNorm() - scale_ * scale_;
    return -b + std::sqrt(b * b - c0);
  }
  double t = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < 2; ++axis) {
    if (v[axis] == 0.0) continue;
    const double face = v[axis] > 0.0 ? scale_ : -scale_;
    t = std::min(t, (face - d[axis]) / v[axis]);
  }
  return t;
}

double Domain::perimeter() const {
  if (kind_ == Kind::Disk) return 2.0 * EIGEN_PI * scale_;
  return 8.0 * scale_;
}

Point Domain::boundary_point(double s) const {
  const double per = perimeter();
  s = std::fmod(s, per);
  if (s < 0.0) s += per;
  if (kind_ == Kind::Disk) {
    const double theta = s / scale_;
    return center_ + scale_ * Point(std::cos(theta), std::sin(theta));
  }
  const double w = scale_;
  const double side = 2.0 * w;
  if (s < side) return center_ + Point(-w + s, -w);
  if (s < 2.0 * side) return center_ + Point(w, -w + (s - side));
  if (s < 3.0 * side) return center_ + Point(w - (s - 2.0 * side), w);
  return center_ + Point(-w, w - (s - 3.0 * side));
}

}  // namespace envpde
