#include "envpde/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "envpde/csv.hpp"
#include "envpde/errors.hpp"

namespace envpde {

BoundaryDatum BoundaryDatum::saddle() {
  BoundaryDatum d;
  d.kind_ = Kind::Saddle;
  return d;
}

BoundaryDatum BoundaryDatum::power_cone(double eps) {
  if (!(eps > 0.0 && eps < 0.5))
    throw std::invalid_argument("power_cone: eps must lie in (0, 1/2)");
  BoundaryDatum d;
  d.kind_ = Kind::PowerCone;
  d.eps_ = eps;
  return d;
}

BoundaryDatum BoundaryDatum::abs_x() {
  BoundaryDatum d;
  d.kind_ = Kind::AbsX;
  return d;
}

BoundaryDatum BoundaryDatum::affine(const Point& a, double b) {
  BoundaryDatum d;
  d.kind_ = Kind::Affine;
  d.affine_a_ = a;
  d.const_b_ = b;
  return d;
}

BoundaryDatum BoundaryDatum::constant(double c) {
  BoundaryDatum d;
  d.kind_ = Kind::Constant;
  d.const_b_ = c;
  return d;
}

BoundaryDatum BoundaryDatum::sampled(std::vector<Point> points,
                                     Eigen::VectorXd values,
                                     double lookup_tol) {
  if (points.size() < 3)
    throw std::invalid_argument("sampled: need at least 3 samples");
  if (static_cast<Eigen::Index>(points.size()) != values.size())
    throw std::invalid_argument("sampled: points/values size mismatch");
  if (!(lookup_tol > 0.0))
    throw std::invalid_argument("sampled: lookup_tol must be > 0");
  BoundaryDatum d;
  d.kind_ = Kind::Sampled;
  d.points_ = std::move(points);
  d.values_ = std::move(values);
  d.lookup_tol_ = lookup_tol;
  return d;
}

double eval_g(const BoundaryDatum& datum, const Point& y) {
  switch (datum.kind()) {
    case BoundaryDatum::Kind::Saddle:
      return y.x() * y.x() - y.y() * y.y();
    case BoundaryDatum::Kind::PowerCone:
      return -std::pow(1.0 + y.x(), 1.0 - datum.eps());
    case BoundaryDatum::Kind::AbsX:
      return std::abs(y.x());
    case BoundaryDatum::Kind::Affine:
      return datum.affine_slope().dot(y) + datum.offset();
    case BoundaryDatum::Kind::Constant:
      return datum.offset();
    case BoundaryDatum::Kind::Sampled: {
      const auto& pts = datum.sample_points();
      double best = std::numeric_limits<double>::infinity();
      std::size_t best_i = 0;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const double d2 = (pts[i] - y).squaredNorm();
        if (d2 < best) {
          best = d2;
          best_i = i;
        }
      }
      if (std::sqrt(best) > datum.lookup_tol())
        throw std::domain_error(
            "eval_g: query farther than lookup_tol from every sample");
      return datum.sample_values()[static_cast<Eigen::Index>(best_i)];
    }
  }
  throw std::logic_error("eval_g: unreachable");
}

BoundaryTrace sample_boundary(const Domain& domain, const BoundaryDatum& datum,
                              int m) {
  if (m < 3) throw std::invalid_argument("sample_boundary: m must be >= 3");
  BoundaryTrace trace;
  const double per = domain.perimeter();
  if (domain.kind() == Domain::Kind::Disk) {
    trace.points.reserve(m);
    for (int k = 0; k < m; ++k)
      trace.points.push_back(domain.boundary_point(per * k / m));
  } else {
    // ceil(m/4) equispaced points per side, starting at each corner, so all
    // four corners are always included and gaps stay within 2x of per/m.
    const int per_side = (m + 3) / 4;
    const double side = 2.0 * domain.scale();
    trace.points.reserve(4 * static_cast<std::size_t>(per_side));
    for (int s = 0; s < 4; ++s)
      for (int k = 0; k < per_side; ++k)
        trace.points.push_back(
            domain.boundary_point(s * side + side * k / per_side));
  }
  trace.m = static_cast<int>(trace.points.size());
  trace.values.resize(trace.m);
  for (int k = 0; k < trace.m; ++k) trace.values[k] = eval_g(datum, trace.points[k]);
  if (domain.kind() == Domain::Kind::Disk) {
    trace.max_gap = per / m;
  } else {
    trace.max_gap = 2.0 * domain.scale() / ((m + 3) / 4);
  }
  return trace;
}

BoundaryDatum sampled_from_trace(const BoundaryTrace& trace) {
  return BoundaryDatum::sampled(trace.points, trace.values, trace.max_gap);
}

std::pair<double, double> datum_range(const Domain& domain,
                                      const BoundaryDatum& datum, int m) {
  if (datum.kind() == BoundaryDatum::Kind::Sampled) {
    return {datum.sample_values().minCoeff(), datum.sample_values().maxCoeff()};
  }
  const double per = domain.perimeter();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int k = 0; k < m; ++k) {
    const double g = eval_g(datum, domain.boundary_point(per * k / m));
    lo = std::min(lo, g);
    hi = std::max(hi, g);
  }
  return {lo, hi};
}

void write_trace_csv(const std::string& path, const BoundaryTrace& trace) {
  auto out = open_output(path);
  out << "x,y,g\n";
  for (int k = 0; k < trace.m; ++k)
    out << fmt17(trace.points[k].x()) << ',' << fmt17(trace.points[k].y())
        << ',' << fmt17(trace.values[k]) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

BoundaryTrace read_trace_csv(const std::string& path, const Domain& domain) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("x,y,g", 0) != 0)
    throw IoError("bad sample file header in " + path);
  BoundaryTrace trace;
  std::vector<double> vals;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    double x, y, g;
    char c1, c2;
    if (!(ss >> x >> c1 >> y >> c2 >> g) || c1 != ',' || c2 != ',')
      throw IoError(path + ": malformed row at line " + std::to_string(lineno));
    const Point p(x, y);
    if (std::abs(domain.signed_level(p)) > kBoundaryTol)
      throw IoError(path + ": point off the boundary at line " +
                    std::to_string(lineno));
    trace.points.push_back(p);
    vals.push_back(g);
  }
  if (trace.points.size() < 3)
    throw IoError(path + ": need at least 3 samples");
  trace.m = static_cast<int>(trace.points.size());
  trace.values = Eigen::Map<Eigen::VectorXd>(vals.data(), trace.m);
  // Consecutive arclength gaps (the file is expected in boundary order).
  double max_gap = 0.0;
  for (int k = 0; k < trace.m; ++k) {
    const Point a = trace.points[k];
    const Point b = trace.points[(k + 1) % trace.m];
    max_gap = std::max(max_gap, (a - b).norm());
  }
  trace.max_gap = max_gap;
  return trace;
}

}  // namespace envpde
