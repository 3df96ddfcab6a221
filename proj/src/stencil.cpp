#include "envpde/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace envpde {

DirectionSet make_directions(int width) {
  if (width < 1 || width > 8)
    throw std::invalid_argument("make_directions: width must lie in 1..8");
  DirectionSet set;
  set.width = width;
  // Canonical antipodal representatives: p > 0, or (p, q) = (0, 1).
  set.dirs.push_back({0, 1});
  for (int p = 1; p <= width; ++p)
    for (int q = -(width - p); q <= width - p; ++q)
      if (std::gcd(p, std::abs(q)) == 1) set.dirs.push_back({p, q});
  auto angle_mod_pi = [](const Direction& d) {
    double a = std::atan2(double(d.q), double(d.p));
    if (a < 0.0) a += EIGEN_PI;
    return a;
  };
  std::sort(set.dirs.begin(), set.dirs.end(),
            [&](const Direction& a, const Direction& b) {
              const int la = std::abs(a.p) + std::abs(a.q);
              const int lb = std::abs(b.p) + std::abs(b.q);
              if (la != lb) return la < lb;
              return angle_mod_pi(a) < angle_mod_pi(b);
            });

  // Covering radius over the full ray set {±v}.
  std::vector<double> rays;
  for (const auto& d : set.dirs) {
    double a = std::atan2(double(d.q), double(d.p));
    if (a < 0.0) a += 2.0 * EIGEN_PI;
    rays.push_back(a);
    rays.push_back(a < EIGEN_PI ? a + EIGEN_PI : a - EIGEN_PI);
  }
  std::sort(rays.begin(), rays.end());
  double max_gap = 2.0 * EIGEN_PI + rays.front() - rays.back();
  for (std::size_t k = 1; k < rays.size(); ++k)
    max_gap = std::max(max_gap, rays[k] - rays[k - 1]);
  set.dtheta = 0.5 * max_gap;

  set.orth_partner.assign(set.dirs.size(), -1);
  for (std::size_t a = 0; a < set.dirs.size(); ++a) {
    // Canonical representative of the perpendicular offset (-q, p).
    Direction perp{-set.dirs[a].q, set.dirs[a].p};
    if (perp.p < 0 || (perp.p == 0 && perp.q < 0)) {
      perp.p = -perp.p;
      perp.q = -perp.q;
    }
    for (std::size_t b = 0; b < set.dirs.size(); ++b)
      if (set.dirs[b] == perp) set.orth_partner[a] = static_cast<int>(b);
  }
  return set;
}

ArmCut arm_cut(const Grid2D& grid, const Domain& domain, int i, int j,
               const Direction& d) {
  if (!grid.is_interior(i, j))
    throw std::invalid_argument("arm_cut: node must be interior");
  ArmCut arm;
  const double full = d.norm() * grid.h;
  const Point x = grid.node(i, j);
  const Point v = d.unit();
  if (grid.is_interior(i + d.p, j + d.q)) {
    arm.fwd_interior = true;
    arm.fi = i + d.p;
    arm.fj = j + d.q;
    arm.k_plus = full;
  } else {
    // Neighbor left the domain: truncate at the exact boundary crossing.
    arm.k_plus = std::min(domain.ray_exit(x, v), full);
    arm.fwd_cut = x + arm.k_plus * v;
  }
  if (grid.is_interior(i - d.p, j - d.q)) {
    arm.bwd_interior = true;
    arm.bi = i - d.p;
    arm.bj = j - d.q;
    arm.h_minus = full;
  } else {
    arm.h_minus = std::min(domain.ray_exit(x, -v), full);
    arm.bwd_cut = x - arm.h_minus * v;
  }
  return arm;
}

DirectionalStep directional_step(const Eigen::ArrayXXd& field,
                                 const Grid2D& grid, const Domain& domain,
                                 const BoundaryDatum& datum, int i, int j,
                                 const Direction& d) {
  const ArmCut arm = arm_cut(grid, domain, i, j, d);
  DirectionalStep step;
  step.v = d.unit();
  step.k_plus = arm.k_plus;
  step.h_minus = arm.h_minus;
  step.forward_on_boundary = !arm.fwd_interior;
  step.backward_on_boundary = !arm.bwd_interior;
  step.forward_value =
      arm.fwd_interior ? field(arm.fi, arm.fj) : eval_g(datum, arm.fwd_cut);
  step.backward_value =
      arm.bwd_interior ? field(arm.bi, arm.bj) : eval_g(datum, arm.bwd_cut);
  return step;
}

double second_difference(const DirectionalStep& step, double center) {
  const double k = step.k_plus, h = step.h_minus;
  return 2.0 / (h + k) *
         ((step.forward_value - center) / k + (step.backward_value - center) / h);
}

Lambda1Result lambda1_approx(const Eigen::ArrayXXd& field, const Grid2D& grid,
                             const Domain& domain, const BoundaryDatum& datum,
                             int i, int j, const DirectionSet& dirs) {
  Lambda1Result best;
  best.value = std::numeric_limits<double>::infinity();
  const double center = field(i, j);
  for (std::size_t d = 0; d < dirs.dirs.size(); ++d) {
    const auto step = directional_step(field, grid, domain, datum, i, j, dirs.dirs[d]);
    const double val = second_difference(step, center);
    if (val < best.value) {  // strict: ties keep the smallest index
      best.value = val;
      best.dir = dirs.dirs[d];
      best.dir_index = static_cast<int>(d);
    }
  }
  return best;
}

EigenPairResult eigen_pair_approx(const Eigen::ArrayXXd& field,
                                  const Grid2D& grid, const Domain& domain,
                                  const BoundaryDatum& datum, int i, int j,
                                  const DirectionSet& dirs) {
  const double center = field(i, j);
  std::vector<double> second(dirs.dirs.size());
  for (std::size_t d = 0; d < dirs.dirs.size(); ++d)
    second[d] = second_difference(
        directional_step(field, grid, domain, datum, i, j, dirs.dirs[d]),
        center);
  EigenPairResult out;
  out.lam1 = std::numeric_limits<double>::infinity();
  int argmin = -1;
  for (std::size_t d = 0; d < dirs.dirs.size(); ++d) {
    if (dirs.orth_partner[d] < 0) continue;  // restrict to paired directions
    if (second[d] < out.lam1) {
      out.lam1 = second[d];
      argmin = static_cast<int>(d);
    }
  }
  if (argmin < 0)
    throw std::invalid_argument("eigen_pair_approx: no direction has a partner");
  const int partner = dirs.orth_partner[argmin];
  out.lam2 = second[partner];
  out.dir1 = dirs.dirs[argmin];
  out.dir2 = dirs.dirs[partner];
  return out;
}

}  // namespace envpde
