#include "envpde/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "envpde/csv.hpp"
#include "envpde/errors.hpp"

namespace envpde {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Affine walk from (i, j) along orientation sgn * d: every node value must
// match u0 + slope * arclength within trace_tol, and so must the datum at
// the final boundary cut.
bool trace_to_boundary(const SolutionField& field, const BoundaryProblem& pb,
                       int i, int j, const Direction& d, int sgn, double u0,
                       double slope, double trace_tol) {
  const Grid2D& g = field.grid;
  const double L = d.norm() * g.h;
  int ci = i, cj = j;
  int k = 0;
  while (true) {
    const int ni = ci + sgn * d.p, nj = cj + sgn * d.q;
    if (!g.in_bounds(ni, nj) || !g.is_interior(ni, nj)) break;
    ++k;
    ci = ni;
    cj = nj;
    const double expect = u0 + slope * (sgn * k * L);
    if (std::abs(field.values(ci, cj) - expect) > trace_tol) return false;
  }
  const ArmCut arm = arm_cut(g, pb.domain, ci, cj, d);
  const bool truncated = sgn > 0 ? !arm.fwd_interior : !arm.bwd_interior;
  if (!truncated) return false;  // interior neighbor out of bounds: no cut
  const double cut_len = sgn > 0 ? arm.k_plus : arm.h_minus;
  const Point y = sgn > 0 ? arm.fwd_cut : arm.bwd_cut;
  const double expect = u0 + slope * (sgn * (k * L + cut_len));
  return std::abs(eval_g(pb.datum, y) - expect) <= trace_tol;
}

}  // namespace

ContactScan contact_scan(const SolutionField& field,
                         const BoundaryProblem& problem,
                         const DirectionSet& dirs, double flat_tol,
                         double trace_tol) {
  if (!(flat_tol > 0.0) || !(trace_tol > 0.0))
    throw std::invalid_argument("contact_scan: tolerances must be > 0");
  const Grid2D& g = field.grid;
  ContactScan scan;
  scan.flat_tol = flat_tol;
  scan.trace_tol = trace_tol;
  scan.n_flat.setConstant(g.nx, g.ny, -1);
  scan.segment_hit.setConstant(g.nx, g.ny, 0);
  const int nd = static_cast<int>(dirs.dirs.size());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!g.is_interior(i, j)) continue;
      const double c = field.values(i, j);
      int flat = 0;
      bool hit = false;
      for (int d = 0; d < nd; ++d) {
        const DirectionalStep st = directional_step(
            field.values, g, problem.domain, problem.datum, i, j,
            dirs.dirs[d]);
        const double D = second_difference(st, c);
        if (std::abs(D) > flat_tol) continue;
        ++flat;
        if (hit) continue;
        const double slope =
            (st.forward_value - st.backward_value) / (st.k_plus + st.h_minus);
        hit = trace_to_boundary(field, problem, i, j, dirs.dirs[d], +1, c,
                                slope, trace_tol) ||
              trace_to_boundary(field, problem, i, j, dirs.dirs[d], -1, c,
                                slope, trace_tol);
      }
      scan.n_flat(i, j) = flat;
      scan.segment_hit(i, j) = hit ? 1 : 0;
    }
  return scan;
}

void write_contact_csv(const std::string& path, const ContactScan& scan) {
  auto out = open_output(path);
  out << "i,j,n_flat,segment_hit\n";
  for (int j = 0; j < scan.n_flat.cols(); ++j)
    for (int i = 0; i < scan.n_flat.rows(); ++i) {
      if (scan.n_flat(i, j) < 0) continue;
      out << i << ',' << j << ',' << scan.n_flat(i, j) << ','
          << int(scan.segment_hit(i, j)) << '\n';
    }
  if (!out) throw IoError("write failed: " + path);
}

GradientField gradient_field(const SolutionField& field,
                             const BoundaryProblem& problem, double kink_tol) {
  const Grid2D& g = field.grid;
  GradientField out;
  out.gx.setConstant(g.nx, g.ny, kNaN);
  out.gy.setConstant(g.nx, g.ny, kNaN);
  out.kink.setConstant(g.nx, g.ny, 0);
  if (kink_tol < 0.0) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        if (g.is_interior(i, j)) {
          lo = std::min(lo, field.values(i, j));
          hi = std::max(hi, field.values(i, j));
        }
    kink_tol = 0.5 * (hi - lo);
  }
  const Direction ex{1, 0}, ey{0, 1};
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!g.is_interior(i, j)) continue;
      const double c = field.values(i, j);
      bool kink = false;
      for (int axis = 0; axis < 2; ++axis) {
        const DirectionalStep st =
            directional_step(field.values, g, problem.domain, problem.datum,
                             i, j, axis == 0 ? ex : ey);
        const double fs = (st.forward_value - c) / st.k_plus;
        const double bs = (c - st.backward_value) / st.h_minus;
        const double grad =
            (st.h_minus * fs + st.k_plus * bs) / (st.h_minus + st.k_plus);
        (axis == 0 ? out.gx : out.gy)(i, j) = grad;
        if (std::abs(fs - bs) > kink_tol) kink = true;
      }
      out.kink(i, j) = kink ? 1 : 0;
    }
  return out;
}

HolderResult holder_quotient(const GradientField& grad, const Grid2D& grid,
                             const std::function<bool(const Point&)>& region,
                             double alpha, int n_pairs, std::uint64_t seed) {
  if (!(alpha > 0.0) || !(alpha <= 1.0))
    throw std::invalid_argument("holder_quotient: alpha must be in (0, 1]");
  if (n_pairs < 1)
    throw std::invalid_argument("holder_quotient: n_pairs must be >= 1");
  std::vector<std::pair<int, int>> nodes;
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      if (!grid.is_interior(i, j)) continue;
      if (!region(grid.node(i, j))) continue;
      if (!std::isfinite(grad.gx(i, j)) || !std::isfinite(grad.gy(i, j)))
        continue;
      if (grad.kink(i, j) != 0) continue;  // quotient concerns C^1 regions
      nodes.emplace_back(i, j);
    }
  const std::size_t n = nodes.size();
  HolderResult out;
  if (n < 2) return out;
  const auto consider = [&](std::size_t a, std::size_t b) {
    const auto [ia, ja] = nodes[a];
    const auto [ib, jb] = nodes[b];
    const Point ga(grad.gx(ia, ja), grad.gy(ia, ja));
    const Point gb(grad.gx(ib, jb), grad.gy(ib, jb));
    const double dist = (grid.node(ia, ja) - grid.node(ib, jb)).norm();
    const double q = (ga - gb).norm() / std::pow(dist, alpha);
    if (q > out.sup_quotient) {
      out.sup_quotient = q;
      out.x1 = grid.node(ia, ja);
      out.x2 = grid.node(ib, jb);
    }
  };
  const double total = 0.5 * double(n) * double(n - 1);
  if (total <= double(n_pairs)) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) consider(a, b);
    return out;
  }
  std::mt19937_64 rng(seed);
  for (int k = 0; k < n_pairs; ++k) {
    const std::size_t a = rng() % n;
    const std::size_t b = rng() % n;
    if (a == b) continue;
    consider(a, b);
  }
  return out;
}

HolderResult holder_quotient(const GradientField& grad, const Grid2D& grid,
                             const Domain& domain, double alpha,
                             double min_boundary_distance, int n_pairs,
                             std::uint64_t seed) {
  return holder_quotient(
      grad, grid,
      [&](const Point& x) {
        return domain.boundary_distance(x) >= min_boundary_distance;
      },
      alpha, n_pairs, seed);
}

BoundaryGapResult boundary_gap(const SolutionField& field,
                               const BoundaryProblem& problem,
                               const DirectionSet& dirs) {
  const Grid2D& g = field.grid;
  BoundaryGapResult best;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!g.is_interior(i, j)) continue;
      const double c = field.values(i, j);
      for (const Direction& d : dirs.dirs) {
        const ArmCut arm = arm_cut(g, problem.domain, i, j, d);
        const auto consider = [&](bool truncated, const Point& y) {
          if (!truncated) return;
          const double gap = std::abs(c - eval_g(problem.datum, y));
          if (gap > best.max_gap) {
            best.max_gap = gap;
            best.location = y;
            best.i = i;
            best.j = j;
          }
        };
        consider(!arm.fwd_interior, arm.fwd_cut);
        consider(!arm.bwd_interior, arm.bwd_cut);
      }
    }
  return best;
}

Eigen::ArrayXXd ma_residual(const SolutionField& field) {
  const Grid2D& g = field.grid;
  Eigen::ArrayXXd out(g.nx, g.ny);
  out.setConstant(kNaN);
  const double inv_h2 = 1.0 / (g.h * g.h);
  for (int j = 1; j + 1 < g.ny; ++j)
    for (int i = 1; i + 1 < g.nx; ++i) {
      bool ok = true;
      for (int dj = -1; dj <= 1 && ok; ++dj)
        for (int di = -1; di <= 1 && ok; ++di)
          ok = g.is_interior(i + di, j + dj);
      if (!ok) continue;
      const auto& u = field.values;
      const double uxx = (u(i + 1, j) - 2.0 * u(i, j) + u(i - 1, j)) * inv_h2;
      const double uyy = (u(i, j + 1) - 2.0 * u(i, j) + u(i, j - 1)) * inv_h2;
      const double uxy = (u(i + 1, j + 1) - u(i + 1, j - 1) - u(i - 1, j + 1) +
                          u(i - 1, j - 1)) *
                         (0.25 * inv_h2);
      out(i, j) = uxx * uyy - uxy * uxy;
    }
  return out;
}

double masked_mean_abs(const Eigen::ArrayXXd& values, const Grid2D& grid,
                       const Domain& domain, double min_boundary_distance) {
  double acc = 0.0;
  long count = 0;
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      if (!grid.is_interior(i, j)) continue;
      if (domain.boundary_distance(grid.node(i, j)) < min_boundary_distance)
        continue;
      const double v = values(i, j);
      if (!std::isfinite(v)) continue;
      acc += std::abs(v);
      ++count;
    }
  return count > 0 ? acc / double(count) : 0.0;
}

double masked_sup_abs_diff(const Eigen::ArrayXXd& a, const Eigen::ArrayXXd& b,
                           const Grid2D& grid, const Domain& domain,
                           double min_boundary_distance) {
  double sup = 0.0;
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      if (!grid.is_interior(i, j)) continue;
      if (domain.boundary_distance(grid.node(i, j)) < min_boundary_distance)
        continue;
      if (!std::isfinite(a(i, j)) || !std::isfinite(b(i, j))) continue;
      sup = std::max(sup, std::abs(a(i, j) - b(i, j)));
    }
  return sup;
}

}  // namespace envpde
