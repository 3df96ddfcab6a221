#include "envpde/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "arm_table.hpp"
#include "envpde/csv.hpp"
#include "envpde/errors.hpp"

namespace envpde {

namespace detail {

ArmTable build_arm_table(
    const Grid2D& grid, const Domain& domain, const DirectionSet& dirs,
    const std::function<double(const Point&)>& value_on_boundary) {
  ArmTable t;
  t.ndirs = static_cast<int>(dirs.dirs.size());
  t.node_slots = grid.nx * grid.ny;
  std::vector<double> constants;
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      if (grid.is_interior(i, j)) {
        t.node_i.push_back(i);
        t.node_j.push_back(j);
        t.self.push_back(static_cast<int32_t>(i + grid.nx * j));
      }
  t.nnodes = static_cast<int>(t.node_i.size());
  t.slot_f.resize(static_cast<std::size_t>(t.nnodes) * t.ndirs);
  t.slot_b.resize(t.slot_f.size());
  t.wf.resize(t.slot_f.size());
  t.wb.resize(t.slot_f.size());
  t.inv_hk2.resize(t.slot_f.size());
  for (int n = 0; n < t.nnodes; ++n) {
    for (int d = 0; d < t.ndirs; ++d) {
      const ArmCut arm =
          arm_cut(grid, domain, t.node_i[n], t.node_j[n], dirs.dirs[d]);
      const std::size_t a = static_cast<std::size_t>(n) * t.ndirs + d;
      if (arm.fwd_interior) {
        t.slot_f[a] = static_cast<int32_t>(arm.fi + grid.nx * arm.fj);
      } else {
        t.slot_f[a] = static_cast<int32_t>(t.node_slots + constants.size());
        constants.push_back(value_on_boundary(arm.fwd_cut));
      }
      if (arm.bwd_interior) {
        t.slot_b[a] = static_cast<int32_t>(arm.bi + grid.nx * arm.bj);
      } else {
        t.slot_b[a] = static_cast<int32_t>(t.node_slots + constants.size());
        constants.push_back(value_on_boundary(arm.bwd_cut));
      }
      const double k = arm.k_plus, h = arm.h_minus;
      t.wf[a] = h / (h + k);
      t.wb[a] = k / (h + k);
      t.inv_hk2[a] = 2.0 / (h * k);
    }
  }
  t.buffer.assign(static_cast<std::size_t>(t.node_slots) + constants.size(),
                  std::numeric_limits<double>::quiet_NaN());
  std::copy(constants.begin(), constants.end(),
            t.buffer.begin() + t.node_slots);

  // Alternating sweep orders: lexicographic in (j, i), its reverse, and the
  // two mixed orientations.  Node list is already (j asc, i asc).
  auto& o0 = t.orders[0];
  o0.resize(t.nnodes);
  for (int n = 0; n < t.nnodes; ++n) o0[n] = n;
  t.orders[1].assign(o0.rbegin(), o0.rend());
  auto& o2 = t.orders[2];  // j asc, i desc
  o2 = o0;
  std::sort(o2.begin(), o2.end(), [&](int32_t a, int32_t b) {
    if (t.node_j[a] != t.node_j[b]) return t.node_j[a] < t.node_j[b];
    return t.node_i[a] > t.node_i[b];
  });
  t.orders[3].assign(o2.rbegin(), o2.rend());
  return t;
}

namespace {

// One Gauss-Seidel sweep (in place); returns the sup update.
// obstacle: optional per-node cap, empty when absent.
double sweep_gauss_seidel(ArmTable& t, int order, const std::vector<double>& obstacle) {
  double sup = 0.0;
  const int nd = t.ndirs;
  const double* wf = t.wf.data();
  const double* wb = t.wb.data();
  const int32_t* sf = t.slot_f.data();
  const int32_t* sb = t.slot_b.data();
  double* u = t.buffer.data();
  const bool capped = !obstacle.empty();
  for (const int32_t n : t.orders[order]) {
    const std::size_t base = static_cast<std::size_t>(n) * nd;
    double best = std::numeric_limits<double>::infinity();
    for (int d = 0; d < nd; ++d) {
      const std::size_t a = base + d;
      best = std::min(best, wf[a] * u[sf[a]] + wb[a] * u[sb[a]]);
    }
    if (capped) best = std::min(best, obstacle[n]);
    const int32_t s = t.self[n];
    sup = std::max(sup, std::abs(best - u[s]));
    u[s] = best;
  }
  return sup;
}

// One Jacobi sweep from t.buffer into next (constants preserved).
double sweep_jacobi(ArmTable& t, std::vector<double>& next,
                    const std::vector<double>& obstacle) {
  double sup = 0.0;
  const int nd = t.ndirs;
  const double* u = t.buffer.data();
  const bool capped = !obstacle.empty();
  for (int n = 0; n < t.nnodes; ++n) {
    const std::size_t base = static_cast<std::size_t>(n) * nd;
    double best = std::numeric_limits<double>::infinity();
    for (int d = 0; d < nd; ++d) {
      const std::size_t a = base + d;
      best = std::min(best, t.wf[a] * u[t.slot_f[a]] + t.wb[a] * u[t.slot_b[a]]);
    }
    if (capped) best = std::min(best, obstacle[n]);
    const int32_t s = t.self[n];
    sup = std::max(sup, std::abs(best - u[s]));
    next[s] = best;
  }
  return sup;
}

SolutionField iterate(ArmTable& t, const Grid2D& grid, const SolverConfig& cfg,
                      const std::vector<double>& obstacle) {
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("solver: tol must be > 0");
  if (cfg.max_iter < 1) throw std::invalid_argument("solver: max_iter must be >= 1");
  SolutionField out;
  out.grid = grid;
  out.residual_history.reserve(256);
  std::vector<double> next;
  if (cfg.sweep == SweepKind::Jacobi) next = t.buffer;
  for (int it = 0; it < cfg.max_iter; ++it) {
    double sup;
    if (cfg.sweep == SweepKind::GaussSeidel) {
      sup = sweep_gauss_seidel(t, it % 4, obstacle);
    } else {
      sup = sweep_jacobi(t, next, obstacle);
      t.buffer.swap(next);
    }
    out.residual_history.push_back(sup);
    out.iterations = it + 1;
    out.final_residual = sup;
    if (sup <= cfg.tol) {
      out.converged = true;
      break;
    }
  }
  out.values.setConstant(grid.nx, grid.ny,
                         std::numeric_limits<double>::quiet_NaN());
  for (int n = 0; n < t.nnodes; ++n)
    out.values(t.node_i[n], t.node_j[n]) = t.buffer[t.self[n]];
  return out;
}

}  // namespace

}  // namespace detail

double local_update(const std::vector<DirectionalStep>& steps) {
  if (steps.empty())
    throw std::invalid_argument("local_update: need at least one direction");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : steps) {
    if (!(s.k_plus > 0.0) || !(s.h_minus > 0.0))
      throw std::invalid_argument("local_update: step lengths must be > 0");
    best = std::min(best, (s.h_minus * s.forward_value + s.k_plus * s.backward_value) /
                              (s.h_minus + s.k_plus));
  }
  return best;
}

SolutionField solve_dirichlet(const BoundaryProblem& problem, const Grid2D& grid,
                              const DirectionSet& dirs, const SolverConfig& cfg) {
  auto t = detail::build_arm_table(grid, problem.domain, dirs,
                                   [&](const Point& y) { return eval_g(problem.datum, y); });
  double init = 0.0;
  if (cfg.init == InitKind::ConstantMinG)
    init = datum_range(problem.domain, problem.datum).first;
  t.fill_interior(init);
  return detail::iterate(t, grid, cfg, {});
}

SolutionField solve_dirichlet(const BoundaryProblem& problem, const Grid2D& grid,
                              const DirectionSet& dirs, const SolverConfig& cfg,
                              const Eigen::ArrayXXd& initial) {
  if (initial.rows() != grid.nx || initial.cols() != grid.ny)
    throw std::invalid_argument("solve_dirichlet: initial field shape mismatch");
  auto t = detail::build_arm_table(grid, problem.domain, dirs,
                                   [&](const Point& y) { return eval_g(problem.datum, y); });
  for (int n = 0; n < t.nnodes; ++n)
    t.buffer[t.self[n]] = initial(t.node_i[n], t.node_j[n]);
  return detail::iterate(t, grid, cfg, {});
}

SolutionField solve_obstacle(const Domain& domain,
                             const std::function<double(const Point&)>& obstacle,
                             const Grid2D& grid, const DirectionSet& dirs,
                             const SolverConfig& cfg) {
  auto t = detail::build_arm_table(grid, domain, dirs, obstacle);
  std::vector<double> cap(t.nnodes);
  for (int n = 0; n < t.nnodes; ++n)
    cap[n] = obstacle(grid.node(t.node_i[n], t.node_j[n]));
  double init = 0.0;
  if (cfg.init == InitKind::ConstantMinG) {
    // Minimum of the obstacle over interior nodes and truncated-arm traces.
    init = *std::min_element(cap.begin(), cap.end());
    for (std::size_t c = static_cast<std::size_t>(t.node_slots);
         c < t.buffer.size(); ++c)
      init = std::min(init, t.buffer[c]);
  }
  t.fill_interior(init);
  return detail::iterate(t, grid, cfg, cap);
}

Eigen::ArrayXXd residual_field(const SolutionField& field,
                               const BoundaryProblem& problem,
                               const DirectionSet& dirs) {
  const Grid2D& grid = field.grid;
  Eigen::ArrayXXd res(grid.nx, grid.ny);
  res.setConstant(std::numeric_limits<double>::quiet_NaN());
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      if (grid.is_interior(i, j))
        res(i, j) = lambda1_approx(field.values, grid, problem.domain,
                                   problem.datum, i, j, dirs)
                        .value;
  return res;
}

Eigen::ArrayXXd prolong_bilinear(const Eigen::ArrayXXd& coarse,
                                 const Grid2D& cg, const Grid2D& fg,
                                 double fill) {
  if (coarse.rows() != cg.nx || coarse.cols() != cg.ny)
    throw std::invalid_argument("prolong_bilinear: field shape mismatch");
  Eigen::ArrayXXd fine(fg.nx, fg.ny);
  for (int j = 0; j < fg.ny; ++j)
    for (int i = 0; i < fg.nx; ++i) {
      const Point x = fg.node(i, j);
      double fi = (x.x() - cg.origin.x()) / cg.h;
      double fj = (x.y() - cg.origin.y()) / cg.h;
      fi = std::clamp(fi, 0.0, double(cg.nx - 1));
      fj = std::clamp(fj, 0.0, double(cg.ny - 1));
      const int ci = std::min(int(fi), cg.nx - 2);
      const int cj = std::min(int(fj), cg.ny - 2);
      const double tx = fi - ci, ty = fj - cj;
      double acc = 0.0, wsum = 0.0;
      for (int dj = 0; dj <= 1; ++dj)
        for (int di = 0; di <= 1; ++di) {
          const double v = coarse(ci + di, cj + dj);
          if (!std::isfinite(v)) continue;
          const double w =
              (di ? tx : 1.0 - tx) * (dj ? ty : 1.0 - ty);
          acc += w * v;
          wsum += w;
        }
      fine(i, j) = wsum > 0.0 ? acc / wsum : fill;
    }
  return fine;
}

void write_field_csv(const std::string& path, const SolutionField& field) {
  auto out = open_output(path);
  out << "i,j,x,y,u\n";
  const Grid2D& g = field.grid;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const Point x = g.node(i, j);
      out << i << ',' << j << ',' << fmt17(x.x()) << ',' << fmt17(x.y()) << ',';
      if (g.is_interior(i, j)) out << fmt17(field.values(i, j));
      out << '\n';
    }
  if (!out) throw IoError("write failed: " + path);
}

void write_residuals_csv(const std::string& path,
                         const std::vector<double>& residual_history) {
  auto out = open_output(path);
  out << "iter,residual\n";
  for (std::size_t k = 0; k < residual_history.size(); ++k)
    out << (k + 1) << ',' << fmt17(residual_history[k]) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace envpde
