#include "envpde/pucci.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "arm_table.hpp"
#include "envpde/csv.hpp"
#include "envpde/errors.hpp"

namespace envpde {

namespace {

// gamma * max(d, 0) + Gamma * min(d, 0): the extremal weighting of one
// directional second difference, increasing and piecewise linear in d.
double extremal_part(double d, const PucciParams& p) {
  return p.gamma * std::max(d, 0.0) + p.Gamma * std::min(d, 0.0);
}

std::vector<std::pair<int, int>> partner_pairs(const DirectionSet& dirs) {
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < static_cast<int>(dirs.dirs.size()); ++a) {
    const int b = dirs.orth_partner[a];
    if (b > a) pairs.emplace_back(a, b);
  }
  if (pairs.empty())
    throw std::invalid_argument("pucci: stencil has no orthogonal pairs");
  return pairs;
}

// Root of extremal_part(D_a(c)) + extremal_part(D_b(c)) = 0 where each
// second difference is D(c) = s (cstar - c).  On [min cstar, max cstar] the
// smaller-target arm is weighted Gamma and the larger gamma, giving one
// linear equation whose root always lies in that interval.
double pair_root(double ca, double sa, double cb, double sb,
                 const PucciParams& p) {
  const bool a_low = ca <= cb;
  const double clo = a_low ? ca : cb;
  const double slo = a_low ? sa : sb;
  const double chi = a_low ? cb : ca;
  const double shi = a_low ? sb : sa;
  return (p.Gamma * slo * clo + p.gamma * shi * chi) /
         (p.Gamma * slo + p.gamma * shi);
}

double sweep_gauss_seidel(detail::ArmTable& t, int order,
                          const std::vector<std::pair<int, int>>& pairs,
                          const PucciParams& p) {
  double sup = 0.0;
  const int nd = t.ndirs;
  const double* wf = t.wf.data();
  const double* wb = t.wb.data();
  const double* ss = t.inv_hk2.data();
  const int32_t* sf = t.slot_f.data();
  const int32_t* sb = t.slot_b.data();
  double* u = t.buffer.data();
  for (const int32_t n : t.orders[order]) {
    const std::size_t base = static_cast<std::size_t>(n) * nd;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [da, db] : pairs) {
      const std::size_t a = base + da, b = base + db;
      const double ca = wf[a] * u[sf[a]] + wb[a] * u[sb[a]];
      const double cb = wf[b] * u[sf[b]] + wb[b] * u[sb[b]];
      best = std::min(best, pair_root(ca, ss[a], cb, ss[b], p));
    }
    const int32_t s = t.self[n];
    sup = std::max(sup, std::abs(best - u[s]));
    u[s] = best;
  }
  return sup;
}

double sweep_jacobi(detail::ArmTable& t, std::vector<double>& next,
                    const std::vector<std::pair<int, int>>& pairs,
                    const PucciParams& p) {
  double sup = 0.0;
  const int nd = t.ndirs;
  const double* u = t.buffer.data();
  for (int n = 0; n < t.nnodes; ++n) {
    const std::size_t base = static_cast<std::size_t>(n) * nd;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [da, db] : pairs) {
      const std::size_t a = base + da, b = base + db;
      const double ca = t.wf[a] * u[t.slot_f[a]] + t.wb[a] * u[t.slot_b[a]];
      const double cb = t.wf[b] * u[t.slot_f[b]] + t.wb[b] * u[t.slot_b[b]];
      best = std::min(best, pair_root(ca, t.inv_hk2[a], cb, t.inv_hk2[b], p));
    }
    const int32_t s = t.self[n];
    sup = std::max(sup, std::abs(best - u[s]));
    next[s] = best;
  }
  return sup;
}

SolutionField iterate_pucci(detail::ArmTable& t, const Grid2D& grid,
                            const SolverConfig& cfg,
                            const std::vector<std::pair<int, int>>& pairs,
                            const PucciParams& p) {
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("solver: tol must be > 0");
  if (cfg.max_iter < 1)
    throw std::invalid_argument("solver: max_iter must be >= 1");
  SolutionField out;
  out.grid = grid;
  out.residual_history.reserve(256);
  std::vector<double> next;
  if (cfg.sweep == SweepKind::Jacobi) next = t.buffer;
  for (int it = 0; it < cfg.max_iter; ++it) {
    double sup;
    if (cfg.sweep == SweepKind::GaussSeidel) {
      sup = sweep_gauss_seidel(t, it % 4, pairs, p);
    } else {
      sup = sweep_jacobi(t, next, pairs, p);
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

void validate(const PucciParams& params) {
  if (!(params.gamma > 0.0) || !(params.Gamma >= params.gamma))
    throw std::invalid_argument("pucci: need 0 < gamma <= Gamma");
}

double pucci_minimal_value(const Eigen::Ref<const Eigen::VectorXd>& eigenvalues,
                           const PucciParams& params) {
  validate(params);
  double acc = 0.0;
  for (Eigen::Index k = 0; k < eigenvalues.size(); ++k)
    acc += extremal_part(eigenvalues[k], params);
  return -acc;
}

Eigen::ArrayXXd pucci_minimal_approx(const SolutionField& field,
                                     const Domain& domain,
                                     const BoundaryDatum& datum,
                                     const DirectionSet& dirs,
                                     const PucciParams& params) {
  validate(params);
  const auto pairs = partner_pairs(dirs);
  const Grid2D& grid = field.grid;
  Eigen::ArrayXXd out(grid.nx, grid.ny);
  out.setConstant(std::numeric_limits<double>::quiet_NaN());
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      if (!grid.is_interior(i, j)) continue;
      const double c = field.values(i, j);
      double best = std::numeric_limits<double>::infinity();
      for (const auto& [da, db] : pairs) {
        const double va = second_difference(
            directional_step(field.values, grid, domain, datum, i, j,
                             dirs.dirs[da]),
            c);
        const double vb = second_difference(
            directional_step(field.values, grid, domain, datum, i, j,
                             dirs.dirs[db]),
            c);
        best = std::min(best,
                        extremal_part(va, params) + extremal_part(vb, params));
      }
      out(i, j) = -best;
    }
  return out;
}

SolutionField solve_pucci_min(const BoundaryProblem& problem,
                              const Grid2D& grid, const DirectionSet& dirs,
                              const PucciParams& params,
                              const SolverConfig& cfg) {
  validate(params);
  const auto pairs = partner_pairs(dirs);
  auto t = detail::build_arm_table(
      grid, problem.domain, dirs,
      [&](const Point& y) { return eval_g(problem.datum, y); });
  double init = 0.0;
  if (cfg.init == InitKind::ConstantMinG)
    init = datum_range(problem.domain, problem.datum).first;
  t.fill_interior(init);
  return iterate_pucci(t, grid, cfg, pairs, params);
}

SolutionField solve_pucci_min(const BoundaryProblem& problem,
                              const Grid2D& grid, const DirectionSet& dirs,
                              const PucciParams& params,
                              const SolverConfig& cfg,
                              const Eigen::ArrayXXd& initial) {
  validate(params);
  if (initial.rows() != grid.nx || initial.cols() != grid.ny)
    throw std::invalid_argument("solve_pucci_min: initial field shape mismatch");
  const auto pairs = partner_pairs(dirs);
  auto t = detail::build_arm_table(
      grid, problem.domain, dirs,
      [&](const Point& y) { return eval_g(problem.datum, y); });
  for (int n = 0; n < t.nnodes; ++n)
    t.buffer[t.self[n]] = initial(t.node_i[n], t.node_j[n]);
  return iterate_pucci(t, grid, cfg, pairs, params);
}

RatioSweepResult ratio_sweep(const BoundaryProblem& problem, const Grid2D& grid,
                             const DirectionSet& dirs, double gamma,
                             const std::vector<double>& Gammas,
                             const SolverConfig& cfg,
                             const Eigen::ArrayXXd& reference) {
  if (Gammas.empty())
    throw std::invalid_argument("ratio_sweep: need at least one Gamma");
  if (reference.rows() != grid.nx || reference.cols() != grid.ny)
    throw std::invalid_argument("ratio_sweep: reference field shape mismatch");
  RatioSweepResult out;
  Eigen::ArrayXXd warm;
  for (const double Gamma : Gammas) {
    const PucciParams p{gamma, Gamma};
    validate(p);
    SolutionField sol =
        warm.size() == 0
            ? solve_pucci_min(problem, grid, dirs, p, cfg)
            : solve_pucci_min(problem, grid, dirs, p, cfg, warm);
    if (!sol.converged)
      throw SimulationError("ratio_sweep: solve did not converge at ratio " +
                            std::to_string(Gamma / gamma));
    warm = sol.values;
    double sup = 0.0;
    const double margin = 3.0 * grid.h;
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) {
        if (!grid.is_interior(i, j)) continue;
        if (problem.domain.boundary_distance(grid.node(i, j)) < margin)
          continue;
        const double ref = reference(i, j);
        if (!std::isfinite(ref)) continue;
        sup = std::max(sup, std::abs(sol.values(i, j) - ref));
      }
    out.ratios.push_back(Gamma / gamma);
    out.sup_distances.push_back(sup);
  }
  return out;
}

void write_sweep_csv(const std::string& path, const RatioSweepResult& sweep) {
  auto out = open_output(path);
  out << "ratio,sup_distance\n";
  for (std::size_t k = 0; k < sweep.ratios.size(); ++k)
    out << fmt17(sweep.ratios[k]) << ',' << fmt17(sweep.sup_distances[k])
        << '\n';
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace envpde
