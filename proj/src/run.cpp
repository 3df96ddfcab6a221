#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "envpde/analysis.hpp"
#include "envpde/config.hpp"
#include "envpde/control.hpp"
#include "envpde/csv.hpp"
#include "envpde/errors.hpp"
#include "envpde/oracle.hpp"
#include "envpde/pucci.hpp"
#include "envpde/solver.hpp"

namespace envpde {

namespace {

namespace fs = std::filesystem;

const char* command_name(Command c) {
  switch (c) {
    case Command::Solve: return "solve";
    case Command::Obstacle: return "obstacle";
    case Command::OracleCompare: return "oracle-compare";
    case Command::PucciSweep: return "pucci-sweep";
    case Command::McValue: return "mc-value";
    case Command::Analyze: return "analyze";
    case Command::ConvergenceStudy: return "convergence-study";
  }
  return "?";
}

struct Summary {
  std::vector<std::pair<std::string, std::string>> lines;
  void add(const std::string& key, const std::string& value) {
    lines.emplace_back(key, value);
  }
  void add(const std::string& key, double value) { add(key, fmt17(value)); }
  void add(const std::string& key, long value) {
    add(key, std::to_string(value));
  }
};

std::vector<std::string> tokens_of(const std::string& spec) {
  std::vector<std::string> out;
  std::istringstream in(spec);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

// Specs were syntax-checked at parse time; stod here cannot fail.
BoundaryDatum resolve_datum(const std::string& spec, const Domain& domain) {
  const auto t = tokens_of(spec);
  const std::string& kind = t[0];
  if (kind == "saddle") return BoundaryDatum::saddle();
  if (kind == "powercone") return BoundaryDatum::power_cone(std::stod(t[1]));
  if (kind == "absx") return BoundaryDatum::abs_x();
  if (kind == "affine")
    return BoundaryDatum::affine(Point(std::stod(t[1]), std::stod(t[2])),
                                 std::stod(t[3]));
  if (kind == "constant") return BoundaryDatum::constant(std::stod(t[1]));
  // sampled PATH TOL
  const BoundaryTrace trace = read_trace_csv(t[1], domain);
  return BoundaryDatum::sampled(trace.points, trace.values, std::stod(t[2]));
}

std::function<double(const Point&)> resolve_obstacle(const std::string& spec) {
  const auto t = tokens_of(spec);
  const std::string& kind = t[0];
  if (kind == "squarenorm")
    return [](const Point& x) { return x.squaredNorm(); };
  if (kind == "doublewell")
    return [](const Point& x) {
      const double a = x.x() - 0.5, b = x.x() + 0.5;
      return std::min(a * a, b * b) + x.y() * x.y();
    };
  if (kind == "saddle")
    return [](const Point& x) { return x.x() * x.x() - x.y() * x.y(); };
  if (kind == "absx")
    return [](const Point& x) { return std::abs(x.x()); };
  if (kind == "powercone") {
    const double eps = std::stod(t[1]);
    return [eps](const Point& x) {
      return -std::pow(1.0 + x.x(), 1.0 - eps);
    };
  }
  if (kind == "affine") {
    const Point a(std::stod(t[1]), std::stod(t[2]));
    const double b = std::stod(t[3]);
    return [a, b](const Point& x) { return a.dot(x) + b; };
  }
  // constant C
  const double c = std::stod(t[1]);
  return [c](const Point&) { return c; };
}

// Closed-form envelopes, where one is known for the domain/datum pairing.
std::optional<std::function<double(const Point&)>> analytic_reference(
    const Domain& domain, const BoundaryDatum& datum) {
  const double s = domain.scale();
  switch (datum.kind()) {
    case BoundaryDatum::Kind::Saddle:
      if (domain.kind() == Domain::Kind::Square)
        return [s](const Point& x) { return x.x() * x.x() - s * s; };
      return [s](const Point& x) { return 2.0 * x.x() * x.x() - s * s; };
    case BoundaryDatum::Kind::PowerCone:
      if (domain.kind() == Domain::Kind::Disk && std::abs(s - 1.0) < 1e-12) {
        const double eps = datum.eps();
        return [eps](const Point& x) {
          return -std::pow(1.0 + x.x(), 1.0 - eps);
        };
      }
      return std::nullopt;
    case BoundaryDatum::Kind::AbsX:
      return [](const Point& x) { return std::abs(x.x()); };
    case BoundaryDatum::Kind::Affine: {
      const Point a = datum.affine_slope();
      const double b = datum.offset();
      return [a, b](const Point& x) { return a.dot(x) + b; };
    }
    case BoundaryDatum::Kind::Constant: {
      const double c = datum.offset();
      return [c](const Point&) { return c; };
    }
    case BoundaryDatum::Kind::Sampled:
      return std::nullopt;
  }
  return std::nullopt;
}

double sup_error_vs(const SolutionField& field,
                    const std::function<double(const Point&)>& ref) {
  const Grid2D& g = field.grid;
  double sup = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (g.is_interior(i, j))
        sup = std::max(sup, std::abs(field.values(i, j) - ref(g.node(i, j))));
  return sup;
}

std::string out_path(const RunConfig& cfg, const char* name) {
  return (fs::path(cfg.out) / name).string();
}

void add_common(Summary& s, const RunConfig& cfg) {
  s.add("domain", cfg.domain->kind() == Domain::Kind::Disk
                      ? "disk " + fmt17(cfg.domain->scale())
                      : "square " + fmt17(cfg.domain->scale()));
  if (!cfg.datum_spec.empty()) s.add("datum", cfg.datum_spec);
  if (!cfg.obstacle_spec.empty()) s.add("obstacle", cfg.obstacle_spec);
  s.add("n", long(cfg.n));
  s.add("width", long(cfg.width));
  s.add("tol", cfg.tol);
  s.add("max_iter", long(cfg.max_iter));
  s.add("sweep", cfg.sweep == SweepKind::GaussSeidel ? "gauss-seidel"
                                                     : "jacobi");
  s.add("seed", long(cfg.seed));
}

void add_solution_stats(Summary& s, const SolutionField& f) {
  s.add("iterations", long(f.iterations));
  s.add("final_residual", f.final_residual);
  s.add("converged", f.converged ? "true" : "false");
}

void require_converged(const SolutionField& f) {
  if (!f.converged)
    throw SimulationError("solver did not converge within max_iter sweeps");
}

void run_solve(const RunConfig& cfg, Summary& sum) {
  const BoundaryDatum datum = resolve_datum(cfg.datum_spec, *cfg.domain);
  const BoundaryProblem pb{*cfg.domain, datum};
  const Grid2D grid = build_grid(*cfg.domain, cfg.n);
  const DirectionSet dirs = make_directions(cfg.width);
  const SolverConfig scfg{cfg.tol, cfg.max_iter, cfg.sweep, cfg.init};
  const SolutionField field = solve_dirichlet(pb, grid, dirs, scfg);
  write_field_csv(out_path(cfg, "field.csv"), field);
  write_residuals_csv(out_path(cfg, "residuals.csv"), field.residual_history);
  add_solution_stats(sum, field);
  const Eigen::ArrayXXd res = residual_field(field, pb, dirs);
  sum.add("sup_operator_residual",
          masked_sup_abs_diff(res, Eigen::ArrayXXd::Zero(grid.nx, grid.ny),
                              grid, *cfg.domain, 0.0));
  if (const auto ref = analytic_reference(*cfg.domain, datum))
    sum.add("sup_error_vs_reference", sup_error_vs(field, *ref));
  require_converged(field);
}

void run_obstacle(const RunConfig& cfg, Summary& sum) {
  const auto obstacle = resolve_obstacle(cfg.obstacle_spec);
  const Grid2D grid = build_grid(*cfg.domain, cfg.n);
  const DirectionSet dirs = make_directions(cfg.width);
  const SolverConfig scfg{cfg.tol, cfg.max_iter, cfg.sweep, cfg.init};
  const SolutionField field =
      solve_obstacle(*cfg.domain, obstacle, grid, dirs, scfg);
  write_field_csv(out_path(cfg, "field.csv"), field);
  write_residuals_csv(out_path(cfg, "residuals.csv"), field.residual_history);
  add_solution_stats(sum, field);
  double sup_violation = 0.0;  // u <= obstacle up to tol
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      if (grid.is_interior(i, j))
        sup_violation = std::max(
            sup_violation, field.values(i, j) - obstacle(grid.node(i, j)));
  sum.add("sup_obstacle_violation", sup_violation);
  require_converged(field);
}

void run_oracle_compare(const RunConfig& cfg, Summary& sum) {
  const BoundaryDatum datum = resolve_datum(cfg.datum_spec, *cfg.domain);
  const BoundaryProblem pb{*cfg.domain, datum};
  const Grid2D grid = build_grid(*cfg.domain, cfg.n);
  const DirectionSet dirs = make_directions(cfg.width);
  const SolverConfig scfg{cfg.tol, cfg.max_iter, cfg.sweep, cfg.init};
  const SolutionField field = solve_dirichlet(pb, grid, dirs, scfg);
  write_field_csv(out_path(cfg, "field.csv"), field);
  write_residuals_csv(out_path(cfg, "residuals.csv"), field.residual_history);
  const BoundaryTrace trace = sample_boundary(*cfg.domain, datum, cfg.m);
  write_trace_csv(out_path(cfg, "trace.csv"), trace);
  const Eigen::ArrayXXd env = envelope_grid(trace, grid);
  SolutionField oracle_field;
  oracle_field.grid = grid;
  oracle_field.values = env;
  write_field_csv(out_path(cfg, "oracle.csv"), oracle_field);
  add_solution_stats(sum, field);
  sum.add("m", long(cfg.m));
  sum.add("sup_solver_vs_oracle",
          masked_sup_abs_diff(field.values, env, grid, *cfg.domain, 0.0));
  require_converged(field);
}

void run_pucci_sweep(const RunConfig& cfg, Summary& sum) {
  const BoundaryDatum datum = resolve_datum(cfg.datum_spec, *cfg.domain);
  const BoundaryProblem pb{*cfg.domain, datum};
  const Grid2D grid = build_grid(*cfg.domain, cfg.n);
  const DirectionSet dirs = make_directions(cfg.width);
  const SolverConfig scfg{cfg.tol, cfg.max_iter, cfg.sweep, cfg.init};
  const BoundaryTrace trace = sample_boundary(*cfg.domain, datum, cfg.m);
  const Eigen::ArrayXXd env = envelope_grid(trace, grid);
  const RatioSweepResult sweep =
      ratio_sweep(pb, grid, dirs, cfg.gamma, cfg.big_gammas, scfg, env);
  write_sweep_csv(out_path(cfg, "sweep.csv"), sweep);
  sum.add("gamma", cfg.gamma);
  sum.add("sweep_points", long(sweep.ratios.size()));
  sum.add("final_ratio", sweep.ratios.back());
  sum.add("final_sup_distance", sweep.sup_distances.back());
}

void run_mc_value(const RunConfig& cfg, Summary& sum) {
  const BoundaryDatum datum = resolve_datum(cfg.datum_spec, *cfg.domain);
  const BoundaryProblem pb{*cfg.domain, datum};
  const bool needs_field =
      std::any_of(cfg.policies.begin(), cfg.policies.end(),
                  [](const std::string& p) { return p == "feedback"; });
  std::optional<SolutionField> field;
  const DirectionSet dirs = make_directions(cfg.width);
  if (needs_field) {
    const Grid2D grid = build_grid(*cfg.domain, cfg.n);
    const SolverConfig scfg{cfg.tol, cfg.max_iter, cfg.sweep, cfg.init};
    field = solve_dirichlet(pb, grid, dirs, scfg);
    add_solution_stats(sum, *field);
    require_converged(*field);
  }
  std::vector<ValueEstimate> rows;
  for (std::size_t k = 0; k < cfg.policies.size(); ++k) {
    const std::string& label = cfg.policies[k];
    ControlPolicy policy;
    if (label == "ex") {
      policy = fixed_policy(Point(1.0, 0.0));
    } else if (label == "ey") {
      policy = fixed_policy(Point(0.0, 1.0));
    } else if (label == "feedback") {
      policy = policy_from_solution(*field, *cfg.domain, datum, dirs);
    } else {  // fixed:VX:VY
      const std::string rest = label.substr(6);
      const std::size_t colon = rest.find(':');
      policy = fixed_policy(Point(std::stod(rest.substr(0, colon)),
                                  std::stod(rest.substr(colon + 1))));
    }
    const std::uint64_t seed_k =
        cfg.seed + k * static_cast<std::uint64_t>(cfg.n_paths);
    ValueEstimate est = estimate_value(*cfg.domain, datum, policy, cfg.x0,
                                       cfg.dt, cfg.n_paths, seed_k);
    est.policy = label;
    rows.push_back(est);
    sum.add("mc_" + label + "_mean", est.mean);
    sum.add("mc_" + label + "_stderr", est.std_error);
    sum.add("mc_" + label + "_mean_exit_time", est.mean_exit_time);
  }
  write_estimates_csv(out_path(cfg, "estimates.csv"), rows);
  sum.add("dt", cfg.dt);
  sum.add("n_paths", long(cfg.n_paths));
}

void run_analyze(const RunConfig& cfg, Summary& sum) {
  const BoundaryDatum datum = resolve_datum(cfg.datum_spec, *cfg.domain);
  const BoundaryProblem pb{*cfg.domain, datum};
  const Grid2D grid = build_grid(*cfg.domain, cfg.n);
  const DirectionSet dirs = make_directions(cfg.width);
  const SolverConfig scfg{cfg.tol, cfg.max_iter, cfg.sweep, cfg.init};
  const SolutionField field = solve_dirichlet(pb, grid, dirs, scfg);
  write_field_csv(out_path(cfg, "field.csv"), field);
  add_solution_stats(sum, field);

  const auto range = datum_range(*cfg.domain, datum);
  const ContactScan scan =
      contact_scan(field, pb, dirs, default_flat_tol(grid.h, cfg.tol),
                   default_trace_tol(grid.h, range.second - range.first));
  write_contact_csv(out_path(cfg, "contact.csv"), scan);
  long n_interior = 0, n_with_flat = 0, n_hit = 0;
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      if (scan.n_flat(i, j) < 0) continue;
      ++n_interior;
      if (scan.n_flat(i, j) > 0) ++n_with_flat;
      if (scan.segment_hit(i, j)) ++n_hit;
    }
  sum.add("interior_nodes", n_interior);
  sum.add("flat_direction_fraction",
          n_interior ? double(n_with_flat) / double(n_interior) : 0.0);
  sum.add("segment_hit_fraction",
          n_interior ? double(n_hit) / double(n_interior) : 0.0);

  const GradientField grad = gradient_field(field, pb);
  const HolderResult holder = holder_quotient(
      grad, grid, *cfg.domain, cfg.alpha, cfg.holder_margin, cfg.n_pairs,
      cfg.seed);
  sum.add("holder_alpha", cfg.alpha);
  sum.add("holder_margin", cfg.holder_margin);
  sum.add("holder_sup_quotient", holder.sup_quotient);
  sum.add("holder_witness_x1",
          fmt17(holder.x1.x()) + " " + fmt17(holder.x1.y()));
  sum.add("holder_witness_x2",
          fmt17(holder.x2.x()) + " " + fmt17(holder.x2.y()));

  const BoundaryGapResult gap = boundary_gap(field, pb, dirs);
  sum.add("boundary_gap_max", gap.max_gap);
  sum.add("boundary_gap_location",
          fmt17(gap.location.x()) + " " + fmt17(gap.location.y()));

  sum.add("ma_residual_mean_abs",
          masked_mean_abs(ma_residual(field), grid, *cfg.domain,
                          cfg.holder_margin));
  require_converged(field);
}

void run_convergence_study(const RunConfig& cfg, Summary& sum) {
  const BoundaryDatum datum = resolve_datum(cfg.datum_spec, *cfg.domain);
  const BoundaryProblem pb{*cfg.domain, datum};
  const DirectionSet dirs = make_directions(cfg.width);
  const SolverConfig scfg{cfg.tol, cfg.max_iter, cfg.sweep, cfg.init};
  const auto ref = analytic_reference(*cfg.domain, datum);
  const std::vector<int> ladder{33, 65, 129, 257};
  const double fill = datum_range(*cfg.domain, datum).first;

  auto out = open_output(out_path(cfg, "study.csv"));
  out << "n,h,sup_error,iterations,final_residual,converged\n";

  Eigen::ArrayXXd prev;
  Grid2D prev_grid;
  bool have_prev = false;
  bool all_converged = true;
  for (const int n : ladder) {
    const Grid2D grid = build_grid(*cfg.domain, n);
    const SolutionField field =
        have_prev ? solve_dirichlet(pb, grid, dirs, scfg,
                                    prolong_bilinear(prev, prev_grid, grid,
                                                     fill))
                  : solve_dirichlet(pb, grid, dirs, scfg);
    double err;
    if (ref) {
      err = sup_error_vs(field, *ref);
    } else {
      const BoundaryTrace trace = sample_boundary(*cfg.domain, datum, cfg.m);
      err = masked_sup_abs_diff(field.values, envelope_grid(trace, grid), grid,
                                *cfg.domain, 0.0);
    }
    out << n << ',' << fmt17(grid.h) << ',' << fmt17(err) << ','
        << field.iterations << ',' << fmt17(field.final_residual) << ','
        << (field.converged ? "true" : "false") << '\n';
    sum.add("sup_error_n" + std::to_string(n), err);
    all_converged = all_converged && field.converged;
    prev = field.values;
    prev_grid = grid;
    have_prev = true;
  }
  if (!out) throw IoError("write failed: " + out_path(cfg, "study.csv"));
  out.close();
  sum.add("reference", ref ? "analytic" : "oracle");
  if (!all_converged)
    throw SimulationError("a refinement rung did not converge");
}

}  // namespace

int run(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  Summary sum;
  sum.add("command", command_name(cfg.command));
  add_common(sum, cfg);

  std::error_code ec;
  fs::create_directories(cfg.out, ec);
  if (ec) {
    std::cerr << "error: cannot create output directory '" << cfg.out
              << "': " << ec.message() << "\n";
    return 4;
  }

  int code = 0;
  std::string error;
  try {
    switch (cfg.command) {
      case Command::Solve: run_solve(cfg, sum); break;
      case Command::Obstacle: run_obstacle(cfg, sum); break;
      case Command::OracleCompare: run_oracle_compare(cfg, sum); break;
      case Command::PucciSweep: run_pucci_sweep(cfg, sum); break;
      case Command::McValue: run_mc_value(cfg, sum); break;
      case Command::Analyze: run_analyze(cfg, sum); break;
      case Command::ConvergenceStudy: run_convergence_study(cfg, sum); break;
    }
  } catch (const ConfigError& e) {
    code = 2;
    error = e.what();
  } catch (const std::invalid_argument& e) {
    code = 2;
    error = e.what();
  } catch (const SimulationError& e) {
    code = 3;
    error = e.what();
  } catch (const std::domain_error& e) {
    code = 3;
    error = e.what();
  } catch (const IoError& e) {
    code = 4;
    error = e.what();
  } catch (const std::exception& e) {
    code = 4;
    error = e.what();
  }
  if (!error.empty()) sum.add("error", error);
  const std::chrono::duration<double> elapsed =
      std::chrono::steady_clock::now() - t0;
  sum.add("runtime_seconds", elapsed.count());
  sum.add("exit_code", long(code));

  try {
    auto out = open_output(out_path(cfg, "summary.txt"));
    for (const auto& [k, v] : sum.lines) out << k << " = " << v << '\n';
    if (!out) throw IoError("write failed");
  } catch (const std::exception& e) {
    std::cerr << "error: cannot write summary.txt: " << e.what() << "\n";
    if (code == 0) code = 4;
  }

  if (!cfg.quiet) {
    for (const auto& [k, v] : sum.lines)
      std::cout << k << " = " << v << '\n';
  }
  if (!error.empty()) std::cerr << "error: " << error << "\n";
  return code;
}

}  // namespace envpde
