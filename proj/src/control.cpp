#include "envpde/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <stdexcept>

#include "envpde/csv.hpp"
#include "envpde/errors.hpp"

namespace envpde {

namespace {

constexpr long kMaxSteps = 10'000'000;

// Standard normal draws via Box-Muller over explicit 53-bit uniforms so the
// stream depends only on the mt19937_64 sequence, not on the standard
// library's distribution internals.
class NormalGen {
 public:
  explicit NormalGen(std::uint64_t seed) : rng_(seed) {}
  double next() {
    if (have_) {
      have_ = false;
      return cached_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * EIGEN_PI * u2;
    cached_ = r * std::sin(a);
    have_ = true;
    return r * std::cos(a);
  }

 private:
  double uniform01() {  // in (0, 1)
    return (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53;
  }
  std::mt19937_64 rng_;
  bool have_ = false;
  double cached_ = 0.0;
};

// Balanced pairwise reduction; order-independent up to association depth.
double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += v[k];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

struct PolicyTable {
  Grid2D grid;
  std::vector<Point> dir;  // per node slot i + nx * j; zero when exterior
};

Point table_lookup(const PolicyTable& tb, const Point& x) {
  const Grid2D& g = tb.grid;
  const auto clampi = [](long v, int hi) {
    return static_cast<int>(std::clamp<long>(v, 0, hi - 1));
  };
  const int ci = clampi(std::lround((x.x() - g.origin.x()) / g.h), g.nx);
  const int cj = clampi(std::lround((x.y() - g.origin.y()) / g.h), g.ny);
  if (g.is_interior(ci, cj)) return tb.dir[ci + g.nx * cj];
  // Ring search for the nearest interior node.
  for (int r = 1; r < std::max(g.nx, g.ny); ++r) {
    double best_d = std::numeric_limits<double>::infinity();
    int bi = -1, bj = -1;
    const auto consider = [&](int i, int j) {
      if (!g.in_bounds(i, j) || !g.is_interior(i, j)) return;
      const double d = (g.node(i, j) - x).norm();
      if (d < best_d) {
        best_d = d;
        bi = i;
        bj = j;
      }
    };
    for (int di = -r; di <= r; ++di) {
      consider(ci + di, cj - r);
      consider(ci + di, cj + r);
    }
    for (int dj = -r + 1; dj <= r - 1; ++dj) {
      consider(ci - r, cj + dj);
      consider(ci + r, cj + dj);
    }
    if (bi >= 0) return tb.dir[bi + g.nx * bj];
  }
  throw SimulationError("policy lookup: grid has no interior nodes near point");
}

}  // namespace

ControlPolicy fixed_policy(const Point& v) {
  const double n = v.norm();
  if (!(n > 0.0))
    throw std::invalid_argument("fixed_policy: direction must be nonzero");
  const Point unit = v / n;
  return ControlPolicy{[unit](const Point&) { return unit; }};
}

ControlPolicy policy_from_solution(const SolutionField& field,
                                   const Domain& domain,
                                   const BoundaryDatum& datum,
                                   const DirectionSet& dirs) {
  auto tb = std::make_shared<PolicyTable>();
  tb->grid = field.grid;
  const Grid2D& g = field.grid;
  tb->dir.assign(static_cast<std::size_t>(g.nx) * g.ny, Point::Zero());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (g.is_interior(i, j))
        tb->dir[i + g.nx * j] =
            lambda1_approx(field.values, g, domain, datum, i, j, dirs)
                .dir.unit();
  return ControlPolicy{
      [tb](const Point& x) { return table_lookup(*tb, x); }};
}

PathResult simulate_path(const Domain& domain, const ControlPolicy& policy,
                         const Point& x0, double dt, std::uint64_t seed) {
  if (!(dt > 0.0)) throw std::invalid_argument("simulate_path: dt must be > 0");
  if (domain.classify(x0) != Region::Interior)
    throw std::invalid_argument("simulate_path: start must be interior");
  NormalGen gen(seed);
  const double sdt = std::sqrt(2.0 * dt);
  Point x = x0;
  double t = 0.0;
  for (long step = 1; step <= kMaxSteps; ++step) {
    const Point theta = policy.direction(x);
    const double xi = gen.next();
    const Point dx = (sdt * xi) * theta;
    const double len = dx.norm();
    if (len == 0.0) {
      t += dt;
      continue;
    }
    const Point xn = x + dx;
    if (domain.classify(xn) == Region::Interior) {
      x = xn;
      t += dt;
      continue;
    }
    const Point dir = dx / len;
    const double s = std::min(domain.ray_exit(x, dir), len);
    PathResult r;
    r.exit_point = x + s * dir;
    r.exit_time = t + dt * (s / len);
    r.steps = step;
    return r;
  }
  throw SimulationError("simulate_path: exceeded step cap without exiting");
}

ValueEstimate estimate_value(const Domain& domain, const BoundaryDatum& datum,
                             const ControlPolicy& policy, const Point& x0,
                             double dt, int n_paths, std::uint64_t seed) {
  if (n_paths < 2)
    throw std::invalid_argument("estimate_value: need n_paths >= 2");
  std::vector<double> cost(n_paths), times(n_paths);
  for (int i = 0; i < n_paths; ++i) {
    const PathResult r = simulate_path(domain, policy, x0, dt,
                                       seed + static_cast<std::uint64_t>(i));
    cost[i] = eval_g(datum, r.exit_point);
    times[i] = r.exit_time;
  }
  ValueEstimate est;
  est.x0 = x0;
  est.n_paths = n_paths;
  est.dt = dt;
  est.mean = pairwise_sum(cost.data(), cost.size()) / n_paths;
  std::vector<double> dev2(n_paths);
  for (int i = 0; i < n_paths; ++i) {
    const double d = cost[i] - est.mean;
    dev2[i] = d * d;
  }
  const double var =
      pairwise_sum(dev2.data(), dev2.size()) / (n_paths - 1.0);
  est.std_error = std::sqrt(var / n_paths);
  est.mean_exit_time = pairwise_sum(times.data(), times.size()) / n_paths;
  return est;
}

void write_estimates_csv(const std::string& path,
                         const std::vector<ValueEstimate>& rows) {
  auto out = open_output(path);
  out << "x0x,x0y,policy,mean,stderr,n_paths,dt,mean_exit_time\n";
  for (const auto& r : rows) {
    std::string label = r.policy;
    if (label.find_first_of(",\"\n") != std::string::npos) {
      std::string quoted = "\"";
      for (const char c : label) {
        if (c == '"') quoted += '"';
        quoted += c;
      }
      quoted += '"';
      label = quoted;
    }
    out << fmt17(r.x0.x()) << ',' << fmt17(r.x0.y()) << ',' << label << ','
        << fmt17(r.mean) << ',' << fmt17(r.std_error) << ',' << r.n_paths
        << ',' << fmt17(r.dt) << ',' << fmt17(r.mean_exit_time) << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace envpde
