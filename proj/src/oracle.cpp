#include "envpde/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace envpde {

namespace {

constexpr double kOnSegmentTol = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

double cross2(const Point& a, const Point& b) {
  return a.x() * b.y() - a.y() * b.x();
}

struct TripleBest {
  double value = kInf;
  int a = -1, b = -1, k = -1;  // original sample indices
  double wa = 0, wb = 0, wk = 0;
};

struct PairBest {
  double value = kInf;
  int i = -1, j = -1;
  double t = 0;  // weight on j
};

// Minimize over triangles of the listed sorted-by-angle positions that
// contain the query point.  Positions index th/gs/ds/orig (already restricted
// to the subset when subset.size() < m).  Containment via the angular
// criterion: all three consecutive gaps around the query point below pi.
void scan_triples(const std::vector<double>& th, const std::vector<double>& gs,
                  const std::vector<Point>& ds, const std::vector<int>& orig,
                  double gmin_all, TripleBest& best) {
  const int M = static_cast<int>(th.size());
  if (M < 3) return;
  auto TH = [&](int k) { return k < M ? th[k] : th[k - M] + 2.0 * EIGEN_PI; };
  for (int a = 0; a < M; ++a) {
    if (std::min(gs[a], gmin_all) >= best.value) continue;
    const double tha = th[a];
    // First position whose ray lies strictly beyond the antipode of a.
    int lo = a + 1;
    {
      int l = a + 1, r = a + M;
      while (l < r) {
        const int mid = (l + r) / 2;
        if (TH(mid) > tha + EIGEN_PI) r = mid; else l = mid + 1;
      }
      lo = l;
    }
    int hi = lo;
    for (int b = a + 1; b < a + M; ++b) {
      const double thb = TH(b);
      if (!(thb - tha < EIGEN_PI)) break;
      while (hi < a + M && TH(hi) < thb + EIGEN_PI) ++hi;
      const int b0 = b < M ? b : b - M;
      if (std::min({gs[a], gs[b0], gmin_all}) >= best.value) continue;
      for (int kpos = std::max(lo, b + 1); kpos < hi; ++kpos) {
        const int k0 = kpos < M ? kpos : kpos - M;
        if (std::min({gs[a], gs[b0], gs[k0]}) >= best.value) continue;
        const double ca = cross2(ds[b0], ds[k0]);
        const double cb = cross2(ds[k0], ds[a]);
        const double ck = cross2(ds[a], ds[b0]);
        const double D = ca + cb + ck;
        if (D == 0.0) continue;  // collinear sliver: segments handle it
        const double wa = ca / D, wb = cb / D, wk = ck / D;
        if (std::min({wa, wb, wk}) < -1e-9) continue;
        const double val = wa * gs[a] + wb * gs[b0] + wk * gs[k0];
        if (val < best.value) {
          best.value = val;
          best.a = orig[a];
          best.b = orig[b0];
          best.k = orig[k0];
          best.wa = wa;
          best.wb = wb;
          best.wk = wk;
        }
      }
    }
  }
}

// Supporting plane through the lifted segment endpoints: the one-parameter
// tilt family is clamped into the half-space system "below every sample".
void pair_plane(const Point& x, const BoundaryTrace& trace, int i, int j,
                Point& a_out, double& b_out) {
  (void)x;
  const Point yi = trace.points[i], yj = trace.points[j];
  const double gi = trace.values[i], gj = trace.values[j];
  const double L = (yj - yi).norm();
  const Point u = (yj - yi) / L;
  const Point n(-u.y(), u.x());
  const double alpha = (gj - gi) / L;
  double t_lo = -kInf, t_hi = kInf;
  double scale = 1.0;
  for (int s = 0; s < trace.m; ++s) scale = std::max(scale, (trace.points[s] - yi).norm());
  for (int s = 0; s < trace.m; ++s) {
    const Point r = trace.points[s] - yi;
    const double coef = n.dot(r);
    const double rhs = trace.values[s] - gi - alpha * u.dot(r);
    if (coef > 1e-14 * scale) {
      t_hi = std::min(t_hi, rhs / coef);
    } else if (coef < -1e-14 * scale) {
      t_lo = std::max(t_lo, rhs / coef);
    }
  }
  double t = 0.0;
  if (t_lo <= t_hi) {
    t = std::clamp(0.0, t_lo, t_hi);
  } else {
    t = 0.5 * (t_lo + t_hi);  // rounding-inverted interval: take the midpoint
  }
  a_out = alpha * u + t * n;
  b_out = gi - a_out.dot(yi);
}

}  // namespace

EnvelopeWitness envelope_value(const Point& x, const BoundaryTrace& trace) {
  const int m = trace.m;
  if (m < 3) throw std::invalid_argument("envelope_value: need m >= 3");

  std::vector<Point> d(m);
  std::vector<double> dn(m);
  for (int s = 0; s < m; ++s) {
    d[s] = trace.points[s] - x;
    dn[s] = d[s].norm();
  }

  // Segments through x.
  PairBest pair;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const double cr = std::abs(cross2(d[i], d[j]));
      // |y_j - y_i| <= |d_i| + |d_j|, so this reject is conservative.
      if (cr > kOnSegmentTol * (dn[i] + dn[j])) continue;
      if (d[i].dot(d[j]) > 0.0) continue;  // x not between the endpoints
      const double seg = (trace.points[j] - trace.points[i]).norm();
      if (seg == 0.0) continue;
      if (cr > kOnSegmentTol * seg) continue;
      const double li = dn[i], lj = dn[j];
      const double t = li / (li + lj);
      const double val = (1.0 - t) * trace.values[i] + t * trace.values[j];
      if (val < pair.value) {
        pair.value = val;
        pair.i = i;
        pair.j = j;
        pair.t = t;
      }
    }
  }

  // Triangles containing x, angular two-pointer over samples sorted by the
  // direction they are seen from x.
  std::vector<int> by_angle(m);
  std::iota(by_angle.begin(), by_angle.end(), 0);
  std::vector<double> theta(m);
  for (int s = 0; s < m; ++s) theta[s] = std::atan2(d[s].y(), d[s].x());
  std::sort(by_angle.begin(), by_angle.end(),
            [&](int a, int b) { return theta[a] < theta[b]; });
  std::vector<double> th(m), gs(m);
  std::vector<Point> ds(m);
  for (int p = 0; p < m; ++p) {
    th[p] = theta[by_angle[p]];
    gs[p] = trace.values[by_angle[p]];
    ds[p] = d[by_angle[p]];
  }
  const double gmin_all = *std::min_element(gs.begin(), gs.end());

  TripleBest tri;
  tri.value = std::min(kInf, pair.value);  // segments already bound the optimum
  // Coarse pass seeds the bound so the min-value pruning engages early.
  const int stride = std::max(1, m / 24);
  if (stride > 1) {
    std::vector<double> cth, cgs;
    std::vector<Point> cds;
    std::vector<int> corig;
    for (int p = 0; p < m; p += stride) {
      cth.push_back(th[p]);
      cgs.push_back(gs[p]);
      cds.push_back(ds[p]);
      corig.push_back(by_angle[p]);
    }
    scan_triples(cth, cgs, cds, corig, gmin_all, tri);
  }
  scan_triples(th, gs, ds, by_angle, gmin_all, tri);

  EnvelopeWitness w;
  const double tie = 1e-12 * std::max({1.0, std::abs(pair.value),
                                       std::abs(tri.value)});
  if (pair.i >= 0 && pair.value <= tri.value + tie) {
    w.value = pair.value;
    w.support_points = {trace.points[pair.i], trace.points[pair.j]};
    w.weights = {1.0 - pair.t, pair.t};
    pair_plane(x, trace, pair.i, pair.j, w.plane_a, w.plane_b);
    return w;
  }
  if (tri.a < 0)
    throw std::invalid_argument(
        "envelope_value: query outside the sample hull");
  w.value = tri.value;
  w.support_points = {trace.points[tri.a], trace.points[tri.b],
                      trace.points[tri.k]};
  // Clamp rounding-level negative weights and renormalize.
  double wa = std::max(tri.wa, 0.0), wb = std::max(tri.wb, 0.0),
         wk = std::max(tri.wk, 0.0);
  const double ws = wa + wb + wk;
  w.weights = {wa / ws, wb / ws, wk / ws};
  Eigen::Matrix3d M;
  Eigen::Vector3d rhs;
  for (int r = 0; r < 3; ++r) {
    M(r, 0) = w.support_points[r].x();
    M(r, 1) = w.support_points[r].y();
    M(r, 2) = 1.0;
    rhs[r] = trace.values[r == 0 ? tri.a : (r == 1 ? tri.b : tri.k)];
  }
  const Eigen::Vector3d sol = M.fullPivLu().solve(rhs);
  w.plane_a = Point(sol[0], sol[1]);
  w.plane_b = sol[2];
  return w;
}

Eigen::ArrayXXd envelope_grid(const BoundaryTrace& trace, const Grid2D& grid) {
  Eigen::ArrayXXd env(grid.nx, grid.ny);
  env.setConstant(std::numeric_limits<double>::quiet_NaN());
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      if (!grid.is_interior(i, j)) continue;
      try {
        env(i, j) = envelope_value(grid.node(i, j), trace).value;
      } catch (const std::invalid_argument&) {
        // Node inside the domain but outside the sample hull: leave NaN.
      }
    }
  return env;
}

std::vector<Point> contact_points(const EnvelopeWitness& witness,
                                  const BoundaryTrace& trace,
                                  double contact_tol) {
  if (contact_tol < 0.0)
    contact_tol =
        1e-6 * (trace.values.maxCoeff() - trace.values.minCoeff());
  std::vector<Point> out;
  for (int s = 0; s < trace.m; ++s) {
    const double gap =
        trace.values[s] - (witness.plane_a.dot(trace.points[s]) + witness.plane_b);
    if (gap <= contact_tol) out.push_back(trace.points[s]);
  }
  for (const Point& p : witness.support_points) {
    bool found = false;
    for (const Point& q : out)
      if ((p - q).norm() <= 1e-12) found = true;
    if (!found) out.push_back(p);
  }
  return out;
}

}  // namespace envpde
