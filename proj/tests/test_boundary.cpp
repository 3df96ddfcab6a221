#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include "envpde/boundary.hpp"
#include "envpde/errors.hpp"
#include "test_util.hpp"

using envpde::BoundaryDatum;
using envpde::BoundaryTrace;
using envpde::Domain;
using envpde::eval_g;
using envpde::Point;
using envpde::Region;
using envpde::sample_boundary;

TEST_CASE("analytic datum values") {
  CHECK(eval_g(BoundaryDatum::saddle(), Point(1, 0)) == doctest::Approx(1.0));
  CHECK(eval_g(BoundaryDatum::saddle(), Point(0, 1)) == doctest::Approx(-1.0));
  const double inv = 1.0 / std::sqrt(2.0);
  CHECK(eval_g(BoundaryDatum::saddle(), Point(inv, inv)) ==
        doctest::Approx(0.0));

  CHECK(eval_g(BoundaryDatum::power_cone(0.1), Point(-1, 0)) ==
        doctest::Approx(0.0));
  CHECK(eval_g(BoundaryDatum::power_cone(0.1), Point(1, 0)) ==
        doctest::Approx(-std::pow(2.0, 0.9)));

  CHECK(eval_g(BoundaryDatum::abs_x(), Point(-0.25, 1)) ==
        doctest::Approx(0.25));
  CHECK(eval_g(BoundaryDatum::constant(5.0), Point(0, 1)) ==
        doctest::Approx(5.0));
}

TEST_CASE("affine datum is exact at arbitrary boundary points") {
  const Point a(0.3, -1.2);
  const BoundaryDatum g = BoundaryDatum::affine(a, 0.7);
  const Domain disk = Domain::disk(1.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> s(0.0, disk.perimeter());
  for (int k = 0; k < 100; ++k) {
    const Point y = disk.boundary_point(s(rng));
    CHECK(eval_g(g, y) == doctest::Approx(a.dot(y) + 0.7).epsilon(1e-14));
  }
}

TEST_CASE("power cone parameter range enforced") {
  CHECK_THROWS_AS(BoundaryDatum::power_cone(0.0), std::invalid_argument);
  CHECK_THROWS_AS(BoundaryDatum::power_cone(0.5), std::invalid_argument);
  CHECK_NOTHROW(BoundaryDatum::power_cone(0.25));
}

TEST_CASE("sampled datum nearest lookup with tolerance") {
  std::vector<Point> pts = {Point(1, 0), Point(0, 1), Point(-1, 0),
                            Point(0, -1)};
  Eigen::VectorXd vals(4);
  vals << 10, 20, 30, 40;
  const BoundaryDatum g = BoundaryDatum::sampled(pts, vals, 0.05);
  CHECK(eval_g(g, Point(1, 0)) == doctest::Approx(10.0));
  CHECK(eval_g(g, Point(0.9995, 0.03)) == doctest::Approx(10.0));
  CHECK_THROWS_AS(eval_g(g, Point(std::sqrt(0.5), std::sqrt(0.5))),
                  std::domain_error);

  CHECK_THROWS_AS(
      BoundaryDatum::sampled({Point(1, 0), Point(0, 1)}, vals.head(2), 0.1),
      std::invalid_argument);  // < 3 samples
}

TEST_CASE("disk boundary sampling: equispaced angles, exact values") {
  const Domain disk = Domain::disk(1.0);
  const BoundaryTrace tr = sample_boundary(disk, BoundaryDatum::constant(5), 4);
  REQUIRE(tr.m == 4);
  CHECK(tr.points[0].x() == doctest::Approx(1.0));
  CHECK(tr.points[1].y() == doctest::Approx(1.0));
  for (int k = 0; k < 4; ++k) {
    CHECK(tr.values[k] == doctest::Approx(5.0));
    CHECK(disk.classify(tr.points[k]) == Region::Boundary);
  }
}

TEST_CASE("square boundary sampling includes the corners") {
  const Domain sq = Domain::square(1.0);
  const BoundaryTrace tr = sample_boundary(sq, BoundaryDatum::saddle(), 8);
  REQUIRE(tr.m >= 8);
  const auto has = [&](const Point& p) {
    return std::any_of(tr.points.begin(), tr.points.end(), [&](const Point& q) {
      return (q - p).norm() < 1e-12;
    });
  };
  CHECK(has(Point(1, 1)));
  CHECK(has(Point(-1, 1)));
  CHECK(has(Point(1, -1)));
  CHECK(has(Point(-1, -1)));
  // Saddle vanishes at the corners.
  for (int k = 0; k < tr.m; ++k)
    if ((tr.points[k] - Point(1, 1)).norm() < 1e-12)
      CHECK(tr.values[k] == doctest::Approx(0.0));
}

TEST_CASE("disk saddle sampling: minimum near the poles") {
  const Domain disk = Domain::disk(1.0);
  const BoundaryTrace tr = sample_boundary(disk, BoundaryDatum::saddle(), 100);
  int arg = 0;
  for (int k = 1; k < tr.m; ++k)
    if (tr.values[k] < tr.values[arg]) arg = k;
  CHECK(tr.values.minCoeff() >= -1.0 - 1e-12);
  CHECK(std::abs(tr.points[arg].x()) < 0.1);  // minimizer near (0, +-1)
  CHECK(std::abs(std::abs(tr.points[arg].y()) - 1.0) < 0.01);
}

TEST_CASE("trace points are on-boundary, distinct, near-equispaced") {
  for (const Domain& d : {Domain::disk(1.0), Domain::square(1.0)}) {
    const BoundaryTrace tr = sample_boundary(d, BoundaryDatum::saddle(), 37);
    const double target = d.perimeter() / tr.m;
    CHECK(tr.max_gap <= 2.0 * target);
    for (int k = 0; k < tr.m; ++k) {
      CHECK(std::abs(d.signed_level(tr.points[k])) <= 1e-9);
      const Point next = tr.points[(k + 1) % tr.m];
      const double gap = (next - tr.points[k]).norm();
      CHECK(gap > 1e-9);            // distinct
      CHECK(gap <= 2.0 * target);   // chord <= arc gap bound
    }
    // Values equal eval_g at each point exactly.
    for (int k = 0; k < tr.m; ++k)
      CHECK(tr.values[k] ==
            doctest::Approx(eval_g(BoundaryDatum::saddle(), tr.points[k]))
                .epsilon(1e-14));
  }
}

TEST_CASE("sample count below 3 is rejected") {
  CHECK_THROWS_AS(sample_boundary(Domain::disk(1.0), BoundaryDatum::saddle(), 2),
                  std::invalid_argument);
}

TEST_CASE("datum_range brackets the boundary values") {
  const auto [lo, hi] =
      envpde::datum_range(Domain::square(1.0), BoundaryDatum::saddle());
  CHECK(lo == doctest::Approx(-1.0).epsilon(1e-3));
  CHECK(hi == doctest::Approx(1.0).epsilon(1e-3));
  const auto [plo, phi] =
      envpde::datum_range(Domain::disk(1.0), BoundaryDatum::power_cone(0.1));
  CHECK(plo == doctest::Approx(-std::pow(2.0, 0.9)).epsilon(1e-3));
  CHECK(phi == doctest::Approx(0.0).epsilon(1e-3));
}

TEST_CASE("sampled_from_trace reproduces the trace values") {
  const Domain disk = Domain::disk(1.0);
  const BoundaryTrace tr = sample_boundary(disk, BoundaryDatum::saddle(), 64);
  const BoundaryDatum g = envpde::sampled_from_trace(tr);
  for (int k = 0; k < tr.m; ++k)
    CHECK(eval_g(g, tr.points[k]) == doctest::Approx(tr.values[k]));
  // A boundary point between samples resolves to the nearest one.
  const Point mid = disk.boundary_point(0.5 * (disk.perimeter() / 64));
  CHECK_NOTHROW(eval_g(g, mid));
}

TEST_CASE("trace CSV round trip") {
  const Domain disk = Domain::disk(1.0);
  const BoundaryTrace tr = sample_boundary(disk, BoundaryDatum::saddle(), 31);
  const auto dir = testutil::temp_dir("trace");
  const std::string path = (dir / "trace.csv").string();
  envpde::write_trace_csv(path, tr);
  const BoundaryTrace back = envpde::read_trace_csv(path, disk);
  REQUIRE(back.m == tr.m);
  for (int k = 0; k < tr.m; ++k) {
    CHECK((back.points[k] - tr.points[k]).norm() <= 1e-15);
    CHECK(back.values[k] == doctest::Approx(tr.values[k]).epsilon(1e-15));
  }
  // Off-boundary rows are rejected.
  {
    std::ofstream bad(dir / "bad.csv");
    bad << "x,y,g\n0.5,0.5,1.0\n1,0,1\n0,1,1\n";
  }
  CHECK_THROWS_AS(envpde::read_trace_csv((dir / "bad.csv").string(), disk),
                  envpde::IoError);
  std::filesystem::remove_all(dir);
}
