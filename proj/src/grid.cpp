#include "envpde/grid.hpp"

#include <stdexcept>

namespace envpde {

Grid2D build_grid(const Domain& domain, int n) {
  if (n < 5) throw std::invalid_argument("build_grid: n must be >= 5");
  Grid2D g;
  g.h = 2.0 * domain.scale() / (n - 1);
  g.nx = n + 2;
  g.ny = n + 2;
  g.origin = domain.center() - (domain.scale() + g.h) * Point::Ones();
  g.interior.resize(g.nx, g.ny);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      g.interior(i, j) =
          domain.classify(g.node(i, j)) == Region::Interior ? 1 : 0;
  return g;
}

}  // namespace envpde
