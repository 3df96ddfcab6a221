// Uniform node-centered grid covering a domain with one exterior margin cell.
#pragma once

#include <Eigen/Dense>

#include "envpde/geometry.hpp"

namespace envpde {

struct Grid2D {
  int nx = 0;    // node count along x (domain span + one margin node per side)
  int ny = 0;    // node count along y
  double h = 0;  // uniform spacing
  Point origin;  // position of node (0, 0)
  // 1 where the node is strictly inside the domain, 0 otherwise.
  Eigen::Array<unsigned char, Eigen::Dynamic, Eigen::Dynamic> interior;

  Point node(int i, int j) const { return origin + h * Point(i, j); }
  bool in_bounds(int i, int j) const {
    return i >= 0 && i < nx && j >= 0 && j < ny;
  }
  bool is_interior(int i, int j) const {
    return in_bounds(i, j) && interior(i, j) != 0;
  }
  long interior_count() const {
    return (interior != 0).count();
  }
};

// n >= 5 nodes per axis span the domain extent (h = 2*scale/(n-1)); one more
// node of margin is added on every side, so the stored grid is (n+2)^2.
Grid2D build_grid(const Domain& domain, int n);

}  // namespace envpde
