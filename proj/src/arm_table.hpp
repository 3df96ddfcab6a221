// Internal: flattened stencil-arm tables powering the sweep kernels.
// Boundary arm constants occupy extra slots of the value buffer so the inner
// loops stay branch-free.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "envpde/boundary.hpp"
#include "envpde/geometry.hpp"
#include "envpde/grid.hpp"
#include "envpde/stencil.hpp"

namespace envpde::detail {

struct ArmTable {
  int ndirs = 0;
  int nnodes = 0;            // interior node count
  std::vector<int> node_i, node_j;
  std::vector<int32_t> self;             // buffer slot per node
  std::vector<int32_t> slot_f, slot_b;   // per (node, dir), node-major
  std::vector<double> wf, wb;            // local-update weights h/(h+k), k/(h+k)
  std::vector<double> inv_hk2;           // 2/(k_plus * h_minus) per (node, dir)
  std::vector<double> buffer;            // nx*ny node slots + boundary constants
  int node_slots = 0;
  std::vector<int32_t> orders[4];        // sweep orders (positions in node list)

  void fill_interior(double v) {
    for (int n = 0; n < nnodes; ++n) buffer[self[n]] = v;
  }
};

// value_on_boundary supplies truncated-arm constants (datum or obstacle trace).
ArmTable build_arm_table(const Grid2D& grid, const Domain& domain,
                         const DirectionSet& dirs,
                         const std::function<double(const Point&)>& value_on_boundary);

}  // namespace envpde::detail
