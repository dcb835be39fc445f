#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "systolic/complex.hpp"

namespace systolic {

/// Per-edge Z2 cochain (0/1 per edge, read along a -> b).
using Z2Cochain = std::vector<std::uint8_t>;

// First homology of a complex: Betti number, an integer cocycle basis that
// vanishes on a spanning tree, the extra Z2 classes not coming from
// integer classes, and closed walks dual to the integer basis.
struct HomologyModel {
  int betti = 0;
  int root = 0;
  std::vector<int> tree_edges;
  /// Cotree edges left free by the triangle-peeling elimination; every
  /// cocycle value is an integer combination of the values on these.
  std::vector<int> generator_edges;
  /// edges x betti; row e is the class increment along a -> b.
  Eigen::MatrixXi cocycle;
  /// Number of Z2 classes beyond the reductions of integer classes.
  int z2_rank = 0;
  /// Per edge, bit k = value of the k-th extra Z2 class.
  std::vector<std::uint32_t> z2;
  /// Closed vertex walks (based at root); walk i has class e_i.
  std::vector<std::vector<int>> generator_loops;
  /// True when the integer basis was aligned with the complex's periods.
  bool period_basis = false;

  Eigen::VectorXi walk_class(const WeightedComplex& complex, const std::vector<int>& walk) const;
  std::uint32_t walk_z2(const WeightedComplex& complex, const std::vector<int>& walk) const;
  /// The k-th extra Z2 class as an edge cochain.
  Z2Cochain z2_class(int k) const;
  /// Reduction mod 2 of the i-th integer class.
  Z2Cochain integer_class_mod2(int i) const;
};

HomologyModel build_homology(const WeightedComplex& complex);

/// Z2 value of a closed walk under a cochain.
int walk_parity(const WeightedComplex& complex, const Z2Cochain& phi, const std::vector<int>& walk);

/// Remove immediate backtracks u v u from a closed walk.
std::vector<int> cancel_backtracks(std::vector<int> walk);

/// Length of a walk along existing edges.
double walk_length(const WeightedComplex& complex, const std::vector<int>& walk);

}  // namespace systolic
