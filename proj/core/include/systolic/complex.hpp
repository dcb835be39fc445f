#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace systolic {

/// Undirected edge a < b, oriented a -> b for chains and cochains.
struct Edge {
  int a = 0;
  int b = 0;
  double length = 0.0;
};

// Piecewise-flat simplicial complex: every top simplex is flat with the
// metric fixed by its edge lengths. Top simplices may be triangles, tets
// or 4-simplices (the last only for product meshes); the complex is pure.
class WeightedComplex {
 public:
  WeightedComplex(int vertex_count, std::vector<Edge> edges,
                  std::vector<std::vector<int>> simplices, bool orientable,
                  std::vector<Eigen::VectorXd> coordinates = {});

  int vertex_count() const { return vertex_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  /// Dimension of the top simplices (1 for a bare graph).
  int dimension() const { return dimension_; }
  bool orientable() const { return orientable_; }

  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[e]; }
  /// Sorted vertex lists of the top simplices.
  const std::vector<std::vector<int>>& simplices() const { return simplices_; }
  /// All 2-faces, as sorted vertex triples.
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  /// Edge ids of triangle t in the order (v0v1, v1v2, v0v2).
  const std::array<int, 3>& triangle_edges(int t) const { return triangle_edges_[t]; }
  /// (neighbour, edge id) pairs.
  const std::vector<std::pair<int, int>>& neighbours(int v) const { return adjacency_[v]; }
  const std::vector<Eigen::VectorXd>& coordinates() const { return coordinates_; }

  /// Edge id of {a, b}, or -1.
  int find_edge(int a, int b) const;
  double length(int a, int b) const;

  /// Integer translation part carried by each edge (rows = edges) when the
  /// complex is a quotient of a periodic mesh; empty otherwise.
  const Eigen::MatrixXi& periods() const { return periods_; }
  WeightedComplex with_periods(Eigen::MatrixXi periods) const;

  double simplex_volume(int s) const;
  double volume() const;
  /// Edges lying in exactly one triangle (surfaces only).
  std::vector<int> boundary_edges() const;
  WeightedComplex scaled(double c) const;
  /// Same complex with new edge lengths (validated again).
  WeightedComplex with_lengths(const std::vector<double>& lengths) const;

 private:
  int vertex_count_;
  int dimension_ = 1;
  bool orientable_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> simplices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<std::array<int, 3>> triangle_edges_;
  std::vector<std::vector<std::pair<int, int>>> adjacency_;
  std::vector<Eigen::VectorXd> coordinates_;
  std::unordered_map<std::uint64_t, int> edge_lookup_;
  Eigen::MatrixXi periods_;
  std::vector<double> volumes_;
};

/// Gram matrix of the edge vectors v_i - v_0 of a flat simplex, from its
/// edge lengths (law of cosines).
Eigen::MatrixXd simplex_gram(const WeightedComplex& complex, const std::vector<int>& simplex);
/// k-volume of a flat k-simplex from its Gram matrix (0 if degenerate).
double gram_volume(const Eigen::MatrixXd& gram);

/// Edge-midpoint 1 -> 4 subdivision of a surface; keeps every triangle flat
/// and similar to its parent.
WeightedComplex refine_midpoint(const WeightedComplex& surface);

/// True if the top simplices admit coherent orientations (pseudomanifold
/// propagation across codimension-one faces).
bool detect_orientable(int vertex_count, const std::vector<std::vector<int>>& simplices);

}  // namespace systolic
