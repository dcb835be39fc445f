#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "systolic/complex.hpp"
#include "systolic/homology.hpp"

namespace systolic {

struct LiftedEdge {
  int u = 0;
  int w = 0;
  int base_edge = 0;
};

// Finite box [-R, R]^b of the free abelian cover determined by the integer
// cocycle: lifted vertex (v, k) is joined to (w, k + y(e)) for e = v -> w.
class CoverWindow {
 public:
  CoverWindow(const WeightedComplex& base, const HomologyModel& homology,
              Eigen::VectorXi radius, std::int64_t max_vertices = 4'000'000);

  const WeightedComplex& base() const { return *base_; }
  int betti() const { return static_cast<int>(radius_.size()); }
  const Eigen::VectorXi& radius() const { return radius_; }
  int vertex_count() const { return static_cast<int>(cells_ * base_->vertex_count()); }
  const std::vector<LiftedEdge>& edges() const { return edges_; }
  /// (neighbour, lifted edge id) pairs.
  const std::vector<std::pair<int, int>>& neighbours(int id) const { return adjacency_[id]; }

  /// Lifted vertex id of (v, k), or -1 outside the window.
  int id(int v, const Eigen::VectorXi& k) const;
  int base_vertex(int id) const { return id % base_->vertex_count(); }
  Eigen::VectorXi deck(int id) const;
  /// Deck translation by `shift`, or -1 if it leaves the window.
  int translate(int id, const Eigen::VectorXi& shift) const;
  double edge_length(int lifted_edge) const { return base_->edge(edges_[lifted_edge].base_edge).length; }

 private:
  const WeightedComplex* base_;
  Eigen::VectorXi radius_;
  std::int64_t cells_ = 1;
  std::vector<LiftedEdge> edges_;
  std::vector<std::vector<std::pair<int, int>>> adjacency_;

  std::int64_t cell_index(const Eigen::VectorXi& k) const;
};

CoverWindow build_cover_window(const WeightedComplex& complex, const HomologyModel& homology,
                               const Eigen::VectorXi& radius);

/// Two-sheeted cover along a Z2 cochain; vertex (v, s) has id 2 v + s.
/// Throws "trivial cover requested" if the cochain is zero or a coboundary.
WeightedComplex double_cover(const WeightedComplex& complex, const Z2Cochain& phi);

}  // namespace systolic
