#include "systolic/cover.hpp"

#include <algorithm>

#include "systolic/error.hpp"

namespace systolic {

CoverWindow::CoverWindow(const WeightedComplex& base, const HomologyModel& homology,
                         Eigen::VectorXi radius, std::int64_t max_vertices)
    : base_(&base), radius_(std::move(radius)) {
  const int b = homology.betti;
  if (b < 1) throw InvalidInput("cover window needs b >= 1");
  if (radius_.size() != b) throw InvalidInput("window radius must have b entries");
  if (radius_.minCoeff() < 1) throw InvalidInput("window radius must be >= 1 componentwise");
  for (int i = 0; i < b; ++i) {
    cells_ *= 2 * static_cast<std::int64_t>(radius_[i]) + 1;
    if (cells_ * base.vertex_count() > max_vertices) {
      throw BudgetExceeded("cover window exceeds the vertex budget");
    }
  }
  const int nv = base.vertex_count();
  adjacency_.assign(static_cast<std::size_t>(cells_ * nv), {});
  Eigen::VectorXi k(b);
  for (std::int64_t cell = 0; cell < cells_; ++cell) {
    std::int64_t rest = cell;
    for (int i = b - 1; i >= 0; --i) {
      const int w = 2 * radius_[i] + 1;
      k[i] = static_cast<int>(rest % w) - radius_[i];
      rest /= w;
    }
    for (int e = 0; e < base.edge_count(); ++e) {
      const Edge& ed = base.edge(e);
      const int target = id(ed.b, k + homology.cocycle.row(e).transpose());
      if (target < 0) continue;
      const int source = static_cast<int>(cell * nv + ed.a);
      const int le = static_cast<int>(edges_.size());
      edges_.push_back({source, target, e});
      adjacency_[source].push_back({target, le});
      adjacency_[target].push_back({source, le});
    }
  }
}

std::int64_t CoverWindow::cell_index(const Eigen::VectorXi& k) const {
  std::int64_t idx = 0;
  for (int i = 0; i < radius_.size(); ++i) {
    if (k[i] < -radius_[i] || k[i] > radius_[i]) return -1;
    idx = idx * (2 * radius_[i] + 1) + (k[i] + radius_[i]);
  }
  return idx;
}

int CoverWindow::id(int v, const Eigen::VectorXi& k) const {
  const std::int64_t c = cell_index(k);
  return c < 0 ? -1 : static_cast<int>(c * base_->vertex_count() + v);
}

Eigen::VectorXi CoverWindow::deck(int id) const {
  std::int64_t rest = id / base_->vertex_count();
  Eigen::VectorXi k(radius_.size());
  for (int i = static_cast<int>(radius_.size()) - 1; i >= 0; --i) {
    const int w = 2 * radius_[i] + 1;
    k[i] = static_cast<int>(rest % w) - radius_[i];
    rest /= w;
  }
  return k;
}

int CoverWindow::translate(int id_in, const Eigen::VectorXi& shift) const {
  return id(base_vertex(id_in), deck(id_in) + shift);
}

CoverWindow build_cover_window(const WeightedComplex& complex, const HomologyModel& homology,
                               const Eigen::VectorXi& radius) {
  return CoverWindow(complex, homology, radius);
}

WeightedComplex double_cover(const WeightedComplex& complex, const Z2Cochain& phi) {
  if (static_cast<int>(phi.size()) != complex.edge_count()) {
    throw InvalidInput("Z2 cochain needs one value per edge");
  }
  if (std::none_of(phi.begin(), phi.end(), [](std::uint8_t x) { return x != 0; })) {
    throw TopologyError("trivial cover requested");
  }
  for (std::size_t t = 0; t < complex.triangles().size(); ++t) {
    const auto& te = complex.triangle_edges(static_cast<int>(t));
    if ((phi[te[0]] ^ phi[te[1]] ^ phi[te[2]]) & 1) throw InvalidInput("Z2 cochain is not closed");
  }
  const int nv = complex.vertex_count();
  std::vector<Edge> edges;
  edges.reserve(2 * complex.edges().size());
  for (int e = 0; e < complex.edge_count(); ++e) {
    const Edge& ed = complex.edge(e);
    const int s = phi[e] & 1;
    edges.push_back({2 * ed.a, 2 * ed.b + s, ed.length});
    edges.push_back({2 * ed.a + 1, 2 * ed.b + (1 - s), ed.length});
  }
  // Sheet of each simplex vertex relative to the first one.
  std::vector<std::vector<int>> simplices;
  simplices.reserve(2 * complex.simplices().size());
  for (const auto& s : complex.simplices()) {
    for (int sheet = 0; sheet < 2; ++sheet) {
      std::vector<int> lifted;
      lifted.reserve(s.size());
      lifted.push_back(2 * s[0] + sheet);
      for (std::size_t i = 1; i < s.size(); ++i) {
        const int e = complex.find_edge(s[0], s[i]);
        lifted.push_back(2 * s[i] + (sheet ^ (phi[e] & 1)));
      }
      simplices.push_back(std::move(lifted));
    }
  }
  std::vector<Eigen::VectorXd> coords;
  if (!complex.coordinates().empty()) {
    for (int v = 0; v < nv; ++v) {
      coords.push_back(complex.coordinates()[v]);
      coords.push_back(complex.coordinates()[v]);
    }
  }
  try {
    const bool orientable = detect_orientable(2 * nv, simplices);
    return WeightedComplex(2 * nv, std::move(edges), std::move(simplices), orientable, std::move(coords));
  } catch (const TopologyError&) {
    throw TopologyError("trivial cover requested");
  }
}

}  // namespace systolic
