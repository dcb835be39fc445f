#include "systolic/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "systolic/error.hpp"

namespace systolic {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
using Item = std::pair<double, int>;
using MinHeap = std::priority_queue<Item, std::vector<Item>, std::greater<>>;

// Distance at C from known values at A and B of triangle ABC, through a
// virtual point source; infinite if the straight ray misses edge AB.
double virtual_source_update(double da, double db, double ab, double ac, double bc) {
  if (std::abs(da - db) > ab) return kInf;
  const double cx = (ac * ac + ab * ab - bc * bc) / (2.0 * ab);
  const double cy2 = ac * ac - cx * cx;
  if (cy2 <= 0.0) return kInf;
  const double cy = std::sqrt(cy2);
  const double sx = (da * da - db * db + ab * ab) / (2.0 * ab);
  const double sy2 = da * da - sx * sx;
  if (sy2 < 0.0) return kInf;
  const double sy = -std::sqrt(sy2);
  // Crossing of segment S -> C with the line y = 0.
  const double t = -sy / (cy - sy);
  const double x = sx + t * (cx - sx);
  if (x < 0.0 || x > ab) return kInf;
  return std::hypot(cx - sx, cy - sy);
}

}  // namespace

std::vector<double> graph_distances(const WeightedComplex& complex,
                                    const std::vector<std::pair<int, double>>& seeds) {
  std::vector<double> dist(complex.vertex_count(), kInf);
  MinHeap heap;
  for (auto [v, d] : seeds) {
    if (d < dist[v]) {
      dist[v] = d;
      heap.push({d, v});
    }
  }
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    for (auto [w, e] : complex.neighbours(v)) {
      const double nd = d + complex.edge(e).length;
      if (nd < dist[w]) {
        dist[w] = nd;
        heap.push({nd, w});
      }
    }
  }
  return dist;
}

std::vector<double> graph_distances(const WeightedComplex& complex, int source) {
  return graph_distances(complex, {{source, 0.0}});
}

std::vector<double> surface_distances(const WeightedComplex& surface, int source) {
  if (surface.dimension() != 2) throw InvalidInput("surface distances need a 2-complex");
  const int nv = surface.vertex_count();
  std::vector<std::vector<int>> vertex_tris(nv);
  const auto& tris = surface.triangles();
  for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
    for (int v : tris[t]) vertex_tris[v].push_back(t);
  }
  std::vector<double> dist(nv, kInf);
  std::vector<char> done(nv, 0);
  MinHeap heap;
  dist[source] = 0.0;
  heap.push({0.0, source});
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (done[v] || d > dist[v]) continue;
    done[v] = 1;
    for (auto [w, e] : surface.neighbours(v)) {
      if (done[w]) continue;
      const double nd = d + surface.edge(e).length;
      if (nd < dist[w]) {
        dist[w] = nd;
        heap.push({nd, w});
      }
    }
    for (int t : vertex_tris[v]) {
      const auto& tri = tris[t];
      for (int c : tri) {
        if (c == v || done[c]) continue;
        int a = -1;
        for (int x : tri) {
          if (x != v && x != c) a = x;
        }
        if (!done[a]) continue;
        const double nd = virtual_source_update(dist[v], dist[a], surface.length(v, a),
                                                surface.length(v, c), surface.length(a, c));
        if (nd < dist[c]) {
          dist[c] = nd;
          heap.push({nd, c});
        }
      }
    }
  }
  return dist;
}

SimplexFrames::SimplexFrames(const WeightedComplex& complex) {
  gram_inv_.reserve(complex.simplices().size());
  for (const auto& s : complex.simplices()) {
    const Eigen::MatrixXd g = simplex_gram(complex, s);
    gram_inv_.push_back(g.inverse());
  }
}

double SimplexFrames::gradient_sq(const WeightedComplex& complex, int s,
                                  const std::vector<double>& f) const {
  const auto& sv = complex.simplices()[s];
  const int k = static_cast<int>(sv.size()) - 1;
  Eigen::VectorXd delta(k);
  for (int i = 0; i < k; ++i) delta[i] = f[sv[i + 1]] - f[sv[0]];
  return std::max(0.0, delta.dot(gram_inv_[s] * delta));
}

double max_gradient(const WeightedComplex& complex, const SimplexFrames& frames,
                    const std::vector<double>& f) {
  double g = 0.0;
  for (int s = 0; s < static_cast<int>(complex.simplices().size()); ++s) {
    g = std::max(g, frames.gradient_sq(complex, s, f));
  }
  return std::sqrt(g);
}

std::vector<double> clamp_gradient(const WeightedComplex& complex, const SimplexFrames& frames,
                                   std::vector<double> f, int sweeps) {
  const int ns = static_cast<int>(complex.simplices().size());
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    bool changed = false;
    for (int s = 0; s < ns; ++s) {
      const double g2 = frames.gradient_sq(complex, s, f);
      if (g2 <= 1.0) continue;
      const double g = std::sqrt(g2);
      const auto& sv = complex.simplices()[s];
      double fmax = -kInf;
      for (int v : sv) fmax = std::max(fmax, f[v]);
      for (int v : sv) f[v] = fmax - (fmax - f[v]) / g;
      changed = true;
    }
    if (!changed) break;
  }
  const double g = max_gradient(complex, frames, f);
  if (g > 1.0) {
    for (double& x : f) x /= g;
  }
  return f;
}

double sublevel_fraction(double f0, double f1, double f2, double r) {
  double v[3] = {f0, f1, f2};
  std::sort(v, v + 3);
  if (r <= v[0]) return 0.0;
  if (r >= v[2]) return 1.0;
  if (r <= v[1]) {
    const double den = (v[1] - v[0]) * (v[2] - v[0]);
    return den > 0.0 ? (r - v[0]) * (r - v[0]) / den : 0.0;
  }
  const double den = (v[2] - v[0]) * (v[2] - v[1]);
  return den > 0.0 ? 1.0 - (v[2] - r) * (v[2] - r) / den : 1.0;
}

}  // namespace systolic
