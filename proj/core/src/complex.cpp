#include "systolic/complex.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

#include "systolic/error.hpp"

namespace systolic {
namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

struct VectorHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (int x : v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
    return h;
  }
};

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

WeightedComplex::WeightedComplex(int vertex_count, std::vector<Edge> edges,
                                 std::vector<std::vector<int>> simplices, bool orientable,
                                 std::vector<Eigen::VectorXd> coordinates)
    : vertex_count_(vertex_count),
      orientable_(orientable),
      edges_(std::move(edges)),
      simplices_(std::move(simplices)),
      coordinates_(std::move(coordinates)) {
  if (vertex_count_ < 1) throw InvalidInput("complex needs at least one vertex");
  if (!coordinates_.empty() && static_cast<int>(coordinates_.size()) != vertex_count_) {
    throw InvalidInput("coordinate count does not match vertex count");
  }
  edge_lookup_.reserve(edges_.size() * 2);
  adjacency_.assign(vertex_count_, {});
  for (int e = 0; e < edge_count(); ++e) {
    Edge& ed = edges_[e];
    if (ed.a > ed.b) std::swap(ed.a, ed.b);
    if (ed.a < 0 || ed.b >= vertex_count_ || ed.a == ed.b) {
      throw InvalidInput("edge endpoints out of range or equal");
    }
    if (!(ed.length > 0.0) || !std::isfinite(ed.length)) {
      throw InvalidInput("edge lengths must be positive and finite");
    }
    if (!edge_lookup_.emplace(edge_key(ed.a, ed.b), e).second) {
      throw InvalidInput("duplicate edge");
    }
    adjacency_[ed.a].push_back({ed.b, e});
    adjacency_[ed.b].push_back({ed.a, e});
  }

  if (!simplices_.empty()) {
    const std::size_t k = simplices_.front().size();
    if (k < 2 || k > 5) throw InvalidInput("top simplices must have 2..5 vertices");
    dimension_ = static_cast<int>(k) - 1;
    for (auto& s : simplices_) {
      if (s.size() != k) throw InvalidInput("complex is not pure");
      std::sort(s.begin(), s.end());
      if (std::adjacent_find(s.begin(), s.end()) != s.end() || s.front() < 0 ||
          s.back() >= vertex_count_) {
        throw InvalidInput("simplex with repeated or out-of-range vertices");
      }
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
          if (find_edge(s[i], s[j]) < 0) throw InvalidInput("simplex edge missing from edge list");
        }
      }
    }
  }

  // 2-faces.
  if (dimension_ >= 2) {
    std::unordered_map<std::vector<int>, int, VectorHash> seen;
    for (const auto& s : simplices_) {
      const int k = static_cast<int>(s.size());
      for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
          for (int l = j + 1; l < k; ++l) {
            std::vector<int> tri{s[i], s[j], s[l]};
            if (seen.emplace(tri, static_cast<int>(triangles_.size())).second) {
              triangles_.push_back({s[i], s[j], s[l]});
            }
          }
        }
      }
    }
    triangle_edges_.reserve(triangles_.size());
    for (const auto& t : triangles_) {
      const int e01 = find_edge(t[0], t[1]);
      const int e12 = find_edge(t[1], t[2]);
      const int e02 = find_edge(t[0], t[2]);
      const double x = edges_[e01].length, y = edges_[e12].length, z = edges_[e02].length;
      if (!(x < y + z && y < x + z && z < x + y)) {
        throw InvalidInput("triangle violates the strict triangle inequality");
      }
      triangle_edges_.push_back({e01, e12, e02});
    }
  }

  volumes_.reserve(simplices_.size());
  for (const auto& s : simplices_) {
    const double v = gram_volume(simplex_gram(*this, s));
    if (!(v > 0.0)) throw InvalidInput("degenerate simplex (Cayley-Menger volume not positive)");
    volumes_.push_back(v);
  }

  // Connectivity of the 1-skeleton.
  std::vector<char> seen(vertex_count_, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (auto [w, e] : adjacency_[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  if (reached != vertex_count_) throw TopologyError("1-skeleton is disconnected");
}

int WeightedComplex::find_edge(int a, int b) const {
  const auto it = edge_lookup_.find(edge_key(a, b));
  return it == edge_lookup_.end() ? -1 : it->second;
}

double WeightedComplex::length(int a, int b) const {
  const int e = find_edge(a, b);
  if (e < 0) throw InvalidInput("no such edge");
  return edges_[e].length;
}

WeightedComplex WeightedComplex::with_periods(Eigen::MatrixXi periods) const {
  if (periods.rows() != edge_count()) throw InvalidInput("periods need one row per edge");
  WeightedComplex out = *this;
  out.periods_ = std::move(periods);
  return out;
}

double WeightedComplex::simplex_volume(int s) const { return volumes_[s]; }

double WeightedComplex::volume() const {
  double v = 0.0;
  for (double x : volumes_) v += x;
  return v;
}

std::vector<int> WeightedComplex::boundary_edges() const {
  std::vector<int> count(edges_.size(), 0);
  for (const auto& te : triangle_edges_) {
    for (int e : te) ++count[e];
  }
  std::vector<int> out;
  for (int e = 0; e < edge_count(); ++e) {
    if (count[e] == 1) out.push_back(e);
  }
  return out;
}

WeightedComplex WeightedComplex::scaled(double c) const {
  if (!(c > 0.0)) throw InvalidInput("scale factor must be positive");
  std::vector<double> lengths;
  lengths.reserve(edges_.size());
  for (const auto& e : edges_) lengths.push_back(c * e.length);
  WeightedComplex out = with_lengths(lengths);
  if (!out.coordinates_.empty()) {
    for (auto& x : out.coordinates_) x *= c;
  }
  return out;
}

WeightedComplex WeightedComplex::with_lengths(const std::vector<double>& lengths) const {
  if (lengths.size() != edges_.size()) throw InvalidInput("one length per edge required");
  std::vector<Edge> edges = edges_;
  for (std::size_t e = 0; e < edges.size(); ++e) edges[e].length = lengths[e];
  WeightedComplex out(vertex_count_, std::move(edges), simplices_, orientable_, coordinates_);
  out.periods_ = periods_;
  return out;
}

Eigen::MatrixXd simplex_gram(const WeightedComplex& complex, const std::vector<int>& s) {
  const int k = static_cast<int>(s.size()) - 1;
  Eigen::MatrixXd g(k, k);
  for (int i = 1; i <= k; ++i) {
    const double li = complex.length(s[0], s[i]);
    for (int j = i; j <= k; ++j) {
      const double lj = complex.length(s[0], s[j]);
      const double lij = i == j ? 0.0 : complex.length(s[i], s[j]);
      g(i - 1, j - 1) = g(j - 1, i - 1) = 0.5 * (li * li + lj * lj - lij * lij);
    }
  }
  return g;
}

double gram_volume(const Eigen::MatrixXd& gram) {
  const int k = static_cast<int>(gram.rows());
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) return 0.0;
  double det_sqrt = 1.0;
  for (int i = 0; i < k; ++i) det_sqrt *= llt.matrixL()(i, i);
  return det_sqrt / factorial(k);
}

WeightedComplex refine_midpoint(const WeightedComplex& surface) {
  if (surface.dimension() != 2) throw InvalidInput("midpoint refinement needs a surface");
  const int v0 = surface.vertex_count();
  const int e0 = surface.edge_count();
  const bool has_periods = surface.periods().rows() > 0;
  const int pdim = has_periods ? static_cast<int>(surface.periods().cols()) : 0;

  std::vector<Edge> edges;
  std::vector<Eigen::VectorXi> periods;
  auto period_of = [&](int e) -> Eigen::VectorXi {
    return has_periods ? Eigen::VectorXi(surface.periods().row(e).transpose())
                       : Eigen::VectorXi();
  };
  auto push = [&](int a, int b, double len, Eigen::VectorXi p) {
    if (a > b) {
      std::swap(a, b);
      p = -p;
    }
    edges.push_back({a, b, len});
    periods.push_back(std::move(p));
  };
  // Half edge (a, mid) carries the whole period, (mid, b) none.
  for (int e = 0; e < e0; ++e) {
    const Edge& ed = surface.edge(e);
    const int mid = v0 + e;
    const Eigen::VectorXi zero = Eigen::VectorXi::Zero(pdim);
    push(ed.a, mid, 0.5 * ed.length, period_of(e));
    push(mid, ed.b, 0.5 * ed.length, zero);
  }
  // Period from a vertex to the midpoint of edge e, walking along e.
  auto to_mid = [&](int v, int e) -> Eigen::VectorXi {
    const Edge& ed = surface.edge(e);
    if (v == ed.a) return period_of(e);
    return Eigen::VectorXi::Zero(pdim);
  };
  std::vector<std::vector<int>> tris;
  tris.reserve(surface.triangles().size() * 4);
  for (std::size_t t = 0; t < surface.triangles().size(); ++t) {
    const auto& tri = surface.triangles()[t];
    const auto& te = surface.triangle_edges(static_cast<int>(t));
    const int m01 = v0 + te[0], m12 = v0 + te[1], m02 = v0 + te[2];
    const double l01 = surface.edge(te[0]).length, l12 = surface.edge(te[1]).length,
                 l02 = surface.edge(te[2]).length;
    // Midpoint segments are half the opposite side; their period follows the
    // path mid -> shared vertex -> mid.
    push(m01, m12, 0.5 * l02, Eigen::VectorXi(-to_mid(tri[1], te[0]) + to_mid(tri[1], te[1])));
    push(m12, m02, 0.5 * l01, Eigen::VectorXi(-to_mid(tri[2], te[1]) + to_mid(tri[2], te[2])));
    push(m01, m02, 0.5 * l12, Eigen::VectorXi(-to_mid(tri[0], te[0]) + to_mid(tri[0], te[2])));
    tris.push_back({tri[0], m01, m02});
    tris.push_back({tri[1], m01, m12});
    tris.push_back({tri[2], m12, m02});
    tris.push_back({m01, m12, m02});
  }
  std::vector<Eigen::VectorXd> coords;
  if (!surface.coordinates().empty()) {
    coords = surface.coordinates();
    for (int e = 0; e < e0; ++e) {
      const Edge& ed = surface.edge(e);
      coords.push_back(0.5 * (surface.coordinates()[ed.a] + surface.coordinates()[ed.b]));
    }
  }
  WeightedComplex out(v0 + e0, edges, std::move(tris), surface.orientable(), std::move(coords));
  if (!has_periods) return out;
  Eigen::MatrixXi p(static_cast<int>(out.edge_count()), pdim);
  for (int e = 0; e < out.edge_count(); ++e) p.row(e) = periods[e].transpose();
  return out.with_periods(std::move(p));
}

bool detect_orientable(int vertex_count, const std::vector<std::vector<int>>& simplices) {
  (void)vertex_count;
  const int n = static_cast<int>(simplices.size());
  if (n == 0) return true;
  // face -> list of (simplex, induced sign)
  std::unordered_map<std::vector<int>, std::vector<std::pair<int, int>>, VectorHash> faces;
  for (int s = 0; s < n; ++s) {
    std::vector<int> sorted = simplices[s];
    std::sort(sorted.begin(), sorted.end());
    const int k = static_cast<int>(sorted.size());
    for (int i = 0; i < k; ++i) {
      std::vector<int> f;
      f.reserve(k - 1);
      for (int j = 0; j < k; ++j) {
        if (j != i) f.push_back(sorted[j]);
      }
      faces[f].push_back({s, (i % 2 == 0) ? 1 : -1});
    }
  }
  std::vector<std::vector<std::pair<int, int>>> links(n);  // (other, product of signs)
  for (const auto& [f, list] : faces) {
    for (std::size_t i = 1; i < list.size(); ++i) {
      links[list[0].first].push_back({list[i].first, list[0].second * list[i].second});
      links[list[i].first].push_back({list[0].first, list[0].second * list[i].second});
    }
  }
  std::vector<int> orient(n, 0);
  for (int start = 0; start < n; ++start) {
    if (orient[start] != 0) continue;
    orient[start] = 1;
    std::queue<int> q;
    q.push(start);
    while (!q.empty()) {
      const int s = q.front();
      q.pop();
      for (auto [t, sign] : links[s]) {
        // Coherent: o_s * sign_s + o_t * sign_t = 0  =>  o_t = -o_s * sign_s * sign_t.
        const int want = -orient[s] * sign;
        if (orient[t] == 0) {
          orient[t] = want;
          q.push(t);
        } else if (orient[t] != want) {
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace systolic
