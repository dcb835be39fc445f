#include "systolic/filling.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "systolic/distance.hpp"
#include "systolic/error.hpp"

namespace systolic {

namespace {

std::vector<int> normalise_loop(std::vector<int> loop) {
  if (loop.size() >= 2 && loop.front() == loop.back()) loop.pop_back();
  // Cyclic backtracks u -> v -> u.
  bool changed = true;
  while (changed && loop.size() >= 3) {
    changed = false;
    const std::size_t m = loop.size();
    for (std::size_t i = 0; i < m; ++i) {
      if (loop[(i + m - 1) % m] == loop[(i + 1) % m]) {
        const std::size_t j = (i + 1) % m;
        std::vector<int> next;
        for (std::size_t k = 0; k < m; ++k)
          if (k != i && k != j) next.push_back(loop[k]);
        loop = std::move(next);
        changed = true;
        break;
      }
    }
  }
  return loop;
}

class Dsu {
 public:
  explicit Dsu(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) { return parent_[x] == x ? x : parent_[x] = find(parent_[x]); }
  void unite(int a, int b) { parent_[find(a)] = find(b); }

 private:
  std::vector<int> parent_;
};

}  // namespace

FillingSurface make_filling(WeightedComplex complex, std::vector<int> boundary) {
  if (complex.dimension() != 2) throw InvalidInput("a filling must be a surface");
  if (boundary.size() >= 2 && boundary.front() == boundary.back()) boundary.pop_back();
  if (boundary.size() < 3) throw InvalidInput("boundary loop needs at least three vertices");
  FillingSurface f{std::move(complex), std::move(boundary), {}, 0.0, 0.0};
  const int m = static_cast<int>(f.boundary.size());
  f.arc.resize(m);
  for (int i = 0; i < m; ++i) {
    f.arc[i] = f.perimeter;
    const int a = f.boundary[i], b = f.boundary[(i + 1) % m];
    if (f.complex.find_edge(a, b) < 0) throw InvalidInput("boundary loop is not an edge loop");
    f.perimeter += f.complex.length(a, b);
  }
  double margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i) {
    const auto d = surface_distances(f.complex, f.boundary[i]);
    for (int j = i + 1; j < m; ++j) {
      const double gap = std::abs(f.arc[j] - f.arc[i]);
      margin = std::min(margin, d[f.boundary[j]] - std::min(gap, f.perimeter - gap));
    }
  }
  f.embedding_margin = margin;
  return f;
}

FillingSurface filling_from_boundary(WeightedComplex complex) {
  if (complex.dimension() != 2) throw InvalidInput("a filling must be a surface");
  std::map<int, std::vector<int>> adj;
  const auto edges = complex.boundary_edges();
  if (edges.empty()) throw TopologyError("surface has no boundary");
  for (int e : edges) {
    adj[complex.edge(e).a].push_back(complex.edge(e).b);
    adj[complex.edge(e).b].push_back(complex.edge(e).a);
  }
  for (const auto& [v, nb] : adj)
    if (nb.size() != 2) throw TopologyError("boundary is not a disjoint union of circles");
  std::vector<int> loop{adj.begin()->first};
  int prev = -1;
  while (true) {
    const auto& nb = adj[loop.back()];
    int next = nb[0] != prev ? nb[0] : nb[1];
    if (next == loop.front()) break;
    prev = loop.back();
    loop.push_back(next);
  }
  if (loop.size() != adj.size()) throw TopologyError("boundary has more than one component");
  return make_filling(std::move(complex), std::move(loop));
}

FillingSurface open_along_loop(const WeightedComplex& surface, std::vector<int> loop) {
  if (surface.dimension() != 2) throw InvalidInput("can only cut surfaces");
  loop = normalise_loop(std::move(loop));
  const int m = static_cast<int>(loop.size());
  if (m < 3) throw InvalidInput("loop is too short to cut along");
  const int n = surface.vertex_count();
  std::vector<int> pos(n, -1);
  for (int i = 0; i < m; ++i) {
    if (loop[i] < 0 || loop[i] >= n) throw InvalidInput("loop vertex out of range");
    if (pos[loop[i]] >= 0)
      throw InvalidInput("loop is not simple; simplify the witness (remove repeated vertices) before cutting");
    pos[loop[i]] = i;
  }
  std::vector<char> loop_edge(surface.edge_count(), 0);
  for (int i = 0; i < m; ++i) {
    int e = surface.find_edge(loop[i], loop[(i + 1) % m]);
    if (e < 0) throw InvalidInput("loop is not an edge loop");
    loop_edge[e] = 1;
  }

  const auto& tris = surface.simplices();
  const int t_count = static_cast<int>(tris.size());
  // side[t][j]: sector of loop vertex tris[t][j] within its star, or -1.
  std::vector<std::array<int, 3>> side(t_count, {-1, -1, -1});
  std::vector<std::vector<int>> star(n);
  for (int t = 0; t < t_count; ++t)
    for (int v : tris[t])
      if (pos[v] >= 0) star[v].push_back(t);
  for (int v : loop) {
    const auto& st = star[v];
    Dsu dsu(static_cast<int>(st.size()));
    std::map<int, std::vector<int>> by_edge;
    for (std::size_t k = 0; k < st.size(); ++k)
      for (int w : tris[st[k]])
        if (w != v) by_edge[w].push_back(static_cast<int>(k));
    for (const auto& [w, ks] : by_edge) {
      if (loop_edge[surface.find_edge(v, w)]) continue;
      for (std::size_t k = 1; k < ks.size(); ++k) dsu.unite(ks[0], ks[k]);
    }
    std::vector<int> roots;
    for (std::size_t k = 0; k < st.size(); ++k) {
      int r = dsu.find(static_cast<int>(k));
      if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
    }
    if (roots.size() != 2)
      throw TopologyError("loop vertex does not split into two sides (boundary or singular vertex)");
    for (std::size_t k = 0; k < st.size(); ++k)
      for (int j = 0; j < 3; ++j)
        if (tris[st[k]][j] == v) side[st[k]][j] = dsu.find(static_cast<int>(k)) == roots[0] ? 0 : 1;
  }

  // Off-loop vertices keep their order, then two copies per loop vertex.
  std::vector<int> new_id(n, -1);
  int count = 0;
  for (int v = 0; v < n; ++v)
    if (pos[v] < 0) new_id[v] = count++;
  std::vector<std::array<int, 2>> copy(m);
  std::vector<int> origin(count + 2 * m);
  for (int v = 0; v < n; ++v)
    if (pos[v] < 0) origin[new_id[v]] = v;
  for (int i = 0; i < m; ++i) {
    copy[i] = {count, count + 1};
    origin[count] = origin[count + 1] = loop[i];
    count += 2;
  }
  auto lift = [&](int t, int j) {
    const int v = tris[t][j];
    return pos[v] < 0 ? new_id[v] : copy[pos[v]][side[t][j]];
  };

  std::vector<std::vector<int>> simplices;
  std::map<std::pair<int, int>, int> edge_ids;
  std::vector<Edge> edges;
  for (int t = 0; t < t_count; ++t) {
    std::vector<int> s{lift(t, 0), lift(t, 1), lift(t, 2)};
    std::sort(s.begin(), s.end());
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b) {
        auto key = std::make_pair(s[a], s[b]);
        if (edge_ids.count(key)) continue;
        edge_ids[key] = static_cast<int>(edges.size());
        edges.push_back({s[a], s[b], surface.length(origin[s[a]], origin[s[b]])});
      }
    simplices.push_back(std::move(s));
  }
  std::vector<Eigen::VectorXd> coords;
  if (!surface.coordinates().empty())
    for (int v : origin) coords.push_back(surface.coordinates()[v]);

  // Trace the cut circle through the copies of the loop edges.
  std::vector<std::vector<int>> adj(count);
  for (int i = 0; i < m; ++i) {
    const int a = loop[i], b = loop[(i + 1) % m];
    for (int t : star[a]) {
      int ja = -1, jb = -1;
      for (int j = 0; j < 3; ++j) {
        if (tris[t][j] == a) ja = j;
        if (tris[t][j] == b) jb = j;
      }
      if (jb < 0) continue;
      const int u = lift(t, ja), w = lift(t, jb);
      adj[u].push_back(w);
      adj[w].push_back(u);
    }
  }
  std::vector<int> boundary{copy[0][0]};
  int prev = -1;
  while (true) {
    const auto& nb = adj[boundary.back()];
    if (nb.size() != 2) throw TopologyError("cut loop is not two-sided at every edge");
    int next = nb[0] != prev ? nb[0] : nb[1];
    if (next == boundary.front()) break;
    prev = boundary.back();
    boundary.push_back(next);
    if (static_cast<int>(boundary.size()) > 2 * m) throw TopologyError("cut circle failed to close");
  }
  if (static_cast<int>(boundary.size()) != 2 * m)
    throw TopologyError("loop is two-sided: cutting gives two boundary circles, not one");

  const bool orientable = detect_orientable(count, simplices);
  WeightedComplex cut(count, std::move(edges), std::move(simplices), orientable, std::move(coords));
  return make_filling(std::move(cut), std::move(boundary));
}

DiamondReport diamond_certificate(const FillingSurface& filling, double tolerance,
                                  double margin_tolerance) {
  const auto& c = filling.complex;
  const double per = filling.perimeter;
  DiamondReport r;
  r.perimeter = per;
  r.filling_area = c.volume();
  r.embedding_margin = filling.embedding_margin;
  if (filling.embedding_margin < -margin_tolerance * per)
    throw CertificationError("not an isometric filling: boundary chords are shorter than arcs",
                             filling.embedding_margin);

  const int m = static_cast<int>(filling.boundary.size());
  int jq = 1;
  for (int j = 1; j < m; ++j)
    if (std::abs(filling.arc[j] - per / 4) < std::abs(filling.arc[jq] - per / 4)) jq = j;
  r.p = filling.boundary[0];
  r.q = filling.boundary[jq];
  r.separation = std::min(filling.arc[jq], per - filling.arc[jq]);
  r.separation_error = std::abs(r.separation - per / 4);
  r.target = 2.0 * r.separation * (per / 2 - r.separation);

  SimplexFrames frames(c);
  const auto dp = clamp_gradient(c, frames, surface_distances(c, r.p));
  const auto dq = clamp_gradient(c, frames, surface_distances(c, r.q));

  double excess = -std::numeric_limits<double>::infinity();
  for (const auto& e : c.edges())
    excess = std::max({excess, std::abs(dp[e.b] - dp[e.a]) - e.length, std::abs(dq[e.b] - dq[e.a]) - e.length});
  r.max_lipschitz_excess = excess;
  for (std::size_t s = 0; s < c.simplices().size(); ++s) {
    const auto& t = c.simplices()[s];
    Eigen::Vector2d a(dp[t[1]] - dp[t[0]], dp[t[2]] - dp[t[0]]);
    Eigen::Vector2d b(dq[t[1]] - dq[t[0]], dq[t[2]] - dq[t[0]]);
    const Eigen::MatrixXd& gi = frames.gram_inverse(static_cast<int>(s));
    const double ff = a.dot(gi * a), gg = b.dot(gi * b), fg = a.dot(gi * b);
    r.max_jacobian = std::max(r.max_jacobian, std::sqrt(std::max(0.0, ff * gg - fg * fg)));
  }

  double twice = 0.0;
  for (int i = 0; i < m; ++i) {
    const int u = filling.boundary[i], w = filling.boundary[(i + 1) % m];
    twice += dp[u] * dq[w] - dp[w] * dq[u];
  }
  r.certified_lower_bound = 0.5 * std::abs(twice);
  r.ratio_bound = r.certified_lower_bound > 0 ? (per / 2) * (per / 2) / r.certified_lower_bound
                                              : std::numeric_limits<double>::infinity();
  r.measured_ratio = (per / 2) * (per / 2) / r.filling_area;
  r.pass = r.max_lipschitz_excess <= 1e-9 && r.max_jacobian <= 1.0 + 1e-6 &&
           r.certified_lower_bound >= r.target * (1.0 - tolerance);
  return r;
}

}  // namespace systolic
