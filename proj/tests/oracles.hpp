#pragma once

// Independent brute-force oracles shared by the unit tests and the
// acceptance runner. Deliberately naive: exhaustive boxes, vertex
// enumeration, explicit cycle algebra.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "systolic/complex.hpp"
#include "systolic/convex.hpp"
#include "systolic/homology.hpp"

namespace oracle {

using namespace systolic;

// Exhaustive search over the coefficient box |c_i| <= R |b*_i|, where b*_i
// are the rows of B^{-T}: any v = c^T B with |v| <= R has |c_i| <= R |b*_i|.
inline double brute_force_lambda1(const Eigen::MatrixXd& b) {
  const int d = static_cast<int>(b.rows());
  const Eigen::MatrixXd dual = b.inverse().transpose();
  double r = b.rowwise().norm().minCoeff();
  std::vector<int> bound(d);
  for (int i = 0; i < d; ++i) bound[i] = static_cast<int>(std::floor(r * dual.row(i).norm() + 1e-9));
  double best = r;
  Eigen::VectorXi c(d);
  std::function<void(int)> rec = [&](int i) {
    if (i == d) {
      if (c.isZero()) return;
      best = std::min(best, (c.cast<double>().transpose() * b).norm());
      return;
    }
    for (int k = -bound[i]; k <= bound[i]; ++k) {
      c[i] = k;
      rec(i + 1);
    }
  };
  rec(0);
  return best;
}

inline Eigen::MatrixXd random_basis(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  while (true) {
    Eigen::MatrixXd m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = g(rng);
    double prod = 1.0;
    for (int i = 0; i < d; ++i) prod *= m.row(i).norm();
    if (std::abs(m.determinant()) > 0.1 * prod) return m;
  }
}

// max <L, x> over the body by enumerating vertices: every vertex solves
// <a_j, x> = +-1 for d facets and satisfies all the others.
inline double vertex_dual_norm(const SymmetricBody& body, const Eigen::VectorXd& l) {
  const int d = body.dimension();
  const auto& f = body.facets();
  const int m = static_cast<int>(f.size());
  double best = -1.0;
  std::vector<int> pick(m, 0);
  std::fill(pick.end() - d, pick.end(), 1);
  do {
    std::vector<int> idx;
    for (int j = 0; j < m; ++j)
      if (pick[j]) idx.push_back(j);
    Eigen::MatrixXd a(d, d);
    for (int k = 0; k < d; ++k) a.row(k) = f[idx[k]].transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) continue;
    for (int s = 0; s < (1 << d); ++s) {
      Eigen::VectorXd rhs(d);
      for (int k = 0; k < d; ++k) rhs[k] = (s >> k) & 1 ? 1.0 : -1.0;
      const Eigen::VectorXd x = lu.solve(rhs);
      if (body.gauge(x) <= 1.0 + 1e-9) best = std::max(best, l.dot(x));
    }
  } while (std::next_permutation(pick.begin(), pick.end()));
  return best;
}

inline SymmetricBody random_body(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> extra(1, 4);
  const int m = d + extra(rng);
  std::vector<Eigen::VectorXd> facets;
  for (int j = 0; j < m; ++j) {
    Eigen::VectorXd a(d);
    for (int i = 0; i < d; ++i) a[i] = g(rng);
    facets.push_back(a);
  }
  return SymmetricBody(d, facets);
}

// Bare graph: every class has exactly one real cycle, so the stable norm is
// the mass of the combination of generator loops.
inline double graph_cycle_mass(const WeightedComplex& g, const HomologyModel& h, const Eigen::VectorXi& cls) {
  std::vector<double> z(g.edge_count(), 0.0);
  for (int i = 0; i < h.betti; ++i) {
    const auto& loop = h.generator_loops[i];
    for (std::size_t k = 0; k + 1 < loop.size(); ++k) {
      const int u = loop[k], w = loop[k + 1];
      z[g.find_edge(u, w)] += cls[i] * (u < w ? 1.0 : -1.0);
    }
  }
  double m = 0.0;
  for (int e = 0; e < g.edge_count(); ++e) m += std::abs(z[e]) * g.edge(e).length;
  return m;
}

inline WeightedComplex random_graph(std::mt19937_64& rng, int n, int extra) {
  std::uniform_real_distribution<double> len(0.5, 2.0);
  std::vector<Edge> edges;
  for (int v = 1; v < n; ++v) edges.push_back({static_cast<int>(rng() % v), v, len(rng)});
  while (extra > 0) {
    int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    bool dup = false;
    for (const auto& e : edges) dup = dup || (e.a == a && e.b == b);
    if (dup) continue;
    edges.push_back({a, b, len(rng)});
    --extra;
  }
  return WeightedComplex(n, edges, {}, true);
}

}  // namespace oracle
