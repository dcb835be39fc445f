#include "systolic/homology.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <set>

#include "systolic/error.hpp"

namespace systolic {
namespace {

using i64 = std::int64_t;
__extension__ typedef __int128 i128;

i64 narrow(i128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw ConvergenceError("integer overflow in homology elimination", 0.0);
  return static_cast<i64>(v);
}

struct ExtGcd {
  i64 g, x, y;
};

ExtGcd ext_gcd(i64 a, i64 b) {
  i64 old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const i64 q = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
    std::tie(old_t, t) = std::make_pair(t, old_t - q * t);
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

using IntMatrix = std::vector<std::vector<i64>>;  // row-major

struct KernelResult {
  int rank = 0;
  IntMatrix u;  // c x c, columns rank.. span the integer kernel
  IntMatrix v;  // inverse of u
};

// Column-style Hermite elimination: R U = [H | 0] with U unimodular.
KernelResult integer_kernel(const std::vector<std::vector<i64>>& rows, int c) {
  KernelResult k;
  k.u.assign(c, std::vector<i64>(c, 0));
  k.v.assign(c, std::vector<i64>(c, 0));
  for (int i = 0; i < c; ++i) k.u[i][i] = k.v[i][i] = 1;
  int p = 0;
  std::vector<i64> a(c);
  for (const auto& row : rows) {
    if (p == c) break;
    for (int j = 0; j < c; ++j) {
      i128 s = 0;
      for (int l = 0; l < c; ++l) {
        if (row[l] != 0 && k.u[l][j] != 0) s += static_cast<i128>(row[l]) * k.u[l][j];
      }
      a[j] = narrow(s);
    }
    int nz = -1;
    for (int j = p; j < c; ++j) {
      if (a[j] != 0) {
        nz = j;
        break;
      }
    }
    if (nz < 0) continue;
    if (nz != p) {
      std::swap(a[p], a[nz]);
      for (int l = 0; l < c; ++l) std::swap(k.u[l][p], k.u[l][nz]);
      std::swap(k.v[p], k.v[nz]);
    }
    for (int j = p + 1; j < c; ++j) {
      if (a[j] == 0) continue;
      const ExtGcd eg = ext_gcd(a[p], a[j]);
      const i64 ap = a[p] / eg.g, aj = a[j] / eg.g;
      for (int l = 0; l < c; ++l) {
        const i64 up = k.u[l][p], uj = k.u[l][j];
        k.u[l][p] = narrow(static_cast<i128>(eg.x) * up + static_cast<i128>(eg.y) * uj);
        k.u[l][j] = narrow(static_cast<i128>(-aj) * up + static_cast<i128>(ap) * uj);
        const i64 vp = k.v[p][l], vj = k.v[j][l];
        k.v[p][l] = narrow(static_cast<i128>(ap) * vp + static_cast<i128>(aj) * vj);
        k.v[j][l] = narrow(static_cast<i128>(-eg.y) * vp + static_cast<i128>(eg.x) * vj);
      }
      a[p] = eg.g;
      a[j] = 0;
    }
    ++p;
  }
  k.rank = p;
  return k;
}

// Basis of the GF(2) kernel of `rows` (each of length c).
std::vector<std::vector<std::uint8_t>> gf2_kernel(const std::vector<std::vector<i64>>& rows, int c) {
  std::vector<std::vector<std::uint8_t>> m;
  for (const auto& r : rows) {
    std::vector<std::uint8_t> b(c);
    bool any = false;
    for (int j = 0; j < c; ++j) {
      b[j] = static_cast<std::uint8_t>(r[j] & 1);
      any |= b[j] != 0;
    }
    if (any) m.push_back(std::move(b));
  }
  std::vector<int> pivot_of_col(c, -1);
  int rank = 0;
  for (int col = 0; col < c && rank < static_cast<int>(m.size()); ++col) {
    int sel = -1;
    for (int i = rank; i < static_cast<int>(m.size()); ++i) {
      if (m[i][col]) {
        sel = i;
        break;
      }
    }
    if (sel < 0) continue;
    std::swap(m[rank], m[sel]);
    for (int i = 0; i < static_cast<int>(m.size()); ++i) {
      if (i != rank && m[i][col]) {
        for (int j = 0; j < c; ++j) m[i][j] ^= m[rank][j];
      }
    }
    pivot_of_col[col] = rank++;
  }
  std::vector<std::vector<std::uint8_t>> basis;
  for (int f = 0; f < c; ++f) {
    if (pivot_of_col[f] >= 0) continue;
    std::vector<std::uint8_t> x(c, 0);
    x[f] = 1;
    for (int col = 0; col < c; ++col) {
      if (pivot_of_col[col] >= 0 && m[pivot_of_col[col]][f]) x[col] = 1;
    }
    basis.push_back(std::move(x));
  }
  return basis;
}

// Incremental GF(2) span; add() returns false if the vector is dependent.
class Gf2Span {
 public:
  explicit Gf2Span(int n) : n_(n) {}
  bool add(std::vector<std::uint8_t> v) {
    for (const auto& [col, row] : rows_) {
      if (v[col]) {
        for (int j = 0; j < n_; ++j) v[j] ^= row[j];
      }
    }
    for (int j = 0; j < n_; ++j) {
      if (v[j]) {
        for (auto& [col, row] : rows_) {
          if (row[j]) {
            for (int l = 0; l < n_; ++l) row[l] ^= v[l];
          }
        }
        rows_.push_back({j, std::move(v)});
        return true;
      }
    }
    return false;
  }

 private:
  int n_;
  std::vector<std::pair<int, std::vector<std::uint8_t>>> rows_;
};

i64 coeff(const std::vector<i64>& expr, int j) {
  return j < static_cast<int>(expr.size()) ? expr[j] : 0;
}

}  // namespace

std::vector<int> cancel_backtracks(std::vector<int> walk) {
  std::vector<int> out;
  out.reserve(walk.size());
  for (int v : walk) {
    if (out.size() >= 2 && out[out.size() - 2] == v) {
      out.pop_back();
    } else {
      out.push_back(v);
    }
  }
  return out;
}

double walk_length(const WeightedComplex& complex, const std::vector<int>& walk) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < walk.size(); ++i) s += complex.length(walk[i], walk[i + 1]);
  return s;
}

Eigen::VectorXi HomologyModel::walk_class(const WeightedComplex& complex,
                                         const std::vector<int>& walk) const {
  Eigen::VectorXi h = Eigen::VectorXi::Zero(betti);
  for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
    const int e = complex.find_edge(walk[i], walk[i + 1]);
    if (e < 0) throw InvalidInput("walk uses a missing edge");
    if (betti == 0) continue;
    if (walk[i] < walk[i + 1]) {
      h += cocycle.row(e).transpose();
    } else {
      h -= cocycle.row(e).transpose();
    }
  }
  return h;
}

std::uint32_t HomologyModel::walk_z2(const WeightedComplex& complex, const std::vector<int>& walk) const {
  std::uint32_t bits = 0;
  for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
    const int e = complex.find_edge(walk[i], walk[i + 1]);
    if (e < 0) throw InvalidInput("walk uses a missing edge");
    bits ^= z2[e];
  }
  return bits;
}

Z2Cochain HomologyModel::z2_class(int k) const {
  if (k < 0 || k >= z2_rank) throw InvalidInput("Z2 class index out of range");
  Z2Cochain out(z2.size());
  for (std::size_t e = 0; e < z2.size(); ++e) out[e] = static_cast<std::uint8_t>((z2[e] >> k) & 1u);
  return out;
}

Z2Cochain HomologyModel::integer_class_mod2(int i) const {
  if (i < 0 || i >= betti) throw InvalidInput("class index out of range");
  Z2Cochain out(cocycle.rows());
  for (int e = 0; e < cocycle.rows(); ++e) out[e] = static_cast<std::uint8_t>(cocycle(e, i) & 1);
  return out;
}

int walk_parity(const WeightedComplex& complex, const Z2Cochain& phi, const std::vector<int>& walk) {
  int s = 0;
  for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
    const int e = complex.find_edge(walk[i], walk[i + 1]);
    if (e < 0) throw InvalidInput("walk uses a missing edge");
    s ^= phi[e];
  }
  return s;
}

HomologyModel build_homology(const WeightedComplex& complex) {
  const int nv = complex.vertex_count();
  const int ne = complex.edge_count();
  const int nt = static_cast<int>(complex.triangles().size());
  HomologyModel hm;
  hm.root = 0;

  // BFS spanning tree.
  std::vector<int> parent(nv, -1), parent_edge(nv, -1), depth(nv, -1);
  std::vector<char> is_tree(ne, 0);
  {
    std::queue<int> q;
    q.push(0);
    depth[0] = 0;
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (auto [w, e] : complex.neighbours(v)) {
        if (depth[w] >= 0) continue;
        depth[w] = depth[v] + 1;
        parent[w] = v;
        parent_edge[w] = e;
        is_tree[e] = 1;
        hm.tree_edges.push_back(e);
        q.push(w);
      }
    }
  }
  if (static_cast<int>(hm.tree_edges.size()) != nv - 1) throw TopologyError("complex is disconnected");

  // Peel triangles: a triangle with one undetermined edge determines it.
  std::vector<std::vector<int>> edge_tris(ne);
  for (int t = 0; t < nt; ++t) {
    for (int e : complex.triangle_edges(t)) edge_tris[e].push_back(t);
  }
  std::vector<std::vector<i64>> expr(ne);
  std::vector<char> resolved(ne, 0);
  std::vector<int> open(nt, 0);
  std::vector<char> used(nt, 0);
  for (int e = 0; e < ne; ++e) resolved[e] = is_tree[e];
  std::deque<int> ready;
  for (int t = 0; t < nt; ++t) {
    for (int e : complex.triangle_edges(t)) open[t] += resolved[e] ? 0 : 1;
    if (open[t] == 1) ready.push_back(t);
  }
  std::vector<int> relations;
  auto settle = [&](int e) {
    resolved[e] = 1;
    for (int t : edge_tris[e]) {
      if (--open[t] == 1) ready.push_back(t);
      if (open[t] == 0 && !used[t]) relations.push_back(t);
    }
  };
  static constexpr int kSign[3] = {1, 1, -1};
  int params = 0;
  int cursor = 0;
  for (;;) {
    while (!ready.empty()) {
      const int t = ready.front();
      ready.pop_front();
      if (open[t] != 1) continue;
      const auto& te = complex.triangle_edges(t);
      int slot = -1;
      for (int i = 0; i < 3; ++i) {
        if (!resolved[te[i]]) slot = i;
      }
      used[t] = 1;
      std::vector<i64> value(params, 0);
      for (int i = 0; i < 3; ++i) {
        if (i == slot) continue;
        const auto& ex = expr[te[i]];
        for (std::size_t j = 0; j < ex.size(); ++j) value[j] -= kSign[slot] * kSign[i] * ex[j];
      }
      while (!value.empty() && value.back() == 0) value.pop_back();
      expr[te[slot]] = std::move(value);
      settle(te[slot]);
    }
    while (cursor < ne && resolved[cursor]) ++cursor;
    if (cursor == ne) break;
    expr[cursor].assign(params + 1, 0);
    expr[cursor][params] = 1;
    ++params;
    hm.generator_edges.push_back(cursor);
    settle(cursor);
  }
  const int c = params;

  // Relations among the free values.
  std::set<std::vector<i64>> rel_set;
  for (int t : relations) {
    std::vector<i64> row(c, 0);
    const auto& te = complex.triangle_edges(t);
    for (int i = 0; i < 3; ++i) {
      const auto& ex = expr[te[i]];
      for (std::size_t j = 0; j < ex.size(); ++j) row[j] += kSign[i] * ex[j];
    }
    bool any = false;
    for (i64& x : row) any |= x != 0;
    if (!any) continue;
    for (i64 x : row) {
      if (x != 0) {
        if (x < 0) {
          for (i64& y : row) y = -y;
        }
        break;
      }
    }
    rel_set.insert(std::move(row));
  }
  std::vector<std::vector<i64>> rel(rel_set.begin(), rel_set.end());
  // Sparse rows first keeps the elimination's numbers small.
  std::stable_sort(rel.begin(), rel.end(), [](const auto& x, const auto& y) {
    return std::count_if(x.begin(), x.end(), [](i64 v) { return v != 0; }) <
           std::count_if(y.begin(), y.end(), [](i64 v) { return v != 0; });
  });

  const KernelResult ker = integer_kernel(rel, c);
  const int b = c - ker.rank;
  hm.betti = b;
  hm.cocycle = Eigen::MatrixXi::Zero(ne, b);
  for (int e = 0; e < ne; ++e) {
    const auto& ex = expr[e];
    for (int i = 0; i < b; ++i) {
      i128 s = 0;
      for (std::size_t j = 0; j < ex.size(); ++j) s += static_cast<i128>(ex[j]) * ker.u[j][ker.rank + i];
      const i64 v = narrow(s);
      if (v > INT32_MAX || v < INT32_MIN) throw ConvergenceError("cocycle value overflow", 0.0);
      hm.cocycle(e, i) = static_cast<int>(v);
    }
  }

  // Z2 layer: kernel mod 2 modulo the reductions of the integer kernel.
  {
    Gf2Span span(c);
    for (int i = 0; i < b; ++i) {
      std::vector<std::uint8_t> v(c);
      for (int j = 0; j < c; ++j) v[j] = static_cast<std::uint8_t>(ker.u[j][ker.rank + i] & 1);
      span.add(std::move(v));
    }
    std::vector<std::vector<std::uint8_t>> layer;
    for (auto& v : gf2_kernel(rel, c)) {
      if (span.add(v)) layer.push_back(v);
    }
    if (layer.size() > 32) throw BudgetExceeded("more than 32 extra Z2 classes");
    hm.z2_rank = static_cast<int>(layer.size());
    hm.z2.assign(ne, 0u);
    for (int e = 0; e < ne; ++e) {
      for (int k = 0; k < hm.z2_rank; ++k) {
        int bit = 0;
        for (int j = 0; j < c; ++j) bit ^= static_cast<int>(coeff(expr[e], j) & 1) & layer[k][j];
        if (bit) hm.z2[e] |= (1u << k);
      }
    }
  }

  // Generator walks: integer combinations of fundamental cycles of the
  // free edges, with coefficients from the rows of U^{-1}.
  auto path_from_root = [&](int v) {
    std::vector<int> p;
    for (int x = v; x >= 0; x = parent[x]) p.push_back(x);
    std::reverse(p.begin(), p.end());
    return p;
  };
  auto fundamental = [&](int e, bool forward) {
    const Edge& ed = complex.edge(e);
    std::vector<int> w = path_from_root(forward ? ed.a : ed.b);
    std::vector<int> back = path_from_root(forward ? ed.b : ed.a);
    w.insert(w.end(), back.rbegin(), back.rend());
    return w;
  };
  auto append = [](std::vector<int>& walk, const std::vector<int>& piece) {
    walk.insert(walk.end(), piece.begin() + 1, piece.end());
  };
  std::vector<std::vector<int>> loops(b);
  for (int i = 0; i < b; ++i) {
    std::vector<int> walk{hm.root};
    for (int j = 0; j < c; ++j) {
      const i64 n = ker.v[ker.rank + i][j];
      if (n == 0) continue;
      if (n > 1000 || n < -1000) throw BudgetExceeded("generator walk too long");
      const std::vector<int> piece = fundamental(hm.generator_edges[j], n > 0);
      for (i64 r = 0; r < (n > 0 ? n : -n); ++r) append(walk, piece);
    }
    loops[i] = cancel_backtracks(std::move(walk));
  }

  // Align with the periods when they form a basis of the same lattice.
  const Eigen::MatrixXi& per = complex.periods();
  if (b > 0 && per.rows() == ne && per.cols() == b) {
    Eigen::MatrixXi p(b, b);
    for (int i = 0; i < b; ++i) {
      Eigen::VectorXi s = Eigen::VectorXi::Zero(b);
      for (std::size_t k = 0; k + 1 < loops[i].size(); ++k) {
        const int u = loops[i][k], w = loops[i][k + 1];
        const int e = complex.find_edge(u, w);
        s += (u < w ? 1 : -1) * per.row(e).transpose();
      }
      p.row(i) = s.transpose();
    }
    const double det = p.cast<double>().determinant();
    if (std::abs(std::abs(det) - 1.0) < 1e-9) {
      const Eigen::MatrixXi pinv_t = p.cast<double>().inverse().transpose().array().round().cast<int>().matrix();
      hm.cocycle = (hm.cocycle * p).eval();  // rows: y'(e)^T = y(e)^T P
      std::vector<std::vector<int>> aligned(b);
      for (int j = 0; j < b; ++j) {
        std::vector<int> walk{hm.root};
        for (int i = 0; i < b; ++i) {
          const int n = pinv_t(i, j);
          for (int r = 0; r < std::abs(n); ++r) {
            if (n > 0) {
              append(walk, loops[i]);
            } else {
              std::vector<int> rev(loops[i].rbegin(), loops[i].rend());
              append(walk, rev);
            }
          }
        }
        aligned[j] = cancel_backtracks(std::move(walk));
      }
      loops = std::move(aligned);
      hm.period_basis = true;
    }
  }
  hm.generator_loops = std::move(loops);
  return hm;
}

}  // namespace systolic
