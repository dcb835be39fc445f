#include "systolic/generators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <unordered_map>

#include "systolic/error.hpp"

namespace systolic {
namespace {

// Accumulates edges (deduplicated) with optional periods and simplices.
class MeshBuilder {
 public:
  MeshBuilder(int vertices, int period_dim) : vertices_(vertices), pdim_(period_dim) {}

  // Edge a -> b with the given period along a -> b.
  void edge(int a, int b, double length, Eigen::VectorXi period = {}) {
    if (pdim_ > 0 && period.size() == 0) period = Eigen::VectorXi::Zero(pdim_);
    if (a > b) {
      std::swap(a, b);
      if (pdim_ > 0) period = -period;
    }
    const std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
    auto [it, fresh] = index_.emplace(key, static_cast<int>(edges_.size()));
    if (!fresh) {
      if (pdim_ > 0 && periods_[it->second] != period) {
        throw InvalidInput("generator produced inconsistent edge periods (resolution too small)");
      }
      return;
    }
    edges_.push_back({a, b, length});
    if (pdim_ > 0) periods_.push_back(period);
  }

  void simplex(std::vector<int> s) { simplices_.push_back(std::move(s)); }

  WeightedComplex build(bool orientable, std::vector<Eigen::VectorXd> coords = {}) {
    WeightedComplex c(vertices_, edges_, simplices_, orientable, std::move(coords));
    if (pdim_ == 0) return c;
    Eigen::MatrixXi p(static_cast<int>(edges_.size()), pdim_);
    for (std::size_t e = 0; e < edges_.size(); ++e) p.row(static_cast<int>(e)) = periods_[e].transpose();
    return c.with_periods(std::move(p));
  }

 private:
  int vertices_;
  int pdim_;
  std::vector<Edge> edges_;
  std::vector<Eigen::VectorXi> periods_;
  std::vector<std::vector<int>> simplices_;
  std::unordered_map<std::uint64_t, int> index_;
};

// Gauss-reduced basis with <a, b> >= 0, plus the unimodular change so that
// reduced = u * original.
struct ReducedPair {
  Eigen::Vector2d a, b;
  Eigen::Matrix2i u;
};

ReducedPair gauss_reduce(const LatticeBasis& basis) {
  Eigen::Vector2d a = basis.rows().row(0).transpose();
  Eigen::Vector2d b = basis.rows().row(1).transpose();
  Eigen::Matrix2i u = Eigen::Matrix2i::Identity();
  for (int guard = 0; guard < 1000; ++guard) {
    if (a.squaredNorm() > b.squaredNorm()) {
      std::swap(a, b);
      u.row(0).swap(u.row(1));
    }
    const double q = std::round(a.dot(b) / a.squaredNorm());
    if (q == 0.0) break;
    b -= q * a;
    u.row(1) -= static_cast<int>(q) * u.row(0);
  }
  if (a.dot(b) < 0.0) {
    b = -b;
    u.row(1) = -u.row(1);
  }
  return {a, b, u};
}

Eigen::Vector3d sphere_point(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

double chord(const Eigen::Vector3d& p, const Eigen::Vector3d& q, double radius) {
  return radius * (p - q).norm();
}

enum class SphereKind { full, hemisphere, projective };

WeightedComplex uv_surface(int level, double radius, SphereKind kind) {
  if (level < 0 || level > 8) throw InvalidInput("sphere level must be in 0..8");
  if (!(radius > 0.0)) throw InvalidInput("radius must be positive");
  const int nlon = 4 << level;
  const int nlat = 2 << level;
  const int half = nlat / 2;
  const int last_ring = kind == SphereKind::full ? nlat - 1 : half;
  if (kind == SphereKind::projective && level < 1) throw InvalidInput("RP^2 mesh needs level >= 1");

  // Vertex ids: north pole 0, rings 1..last_ring, then the south pole.
  std::vector<Eigen::Vector3d> pos;
  pos.push_back(sphere_point(0.0, 0.0));
  std::vector<std::vector<int>> ring(nlat + 1);
  for (int i = 1; i <= last_ring; ++i) {
    ring[i].resize(nlon);
    const bool folded = kind == SphereKind::projective && i == half;
    for (int j = 0; j < nlon; ++j) {
      if (folded && j >= nlon / 2) {
        ring[i][j] = ring[i][j - nlon / 2];
        continue;
      }
      ring[i][j] = static_cast<int>(pos.size());
      pos.push_back(sphere_point(std::numbers::pi * i / nlat, 2.0 * std::numbers::pi * j / nlon));
    }
  }
  int south = -1;
  if (kind == SphereKind::full) {
    south = static_cast<int>(pos.size());
    pos.push_back(sphere_point(std::numbers::pi, 0.0));
  }

  // Position used for lengths: the folded equator vertex is reached from
  // the side where the cell actually sits, i.e. the unfolded point.
  auto point_of = [&](int i, int j) {
    return sphere_point(std::numbers::pi * i / nlat, 2.0 * std::numbers::pi * (j % nlon) / nlon);
  };
  MeshBuilder mb(static_cast<int>(pos.size()), 0);
  auto tri = [&](int ia, int ja, int ib, int jb, int ic, int jc, int va, int vb, int vc) {
    const Eigen::Vector3d pa = ia == 0 ? sphere_point(0, 0) : (ia == nlat ? sphere_point(std::numbers::pi, 0) : point_of(ia, ja));
    const Eigen::Vector3d pb = ib == nlat ? sphere_point(std::numbers::pi, 0) : point_of(ib, jb);
    const Eigen::Vector3d pc = ic == nlat ? sphere_point(std::numbers::pi, 0) : point_of(ic, jc);
    mb.edge(va, vb, chord(pa, pb, radius));
    mb.edge(vb, vc, chord(pb, pc, radius));
    mb.edge(va, vc, chord(pa, pc, radius));
    mb.simplex({va, vb, vc});
  };
  for (int j = 0; j < nlon; ++j) {
    const int j1 = (j + 1) % nlon;
    tri(0, 0, 1, j, 1, j + 1, 0, ring[1][j], ring[1][j1]);
  }
  const int last_band = kind == SphereKind::full ? nlat - 1 : half;
  for (int i = 1; i < last_band; ++i) {
    for (int j = 0; j < nlon; ++j) {
      const int j1 = (j + 1) % nlon;
      const int a = ring[i][j], b = ring[i][j1], c = ring[i + 1][j], d = ring[i + 1][j1];
      if (i < half) {
        // "/" diagonal (i, j) - (i+1, j+1).
        tri(i, j, i, j + 1, i + 1, j + 1, a, b, d);
        tri(i, j, i + 1, j, i + 1, j + 1, a, c, d);
      } else {
        // Mirror image under the antipodal map: (i, j+1) - (i+1, j).
        tri(i, j, i, j + 1, i + 1, j, a, b, c);
        tri(i, j + 1, i + 1, j, i + 1, j + 1, b, c, d);
      }
    }
  }
  if (kind == SphereKind::full) {
    for (int j = 0; j < nlon; ++j) {
      const int j1 = (j + 1) % nlon;
      tri(nlat - 1, j, nlat - 1, j + 1, nlat, 0, ring[nlat - 1][j], ring[nlat - 1][j1], south);
    }
  }
  std::vector<Eigen::VectorXd> coords;
  coords.reserve(pos.size());
  for (const auto& p : pos) coords.emplace_back(radius * p);
  return mb.build(kind != SphereKind::projective, std::move(coords));
}

}  // namespace

WeightedComplex flat_torus(const LatticeBasis& basis, int m) {
  if (basis.dimension() != 2) throw InvalidInput("flat_torus needs a 2-dimensional lattice");
  if (m < 3) throw InvalidInput("flat_torus resolution must be >= 3");
  const ReducedPair r = gauss_reduce(basis);
  const double la = r.a.norm() / m, lb = r.b.norm() / m, ld = (r.b - r.a).norm() / m;
  auto id = [m](int i, int j) { return ((i % m + m) % m) * m + ((j % m + m) % m); };
  // Period of a step from (i, j) by (di, dj), in original-basis coordinates.
  const Eigen::Matrix2i ut = r.u.transpose();
  auto period = [&](int i, int j, int di, int dj) {
    Eigen::Vector2i wrap((i + di) >= m ? 1 : ((i + di) < 0 ? -1 : 0),
                         (j + dj) >= m ? 1 : ((j + dj) < 0 ? -1 : 0));
    return Eigen::VectorXi(ut * wrap);
  };
  MeshBuilder mb(m * m, 2);
  std::vector<Eigen::VectorXd> coords(m * m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      coords[id(i, j)] = (static_cast<double>(i) / m) * r.a + (static_cast<double>(j) / m) * r.b;
      mb.edge(id(i, j), id(i + 1, j), la, period(i, j, 1, 0));
      mb.edge(id(i, j), id(i, j + 1), lb, period(i, j, 0, 1));
      // Diagonal (i+1, j) -> (i, j+1), direction b - a.
      const Eigen::VectorXi pd = period(i, j, 0, 1) - period(i, j, 1, 0);
      mb.edge(id(i + 1, j), id(i, j + 1), ld, pd);
      mb.simplex({id(i, j), id(i + 1, j), id(i, j + 1)});
      mb.simplex({id(i + 1, j), id(i, j + 1), id(i + 1, j + 1)});
    }
  }
  return mb.build(true, std::move(coords));
}

WeightedComplex circle_graph(int n, double total_length) {
  if (n < 3) throw InvalidInput("circle needs at least 3 vertices");
  if (!(total_length > 0.0)) throw InvalidInput("circle length must be positive");
  MeshBuilder mb(n, 1);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXi p(1);
    p[0] = i == n - 1 ? 1 : 0;
    mb.edge(i, (i + 1) % n, total_length / n, p);
    mb.simplex({i, (i + 1) % n});
  }
  return mb.build(true);
}

WeightedComplex round_sphere(int level, double radius) {
  return uv_surface(level, radius, SphereKind::full);
}
WeightedComplex round_rp2(int level, double radius) {
  return uv_surface(level, radius, SphereKind::projective);
}
WeightedComplex round_hemisphere(int level, double radius) {
  return uv_surface(level, radius, SphereKind::hemisphere);
}

WeightedComplex flat_disk(int rings, double radius) {
  if (rings < 1) throw InvalidInput("disk needs at least one ring");
  std::vector<Eigen::VectorXd> coords{Eigen::Vector2d::Zero()};
  std::vector<std::vector<int>> ring(rings + 1);
  ring[0] = {0};
  for (int k = 1; k <= rings; ++k) {
    const int n = 6 * k;
    for (int j = 0; j < n; ++j) {
      const double t = 2.0 * std::numbers::pi * j / n;
      ring[k].push_back(static_cast<int>(coords.size()));
      coords.emplace_back(Eigen::Vector2d(radius * k / rings * std::cos(t), radius * k / rings * std::sin(t)));
    }
  }
  MeshBuilder mb(static_cast<int>(coords.size()), 0);
  auto tri = [&](int a, int b, int c) {
    mb.edge(a, b, (coords[a] - coords[b]).norm());
    mb.edge(b, c, (coords[b] - coords[c]).norm());
    mb.edge(a, c, (coords[a] - coords[c]).norm());
    mb.simplex({a, b, c});
  };
  for (int j = 0; j < 6; ++j) tri(0, ring[1][j], ring[1][(j + 1) % 6]);
  for (int k = 1; k < rings; ++k) {
    // Merge the two rings by angle.
    const int n0 = 6 * k, n1 = 6 * (k + 1);
    int i0 = 0, i1 = 0;
    while (i0 < n0 || i1 < n1) {
      const double t0 = static_cast<double>(i0 + 1) / n0;
      const double t1 = static_cast<double>(i1 + 1) / n1;
      if (i1 < n1 && (i0 >= n0 || t1 <= t0)) {
        tri(ring[k][i0 % n0], ring[k + 1][i1], ring[k + 1][(i1 + 1) % n1]);
        ++i1;
      } else {
        tri(ring[k][i0], ring[k][(i0 + 1) % n0], ring[k + 1][i1 % n1]);
        ++i0;
      }
    }
  }
  return mb.build(true, std::move(coords));
}

WeightedComplex flat_moebius(int along, int across, double core_length, double width) {
  if (along < 3 || across < 2 || across % 2 != 0) {
    throw InvalidInput("moebius needs along >= 3 and an even across >= 2");
  }
  const int rows = across + 1;
  auto id = [&](int i, int j) {
    if (i == along) return (rows - 1 - j);  // column `along` is column 0 flipped
    return i * rows + j;
  };
  const double dx = core_length / along, dy = width / across, dd = std::hypot(dx, dy);
  MeshBuilder mb(along * rows, 1);
  std::vector<Eigen::VectorXd> coords(along * rows);
  for (int i = 0; i < along; ++i) {
    for (int j = 0; j < rows; ++j) {
      coords[id(i, j)] = Eigen::Vector2d(i * dx, -0.5 * width + j * dy);
    }
  }
  auto wrap = [&](int i) {
    Eigen::VectorXi p(1);
    p[0] = i + 1 == along ? 1 : 0;
    return p;
  };
  for (int i = 0; i < along; ++i) {
    for (int j = 0; j < rows; ++j) mb.edge(id(i, j), id(i + 1, j), dx, wrap(i));
    for (int j = 0; j + 1 < rows; ++j) {
      Eigen::VectorXi zero = Eigen::VectorXi::Zero(1);
      mb.edge(id(i, j), id(i, j + 1), dy, zero);
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      // Diagonal through the smallest vertex id of the quad.
      if (std::min(a, c) < std::min(b, d)) {
        mb.edge(a, c, dd, wrap(i));
        mb.simplex({a, b, c});
        mb.simplex({a, c, d});
      } else {
        mb.edge(b, d, dd, Eigen::VectorXi(-wrap(i)));
        mb.simplex({a, b, d});
        mb.simplex({b, c, d});
      }
    }
  }
  return mb.build(false, std::move(coords));
}

WeightedComplex twisted_circle_bundle(const LatticeBasis& base, int resolution,
                                      double fiber_length, int p) {
  if (p < 3) throw InvalidInput("fiber needs at least 3 segments");
  if (!(fiber_length > 0.0)) throw InvalidInput("fiber length must be positive");
  const WeightedComplex torus = flat_torus(base, resolution);
  const int nv = torus.vertex_count();
  const double fe = fiber_length / p;
  auto vid = [&](int v, int k) { return v * p + ((k % p) + p) % p; };
  // Fibre level reached at w from level k at u along base edge u -> w.
  auto twist = [&](int u, int w) {
    const int e = torus.find_edge(u, w);
    return (torus.periods()(e, 0) % 2) != 0;
  };
  auto carry = [&](int u, int w, int k) { return twist(u, w) ? -k : k; };
  auto base_period = [&](int u, int w) {
    const int e = torus.find_edge(u, w);
    Eigen::VectorXi per = torus.periods().row(e).transpose();
    return u < w ? per : Eigen::VectorXi(-per);
  };

  MeshBuilder mb(nv * p, 2);
  for (int v = 0; v < nv; ++v) {
    for (int k = 0; k < p; ++k) mb.edge(vid(v, k), vid(v, k + 1), fe);
  }
  for (const Edge& e : torus.edges()) {
    for (int k = 0; k < p; ++k) {
      mb.edge(vid(e.a, k), vid(e.b, carry(e.a, e.b, k)), e.length, base_period(e.a, e.b));
    }
  }
  const double diag_extra = fe * fe;
  for (const auto& t : torus.triangles()) {
    const int u = t[0], w = t[1], x = t[2];
    for (int k = 0; k < p; ++k) {
      // Prism over the triangle between fibre levels k and k+1 at u.
      const int kw = carry(u, w, k), kx = carry(u, x, k);
      const int kw1 = carry(u, w, k + 1), kx1 = carry(u, x, k + 1);
      const std::array<int, 3> lo{vid(u, k), vid(w, kw), vid(x, kx)};
      const std::array<int, 3> hi{vid(u, k + 1), vid(w, kw1), vid(x, kx1)};
      const std::array<int, 3> base_v{u, w, x};
      // Quad faces: side (i, j) has corners lo_i, lo_j, hi_j, hi_i.
      auto quad_diag = [&](int i, int j) {
        const int m = std::min({lo[i], lo[j], hi[i], hi[j]});
        const double len = std::sqrt(torus.length(base_v[i], base_v[j]) *
                                         torus.length(base_v[i], base_v[j]) + diag_extra);
        const Eigen::VectorXi per = base_period(base_v[i], base_v[j]);
        if (m == lo[i] || m == hi[j]) {
          mb.edge(lo[i], hi[j], len, per);
        } else {
          mb.edge(lo[j], hi[i], len, Eigen::VectorXi(-per));
        }
      };
      quad_diag(0, 1);
      quad_diag(1, 2);
      quad_diag(0, 2);
      // Minimum vertex joined to the faces that avoid it.
      const std::array<int, 6> all{lo[0], lo[1], lo[2], hi[0], hi[1], hi[2]};
      const int pos = static_cast<int>(std::min_element(all.begin(), all.end()) - all.begin());
      const bool bottom = pos < 3;
      const int i0 = pos % 3;
      const std::array<int, 3>& same = bottom ? lo : hi;
      const std::array<int, 3>& other = bottom ? hi : lo;
      const int v0 = all[pos];
      mb.simplex({v0, other[0], other[1], other[2]});
      const int i1 = (i0 + 1) % 3, i2 = (i0 + 2) % 3;
      // Opposite quad: same_i1, same_i2, other_i2, other_i1.
      const int qa = same[i1], qb = same[i2], qc = other[i2], qd = other[i1];
      const int qm = std::min({qa, qb, qc, qd});
      if (qm == qa || qm == qc) {
        mb.simplex({v0, qa, qb, qc});
        mb.simplex({v0, qa, qc, qd});
      } else {
        mb.simplex({v0, qa, qb, qd});
        mb.simplex({v0, qb, qc, qd});
      }
    }
  }
  std::vector<Eigen::VectorXd> coords(nv * p);
  for (int v = 0; v < nv; ++v) {
    for (int k = 0; k < p; ++k) {
      Eigen::Vector3d c;
      c << torus.coordinates()[v], fe * k;
      coords[vid(v, k)] = c;
    }
  }
  return mb.build(false, std::move(coords));
}

WeightedComplex product_complex(const WeightedComplex& x, const WeightedComplex& y) {
  if (x.simplices().empty() || y.simplices().empty()) {
    throw InvalidInput("product needs complexes with top simplices");
  }
  const int ny = y.vertex_count();
  const int px = static_cast<int>(x.periods().cols()) * (x.periods().rows() > 0);
  const int py = static_cast<int>(y.periods().cols()) * (y.periods().rows() > 0);
  auto vid = [ny](int a, int b) { return a * ny + b; };
  auto period = [&](const WeightedComplex& c, int pd, int u, int w) -> Eigen::VectorXi {
    if (pd == 0) return Eigen::VectorXi();
    if (u == w) return Eigen::VectorXi::Zero(pd);
    const int e = c.find_edge(u, w);
    Eigen::VectorXi per = c.periods().row(e).transpose();
    return u < w ? per : Eigen::VectorXi(-per);
  };
  auto len = [](const WeightedComplex& c, int u, int w) { return u == w ? 0.0 : c.length(u, w); };

  MeshBuilder mb(x.vertex_count() * ny, px + py);
  for (const auto& s : x.simplices()) {
    for (const auto& t : y.simplices()) {
      const int p = static_cast<int>(s.size()) - 1, q = static_cast<int>(t.size()) - 1;
      // Enumerate monotone staircase paths by the positions of x-steps.
      std::vector<int> steps(p + q, 0);
      std::fill(steps.begin(), steps.begin() + p, 1);
      std::sort(steps.begin(), steps.end());
      do {
        std::vector<std::pair<int, int>> path{{0, 0}};
        for (int st : steps) {
          auto [i, j] = path.back();
          path.push_back(st ? std::make_pair(i + 1, j) : std::make_pair(i, j + 1));
        }
        std::vector<int> simplex;
        for (std::size_t a = 0; a < path.size(); ++a) {
          simplex.push_back(vid(s[path[a].first], t[path[a].second]));
          for (std::size_t b = a + 1; b < path.size(); ++b) {
            const int u1 = s[path[a].first], u2 = s[path[b].first];
            const int w1 = t[path[a].second], w2 = t[path[b].second];
            const double lx = len(x, u1, u2), ly = len(y, w1, w2);
            Eigen::VectorXi per(px + py);
            if (px > 0) per.head(px) = period(x, px, u1, u2);
            if (py > 0) per.tail(py) = period(y, py, w1, w2);
            mb.edge(vid(u1, w1), vid(u2, w2), std::sqrt(lx * lx + ly * ly), per);
          }
        }
        mb.simplex(simplex);
      } while (std::next_permutation(steps.begin(), steps.end()));
    }
  }
  std::vector<Eigen::VectorXd> coords;
  if (!x.coordinates().empty() && !y.coordinates().empty()) {
    for (int a = 0; a < x.vertex_count(); ++a) {
      for (int b = 0; b < ny; ++b) {
        Eigen::VectorXd c(x.coordinates()[a].size() + y.coordinates()[b].size());
        c << x.coordinates()[a], y.coordinates()[b];
        coords.push_back(c);
      }
    }
  }
  return mb.build(x.orientable() && y.orientable(), std::move(coords));
}

WeightedComplex perturbed_lengths(const WeightedComplex& complex, double amplitude,
                                  std::uint64_t seed) {
  if (!(amplitude >= 0.0) || amplitude >= 0.5) throw InvalidInput("amplitude must be in [0, 0.5)");
  std::mt19937_64 rng(seed);
  double amp = amplitude;
  for (int attempt = 0; attempt < 20; ++attempt, amp *= 0.5) {
    std::uniform_real_distribution<double> u(1.0 - amp, 1.0 + amp);
    std::vector<double> lengths;
    lengths.reserve(complex.edges().size());
    for (const auto& e : complex.edges()) lengths.push_back(e.length * u(rng));
    try {
      return complex.with_lengths(lengths);
    } catch (const InvalidInput&) {
      continue;
    }
  }
  return complex;
}

}  // namespace systolic
