#include "systolic/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <set>

#include <Eigen/Sparse>

#include "systolic/error.hpp"
#include "systolic/systoles.hpp"

namespace systolic {

namespace {

int edge_between(const WeightedComplex& c, int a, int b) {
  int e = c.find_edge(a, b);
  if (e < 0) throw InvalidInput("simplex edge missing");
  return e;
}

// Class increment along s[0] -> s[j]; simplices are sorted so s[0] is the
// edge's tail.
Eigen::VectorXd increment(const WeightedComplex& c, const Eigen::MatrixXi& cocycle, int a, int b) {
  int e = edge_between(c, a, b);
  Eigen::VectorXd y = cocycle.row(e).transpose().cast<double>();
  return c.edge(e).a == a ? y : Eigen::VectorXd(-y);
}

Eigen::MatrixXd safe_inverse(const Eigen::MatrixXd& g) {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
  return ldlt.solve(Eigen::MatrixXd::Identity(g.rows(), g.cols()));
}

void require_betti(int b) {
  if (b < 1) throw InvalidInput("first Betti number must be at least 1");
}

// All primitive integer vectors in the box, one per +/- pair.
std::vector<Eigen::VectorXi> primitive_classes(int b, int box) {
  std::vector<Eigen::VectorXi> out;
  Eigen::VectorXi h = Eigen::VectorXi::Constant(b, -box);
  while (true) {
    int first = 0;
    for (int i = 0; i < b; ++i)
      if (h[i] != 0) { first = h[i]; break; }
    if (first > 0) {
      int g = 0;
      for (int i = 0; i < b; ++i) g = std::gcd(g, std::abs(h[i]));
      if (g == 1) out.push_back(h);
    }
    int i = 0;
    while (i < b && h[i] == box) h[i++] = -box;
    if (i == b) break;
    ++h[i];
  }
  return out;
}

}  // namespace

HarmonicFields::HarmonicFields(const WeightedComplex& complex, const HomologyModel& homology)
    : betti_(homology.betti) {
  const int n = complex.vertex_count();
  basis_ = Eigen::MatrixXd::Zero(n, betti_);
  if (betti_ == 0) return;
  if (n < 2) throw InvalidInput("complex needs at least two vertices");

  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n - 1, betti_);
  const auto& simplices = complex.simplices();
  std::vector<Eigen::MatrixXd> ginv(simplices.size());
  std::vector<Eigen::MatrixXd> incs(simplices.size());

  for (std::size_t s = 0; s < simplices.size(); ++s) {
    const auto& sv = simplices[s];
    const int k = static_cast<int>(sv.size()) - 1;
    Eigen::MatrixXd g = simplex_gram(complex, sv);
    const double vol = gram_volume(g);
    ginv[s] = safe_inverse(g);
    Eigen::MatrixXd c(k, betti_);
    for (int j = 1; j <= k; ++j) c.row(j - 1) = increment(complex, homology.cocycle, sv[0], sv[j]).transpose();
    incs[s] = c;
    // delta = D g_local + c with D = [-1 | I].
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(k, k + 1);
    d.col(0).setConstant(-1.0);
    d.rightCols(k).setIdentity();
    Eigen::MatrixXd ks = vol * d.transpose() * ginv[s] * d;
    Eigen::MatrixXd ls = vol * d.transpose() * ginv[s] * c;
    for (int a = 0; a <= k; ++a) {
      if (sv[a] == 0) continue;
      rhs.row(sv[a] - 1) -= ls.row(a);
      for (int bb = 0; bb <= k; ++bb)
        if (sv[bb] != 0) triplets.emplace_back(sv[a] - 1, sv[bb] - 1, ks(a, bb));
    }
  }
  Eigen::SparseMatrix<double> stiffness(n - 1, n - 1);
  stiffness.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(stiffness);
  if (solver.info() != Eigen::Success) throw ConvergenceError("harmonic stiffness factorisation failed", 0.0);
  Eigen::MatrixXd sol = solver.solve(rhs);
  basis_.bottomRows(n - 1) = sol;

  forms_.resize(simplices.size());
  for (std::size_t s = 0; s < simplices.size(); ++s) {
    const auto& sv = simplices[s];
    const int k = static_cast<int>(sv.size()) - 1;
    Eigen::MatrixXd delta = incs[s];
    for (int j = 1; j <= k; ++j) delta.row(j - 1) += basis_.row(sv[j]) - basis_.row(sv[0]);
    forms_[s] = delta.transpose() * ginv[s] * delta;
  }
}

std::vector<double> HarmonicFields::field(const Eigen::VectorXd& w) const {
  Eigen::VectorXd v = basis_ * w;
  return {v.data(), v.data() + v.size()};
}

double HarmonicFields::comass(const Eigen::VectorXd& w) const {
  double best = 0.0;
  for (const auto& h : forms_) best = std::max(best, w.dot(h * w));
  return std::sqrt(best);
}

SymmetricBody stable_unit_ball(const WeightedComplex& complex, const HomologyModel& homology,
                               UnitBallMethod method, int box) {
  const int b = homology.betti;
  require_betti(b);
  if (box < 1) throw InvalidInput("direction box must be at least 1");
  std::vector<Eigen::VectorXd> facets;
  const auto classes = primitive_classes(b, box);
  if (method == UnitBallMethod::harmonic) {
    HarmonicFields fields(complex, homology);
    for (const auto& h : classes) {
      Eigen::VectorXd w = h.cast<double>();
      facets.push_back(w / fields.comass(w));
    }
  } else {
    StableNormSolver solver(complex, homology);
    for (const auto& h : classes) {
      solver.norm(h);
      Eigen::VectorXd w = solver.last_dual();
      bool dup = false;
      for (const auto& f : facets)
        if ((f - w).lpNorm<Eigen::Infinity>() < 1e-9 || (f + w).lpNorm<Eigen::Infinity>() < 1e-9) dup = true;
      if (!dup) facets.push_back(w);
    }
  }
  return SymmetricBody(b, std::move(facets));
}

McShaneResult mcshane_extend(const CoverWindow& window, const HomologyModel& homology,
                             int base_vertex, const Eigen::VectorXd& slope, int core) {
  const int b = window.betti();
  require_betti(b);
  const WeightedComplex& base = window.base();
  if (slope.size() != b) throw InvalidInput("slope dimension does not match the Betti number");
  if (base_vertex < 0 || base_vertex >= base.vertex_count()) throw InvalidInput("base vertex out of range");
  if (core < 0 || core >= window.radius().minCoeff()) throw InvalidInput("core box must sit strictly inside the window");

  {
    StableNormSolver solver(base, homology);
    if (!solver.dual_feasible(slope, 1e-12))
      throw CertificationError("slope has stable dual norm above 1; McShane extension is not 1-Lipschitz", 0.0);
  }

  const int n = window.vertex_count();
  std::vector<double> f(n, std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (int id = 0; id < n; ++id) {
    if (window.base_vertex(id) != base_vertex) continue;
    f[id] = slope.dot(window.deck(id).cast<double>());
    heap.emplace(f[id], id);
  }
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > f[u]) continue;
    for (auto [w, e] : window.neighbours(u)) {
      double nd = d + window.edge_length(e);
      if (nd < f[w]) {
        f[w] = nd;
        heap.emplace(nd, w);
      }
    }
  }

  McShaneResult out;
  out.core = core;
  double margin = -std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < window.edges().size(); ++e) {
    const auto& le = window.edges()[e];
    margin = std::max(margin, std::abs(f[le.u] - f[le.w]) - window.edge_length(static_cast<int>(e)));
  }
  double equiv = 0.0;
  Eigen::VectorXi zero = Eigen::VectorXi::Zero(b);
  for (int id = 0; id < n; ++id) {
    Eigen::VectorXi k = window.deck(id);
    if (k.lpNorm<Eigen::Infinity>() > core) continue;
    for (int j = 0; j < b; ++j) {
      if (k[j] + 1 > core) continue;
      Eigen::VectorXi shift = Eigen::VectorXi::Zero(b);
      shift[j] = 1;
      int t = window.translate(id, shift);
      if (t >= 0) equiv = std::max(equiv, std::abs(f[t] - f[id] - slope[j]));
    }
  }
  out.field.slope = slope;
  out.field.base_values.resize(base.vertex_count());
  for (int v = 0; v < base.vertex_count(); ++v) out.field.base_values[v] = f[window.id(v, zero)];
  out.field.lipschitz_margin = margin;
  out.field.equivariance_residual = equiv;
  out.window_values = std::move(f);
  return out;
}

Eigen::MatrixXd JacobiMap::simplex_differences(const std::vector<int>& simplex) const {
  const int k = static_cast<int>(simplex.size()) - 1;
  Eigen::MatrixXd a(betti, k);
  for (int j = 1; j <= k; ++j)
    a.col(j - 1) = images[simplex[j]] - images[simplex[0]] + increment(complex, cocycle, simplex[0], simplex[j]);
  return a;
}

namespace {

// Edge margin and equivariance residual of an equivariant field.
void audit_field(const WeightedComplex& c, const Eigen::MatrixXi& cocycle, LipschitzField& f) {
  double margin = -std::numeric_limits<double>::infinity();
  for (int e = 0; e < c.edge_count(); ++e) {
    const Edge& ed = c.edge(e);
    double df = f.base_values[ed.b] - f.base_values[ed.a] + f.slope.dot(cocycle.row(e).transpose().cast<double>());
    margin = std::max(margin, std::abs(df) - ed.length);
  }
  f.lipschitz_margin = margin;
  const int b = static_cast<int>(f.slope.size());
  double equiv = f.equivariance_residual;
  for (int v = 0; v < c.vertex_count(); ++v)
    for (int j = 0; j < b; ++j) {
      Eigen::VectorXi k = Eigen::VectorXi::Zero(b);
      double f0 = f.value(v, k);
      k[j] = 1;
      equiv = std::max(equiv, std::abs(f.value(v, k) - f0 - f.slope[j]));
    }
  f.equivariance_residual = equiv;
}

}  // namespace

JacobiMap build_jacobi_map(const WeightedComplex& complex, const HomologyModel& homology,
                           const RankOneDecomposition& decomposition, const JacobiOptions& options) {
  const int b = homology.betti;
  require_betti(b);
  if (decomposition.terms.empty()) throw InvalidInput("empty rank-one decomposition");
  for (const auto& t : decomposition.terms)
    if (t.functional.size() != b) throw InvalidInput("decomposition dimension does not match the Betti number");

  JacobiMap map{complex, homology.cocycle, b, decomposition, decomposition.reconstruct(), {}, {}};

  if (options.method == FieldMethod::harmonic) {
    HarmonicFields hf(complex, homology);
    for (const auto& t : decomposition.terms) {
      LipschitzField f;
      f.slope = t.functional;
      f.base_values = hf.field(t.functional);
      map.fields.push_back(std::move(f));
    }
  } else {
    CoverWindow window(complex, homology, Eigen::VectorXi::Constant(b, options.window_radius));
    for (const auto& t : decomposition.terms) {
      auto r = mcshane_extend(window, homology, homology.root, t.functional, options.window_radius - 1);
      map.fields.push_back(std::move(r.field));
    }
  }
  for (auto& f : map.fields) audit_field(complex, homology.cocycle, f);

  Eigen::MatrixXd qinv = safe_inverse(map.q);
  map.images.assign(complex.vertex_count(), Eigen::VectorXd::Zero(b));
  for (int v = 0; v < complex.vertex_count(); ++v) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(b);
    for (std::size_t i = 0; i < decomposition.terms.size(); ++i) {
      const auto& t = decomposition.terms[i];
      acc += t.lambda * map.fields[i].base_values[v] * t.functional;
    }
    map.images[v] = qinv * acc;
  }

  if (options.certify) {
    auto cert = jacobian_certificate(map);
    if (!cert.trace_ok)
      throw CertificationError("trace bound violated on simplex " + std::to_string(cert.worst_simplex),
                               std::max(cert.max_trace, cert.max_face_trace) - b);
  }
  return map;
}

JacobianCertificate jacobian_certificate(const JacobiMap& map) {
  const int b = map.betti;
  const auto& c = map.complex;
  JacobianCertificate cert;
  cert.betti = b;
  const double detq = map.q.determinant();
  std::set<std::vector<int>> seen;

  for (std::size_t s = 0; s < c.simplices().size(); ++s) {
    const auto& sv = c.simplices()[s];
    const int k = static_cast<int>(sv.size()) - 1;
    Eigen::MatrixXd a = map.simplex_differences(sv);
    Eigen::MatrixXd g = simplex_gram(c, sv);
    Eigen::MatrixXd m = a * safe_inverse(g) * a.transpose();
    double tr = (map.q * m).trace();
    double jac = k >= b ? std::sqrt(std::max(0.0, detq * m.determinant())) : 0.0;
    double bound = std::pow(std::max(tr, 0.0) / b, 0.5 * b);
    cert.trace.push_back(tr);
    cert.jacobian.push_back(jac);
    cert.amgm_bound.push_back(bound);
    if (jac > cert.max_jacobian || cert.worst_simplex < 0) {
      cert.max_jacobian = std::max(cert.max_jacobian, jac);
      cert.worst_simplex = static_cast<int>(s);
    }
    cert.max_trace = std::max(cert.max_trace, tr);
    cert.max_amgm_violation = std::max(cert.max_amgm_violation, jac - bound);

    if (b > k) continue;
    // Lifted image positions relative to sv[0].
    std::vector<Eigen::VectorXd> pos(k + 1, Eigen::VectorXd::Zero(b));
    for (int j = 1; j <= k; ++j) pos[j] = a.col(j - 1);
    std::vector<int> pick(k + 1, 0);
    std::fill(pick.end() - (b + 1), pick.end(), 1);
    do {
      std::vector<int> idx, face;
      for (int j = 0; j <= k; ++j)
        if (pick[j]) { idx.push_back(j); face.push_back(sv[j]); }
      if (!seen.insert(face).second) continue;
      Eigen::MatrixXd af(b, b);
      for (int j = 1; j <= b; ++j) af.col(j - 1) = pos[idx[j]] - pos[idx[0]];
      Eigen::MatrixXd gf = simplex_gram(c, face);
      Eigen::MatrixXd mf = af * safe_inverse(gf) * af.transpose();
      double trf = (map.q * mf).trace();
      double jf = std::sqrt(std::max(0.0, detq * mf.determinant()));
      cert.face_trace.push_back(trf);
      cert.face_jacobian.push_back(jf);
      cert.max_face_trace = std::max(cert.max_face_trace, trf);
      cert.max_face_jacobian = std::max(cert.max_face_jacobian, jf);
      cert.max_amgm_violation = std::max(cert.max_amgm_violation, jf - std::pow(std::max(trf, 0.0) / b, 0.5 * b));
    } while (std::next_permutation(pick.begin(), pick.end()));
  }
  const double tol = 1e-6;
  cert.trace_ok = cert.max_trace <= b + tol && cert.max_face_trace <= b + tol;
  cert.jacobian_ok = cert.max_jacobian <= 1.0 + tol && cert.max_face_jacobian <= 1.0 + tol;
  cert.max_lipschitz_margin = -std::numeric_limits<double>::infinity();
  for (const auto& f : map.fields) {
    cert.max_lipschitz_margin = std::max(cert.max_lipschitz_margin, f.lipschitz_margin);
    cert.max_equivariance_residual = std::max(cert.max_equivariance_residual, f.equivariance_residual);
  }
  return cert;
}

namespace {

double convex_polygon_area(std::vector<Eigen::Vector2d> pts) {
  std::sort(pts.begin(), pts.end(), [](const auto& p, const auto& q) {
    return p.x() < q.x() || (p.x() == q.x() && p.y() < q.y());
  });
  auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return (a - o).x() * (b - o).y() - (a - o).y() * (b - o).x();
  };
  std::vector<Eigen::Vector2d> hull(2 * pts.size());
  int h = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (h >= 2 && cross(hull[h - 2], hull[h - 1], pts[i]) <= 0) --h;
    hull[h++] = pts[i];
  }
  for (int i = static_cast<int>(pts.size()) - 2, lo = h + 1; i >= 0; --i) {
    while (h >= lo && cross(hull[h - 2], hull[h - 1], pts[i]) <= 0) --h;
    hull[h++] = pts[i];
  }
  double area = 0.0;
  for (int i = 0; i + 1 < h; ++i) area += hull[i].x() * hull[i + 1].y() - hull[i + 1].x() * hull[i].y();
  return 0.5 * std::abs(area);
}

}  // namespace

FiberMeasure fiber_extract(const JacobiMap& map, const Eigen::VectorXd& p) {
  const int b = map.betti;
  const auto& c = map.complex;
  if (p.size() != b) throw InvalidInput("point dimension does not match the Betti number");
  FiberMeasure out;
  out.dimension = c.dimension() - b;
  if (out.dimension < 0 || out.dimension > 2) throw InvalidInput("fibre dimension must be 0, 1 or 2");

  for (const auto& y : map.images) {
    Eigen::VectorXd r = y - p;
    for (int i = 0; i < b; ++i) r[i] -= std::round(r[i]);
    if (r.lpNorm<Eigen::Infinity>() < 1e-9) throw InvalidInput("point is not a regular value: it hits a vertex image");
  }

  for (const auto& sv : c.simplices()) {
    const int k = static_cast<int>(sv.size()) - 1;
    Eigen::MatrixXd a = map.simplex_differences(sv);
    std::vector<Eigen::VectorXd> pos(k + 1, map.images[sv[0]]);
    for (int j = 1; j <= k; ++j) pos[j] += a.col(j - 1);
    Eigen::VectorXd lo = pos[0], hi = pos[0];
    for (const auto& q : pos) {
      lo = lo.cwiseMin(q);
      hi = hi.cwiseMax(q);
    }
    Eigen::VectorXi mlo(b), mhi(b);
    for (int i = 0; i < b; ++i) {
      mlo[i] = static_cast<int>(std::ceil(lo[i] - p[i]));
      mhi[i] = static_cast<int>(std::floor(hi[i] - p[i]));
      if (mlo[i] > mhi[i]) goto next_simplex;
    }
    {
      Eigen::MatrixXd chol;
      if (out.dimension > 0) chol = Eigen::LLT<Eigen::MatrixXd>(simplex_gram(c, sv)).matrixU();
      Eigen::VectorXi m = mlo;
      while (true) {
        Eigen::VectorXd t = p + m.cast<double>();
        std::vector<Eigen::VectorXd> pts;  // barycentric tail (k entries)
        std::vector<int> pick(k + 1, 0);
        std::fill(pick.end() - (b + 1), pick.end(), 1);
        do {
          std::vector<int> idx;
          for (int j = 0; j <= k; ++j)
            if (pick[j]) idx.push_back(j);
          Eigen::MatrixXd af(b, b);
          for (int j = 1; j <= b; ++j) af.col(j - 1) = pos[idx[j]] - pos[idx[0]];
          Eigen::FullPivLU<Eigen::MatrixXd> lu(af);
          if (!lu.isInvertible()) continue;
          Eigen::VectorXd beta = lu.solve(t - pos[idx[0]]);
          double b0 = 1.0 - beta.sum();
          if (b0 < -1e-12 || beta.minCoeff() < -1e-12) continue;
          Eigen::VectorXd full = Eigen::VectorXd::Zero(k + 1);
          full[idx[0]] = b0;
          for (int j = 1; j <= b; ++j) full[idx[j]] = beta[j - 1];
          Eigen::VectorXd tail = full.tail(k);
          bool dup = false;
          for (const auto& q : pts)
            if ((q - tail).lpNorm<Eigen::Infinity>() < 1e-12) dup = true;
          if (!dup) pts.push_back(tail);
        } while (std::next_permutation(pick.begin(), pick.end()));

        if (out.dimension == 0) {
          out.pieces += static_cast<int>(pts.size());
        } else if (static_cast<int>(pts.size()) > out.dimension) {
          std::vector<Eigen::VectorXd> xs;
          for (const auto& q : pts) xs.push_back(chol * q);
          ++out.pieces;
          if (out.dimension == 1) {
            double len = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i)
              for (std::size_t j = i + 1; j < xs.size(); ++j) len = std::max(len, (xs[i] - xs[j]).norm());
            out.volume += len;
          } else {
            Eigen::VectorXd mean = Eigen::VectorXd::Zero(k);
            for (const auto& x : xs) mean += x;
            mean /= static_cast<double>(xs.size());
            Eigen::MatrixXd centred(k, xs.size());
            for (std::size_t i = 0; i < xs.size(); ++i) centred.col(i) = xs[i] - mean;
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(centred, Eigen::ComputeThinU);
            std::vector<Eigen::Vector2d> flat;
            for (std::size_t i = 0; i < xs.size(); ++i)
              flat.emplace_back(svd.matrixU().col(0).dot(centred.col(i)), svd.matrixU().col(1).dot(centred.col(i)));
            out.volume += convex_polygon_area(std::move(flat));
          }
        }
        int i = 0;
        while (i < b && m[i] == mhi[i]) {
          m[i] = mlo[i];
          ++i;
        }
        if (i == b) break;
        ++m[i];
      }
    }
  next_simplex:;
  }
  return out;
}

CoareaReport coarea_audit(const JacobiMap& map, int samples, std::uint64_t seed, double tolerance) {
  if (samples < 1) throw InvalidInput("sample count must be positive");
  const int fdim = map.complex.dimension() - map.betti;
  if (fdim < 0 || fdim > 2) throw InvalidInput("fibre dimension must be 0, 1 or 2");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  CoareaReport r;
  r.volume = map.complex.volume();
  r.image_volume = std::sqrt(std::max(0.0, map.q.determinant()));
  r.min_fiber = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd p(map.betti);
    for (int i = 0; i < map.betti; ++i) p[i] = unit(rng);
    try {
      double v = fiber_extract(map, p).measure();
      ++r.regular_samples;
      sum += v;
      r.min_fiber = std::min(r.min_fiber, v);
      r.max_fiber = std::max(r.max_fiber, v);
    } catch (const InvalidInput&) {
      ++r.rejected_samples;
    }
  }
  if (r.regular_samples < 10)
    throw CertificationError("fewer than 10 regular samples", static_cast<double>(r.regular_samples));
  r.mean_fiber = sum / r.regular_samples;
  r.slack = (r.volume - r.min_fiber * r.image_volume) / r.volume;
  r.pass = r.slack >= -tolerance;
  return r;
}

}  // namespace systolic
