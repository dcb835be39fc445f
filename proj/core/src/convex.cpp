#include "systolic/convex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "systolic/error.hpp"
#include "systolic/simplex_lp.hpp"

namespace systolic {

SymmetricBody::SymmetricBody(int dimension, std::vector<Eigen::VectorXd> facets)
    : dimension_(dimension), facets_(std::move(facets)) {
  if (dimension_ < 1) throw InvalidInput("body dimension must be positive");
  Eigen::MatrixXd span = Eigen::MatrixXd::Zero(dimension_, dimension_);
  for (const auto& a : facets_) {
    if (a.size() != dimension_) throw InvalidInput("facet functional has wrong dimension");
    if (!a.allFinite() || a.norm() == 0.0) throw InvalidInput("zero or non-finite facet functional");
    span += a * a.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(span);
  if (facets_.empty() || eig.eigenvalues().minCoeff() <= 1e-12 * eig.eigenvalues().maxCoeff()) {
    throw InvalidInput("facet functionals do not span; body is unbounded");
  }
}

double SymmetricBody::gauge(const Eigen::VectorXd& x) const {
  double g = 0.0;
  for (const auto& a : facets_) g = std::max(g, std::abs(a.dot(x)));
  return g;
}

double SymmetricBody::dual_norm(const Eigen::VectorXd& functional) const {
  const int n = static_cast<int>(facets_.size());
  Eigen::MatrixXd a(2 * n, dimension_);
  for (int j = 0; j < n; ++j) {
    a.row(2 * j) = facets_[j].transpose();
    a.row(2 * j + 1) = -facets_[j].transpose();
  }
  const LpSolution sol = maximize_free(functional, a, Eigen::VectorXd::Ones(2 * n));
  if (sol.status != LpStatus::optimal) throw ConvergenceError("dual norm LP unbounded", 0.0);
  return sol.value;
}

SymmetricBody SymmetricBody::transformed(const Eigen::MatrixXd& t) const {
  // |<a, T^{-1} y>| <= 1  <=>  |<T^{-T} a, y>| <= 1.
  const Eigen::MatrixXd tinv_t = t.inverse().transpose();
  std::vector<Eigen::VectorXd> out;
  out.reserve(facets_.size());
  for (const auto& a : facets_) out.push_back(tinv_t * a);
  return SymmetricBody(dimension_, std::move(out));
}

Ellipsoid::Ellipsoid(Eigen::MatrixXd q_in) : q(std::move(q_in)) {
  if (q.rows() != q.cols() || q.rows() < 1) throw InvalidInput("ellipsoid form must be square");
  if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, q.cwiseAbs().maxCoeff())) {
    throw InvalidInput("ellipsoid form is not symmetric");
  }
  q = 0.5 * (q + q.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(q);
  if (eig.eigenvalues().minCoeff() <= 0.0) throw InvalidInput("ellipsoid form is not positive definite");
}

MveeResult mvee_weights(const std::vector<Eigen::VectorXd>& points, const MveeOptions& options) {
  const int n = static_cast<int>(points.size());
  if (n == 0) throw InvalidInput("mvee of an empty point set");
  const int d = static_cast<int>(points.front().size());
  Eigen::MatrixXd p(d, n);
  for (int i = 0; i < n; ++i) {
    if (points[i].size() != d) throw InvalidInput("mvee points have mixed dimensions");
    p.col(i) = points[i];
  }
  {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(p);
    lu.setThreshold(1e-12);
    if (lu.rank() < d) throw InvalidInput("mvee points do not span");
  }

  Eigen::VectorXd u = Eigen::VectorXd::Constant(n, 1.0 / n);
  auto inverse_moment = [&]() {
    const Eigen::MatrixXd x = p * u.asDiagonal() * p.transpose();
    return Eigen::MatrixXd(x.ldlt().solve(Eigen::MatrixXd::Identity(d, d)));
  };
  Eigen::MatrixXd xinv = inverse_moment();
  const double dd = d;

  MveeResult result;
  double residual = 0.0;
  int iter = 0;
  for (;; ++iter) {
    if (iter % 64 == 0) xinv = inverse_moment();
    const Eigen::VectorXd kappa = (p.transpose() * xinv * p).diagonal();
    int j = 0;
    kappa.maxCoeff(&j);
    int k = -1;
    for (int i = 0; i < n; ++i) {
      if (u[i] > 0.0 && (k < 0 || kappa[i] < kappa[k])) k = i;
    }
    residual = kappa[j] / dd - 1.0;
    if (residual <= options.tolerance) break;
    if (iter >= options.max_iterations) {
      throw ConvergenceError("mvee iteration cap exceeded", residual);
    }

    int target = j;
    double alpha = (kappa[j] - dd) / (dd * (kappa[j] - 1.0));
    if (dd - kappa[k] > kappa[j] - dd) {
      // Away step: shrink the weight of the least-covered support point.
      target = k;
      const double floor_step = -u[k] / (1.0 - u[k]);
      alpha = kappa[k] > 1.0 ? (kappa[k] - dd) / (dd * (kappa[k] - 1.0)) : floor_step;
      alpha = std::max(alpha, floor_step);
      if (u[k] >= 1.0) alpha = 0.0;
    }
    if (alpha == 0.0) break;
    if (alpha >= 1.0) {
      // Full step (d = 1): all weight moves to one point.
      u.setZero();
      u[target] = 1.0;
      xinv = inverse_moment();
      continue;
    }
    const Eigen::VectorXd pt = p.col(target);
    u *= (1.0 - alpha);
    u[target] += alpha;
    if (u[target] < 1e-300) u[target] = 0.0;
    // Sherman-Morrison update of ((1-a) X + a p p^T)^{-1}.
    const double r = alpha / (1.0 - alpha);
    const Eigen::VectorXd y = xinv * pt;
    xinv = (xinv - (r / (1.0 + r * kappa[target])) * y * y.transpose()) / (1.0 - alpha);
  }
  xinv = inverse_moment();
  const Eigen::VectorXd kappa = (p.transpose() * xinv * p).diagonal();
  result.m = xinv / dd;
  result.m = 0.5 * (result.m + result.m.transpose());
  result.weights = u;
  result.iterations = iter;
  result.residual = kappa.maxCoeff() / dd - 1.0;
  return result;
}

Ellipsoid mvee(const std::vector<Eigen::VectorXd>& points, const MveeOptions& options) {
  return Ellipsoid(mvee_weights(points, options).m);
}

namespace {

// Q = M^{-1} = d * sum u_j a_j a_j^T, assembled from the weights directly so
// the decomposition below reproduces it to rounding.
Eigen::MatrixXd john_form(const SymmetricBody& body, const Eigen::VectorXd& u) {
  const int d = body.dimension();
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(d, d);
  for (int j = 0; j < u.size(); ++j) {
    if (u[j] > 0.0) q += (d * u[j]) * body.facets()[j] * body.facets()[j].transpose();
  }
  return 0.5 * (q + q.transpose());
}

Eigen::VectorXd lifted(const Eigen::VectorXd& a) {
  const int d = static_cast<int>(a.size());
  Eigen::VectorXd v(d * (d + 1) / 2 + 1);
  int t = 0;
  for (int i = 0; i < d; ++i) {
    for (int k = i; k < d; ++k) v[t++] = a[i] * a[k];
  }
  v[t] = 1.0;
  return v;
}

double operator_norm(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (m + m.transpose()));
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

Ellipsoid john_inscribed(const SymmetricBody& body, const MveeOptions& options) {
  const MveeResult r = mvee_weights(body.facets(), options);
  return Ellipsoid(john_form(body, r.weights));
}

Eigen::MatrixXd RankOneDecomposition::reconstruct() const {
  const int d = terms.empty() ? 0 : static_cast<int>(terms.front().functional.size());
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(d, d);
  for (const auto& t : terms) q += t.lambda * t.functional * t.functional.transpose();
  return q;
}

double RankOneDecomposition::lambda_sum() const {
  double s = 0.0;
  for (const auto& t : terms) s += t.lambda;
  return s;
}

RankOneDecomposition decompose_rank_one(const SymmetricBody& body, const Ellipsoid& ellipsoid,
                                        const MveeOptions& options) {
  const int d = body.dimension();
  if (ellipsoid.q.rows() != d) throw InvalidInput("ellipsoid dimension does not match body");
  const MveeResult r = mvee_weights(body.facets(), options);
  const auto& facets = body.facets();

  // Contact support: functionals on the boundary of the MVEE.
  struct Term {
    Eigen::VectorXd a;
    double w;
  };
  std::vector<Term> support;
  for (int j = 0; j < r.weights.size(); ++j) {
    if (r.weights[j] <= 0.0) continue;
    const double excess = facets[j].dot(r.m * facets[j]);
    if (excess < 1.0 - 1e-4) continue;
    // Merge duplicates and antipodes; they carry the same rank-one form.
    bool merged = false;
    for (auto& t : support) {
      const double tol = 1e-12 * std::max(1.0, t.a.norm());
      if ((t.a - facets[j]).norm() <= tol || (t.a + facets[j]).norm() <= tol) {
        t.w += r.weights[j];
        merged = true;
        break;
      }
    }
    if (!merged) support.push_back({facets[j], r.weights[j]});
  }
  double total = 0.0;
  for (const auto& t : support) total += t.w;
  if (support.empty() || total <= 0.0) throw CertificationError("no contact points", 1.0);
  for (auto& t : support) t.w *= d / total;

  // Caratheodory: while the lifted vectors (a a^T, 1) are dependent, move
  // along a null direction until a weight vanishes, preferring to drop the
  // smallest weight.
  const int dim = max_rank_one_terms(d);
  for (int guard = 0; guard < 10000; ++guard) {
    const int n = static_cast<int>(support.size());
    Eigen::MatrixXd v(dim, n);
    for (int j = 0; j < n; ++j) v.col(j) = lifted(support[j].a);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(v);
    lu.setThreshold(1e-10);
    if (lu.rank() == n) break;
    const Eigen::MatrixXd kernel = lu.kernel();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) { return support[x].w < support[y].w; });
    Eigen::VectorXd z;
    for (int idx : order) {
      int col = 0;
      const double best = kernel.row(idx).cwiseAbs().maxCoeff(&col);
      if (best > 1e-9) {
        z = kernel.col(col);
        if (z[idx] < 0.0) z = -z;
        break;
      }
    }
    if (z.size() == 0) break;
    double step = std::numeric_limits<double>::infinity();
    int drop = -1;
    for (int j = 0; j < n; ++j) {
      if (z[j] > 1e-14 && support[j].w / z[j] < step) {
        step = support[j].w / z[j];
        drop = j;
      }
    }
    if (drop < 0) break;
    for (int j = 0; j < n; ++j) support[j].w -= step * z[j];
    support.erase(support.begin() + drop);
    support.erase(std::remove_if(support.begin(), support.end(), [](const Term& t) { return t.w <= 1e-15; }),
                  support.end());
  }

  RankOneDecomposition out;
  for (const auto& t : support) out.terms.push_back({t.w, t.a});
  const Eigen::MatrixXd rec = out.reconstruct();
  out.residual = operator_norm(rec - ellipsoid.q) / operator_norm(ellipsoid.q);
  if (static_cast<int>(out.terms.size()) > dim) {
    throw CertificationError("decomposition exceeds d(d+1)/2 + 1 terms", out.residual);
  }
  if (out.residual > 1e-6) {
    throw CertificationError("rank-one reconstruction residual above 1e-6", out.residual);
  }
  return out;
}

}  // namespace systolic
