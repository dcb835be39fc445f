#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace systolic {

/// Centrally symmetric polytope {x : |<a_j, x>| <= 1 for all j}.
/// One functional per +/- pair; the functionals must span R^d.
class SymmetricBody {
 public:
  SymmetricBody(int dimension, std::vector<Eigen::VectorXd> facets);

  int dimension() const { return dimension_; }
  const std::vector<Eigen::VectorXd>& facets() const { return facets_; }

  /// Gauge of x: max_j |<a_j, x>|.
  double gauge(const Eigen::VectorXd& x) const;
  /// Dual norm of the functional L: max of <L, x> over the body (LP).
  double dual_norm(const Eigen::VectorXd& functional) const;
  /// Same body after x -> T x.
  SymmetricBody transformed(const Eigen::MatrixXd& t) const;

 private:
  int dimension_;
  std::vector<Eigen::VectorXd> facets_;
};

/// {x : x^T Q x <= 1}.
struct Ellipsoid {
  Eigen::MatrixXd q;

  explicit Ellipsoid(Eigen::MatrixXd q_in);
  double norm(const Eigen::VectorXd& x) const { return std::sqrt(x.dot(q * x)); }
};

struct MveeOptions {
  double tolerance = 1e-7;
  int max_iterations = 100000;
};

struct MveeResult {
  /// The ellipsoid is {x : x^T M x <= 1}.
  Eigen::MatrixXd m;
  /// Barycentric weights over the input points (sum 1).
  Eigen::VectorXd weights;
  int iterations = 0;
  double residual = 0.0;
};

/// Minimum-volume origin-centred ellipsoid around a symmetric point set
/// (pass one point per +/- pair). Khachiyan iteration with Todd-Yildirim
/// away steps; stops once max p^T M p - 1 <= tolerance.
MveeResult mvee_weights(const std::vector<Eigen::VectorXd>& points,
                        const MveeOptions& options = {});
Ellipsoid mvee(const std::vector<Eigen::VectorXd>& points,
               const MveeOptions& options = {});

/// Maximum-volume inscribed ellipsoid, the polar of mvee({+-a_j}).
Ellipsoid john_inscribed(const SymmetricBody& body, const MveeOptions& options = {});

struct RankOneTerm {
  double lambda = 0.0;
  Eigen::VectorXd functional;
};

struct RankOneDecomposition {
  std::vector<RankOneTerm> terms;
  /// || sum lambda L L^T - Q || / ||Q|| in operator norm.
  double residual = 0.0;

  Eigen::MatrixXd reconstruct() const;
  double lambda_sum() const;
};

/// Q = sum lambda_i L_i L_i^T with sum lambda_i = d and at most
/// d(d+1)/2 + 1 terms, built from the contact weights of the MVEE and pruned
/// by Caratheodory reduction. `ellipsoid` must be john_inscribed(body).
RankOneDecomposition decompose_rank_one(const SymmetricBody& body,
                                        const Ellipsoid& ellipsoid,
                                        const MveeOptions& options = {});

inline int max_rank_one_terms(int d) { return d * (d + 1) / 2 + 1; }

}  // namespace systolic
