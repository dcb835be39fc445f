#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "systolic/convex.hpp"
#include "systolic/error.hpp"
#include "systolic/simplex_lp.hpp"

#include "oracles.hpp"

using namespace systolic;
using namespace oracle;

namespace {

double support(const Ellipsoid& e, const Eigen::VectorXd& a) { return std::sqrt(a.dot(e.q.inverse() * a)); }

}  // namespace

TEST(Lp, MaximizeFreeMatchesHandSolvedProgram) {
  // max x + y s.t. x <= 1, y <= 2, x + 2y <= 4 -> (1, 1.5), value 2.5.
  Eigen::MatrixXd a(3, 2);
  a << 1, 0, 0, 1, 1, 2;
  const auto s = maximize_free(Eigen::Vector2d(1, 1), a, Eigen::Vector3d(1, 2, 4));
  EXPECT_NEAR(s.value, 2.5, 1e-12);
  EXPECT_NEAR(s.x[0], 1.0, 1e-12);
  EXPECT_NEAR(s.x[1], 1.5, 1e-12);
  // Strong duality: b . y = value with y >= 0 and A^T y = c.
  EXPECT_NEAR(Eigen::Vector3d(1, 2, 4).dot(s.dual), 2.5, 1e-12);
  EXPECT_TRUE((a.transpose() * s.dual).isApprox(Eigen::Vector2d(1, 1), 1e-12));
}

TEST(Convex, SquareAndHexagonHaveRoundJohnEllipses) {
  SymmetricBody square(2, {Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)});
  EXPECT_TRUE(john_inscribed(square).q.isApprox(Eigen::Matrix2d::Identity(), 1e-6));
  const double s = std::sqrt(3.0) / 2;
  SymmetricBody hexagon(2, {Eigen::Vector2d(1, 0), Eigen::Vector2d(0.5, s), Eigen::Vector2d(-0.5, s)});
  EXPECT_TRUE(john_inscribed(hexagon).q.isApprox(Eigen::Matrix2d::Identity(), 1e-6));
  SymmetricBody octahedron(3, {Eigen::Vector3d(1, 1, 1), Eigen::Vector3d(1, 1, -1), Eigen::Vector3d(1, -1, 1),
                               Eigen::Vector3d(-1, 1, 1)});
  EXPECT_TRUE(john_inscribed(octahedron).q.isApprox(3.0 * Eigen::Matrix3d::Identity(), 1e-6));
}

TEST(Convex, JohnEllipsoidIsInscribedAndLocallyMaximal) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 3;
    const auto body = random_body(d, rng);
    const auto e = john_inscribed(body);
    for (const auto& a : body.facets()) EXPECT_LE(support(e, a), 1.0 + 1e-6);
    // No feasible nearby ellipsoid has noticeably larger volume.
    const double logvol = -std::log(e.q.determinant());
    for (int k = 0; k < 50; ++k) {
      Eigen::MatrixXd p(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) p(i, j) = g(rng);
      Eigen::MatrixXd qi = e.q.inverse() + 1e-3 * (p + p.transpose());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(qi);
      if (es.eigenvalues().minCoeff() <= 0) continue;
      double worst = 0.0;
      for (const auto& a : body.facets()) worst = std::max(worst, std::sqrt(a.dot(qi * a)));
      qi /= worst * worst;  // shrink until inscribed
      EXPECT_LE(std::log(qi.determinant()), logvol + 1e-5);
    }
  }
}

TEST(Convex, JohnEllipsoidIsAffineEquivariant) {
  std::mt19937_64 rng(8);
  const auto body = random_body(3, rng);
  Eigen::Matrix3d t;
  t << 2, 0.3, 0, -0.1, 1, 0.4, 0.2, 0, 0.7;
  const auto e = john_inscribed(body);
  const auto et = john_inscribed(body.transformed(t));
  const Eigen::Matrix3d expected = t.inverse().transpose() * e.q * t.inverse();
  EXPECT_TRUE(et.q.isApprox(expected, 1e-5));
}

TEST(Convex, DualNormAgreesWithVertexEnumeration) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + trial % 3;
    const auto body = random_body(d, rng);
    Eigen::VectorXd l(d);
    for (int i = 0; i < d; ++i) l[i] = g(rng);
    EXPECT_NEAR(body.dual_norm(l), vertex_dual_norm(body, l), 1e-9 * (1 + l.norm()));
  }
}

TEST(Convex, RankOneDecompositionInvariants) {
  std::mt19937_64 rng(2025);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + trial % 3;
    const auto body = random_body(d, rng);
    const auto e = john_inscribed(body);
    const auto dec = decompose_rank_one(body, e);
    EXPECT_NEAR(dec.lambda_sum(), d, 1e-8);
    EXPECT_LE(static_cast<int>(dec.terms.size()), d * (d + 1) / 2 + 1);
    const double rel = (dec.reconstruct() - e.q).norm() / e.q.norm();
    EXPECT_LE(rel, 1e-6);
    for (const auto& t : dec.terms) {
      EXPECT_GT(t.lambda, 0.0);
      EXPECT_NEAR(vertex_dual_norm(body, t.functional), 1.0, 1e-6);
    }
  }
}

TEST(Convex, MveeEnclosesThePoints) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i < 30; ++i) pts.push_back(Eigen::Vector3d(g(rng), 2 * g(rng), 0.5 * g(rng)));
  const auto r = mvee_weights(pts);
  EXPECT_NEAR(r.weights.sum(), 1.0, 1e-9);
  for (const auto& p : pts) EXPECT_LE(p.dot(r.m * p), 1.0 + 1e-6);
}

TEST(Convex, RejectsBadInput) {
  EXPECT_THROW(SymmetricBody(2, {Eigen::Vector2d(1, 0)}), InvalidInput);
  Eigen::Matrix2d notpd;
  notpd << 1, 0, 0, -1;
  EXPECT_THROW(Ellipsoid{notpd}, InvalidInput);
}

TEST(Convex, OneDimensionalBodyIsAnInterval) {
  // Full Khachiyan step: all weight lands on the widest functional.
  std::vector<Eigen::VectorXd> f;
  for (double a : {0.3, -1.7, 0.9}) f.push_back(Eigen::VectorXd::Constant(1, a));
  const SymmetricBody body(1, f);
  const auto e = john_inscribed(body);
  EXPECT_NEAR(e.q(0, 0), 1.7 * 1.7, 1e-12);
  const auto dec = decompose_rank_one(body, e);
  ASSERT_EQ(dec.terms.size(), 1u);
  EXPECT_NEAR(dec.lambda_sum(), 1.0, 1e-12);
}
