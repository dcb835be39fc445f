#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "systolic/error.hpp"
#include "systolic/lattice.hpp"

#include "oracles.hpp"

using namespace systolic;
using namespace oracle;

TEST(Lattice, HermiteRatiosOfCriticalLatticesMeetTheBound) {
  EXPECT_NEAR(hermite_ratio(catalog_lattice("A2")), 2.0 / std::sqrt(3.0), 1e-9);
  EXPECT_NEAR(hermite_ratio(catalog_lattice("D4")), 2.0, 1e-9);
  EXPECT_NEAR(hermite_ratio(catalog_lattice("E8")), 16.0, 1e-9);
  for (int n = 1; n <= 8; ++n) {
    const auto b = catalog_lattice(critical_lattice_name(n));
    EXPECT_NEAR(hermite_ratio(b), hermite_ratio_bound(n), 1e-9 * hermite_ratio_bound(n)) << n;
  }
}

TEST(Lattice, HermiteConstantsMatchClosedForms) {
  EXPECT_NEAR(hermite_constant(2), 2.0 / std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(hermite_constant(3), std::cbrt(2.0), 1e-12);
  EXPECT_NEAR(hermite_constant(4), std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(hermite_constant(8), 2.0, 1e-12);
  for (int n = 1; n <= 8; ++n) EXPECT_NEAR(hermite_ratio_bound(n), std::pow(hermite_constant(n), n / 2.0), 1e-12);
  EXPECT_THROW(hermite_constant(9), InvalidInput);
}

TEST(Lattice, ShortestVectorMatchesExhaustiveSearch) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + trial % 4;
    const Eigen::MatrixXd m = random_basis(d, rng);
    const auto r = shortest_vector(LatticeBasis(m));
    const double oracle = brute_force_lambda1(m);
    EXPECT_NEAR(r.length, oracle, 1e-9 * oracle) << "trial " << trial;
    EXPECT_NEAR((r.coefficients.cast<double>().transpose() * m).norm(), r.length, 1e-9);
  }
}

TEST(Lattice, ShortestVectorIgnoresBasisChoice) {
  std::mt19937_64 rng(7);
  const Eigen::MatrixXd m = random_basis(4, rng);
  Eigen::MatrixXi u = Eigen::MatrixXi::Identity(4, 4);
  u(0, 1) = 3;
  u(2, 3) = -2;
  u(3, 0) = 1;
  const double a = shortest_vector(LatticeBasis(m)).length;
  const double b = shortest_vector(LatticeBasis(m).transformed(u)).length;
  EXPECT_NEAR(a, b, 1e-12 * a);
}

TEST(Lattice, DualBasisIsInverseTranspose) {
  std::mt19937_64 rng(11);
  const Eigen::MatrixXd m = random_basis(3, rng);
  const auto dual = dual_basis(LatticeBasis(m));
  EXPECT_TRUE((m * dual.rows().transpose()).isApprox(Eigen::MatrixXd::Identity(3, 3), 1e-12));
  EXPECT_NEAR(covolume(LatticeBasis(m)) * covolume(dual), 1.0, 1e-12);
}

TEST(Lattice, BergeMartinetRatiosOfCatalogLattices) {
  EXPECT_NEAR(berge_martinet_ratio(catalog_lattice("Z2")), 1.0, 1e-9);
  EXPECT_NEAR(berge_martinet_ratio(catalog_lattice("A2")), 2.0 / std::sqrt(3.0), 1e-9);
  EXPECT_NEAR(berge_martinet_ratio(catalog_lattice("A3")), std::sqrt(1.5), 1e-9);
  EXPECT_NEAR(berge_martinet_ratio(catalog_lattice("D4")), std::sqrt(2.0), 1e-9);
}

TEST(Lattice, RatiosAreScaleAndRotationInvariant) {
  std::mt19937_64 rng(5);
  const LatticeBasis b(random_basis(3, rng));
  const double h = hermite_ratio(b);
  EXPECT_NEAR(hermite_ratio(b.scaled(3.7)), h, 1e-9 * h);
  const Eigen::MatrixXd rot = Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 2, 3).normalized()).toRotationMatrix();
  EXPECT_NEAR(hermite_ratio(b.rotated(rot)), h, 1e-9 * h);
}

TEST(Lattice, RandomLatticesNeverBeatTheHermiteBound) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 2 + trial % 5;
    const LatticeBasis b(random_basis(d, rng));
    EXPECT_LE(hermite_ratio(b), hermite_ratio_bound(d) * (1 + 1e-9));
    if (d <= 4) EXPECT_LE(berge_martinet_ratio(b), berge_martinet_constant(d) * (1 + 1e-9));
  }
}

TEST(Lattice, ShortVectorEnumerationCountsKissingNumbers) {
  // Minimal vectors come in +/- pairs: kissing numbers 6, 24, 240.
  EXPECT_EQ(enumerate_short_vectors(catalog_lattice("A2"), 1.0 + 1e-9).size(), 3u);
  const auto d4 = catalog_lattice("D4");
  EXPECT_EQ(enumerate_short_vectors(d4, shortest_vector(d4).length * (1 + 1e-9)).size(), 12u);
  const auto e8 = catalog_lattice("E8");
  EXPECT_EQ(enumerate_short_vectors(e8, shortest_vector(e8).length * (1 + 1e-9)).size(), 120u);
}

TEST(Lattice, RejectsDegenerateInput) {
  Eigen::MatrixXd singular(2, 2);
  singular << 1, 2, 2, 4;
  EXPECT_THROW(LatticeBasis{singular}, SingularBasis);
  EXPECT_THROW(LatticeBasis{Eigen::MatrixXd(0, 0)}, InvalidInput);
  EXPECT_THROW(catalog_lattice("Leech"), InvalidInput);
}

TEST(Lattice, AcceptsSkewedWellConditionedBases) {
  // Upper unitriangular with large entries: Hadamard ratio ~1e-14, yet
  // exactly unimodular over Z^6.
  Eigen::MatrixXd b = Eigen::MatrixXd::Identity(6, 6);
  for (int i = 0; i < 5; ++i) b(i, i + 1) = 40.0;
  const LatticeBasis l(b);
  EXPECT_NEAR(covolume(l), 1.0, 1e-9);
  EXPECT_NEAR(shortest_vector(l).length, 1.0, 1e-9);
}
