#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "systolic/distance.hpp"
#include "systolic/error.hpp"
#include "systolic/generators.hpp"
#include "systolic/homology.hpp"
#include "systolic/inequality.hpp"
#include "systolic/lattice.hpp"
#include "systolic/systoles.hpp"

#include "oracles.hpp"

using namespace systolic;
using namespace oracle;

namespace {

// Edge displacement vectors of a periodic flat mesh, read off from the
// vertex coordinates and the integer periods.
std::vector<Eigen::Vector2d> edge_displacements(const WeightedComplex& t, const LatticeBasis& b) {
  std::vector<Eigen::Vector2d> out;
  for (int e = 0; e < t.edge_count(); ++e) {
    const auto& ed = t.edge(e);
    Eigen::Vector2d d = t.coordinates()[ed.b] - t.coordinates()[ed.a];
    d += (t.periods().row(e).cast<double>() * b.rows()).transpose();
    out.push_back(d);
  }
  return out;
}

// Gauge of conv{+-d / |d|}: the stable norm of a flat periodic mesh whose
// edges come in finitely many directions. Minimum of a + b over two-term
// nonnegative decompositions v = a u_i + b u_j.
double polyhedral_gauge(const std::vector<Eigen::Vector2d>& disp, const Eigen::Vector2d& v) {
  std::vector<Eigen::Vector2d> u;
  for (const auto& d : disp) {
    u.push_back(d / d.norm());
    u.push_back(-d / d.norm());
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (std::abs(u[i].x() * v.y() - u[i].y() * v.x()) < 1e-12 && u[i].dot(v) >= 0) best = std::min(best, v.norm());
    for (std::size_t j = i + 1; j < u.size(); ++j) {
      Eigen::Matrix2d m;
      m << u[i], u[j];
      if (std::abs(m.determinant()) < 1e-12) continue;
      const Eigen::Vector2d c = m.fullPivLu().solve(v);
      if (c.minCoeff() >= -1e-12) best = std::min(best, c.sum());
    }
  }
  return best;
}

double lambda1(const LatticeBasis& b) { return shortest_vector(b).length; }

}  // namespace

TEST(Systoles, FlatTorusSystolesEqualTheShortestVector) {
  for (const auto& raw : random_lattices(2, 20, 7)) {
    // Skewed bases put short classes far out in coordinates; the class box
    // is certified only for a reduced basis.
    const LatticeBasis basis(lll_reduce(raw).rows);
    const auto t = flat_torus(basis, 9);
    const auto h = build_homology(t);
    const double l1 = lambda1(basis);
    EXPECT_NEAR(homotopy_systole(t, h).value, l1, 1e-9 * l1);
    EXPECT_NEAR(stable_systole(t, h).value, l1, 1e-7 * l1);
  }
}

TEST(Systoles, HomotopyWitnessIsAClosedWalkOfThatLength) {
  const auto t = flat_torus(catalog_lattice("A2"), 8);
  const auto h = build_homology(t);
  const auto r = homotopy_systole(t, h);
  ASSERT_GE(r.witness.size(), 2u);
  EXPECT_EQ(r.witness.front(), r.witness.back());
  EXPECT_NEAR(walk_length(t, r.witness), r.value, 1e-12);
  EXPECT_FALSE(h.walk_class(t, r.witness).isZero());
}

TEST(Systoles, StableNormMatchesPolyhedralGauge) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coef(-3, 3);
  for (const auto& basis : random_lattices(2, 5, 3)) {
    const auto t = flat_torus(basis, 6);
    const auto h = build_homology(t);
    ASSERT_TRUE(h.period_basis);
    const auto disp = edge_displacements(t, basis);
    StableNormSolver solver(t, h);
    for (int trial = 0; trial < 6; ++trial) {
      Eigen::Vector2i cls(coef(rng), coef(rng));
      if (cls.isZero()) continue;
      const Eigen::Vector2d v = (cls.cast<double>().transpose() * basis.rows()).transpose();
      const double oracle = polyhedral_gauge(disp, v);
      EXPECT_NEAR(solver.norm(Eigen::VectorXi(cls)), oracle, 1e-7 * oracle);
    }
  }
}

TEST(Systoles, StableNormOnGraphsMatchesUniqueCycleMass) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> coef(-2, 2);
  for (int g = 0; g < 20; ++g) {
    const auto graph = random_graph(rng, 5, 4);  // 8 edges, b = 4
    const auto h = build_homology(graph);
    ASSERT_EQ(h.betti, 4);
    StableNormSolver solver(graph, h);
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXi cls(4);
      for (int i = 0; i < 4; ++i) cls[i] = coef(rng);
      if (cls.isZero()) continue;
      const double oracle = graph_cycle_mass(graph, h, cls);
      EXPECT_NEAR(solver.norm(cls), oracle, 1e-8 * oracle);
      EXPECT_NEAR(solver.last_chain().mass(graph), oracle, 1e-8 * oracle);
      EXPECT_LT(solver.last_chain().boundary_residual(graph), 1e-9);
    }
  }
}

TEST(Systoles, StableNormIsAHomogeneousSubadditiveNorm) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> coef(-3, 3);
  std::vector<WeightedComplex> spaces = {
      perturbed_lengths(flat_torus(catalog_lattice("A2"), 6), 0.2, 4),
      twisted_circle_bundle(catalog_lattice("Z2"), 5, 0.3, 3),
  };
  for (const auto& c : spaces) {
    const auto h = build_homology(c);
    StableNormSolver solver(c, h);
    for (int trial = 0; trial < 10; ++trial) {
      Eigen::VectorXi a(h.betti), b(h.betti);
      for (int i = 0; i < h.betti; ++i) {
        a[i] = coef(rng);
        b[i] = coef(rng);
      }
      const double na = solver.norm(a), nb = solver.norm(b);
      EXPECT_NEAR(solver.norm(Eigen::VectorXi(3 * a)), 3 * na, 1e-7 * (1 + na));
      EXPECT_NEAR(solver.norm(Eigen::VectorXi(-a)), na, 1e-7 * (1 + na));
      EXPECT_LE(solver.norm(Eigen::VectorXi(a + b)), na + nb + 1e-7 * (1 + na + nb));
      // Never above the length of a representative loop.
      if (!a.isZero()) EXPECT_GT(na, 0.0);
    }
  }
}

TEST(Systoles, TorsionFiberIsTheHomotopySystoleButNotStable) {
  const double eps = 0.1;
  const auto bundle = twisted_circle_bundle(catalog_lattice("A2"), 6, eps, 3);
  const auto h = build_homology(bundle);
  const auto sys = homotopy_systole(bundle, h);
  EXPECT_NEAR(sys.value, eps, 1e-12);
  EXPECT_NE(sys.z2_bits, 0u);
  EXPECT_NEAR(stable_systole(bundle, h).value, lambda1(catalog_lattice("A2")), 1e-7);
}

TEST(Systoles, ProjectivePlanePhiSystoleApproachesPi) {
  const auto rp = round_rp2(5);
  const auto h = build_homology(rp);
  ASSERT_EQ(h.z2_rank, 1);
  const auto r = phi_systole(rp, h.z2_class(0));
  EXPECT_NEAR(r.value, std::numbers::pi, 0.02 * std::numbers::pi);
  EXPECT_EQ(walk_parity(rp, h.z2_class(0), r.witness), 1);
  EXPECT_THROW(homotopy_systole(round_sphere(2), build_homology(round_sphere(2))), TopologyError);
}

TEST(Systoles, BallAreasMatchEuclideanDisks) {
  const auto disk = flat_disk(24, 1.0);
  for (double r : {0.3, 0.6, 0.9}) {
    EXPECT_NEAR(ball_area(disk, 0, r), std::numbers::pi * r * r, 0.03 * std::numbers::pi * r * r) << r;
  }
  const auto t = flat_torus(catalog_lattice("A2"), 24);
  for (double r : {0.2, 0.45}) {
    EXPECT_NEAR(ball_area(t, 0, r), std::numbers::pi * r * r, 0.03 * std::numbers::pi * r * r) << r;
  }
  // Past the diameter the ball is everything.
  EXPECT_NEAR(ball_area(t, 0, 10.0), t.volume(), 1e-12);
}

TEST(Systoles, SurfaceDistancesAreExactOnFlatTori) {
  const auto t = flat_torus(catalog_lattice("Z2"), 16);
  const auto d = surface_distances(t, 0);
  double worst = 0.0;
  for (int v = 0; v < t.vertex_count(); ++v) {
    // Torus distance to the nearest lattice translate.
    const Eigen::Vector2d x = t.coordinates()[v];
    double best = 1e9;
    for (int i = -1; i <= 1; ++i)
      for (int j = -1; j <= 1; ++j) best = std::min(best, (x - Eigen::Vector2d(i, j)).norm());
    worst = std::max(worst, std::abs(d[v] - best) / std::max(best, 1e-12));
  }
  EXPECT_LT(worst, 0.03);
}
