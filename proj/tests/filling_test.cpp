#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "systolic/error.hpp"
#include "systolic/filling.hpp"
#include "systolic/generators.hpp"
#include "systolic/homology.hpp"
#include "systolic/lattice.hpp"
#include "systolic/systoles.hpp"

using namespace systolic;

namespace {

FillingSurface opened_rp2(int level) {
  const auto s = round_rp2(level);
  const auto h = build_homology(s);
  return open_along_loop(s, phi_systole(s, h.z2_class(0)).witness);
}

}  // namespace

TEST(Filling, HemisphereMeetsTheDiamondBound) {
  const auto f = filling_from_boundary(round_hemisphere(4));
  EXPECT_NEAR(f.perimeter, 2 * std::numbers::pi, 0.01 * 2 * std::numbers::pi);
  EXPECT_GE(f.embedding_margin, -0.02 * f.perimeter);
  const auto r = diamond_certificate(f);
  EXPECT_TRUE(r.pass) << r.certified_lower_bound << " vs " << r.target;
  EXPECT_NEAR(r.separation, f.perimeter / 4, r.separation_error + 1e-12);
  // The certificate is a lower bound for the real area.
  EXPECT_LE(r.certified_lower_bound, r.filling_area * (1 + 1e-9));
  EXPECT_LE(r.max_lipschitz_excess, 1e-9);
  EXPECT_LE(r.max_jacobian, 1.0 + 1e-9);
}

TEST(Filling, OpenedProjectivePlaneHasDoubledPerimeter) {
  const auto s = round_rp2(4);
  const auto h = build_homology(s);
  const auto w = phi_systole(s, h.z2_class(0));
  const auto f = open_along_loop(s, w.witness);
  EXPECT_NEAR(f.perimeter, 2 * w.value, 1e-12);
  EXPECT_NEAR(f.complex.volume(), s.volume(), 1e-10);
  EXPECT_EQ(f.complex.vertex_count(), s.vertex_count() + static_cast<int>(w.witness.size()) - 1);
  EXPECT_EQ(f.arc.size(), f.boundary.size());
  EXPECT_DOUBLE_EQ(f.arc.front(), 0.0);
}

TEST(Filling, ProjectivePlaneRatioApproachesHalfPi) {
  const auto r = diamond_certificate(opened_rp2(5));
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.measured_ratio, std::numbers::pi / 2, 0.02 * std::numbers::pi / 2);
  EXPECT_GE(r.ratio_bound, r.measured_ratio * (1 - 1e-9));
}

TEST(Filling, FlatDiskIsNotAnIsometricFilling) {
  const auto f = filling_from_boundary(flat_disk(10));
  EXPECT_LT(f.embedding_margin, -0.02 * f.perimeter);
  EXPECT_THROW(diamond_certificate(f), CertificationError);
}

TEST(Filling, MoebiusCoreOpensIntoADoubleLengthCircle) {
  const auto m = flat_moebius(12, 4, 1.0, 0.4);
  const auto h = build_homology(m);
  const auto w = phi_systole(m, h.integer_class_mod2(0));
  EXPECT_NEAR(w.value, 1.0, 1e-12);
  const auto f = open_along_loop(m, w.witness);
  EXPECT_NEAR(f.perimeter, 2.0, 1e-12);
}

TEST(Filling, RejectsTwoSidedAndNonSimpleLoops) {
  const auto t = flat_torus(catalog_lattice("A2"), 6);
  const auto h = build_homology(t);
  EXPECT_THROW(open_along_loop(t, homotopy_systole(t, h).witness), TopologyError);

  // Figure eight through the root.
  std::vector<int> eight = h.generator_loops[0];
  eight.insert(eight.end(), h.generator_loops[1].begin() + 1, h.generator_loops[1].end());
  EXPECT_THROW(open_along_loop(t, eight), InvalidInput);
  EXPECT_THROW(filling_from_boundary(round_sphere(2)), TopologyError);
}

TEST(Filling, CertificateScalesQuadratically) {
  const auto base = round_hemisphere(4);
  const auto r1 = diamond_certificate(filling_from_boundary(base));
  for (double c : {2.0, 3.0}) {
    const auto rc = diamond_certificate(filling_from_boundary(base.scaled(c)));
    EXPECT_NEAR(rc.certified_lower_bound, c * c * r1.certified_lower_bound, 1e-6 * c * c * r1.certified_lower_bound);
    EXPECT_NEAR(rc.filling_area, c * c * r1.filling_area, 1e-9 * c * c * r1.filling_area);
    EXPECT_NEAR(rc.measured_ratio, r1.measured_ratio, 1e-9);
  }
}
