#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "systolic/error.hpp"
#include "systolic/generators.hpp"
#include "systolic/homology.hpp"
#include "systolic/inequality.hpp"
#include "systolic/json_io.hpp"
#include "systolic/lattice.hpp"
#include "systolic/systoles.hpp"

using namespace systolic;

namespace {

const double kGamma2 = 2.0 / std::sqrt(3.0);

void expect_consistent(const InequalityReport& r) {
  EXPECT_NEAR(r.ratio, r.lhs / r.rhs, 1e-12 * r.ratio);
  EXPECT_EQ(r.pass, r.lhs <= r.rhs * (1 + r.tolerance));
}

}  // namespace

TEST(Inequalities, LoewnerHexagonalTorusIsTheEqualityCase) {
  const auto r = loewner_suite(catalog_lattice("A2"), 16);
  expect_consistent(r);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.ratio, 1.0, 1e-9);
  EXPECT_NEAR(r.systolic_ratio, kGamma2, 1e-9);
  const auto sq = loewner_suite(catalog_lattice("Z2"), 16);
  EXPECT_NEAR(sq.ratio, std::sqrt(3.0) / 2, 1e-9);
}

TEST(Inequalities, GromovFlatToriNeverExceedHermite) {
  const auto reports = gromov_suite(2, 200, 1);
  ASSERT_EQ(reports.size(), 200u);
  double best = 0.0;
  for (const auto& r : reports) {
    expect_consistent(r);
    EXPECT_TRUE(r.pass);
    EXPECT_LE(r.ratio, 1.0 + 1e-9);
    best = std::max(best, r.ratio);
  }
  // The sample reaches close to the hexagonal maximum.
  EXPECT_GE(best, 0.97);
  for (int d = 3; d <= 8; ++d)
    for (const auto& r : gromov_suite(d, 10, 2)) EXPECT_LE(r.ratio, 1.0 + 1e-9) << d;
}

TEST(Inequalities, CodimensionOneSystoleOfFlatTori) {
  // In the plane a codimension-one subtorus is a closed geodesic.
  for (const auto& b : random_lattices(2, 10, 4)) {
    EXPECT_NEAR(flat_torus_sys_codim1(b), shortest_vector(b).length, 1e-9 * shortest_vector(b).length);
  }
  EXPECT_NEAR(flat_torus_sys_codim1(catalog_lattice("Z3")), 1.0, 1e-12);
  const auto b = random_lattices(3, 1, 9)[0];
  EXPECT_NEAR(flat_torus_sys_codim1(b.scaled(2.0)), 4.0 * flat_torus_sys_codim1(b), 1e-9);
}

TEST(Inequalities, BergeMartinetHoldsWithEqualityOnA2) {
  const auto r = berge_martinet_check(catalog_lattice("A2"));
  EXPECT_NEAR(r.ratio, 1.0, 1e-9);
  for (const auto& x : berge_martinet_suite(20, 3)) {
    expect_consistent(x);
    EXPECT_TRUE(x.pass) << x.metric;
  }
}

TEST(Inequalities, PuRatioOnTheRoundProjectivePlane) {
  const auto r = pu_suite(5);
  expect_consistent(r);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.systolic_ratio, std::numbers::pi / 2, 0.02 * std::numbers::pi / 2);
}

TEST(Inequalities, BallInequalityOnTheSquareTorus) {
  const auto r = ball_tqi_suite(catalog_lattice("Z2"), 24);
  expect_consistent(r);
  EXPECT_TRUE(r.pass);
}

TEST(Inequalities, TwistedBundleEqualityCase) {
  const auto hex = corollary11_suite(0.1, catalog_lattice("A2"), 16);
  expect_consistent(hex);
  EXPECT_TRUE(hex.pass);
  EXPECT_GE(hex.ratio, 0.9);
  EXPECT_LE(hex.ratio, 1.0 + 1e-9);
  EXPECT_TRUE(hex.warnings.empty());
  const auto sq = corollary11_suite(0.1, catalog_lattice("Z2"), 16);
  EXPECT_NEAR(sq.ratio, std::sqrt(3.0) / 2, 0.05 * std::sqrt(3.0) / 2);
  // A fibre longer than the base systole leaves the equality regime.
  EXPECT_FALSE(corollary11_suite(2.0, catalog_lattice("A2"), 8).warnings.empty());
}

TEST(Inequalities, ProductWithProjectivePlaneMatchesFactorOracle) {
  const auto torus = catalog_lattice("A2").scaled(std::numbers::pi);
  Theorem12Options opt;
  const auto r = theorem12_suite(torus, opt);
  expect_consistent(r);
  // Oracle from the factors: stsys is the torus systole, the homotopy
  // systole is the shorter of the two factor systoles, volumes multiply.
  const auto rp = round_rp2(opt.rp2_level);
  const double rp_sys = phi_systole(rp, build_homology(rp).z2_class(0)).value;
  const double t_sys = shortest_vector(torus).length;
  const double vol = rp.volume() * covolume(torus);
  const double pisys = std::min(rp_sys, t_sys);
  EXPECT_NEAR(r.measurements.at("stsys"), t_sys, 1e-9 * t_sys);
  EXPECT_NEAR(r.measurements.at("pisys"), pisys, 1e-9 * pisys);
  EXPECT_NEAR(r.measurements.at("volume"), vol, 1e-9 * vol);
  // Smooth limit: pi / (2 sigma_2), within mesh error.
  EXPECT_NEAR(r.measurements.at("ratio_sigma_2_certified"), std::numbers::pi / 4, 0.05 * std::numbers::pi / 4);
  EXPECT_NEAR(r.measurements.at("ratio_sigma_2_conjectural"), 1.0, 0.05);
  EXPECT_TRUE(r.pass);
  opt.sigma2 = 3.0;
  EXPECT_THROW(theorem12_suite(torus, opt), InvalidInput);
  opt.sigma2 = 2.0;
  opt.max_simplices = 10;
  EXPECT_THROW(theorem12_suite(torus, opt), BudgetExceeded);
}

TEST(Inequalities, SuiteNamesRoundTrip) {
  for (auto id : {InequalityId::loewner, InequalityId::pu, InequalityId::gromov, InequalityId::corollary11,
                  InequalityId::theorem12, InequalityId::berge_martinet, InequalityId::ball_tqi}) {
    EXPECT_EQ(inequality_from_string(to_string(id)), id);
  }
  EXPECT_THROW(inequality_from_string("hyperbolic"), InvalidInput);
}

TEST(Inequalities, RunSuiteIsDeterministicAndWritesCsv) {
  const json cfg = {{"suite", "gromov"}, {"count", 25}, {"seed", 17}};
  const auto a = run_suite(cfg), b = run_suite(cfg);
  json ja = json::array(), jb = json::array();
  for (const auto& r : a) ja.push_back(to_json(r));
  for (const auto& r : b) jb.push_back(to_json(r));
  EXPECT_EQ(ja.dump(), jb.dump());
  EXPECT_NE(ja.dump(), [&] {
    json other = json::array();
    for (const auto& r : run_suite({{"suite", "gromov"}, {"count", 25}, {"seed", 18}})) other.push_back(to_json(r));
    return other.dump();
  }());

  const std::string csv = reports_csv(a);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "parameter,ratio");
  int rows = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 1);
    ++rows;
  }
  EXPECT_EQ(rows, 25);
  EXPECT_THROW(run_suite({{"suite", "hyperbolic"}}), InvalidInput);
  EXPECT_THROW(run_suite(json{{"seed", 1}}), InvalidInput);
}

TEST(Inequalities, ReportJsonCarriesTheVerdict) {
  const auto j = to_json(loewner_suite(catalog_lattice("A2"), 8));
  for (const char* key : {"inequality", "lhs", "rhs", "ratio", "tolerance", "pass", "metric"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["inequality"], "loewner");
}
