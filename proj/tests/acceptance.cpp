// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Thresholds and runtime budgets are the published ones;
// nothing here is tuned to the implementation.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "systolic/convex.hpp"
#include "systolic/cover.hpp"
#include "systolic/error.hpp"
#include "systolic/filling.hpp"
#include "systolic/generators.hpp"
#include "systolic/homology.hpp"
#include "systolic/inequality.hpp"
#include "systolic/jacobi.hpp"
#include "systolic/lattice.hpp"
#include "systolic/systoles.hpp"

using namespace systolic;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[violated: " << what << "] ";
    }
  }
};

struct Criterion {
  int number;
  const char* name;
  double budget_seconds;
  std::function<void(Verdict&)> run;
};

bool near_rel(double x, double target, double rel) { return std::abs(x - target) <= rel * std::abs(target); }

RankOneDecomposition john_terms(const WeightedComplex& c, const HomologyModel& h) {
  const auto body = stable_unit_ball(c, h);
  return decompose_rank_one(body, john_inscribed(body));
}

void check_hermite_equality(Verdict& v) {
  const std::pair<const char*, double> cases[] = {{"A2", 2.0 / std::sqrt(3.0)}, {"D4", 2.0}, {"E8", 16.0}};
  for (const auto& [name, target] : cases) {
    const auto t0 = std::chrono::steady_clock::now();
    const double r = hermite_ratio(catalog_lattice(name));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    v.detail << name << "=" << r << " ";
    v.check(std::abs(r - target) <= 1e-9, std::string(name) + " ratio");
    v.check(secs < 1.0, std::string(name) + " runtime");
  }
}

void check_svp_oracle(Verdict& v) {
  std::mt19937_64 rng(42);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int d = 2 + k % 4;
    const Eigen::MatrixXd b = oracle::random_basis(d, rng);
    const double fast = shortest_vector(LatticeBasis(b)).length;
    const double slow = oracle::brute_force_lambda1(b);
    worst = std::max(worst, std::abs(fast - slow));
  }
  v.detail << "100 lattices d=2..5, max |diff|=" << worst;
  v.check(worst <= 1e-9, "lambda_1 mismatch");
}

void check_decomposition_invariants(Verdict& v) {
  std::mt19937_64 rng(7);
  double sum_err = 0.0, residual = 0.0, dual_err = 0.0;
  int worst_terms = 0;
  for (int k = 0; k < 50; ++k) {
    const int d = 1 + k % 4;
    const auto body = oracle::random_body(d, rng);
    const auto e = john_inscribed(body);
    const auto dec = decompose_rank_one(body, e);
    sum_err = std::max(sum_err, std::abs(dec.lambda_sum() - d));
    residual = std::max(residual, (dec.reconstruct() - e.q).norm() / e.q.norm());
    const int n = static_cast<int>(dec.terms.size());
    v.check(n <= max_rank_one_terms(d), "term count");
    worst_terms = std::max(worst_terms, n - max_rank_one_terms(d));
    for (const auto& t : dec.terms) dual_err = std::max(dual_err, std::abs(oracle::vertex_dual_norm(body, t.functional) - 1.0));
  }
  v.detail << "50 bodies d=1..4, |sum-d|=" << sum_err << " residual=" << residual << " |dual-1|=" << dual_err
           << " max N-bound=" << worst_terms;
  v.check(sum_err <= 1e-8, "lambda sum");
  v.check(residual <= 1e-6, "reconstruction");
  v.check(dual_err <= 1e-6, "dual norm");
}

void check_loewner(Verdict& v) {
  const auto r = loewner_suite(catalog_lattice("A2"), 32);
  const double target = 2.0 / std::sqrt(3.0);
  v.detail << "hex res 32 sys^2/area=" << r.systolic_ratio;
  v.check(near_rel(r.systolic_ratio, target, 0.02), "hexagonal ratio");
  double worst = 0.0;
  for (const auto& g : gromov_suite(2, 200, 1)) worst = std::max(worst, g.systolic_ratio);
  v.detail << ", 200 random tori max=" << worst;
  v.check(worst <= target * 1.02, "random torus above bound");
}

void check_pu(Verdict& v) {
  const auto r = pu_suite(5);
  v.detail << "RP2 level 5 sys^2/area=" << r.systolic_ratio << " (pi/2=" << std::numbers::pi / 2 << ")";
  v.check(near_rel(r.systolic_ratio, std::numbers::pi / 2, 0.02), "Pu ratio");
}

void check_jacobi(Verdict& v) {
  const std::vector<std::pair<std::string, WeightedComplex>> spaces = {
      {"hex torus", flat_torus(catalog_lattice("A2"), 16)},
      {"square torus", flat_torus(catalog_lattice("Z2"), 16)},
      {"bundle over hex", twisted_circle_bundle(catalog_lattice("A2"), 8, 0.1, 3)},
      {"bundle over square", twisted_circle_bundle(catalog_lattice("Z2"), 8, 0.1, 3)},
  };
  double jac = 0.0, trace_excess = -1e9, margin = -1e9, equiv = 0.0;
  for (const auto& [name, c] : spaces) {
    const auto h = build_homology(c);
    JacobiOptions opt;
    opt.certify = false;  // judged here, not by the builder
    const auto map = build_jacobi_map(c, h, john_terms(c, h), opt);
    const auto cert = jacobian_certificate(map);
    jac = std::max({jac, cert.max_jacobian, cert.max_face_jacobian});
    trace_excess = std::max({trace_excess, cert.max_trace - h.betti, cert.max_face_trace - h.betti});
    margin = std::max(margin, cert.max_lipschitz_margin);
    equiv = std::max(equiv, cert.max_equivariance_residual);
    // Distance-function fields on the same space: 1-Lipschitz and exactly
    // equivariant on the cover window.
    const auto body = stable_unit_ball(c, h, UnitBallMethod::graph);
    CoverWindow window(c, h, Eigen::VectorXi::Constant(h.betti, 3));
    for (const auto& w : body.facets()) {
      const auto m = mcshane_extend(window, h, 0, w);
      margin = std::max(margin, m.field.lipschitz_margin);
      equiv = std::max(equiv, m.field.equivariance_residual);
    }
  }
  v.detail << "max Jacobian=" << jac << " max trace-b=" << trace_excess << " Lipschitz margin=" << margin
           << " equivariance=" << equiv;
  v.check(jac <= 1.0 + 1e-6, "Jacobian");
  v.check(trace_excess <= 1e-6, "trace");
  v.check(margin <= 1e-9, "Lipschitz margin");
  v.check(equiv <= 1e-12, "equivariance");
}

void check_bundle_equality(Verdict& v) {
  const auto hex = corollary11_suite(0.1, catalog_lattice("A2"), 16);
  const auto sq = corollary11_suite(0.1, catalog_lattice("Z2"), 16);
  v.detail << "hex ratio=" << hex.ratio << " square ratio=" << sq.ratio << " (sqrt3/2=" << std::sqrt(3.0) / 2 << ")";
  v.check(hex.ratio >= 0.9 && hex.ratio <= 1.0 + 1e-9, "hexagonal ratio outside [0.9, 1]");
  v.check(near_rel(sq.ratio, std::sqrt(3.0) / 2, 0.05), "square ratio");
}

void check_coarea(Verdict& v) {
  const std::vector<std::pair<std::string, WeightedComplex>> spaces = {
      {"bundle", twisted_circle_bundle(catalog_lattice("A2"), 8, 0.1, 3)},
      {"circle x torus", product_complex(circle_graph(5, 1.3), flat_torus(catalog_lattice("A2"), 5))},
      {"RP2 x torus", product_complex(round_rp2(2), flat_torus(catalog_lattice("Z2"), 6))},
  };
  for (const auto& [name, c] : spaces) {
    const auto map = build_jacobi_map(c, build_homology(c), john_terms(c, build_homology(c)));
    const auto r = coarea_audit(map, 60, 3);
    v.detail << name << " slack=" << r.slack << " ";
    v.check(r.slack >= -0.03, name + " coarea inequality");
    v.check(std::abs(r.slack) <= 0.03, name + " product equality");
  }
}

void check_diamond(Verdict& v) {
  const double target = std::numbers::pi * std::numbers::pi / 2;
  const auto hemi = diamond_certificate(filling_from_boundary(round_hemisphere(5)));
  const auto rp = round_rp2(5);
  const auto h = build_homology(rp);
  const auto opened = diamond_certificate(open_along_loop(rp, phi_systole(rp, h.z2_class(0)).witness));
  v.detail << "hemisphere bound=" << hemi.certified_lower_bound << " RP2 bound=" << opened.certified_lower_bound
           << " (pi^2/2=" << target << ") RP2 ratio=" << opened.measured_ratio;
  v.check(hemi.pass && hemi.certified_lower_bound >= target * 0.97, "hemisphere certificate");
  v.check(opened.pass && opened.certified_lower_bound >= target * 0.97, "RP2 certificate");
  v.check(near_rel(opened.measured_ratio, std::numbers::pi / 2, 0.02), "RP2 ratio");
  bool rejected = false;
  try {
    diamond_certificate(filling_from_boundary(flat_disk(10)));
  } catch (const CertificationError&) {
    rejected = true;
  }
  v.detail << " disk " << (rejected ? "rejected" : "accepted");
  v.check(rejected, "flat disk accepted");
}

void check_stable_norm(Verdict& v) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> coef(-2, 2);
  double oracle_err = 0.0;
  for (int g = 0; g < 25; ++g) {
    const int n = 4 + g % 3;
    const int edges = std::min(8, n * (n - 1) / 2);
    const auto graph = oracle::random_graph(rng, n, edges - (n - 1));
    const auto h = build_homology(graph);
    StableNormSolver solver(graph, h);
    for (int k = 0; k < 6; ++k) {
      Eigen::VectorXi cls(h.betti);
      for (int i = 0; i < h.betti; ++i) cls[i] = coef(rng);
      const double o = oracle::graph_cycle_mass(graph, h, cls);
      oracle_err = std::max(oracle_err, std::abs(solver.norm(cls) - o));
    }
  }
  double homog = 0.0, triangle = -1e9;
  std::uniform_int_distribution<int> wide(-4, 4);
  const std::vector<WeightedComplex> spaces = {perturbed_lengths(flat_torus(catalog_lattice("A2"), 6), 0.25, 1),
                                               twisted_circle_bundle(catalog_lattice("Z2"), 5, 0.3, 3)};
  for (const auto& c : spaces) {
    const auto h = build_homology(c);
    StableNormSolver solver(c, h);
    for (int k = 0; k < 20; ++k) {
      Eigen::VectorXi a(h.betti), b(h.betti);
      for (int i = 0; i < h.betti; ++i) {
        a[i] = wide(rng);
        b[i] = wide(rng);
      }
      const double na = solver.norm(a), nb = solver.norm(b);
      const int t = 2 + k % 3;
      homog = std::max(homog, std::abs(solver.norm(Eigen::VectorXi(t * a)) - t * na));
      triangle = std::max(triangle, solver.norm(Eigen::VectorXi(a + b)) - na - nb);
    }
  }
  v.detail << "graph oracle max err=" << oracle_err << " homogeneity=" << homog << " triangle excess=" << triangle;
  v.check(oracle_err <= 1e-8, "graph oracle");
  v.check(homog <= 1e-6, "homogeneity");
  v.check(triangle <= 1e-6, "triangle inequality");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "Hermite equality cases", 3.0, check_hermite_equality},
      {2, "shortest vector vs brute force", 30.0, check_svp_oracle},
      {3, "rank-one decomposition invariants", 60.0, check_decomposition_invariants},
      {4, "Loewner equality and random flat tori", 120.0, check_loewner},
      {5, "Pu equality on the round projective plane", 60.0, check_pu},
      {6, "Jacobi map certification", 120.0, check_jacobi},
      {7, "circle bundle equality trend", 180.0, check_bundle_equality},
      {8, "coarea audit on products", 120.0, check_coarea},
      {9, "diamond filling sandwich", 120.0, check_diamond},
      {10, "stable norm properties", 60.0, check_stable_norm},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(v);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << "[exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_seconds) {
      v.pass = false;
      v.detail << " [over runtime budget]";
    }
    std::printf("%s %2d %s: %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", c.number, c.name, v.detail.str().c_str(), secs);
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
