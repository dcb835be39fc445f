#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "systolic/lattice.hpp"

namespace systolic {

enum class InequalityId { loewner, pu, gromov, corollary11, theorem12, berge_martinet, ball_tqi };
std::string to_string(InequalityId id);
/// Throws InvalidInput("unknown suite ...").
InequalityId inequality_from_string(const std::string& name);

// One checked instance: lhs <= rhs. `ratio` is lhs / rhs; `systolic_ratio`
// is lhs over the bare volume term (the constant left out), which is what
// equality cases are usually quoted in.
struct InequalityReport {
  InequalityId id = InequalityId::loewner;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double systolic_ratio = 0.0;
  /// Relative slack allowed in the pass test.
  double tolerance = 0.0;
  std::map<std::string, double> constants;
  std::map<std::string, double> measurements;
  std::string metric;
  /// Family parameter for plot output.
  double parameter = 0.0;
  std::vector<std::string> warnings;
  bool pass = false;

  /// Sets ratio and pass = lhs <= rhs * (1 + tolerance).
  void finalize();
};

/// covol(L) * lambda_1(L*): least (n-1)-volume of a closed codimension-one
/// subtorus of R^n / L.
double flat_torus_sys_codim1(const LatticeBasis& basis);

/// 2D: shapes in the modular fundamental domain, half from the hyperbolic
/// measure (cut at height 2), half on the unit arc or Gaussian
/// bases (d > 2), each rescaled, rotated and hit with a random unimodular
/// change of basis. Deterministic in the seed.
std::vector<LatticeBasis> random_lattices(int dimension, int count, std::uint64_t seed);

/// sys^2 <= gamma_2 area on a flat torus mesh.
InequalityReport loewner_suite(const LatticeBasis& basis, int resolution, double tolerance = 0.02);
/// sys^2 <= (pi/2) area on the round projective plane mesh.
InequalityReport pu_suite(int level, double tolerance = 0.02);
/// stsys^d <= gamma_d^{d/2} vol on flat d-tori, closed form.
std::vector<InequalityReport> gromov_suite(int dimension, int count, std::uint64_t seed,
                                           double tolerance = 0.02);
/// lambda_1(L) * sys_{n-1} <= gamma'_n vol on flat tori, closed form.
InequalityReport berge_martinet_check(const LatticeBasis& basis, double tolerance = 1e-9);
/// Catalog lattices of dimension 2..4 plus random ones.
std::vector<InequalityReport> berge_martinet_suite(int count, std::uint64_t seed,
                                                   double tolerance = 1e-9);
/// sys^2 <= (4/3) area(B(p, sys/2)) for the best of up to `centers` vertices.
InequalityReport ball_tqi_suite(const LatticeBasis& basis, int resolution, int centers = 16,
                                double tolerance = 0.03);
/// stsys^b * pisys <= gamma_b^{b/2} vol on the twisted circle bundle.
InequalityReport corollary11_suite(double fiber_length, const LatticeBasis& base, int resolution,
                                   double tolerance = 0.02);

struct Theorem12Options {
  int rp2_level = 2;
  int torus_resolution = 6;
  /// sigma_2 used for the pass test: 2 (certified) or pi/2 (conjectural).
  double sigma2 = 2.0;
  std::int64_t max_simplices = 400'000;
};
/// stsys^2 * pisys^2 <= sigma_2 gamma_2 vol_4 on the product mesh
/// RP^2 x T^2. Both sigma_2 ratios are reported; pass uses options.sigma2.
InequalityReport theorem12_suite(const LatticeBasis& torus, const Theorem12Options& options = {},
                                 double tolerance = 0.02);

}  // namespace systolic
