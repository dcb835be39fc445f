#include "systolic/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "systolic/error.hpp"
#include "systolic/generators.hpp"
#include "systolic/homology.hpp"
#include "systolic/systoles.hpp"

namespace systolic {

namespace {

constexpr std::pair<InequalityId, const char*> kNames[] = {
    {InequalityId::loewner, "loewner"},         {InequalityId::pu, "pu"},
    {InequalityId::gromov, "gromov"},           {InequalityId::corollary11, "corollary11"},
    {InequalityId::theorem12, "theorem12"},     {InequalityId::berge_martinet, "berge_martinet"},
    {InequalityId::ball_tqi, "ball_tqi"},
};

std::string describe(const LatticeBasis& b) {
  std::ostringstream os;
  os.precision(6);
  os << "[";
  for (int i = 0; i < b.dimension(); ++i) {
    os << (i ? ", [" : "[");
    for (int j = 0; j < b.rows().cols(); ++j) os << (j ? ", " : "") << b.rows()(i, j);
    os << "]";
  }
  os << "]";
  return os.str();
}

Eigen::MatrixXi random_unimodular(int d, std::mt19937_64& rng) {
  Eigen::MatrixXi u = Eigen::MatrixXi::Identity(d, d);
  std::uniform_int_distribution<int> pick(0, d - 1), k(-2, 2);
  for (int step = 0; step < 2 * d; ++step) {
    int i = pick(rng), j = pick(rng);
    if (i == j) continue;
    u.row(i) += k(rng) * u.row(j);
  }
  return u;
}

Eigen::MatrixXd random_rotation(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = g(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  return qr.householderQ();
}

}  // namespace

std::string to_string(InequalityId id) {
  for (const auto& [k, name] : kNames)
    if (k == id) return name;
  return "unknown";
}

InequalityId inequality_from_string(const std::string& name) {
  for (const auto& [k, n] : kNames)
    if (name == n) return k;
  throw InvalidInput("unknown suite '" + name + "'");
}

void InequalityReport::finalize() {
  ratio = rhs > 0.0 ? lhs / rhs : std::numeric_limits<double>::infinity();
  pass = lhs <= rhs * (1.0 + tolerance);
}

double flat_torus_sys_codim1(const LatticeBasis& basis) {
  if (basis.rows().rows() != basis.rows().cols()) throw InvalidInput("flat torus basis must be square");
  return covolume(basis) * shortest_vector(dual_basis(basis)).length;
}

std::vector<LatticeBasis> random_lattices(int dimension, int count, std::uint64_t seed) {
  if (dimension < 1 || dimension > 8) throw InvalidInput("lattice dimension must be in 1..8");
  if (count < 0) throw InvalidInput("count must be nonnegative");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss;
  std::vector<LatticeBasis> out;
  while (static_cast<int>(out.size()) < count) {
    Eigen::MatrixXd rows(dimension, dimension);
    if (dimension == 2) {
      // x stratified over [-1/2, 1/2]; even draws use the invariant measure
      // dx dy / y^2 cut at y = 2, odd draws sit on the arc |tau| = 1 where
      // the systolic ratio peaks for fixed x.
      const int i = static_cast<int>(out.size());
      const double x = (i + unit(rng)) / count - 0.5;
      const double lo = std::sqrt(1.0 - x * x);
      const double y = i % 2 ? lo : 1.0 / (0.5 + (1.0 / lo - 0.5) * unit(rng));
      rows << 1.0, 0.0, x, y;
    } else {
      for (int i = 0; i < dimension; ++i)
        for (int j = 0; j < dimension; ++j) rows(i, j) = gauss(rng);
      double prod = 1.0;
      for (int i = 0; i < dimension; ++i) prod *= rows.row(i).norm();
      if (std::abs(rows.determinant()) < 0.05 * prod) continue;
    }
    const double scale = 0.5 + 1.5 * unit(rng);
    Eigen::MatrixXd r = random_rotation(dimension, rng);
    Eigen::MatrixXi u = random_unimodular(dimension, rng);
    out.emplace_back(u.cast<double>() * rows * r.transpose() * scale);
  }
  return out;
}

InequalityReport loewner_suite(const LatticeBasis& basis, int resolution, double tolerance) {
  if (basis.dimension() != 2) throw InvalidInput("Loewner suite needs a 2D lattice");
  const auto mesh = flat_torus(basis, resolution);
  const auto h = build_homology(mesh);
  const double sys = homotopy_systole(mesh, h).value;
  const double area = mesh.volume();
  InequalityReport r;
  r.id = InequalityId::loewner;
  r.constants["gamma_2"] = hermite_constant(2);
  r.lhs = sys * sys;
  r.rhs = hermite_constant(2) * area;
  r.systolic_ratio = r.lhs / area;
  r.measurements = {{"sys", sys}, {"area", area}, {"resolution", resolution}};
  r.metric = "flat torus " + describe(basis) + " resolution " + std::to_string(resolution);
  r.tolerance = tolerance;
  r.finalize();
  return r;
}

InequalityReport pu_suite(int level, double tolerance) {
  const auto mesh = round_rp2(level);
  const auto h = build_homology(mesh);
  const double sys = homotopy_systole(mesh, h).value;
  const double area = mesh.volume();
  InequalityReport r;
  r.id = InequalityId::pu;
  r.constants["pu"] = std::numbers::pi / 2;
  r.lhs = sys * sys;
  r.rhs = std::numbers::pi / 2 * area;
  r.systolic_ratio = r.lhs / area;
  r.measurements = {{"sys", sys}, {"area", area}, {"level", level}};
  r.metric = "round projective plane level " + std::to_string(level);
  r.tolerance = tolerance;
  r.finalize();
  return r;
}

std::vector<InequalityReport> gromov_suite(int dimension, int count, std::uint64_t seed, double tolerance) {
  std::vector<InequalityReport> out;
  const double bound = hermite_ratio_bound(dimension);
  int index = 0;
  for (const auto& basis : random_lattices(dimension, count, seed)) {
    const double stsys = shortest_vector(basis).length;
    const double vol = covolume(basis);
    InequalityReport r;
    r.id = InequalityId::gromov;
    r.constants["gamma_" + std::to_string(dimension) + "^(d/2)"] = bound;
    r.lhs = std::pow(stsys, dimension);
    r.rhs = bound * vol;
    r.systolic_ratio = r.lhs / vol;
    r.measurements = {{"stsys", stsys}, {"volume", vol}};
    r.metric = "flat torus " + describe(basis);
    r.parameter = index++;
    r.tolerance = tolerance;
    r.finalize();
    out.push_back(std::move(r));
  }
  return out;
}

InequalityReport berge_martinet_check(const LatticeBasis& basis, double tolerance) {
  const int n = basis.dimension();
  const double lambda = shortest_vector(basis).length;
  const double codim1 = flat_torus_sys_codim1(basis);
  const double vol = covolume(basis);
  InequalityReport r;
  r.id = InequalityId::berge_martinet;
  r.constants["gamma_prime_" + std::to_string(n)] = berge_martinet_constant(n);
  r.lhs = lambda * codim1;
  r.rhs = berge_martinet_constant(n) * vol;
  r.systolic_ratio = r.lhs / vol;
  r.measurements = {{"stsys", lambda}, {"sys_codim1", codim1}, {"volume", vol}};
  r.metric = "flat torus " + describe(basis);
  r.tolerance = tolerance;
  r.finalize();
  return r;
}

std::vector<InequalityReport> berge_martinet_suite(int count, std::uint64_t seed, double tolerance) {
  std::vector<InequalityReport> out;
  for (const char* name : {"Z2", "A2", "Z3", "A3", "Z4", "D4"}) {
    auto r = berge_martinet_check(catalog_lattice(name), tolerance);
    r.metric = std::string(name) + " " + r.metric;
    out.push_back(std::move(r));
  }
  for (int d = 2; d <= 4; ++d) {
    int index = 0;
    for (const auto& b : random_lattices(d, count, seed + d)) {
      auto r = berge_martinet_check(b, tolerance);
      r.parameter = index++;
      out.push_back(std::move(r));
    }
  }
  return out;
}

InequalityReport ball_tqi_suite(const LatticeBasis& basis, int resolution, int centers, double tolerance) {
  if (basis.dimension() != 2) throw InvalidInput("ball suite needs a 2D lattice");
  if (centers < 1) throw InvalidInput("need at least one ball centre");
  const auto mesh = flat_torus(basis, resolution);
  const auto h = build_homology(mesh);
  const double sys = homotopy_systole(mesh, h).value;
  double best = 0.0;
  const int n = mesh.vertex_count();
  const int step = std::max(1, n / centers);
  for (int v = 0; v < n; v += step) best = std::max(best, ball_area(mesh, v, sys / 2));
  InequalityReport r;
  r.id = InequalityId::ball_tqi;
  r.constants["ball"] = 4.0 / 3.0;
  r.lhs = sys * sys;
  r.rhs = 4.0 / 3.0 * best;
  r.systolic_ratio = r.lhs / best;
  r.measurements = {{"sys", sys}, {"ball_area", best}, {"area", mesh.volume()}};
  r.metric = "flat torus " + describe(basis) + " resolution " + std::to_string(resolution);
  r.tolerance = tolerance;
  r.finalize();
  return r;
}

InequalityReport corollary11_suite(double fiber_length, const LatticeBasis& base, int resolution,
                                   double tolerance) {
  if (base.dimension() != 2) throw InvalidInput("bundle base must be a 2D lattice");
  if (!(fiber_length > 0.0)) throw InvalidInput("fibre length must be positive");
  const auto mesh = twisted_circle_bundle(base, resolution, fiber_length, 3);
  const auto h = build_homology(mesh);
  const int b = h.betti;
  const double pisys = homotopy_systole(mesh, h).value;
  StableNormSolver solver(mesh, h);
  const double stsys = stable_systole(solver, b).value;
  const double vol = mesh.volume();
  InequalityReport r;
  r.id = InequalityId::corollary11;
  r.constants["gamma_b^(b/2)"] = hermite_ratio_bound(b);
  r.lhs = std::pow(stsys, b) * pisys;
  r.rhs = hermite_ratio_bound(b) * vol;
  r.systolic_ratio = r.lhs / vol;
  r.measurements = {{"stsys", stsys}, {"pisys", pisys}, {"volume", vol}, {"betti", b}};
  r.metric = "twisted circle bundle, fibre " + std::to_string(fiber_length) + ", base " + describe(base) +
             " resolution " + std::to_string(resolution);
  r.parameter = fiber_length;
  if (std::abs(pisys - fiber_length) > 1e-9 * fiber_length)
    r.warnings.push_back("fibre is not the shortest noncontractible loop; the equality case does not apply");
  r.tolerance = tolerance;
  r.finalize();
  return r;
}

InequalityReport theorem12_suite(const LatticeBasis& torus, const Theorem12Options& options, double tolerance) {
  if (torus.dimension() != 2) throw InvalidInput("torus factor must be a 2D lattice");
  const double sigma2 = options.sigma2;
  if (!(std::abs(sigma2 - 2.0) < 1e-12 || std::abs(sigma2 - std::numbers::pi / 2) < 1e-12))
    throw InvalidInput("sigma_2 must be 2 (certified) or pi/2 (conjectural)");
  const auto rp2 = round_rp2(options.rp2_level);
  const auto t2 = flat_torus(torus, options.torus_resolution);
  const std::int64_t cells = static_cast<std::int64_t>(rp2.simplices().size()) *
                             static_cast<std::int64_t>(t2.simplices().size()) * 6;
  if (cells > options.max_simplices)
    throw BudgetExceeded("product mesh would have " + std::to_string(cells) + " simplices");
  const auto mesh = product_complex(rp2, t2);
  const auto h = build_homology(mesh);
  const double pisys = homotopy_systole(mesh, h).value;
  StableNormSolver solver(mesh, h);
  const double stsys = stable_systole(solver, h.betti).value;
  const double vol = mesh.volume();
  const double gamma2 = hermite_constant(2);

  InequalityReport r;
  r.id = InequalityId::theorem12;
  r.lhs = stsys * stsys * pisys * pisys;
  r.rhs = sigma2 * gamma2 * vol;
  r.systolic_ratio = r.lhs / vol;
  r.constants = {{"gamma_2", gamma2},
                 {"sigma_2", sigma2},
                 {"sigma_2_certified", 2.0},
                 {"sigma_2_conjectural", std::numbers::pi / 2}};
  r.measurements = {{"stsys", stsys},
                    {"pisys", pisys},
                    {"volume", vol},
                    {"ratio_sigma_2_certified", r.lhs / (2.0 * gamma2 * vol)},
                    {"ratio_sigma_2_conjectural", r.lhs / (std::numbers::pi / 2 * gamma2 * vol)}};
  r.metric = "round projective plane level " + std::to_string(options.rp2_level) + " x flat torus " +
             describe(torus) + " resolution " + std::to_string(options.torus_resolution);
  r.tolerance = tolerance;
  r.finalize();
  return r;
}

}  // namespace systolic
