#include "systolic/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>

#include "systolic/error.hpp"

namespace systolic {
namespace {

constexpr double kIndependenceTolerance = 1e-10;
constexpr double kTieTolerance = 1e-9;

// Flip the sign so that the first nonzero coefficient is positive.
Eigen::VectorXi sign_normalized(Eigen::VectorXi c) {
  for (int i = 0; i < c.size(); ++i) {
    if (c[i] != 0) {
      if (c[i] < 0) c = -c;
      break;
    }
  }
  return c;
}

bool lex_less(const Eigen::VectorXi& a, const Eigen::VectorXi& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                      b.data() + b.size());
}

struct GramSchmidt {
  Eigen::MatrixXd mu;
  Eigen::VectorXd bsq;
};

GramSchmidt gram_schmidt(const Eigen::MatrixXd& b) {
  const int d = static_cast<int>(b.rows());
  GramSchmidt gs{Eigen::MatrixXd::Zero(d, d), Eigen::VectorXd::Zero(d)};
  Eigen::MatrixXd star = b;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < i; ++j) {
      gs.mu(i, j) = b.row(i).dot(star.row(j)) / gs.bsq[j];
      star.row(i) -= gs.mu(i, j) * star.row(j);
    }
    gs.bsq[i] = star.row(i).squaredNorm();
  }
  return gs;
}

// Depth-first Fincke-Pohst enumeration of all coefficient vectors (in the
// basis `b`) whose lattice vector has squared norm <= radius_sq.
std::vector<Eigen::VectorXi> fincke_pohst(const Eigen::MatrixXd& b,
                                          double radius_sq) {
  const int d = static_cast<int>(b.rows());
  const GramSchmidt gs = gram_schmidt(b);
  std::vector<Eigen::VectorXi> out;
  Eigen::VectorXi x = Eigen::VectorXi::Zero(d);

  std::function<void(int, double)> descend = [&](int k, double partial) {
    double center = 0.0;
    for (int j = k + 1; j < d; ++j) center -= x[j] * gs.mu(j, k);
    const double slack = radius_sq - partial;
    if (slack < 0.0) return;
    const double half = std::sqrt(slack / gs.bsq[k]);
    const long lo = static_cast<long>(std::ceil(center - half));
    const long hi = static_cast<long>(std::floor(center + half));
    for (long v = lo; v <= hi; ++v) {
      x[k] = static_cast<int>(v);
      const double diff = static_cast<double>(v) - center;
      const double next = partial + diff * diff * gs.bsq[k];
      if (next > radius_sq) continue;
      if (k == 0) {
        if (!x.isZero()) out.push_back(x);
      } else {
        descend(k - 1, next);
      }
    }
    x[k] = 0;
  };
  descend(d - 1, 0.0);
  return out;
}

}  // namespace

LatticeBasis::LatticeBasis(Eigen::MatrixXd rows) : rows_(std::move(rows)) {
  if (rows_.rows() < 1 || rows_.rows() != rows_.cols()) {
    throw InvalidInput("lattice basis must be a nonempty d x d matrix");
  }
  if (!rows_.allFinite()) throw InvalidInput("lattice basis has non-finite entries");
  // Condition number, not the Hadamard ratio: skewed but well-conditioned
  // bases (large unimodular transforms) must be accepted.
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(rows_).singularValues();
  if (!(sv[0] > 0.0) || sv[sv.size() - 1] <= kIndependenceTolerance * sv[0]) {
    throw SingularBasis();
  }
}

Eigen::VectorXd LatticeBasis::vector(const Eigen::VectorXi& c) const {
  return rows_.transpose() * c.cast<double>();
}

LatticeBasis LatticeBasis::scaled(double c) const { return LatticeBasis(rows_ * c); }

LatticeBasis LatticeBasis::transformed(const Eigen::MatrixXi& unimodular) const {
  return LatticeBasis(unimodular.cast<double>() * rows_);
}

LatticeBasis LatticeBasis::rotated(const Eigen::MatrixXd& r) const {
  return LatticeBasis(rows_ * r.transpose());
}

Eigen::MatrixXd gram_matrix(const LatticeBasis& basis) {
  const Eigen::MatrixXd& b = basis.rows();
  Eigen::MatrixXd g = b * b.transpose();
  return 0.5 * (g + g.transpose());
}

double covolume(const LatticeBasis& basis) {
  return std::abs(basis.rows().fullPivLu().determinant());
}

ReducedBasis lll_reduce(const LatticeBasis& basis, double delta) {
  const int d = basis.dimension();
  Eigen::MatrixXd b = basis.rows();
  Eigen::MatrixXi u = Eigen::MatrixXi::Identity(d, d);
  int k = 1;
  int guard = 0;
  while (k < d) {
    if (++guard > 100000) throw ConvergenceError("LLL did not terminate", 0.0);
    GramSchmidt gs = gram_schmidt(b);
    for (int j = k - 1; j >= 0; --j) {
      const double q = std::round(gs.mu(k, j));
      if (q != 0.0) {
        b.row(k) -= q * b.row(j);
        u.row(k) -= static_cast<int>(q) * u.row(j);
        gs = gram_schmidt(b);
      }
    }
    if (gs.bsq[k] >= (delta - gs.mu(k, k - 1) * gs.mu(k, k - 1)) * gs.bsq[k - 1]) {
      ++k;
    } else {
      b.row(k).swap(b.row(k - 1));
      u.row(k).swap(u.row(k - 1));
      k = std::max(k - 1, 1);
    }
  }
  return {b, u};
}

std::vector<Eigen::VectorXi> enumerate_short_vectors(const LatticeBasis& basis,
                                                     double radius) {
  if (basis.dimension() > kMaxSvpDimension) {
    throw BudgetExceeded("enumeration limited to dimension <= 12");
  }
  const ReducedBasis reduced = lll_reduce(basis);
  const double radius_sq = radius * radius * (1.0 + 1e-12);
  std::map<std::vector<int>, Eigen::VectorXi> unique;
  for (const Eigen::VectorXi& xr : fincke_pohst(reduced.rows, radius_sq)) {
    const Eigen::VectorXi c =
        sign_normalized(reduced.unimodular.transpose() * xr);
    unique.emplace(std::vector<int>(c.data(), c.data() + c.size()), c);
  }
  std::vector<Eigen::VectorXi> out;
  out.reserve(unique.size());
  for (auto& [key, c] : unique) out.push_back(c);
  return out;
}

ShortVectorResult shortest_vector(const LatticeBasis& basis) {
  if (basis.dimension() > kMaxSvpDimension) {
    throw BudgetExceeded("shortest_vector limited to dimension <= 12");
  }
  const ReducedBasis reduced = lll_reduce(basis);
  // The first reduced vector is a lattice vector, so the minimum lies
  // within its norm; the enumeration below is therefore exhaustive.
  const double r_sq = reduced.rows.row(0).squaredNorm() * (1.0 + 4 * kTieTolerance);
  const auto candidates = fincke_pohst(reduced.rows, r_sq);

  double best_sq = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, Eigen::VectorXi>> scored;
  scored.reserve(candidates.size());
  for (const auto& xr : candidates) {
    const Eigen::VectorXi c = sign_normalized(reduced.unimodular.transpose() * xr);
    const double len_sq = basis.vector(c).squaredNorm();
    best_sq = std::min(best_sq, len_sq);
    scored.emplace_back(len_sq, c);
  }
  if (scored.empty()) throw ConvergenceError("enumeration found no vector", 0.0);

  const Eigen::VectorXi* winner = nullptr;
  for (const auto& [len_sq, c] : scored) {
    if (len_sq > best_sq * (1.0 + 2 * kTieTolerance)) continue;
    if (winner == nullptr || lex_less(c, *winner)) winner = &c;
  }
  ShortVectorResult result;
  result.coefficients = *winner;
  result.vector = basis.vector(*winner);
  result.length = result.vector.norm();
  return result;
}

LatticeBasis dual_basis(const LatticeBasis& basis) {
  // Rows y_j with <x_i, y_j> = delta_ij: Y = B^{-T}.
  return LatticeBasis(basis.rows().inverse().transpose());
}

double hermite_ratio(const LatticeBasis& basis) {
  const double l1 = shortest_vector(basis).length;
  return std::pow(l1, basis.dimension()) / covolume(basis);
}

double berge_martinet_ratio(const LatticeBasis& basis) {
  return shortest_vector(basis).length * shortest_vector(dual_basis(basis)).length;
}

double hermite_constant(int n) {
  switch (n) {
    case 1: return 1.0;
    case 2: return 2.0 / std::sqrt(3.0);
    case 3: return std::cbrt(2.0);
    case 4: return std::sqrt(2.0);
    case 5: return std::pow(8.0, 1.0 / 5.0);
    case 6: return std::pow(64.0 / 3.0, 1.0 / 6.0);
    case 7: return std::pow(64.0, 1.0 / 7.0);
    case 8: return 2.0;
    default: throw InvalidInput("Hermite constant known only for n = 1..8");
  }
}

double hermite_ratio_bound(int n) {
  return std::pow(hermite_constant(n), 0.5 * n);
}

double berge_martinet_constant(int n) {
  switch (n) {
    case 1: return 1.0;
    case 2: return 2.0 / std::sqrt(3.0);
    case 3: return std::sqrt(1.5);
    case 4: return std::sqrt(2.0);
    default: throw InvalidInput("Berge-Martinet constant known only for n = 1..4");
  }
}

namespace {

// Basis realizing a given positive-definite Gram matrix (lower Cholesky
// factor rows).
LatticeBasis from_gram(const Eigen::MatrixXd& g) {
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success) throw SingularBasis("Gram matrix not positive definite");
  return LatticeBasis(Eigen::MatrixXd(llt.matrixL()));
}

// Cartan matrix of a simply-laced Dynkin diagram given by its edges.
Eigen::MatrixXd cartan(int n, const std::vector<std::pair<int, int>>& edges) {
  Eigen::MatrixXd c = 2.0 * Eigen::MatrixXd::Identity(n, n);
  for (auto [i, j] : edges) c(i, j) = c(j, i) = -1.0;
  return c;
}

LatticeBasis d_lattice(int n) {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    b(i, i) = 1.0;
    b(i, i + 1) = -1.0;
  }
  b(n - 1, n - 2) = 1.0;
  b(n - 1, n - 1) = 1.0;
  return LatticeBasis(b);
}

}  // namespace

LatticeBasis catalog_lattice(const std::string& name) {
  if (name.size() == 2 && name[0] == 'Z' && name[1] >= '1' && name[1] <= '8') {
    const int n = name[1] - '0';
    return LatticeBasis(Eigen::MatrixXd::Identity(n, n));
  }
  if (name == "A2") {
    Eigen::MatrixXd b(2, 2);
    b << 1.0, 0.0, 0.5, std::sqrt(3.0) / 2.0;
    return LatticeBasis(b);
  }
  if (name == "A3") return d_lattice(3);
  if (name == "D4") return d_lattice(4);
  if (name == "D5") return d_lattice(5);
  // E_n root lattices from their Cartan matrices (roots of norm sqrt 2).
  if (name == "E6") {
    return from_gram(cartan(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {2, 5}}));
  }
  if (name == "E7") {
    return from_gram(cartan(7, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {2, 6}}));
  }
  if (name == "E8") {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(8, 8);
    b(0, 0) = 2.0;
    for (int i = 1; i < 7; ++i) {
      b(i, i - 1) = -1.0;
      b(i, i) = 1.0;
    }
    b.row(7).setConstant(0.5);
    return LatticeBasis(b);
  }
  throw InvalidInput("unknown catalog lattice '" + name + "'");
}

std::vector<std::string> catalog_names() {
  return {"Z1", "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8",
          "A2", "A3", "D4", "D5", "E6", "E7", "E8"};
}

std::string critical_lattice_name(int n) {
  static const char* names[] = {"Z1", "A2", "A3", "D4", "D5", "E6", "E7", "E8"};
  if (n < 1 || n > 8) throw InvalidInput("critical lattices catalogued for n = 1..8");
  return names[n - 1];
}

}  // namespace systolic
