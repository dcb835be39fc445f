#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace systolic {

/// Full-rank Euclidean lattice given by a row-major basis.
///
/// Construction validates linear independence: the Gram determinant must
/// exceed 1e-12 times the product of squared row norms.
class LatticeBasis {
 public:
  explicit LatticeBasis(Eigen::MatrixXd rows);

  int dimension() const { return static_cast<int>(rows_.rows()); }
  const Eigen::MatrixXd& rows() const { return rows_; }

  /// Coordinates of the lattice vector with integer coefficients `c`.
  Eigen::VectorXd vector(const Eigen::VectorXi& c) const;

  LatticeBasis scaled(double c) const;
  /// Basis of the same lattice after a unimodular change `u * rows`.
  LatticeBasis transformed(const Eigen::MatrixXi& unimodular) const;
  /// Same lattice rotated by the orthogonal matrix `r` (x -> r x).
  LatticeBasis rotated(const Eigen::MatrixXd& r) const;

 private:
  Eigen::MatrixXd rows_;
};

struct ShortVectorResult {
  Eigen::VectorXi coefficients;
  Eigen::VectorXd vector;
  double length = 0.0;
};

inline constexpr int kMaxSvpDimension = 12;

Eigen::MatrixXd gram_matrix(const LatticeBasis& basis);
double covolume(const LatticeBasis& basis);

/// LLL reduction (delta = 0.99). Returns the reduced basis and the
/// unimodular `u` with reduced = u * original.
struct ReducedBasis {
  Eigen::MatrixXd rows;
  Eigen::MatrixXi unimodular;
};
ReducedBasis lll_reduce(const LatticeBasis& basis, double delta = 0.99);

/// Exact lambda_1 by LLL preprocessing and Fincke-Pohst enumeration with
/// radius |b_1| of the reduced basis. Among vectors of equal length
/// (1e-9 relative) the sign-normalized, lexicographically smallest
/// coefficient vector wins.
ShortVectorResult shortest_vector(const LatticeBasis& basis);

/// All nonzero lattice vectors with norm <= radius, one per +/- pair,
/// coefficients in the input basis.
std::vector<Eigen::VectorXi> enumerate_short_vectors(const LatticeBasis& basis,
                                                     double radius);

LatticeBasis dual_basis(const LatticeBasis& basis);
double hermite_ratio(const LatticeBasis& basis);
double berge_martinet_ratio(const LatticeBasis& basis);

/// gamma_n for n = 1..8 (critical lattices are known in these dimensions).
double hermite_constant(int n);
/// gamma_n^{n/2}: the supremum of hermite_ratio in dimension n.
double hermite_ratio_bound(int n);
/// Berge-Martinet constant gamma'_n, known for n = 1..4.
double berge_martinet_constant(int n);

/// Named lattices: "Z1".."Z8", "A2", "A3", "D4", "D5", "E6", "E7", "E8".
LatticeBasis catalog_lattice(const std::string& name);
std::vector<std::string> catalog_names();
/// Name of the catalog's critical lattice in dimension n (1 <= n <= 8).
std::string critical_lattice_name(int n);

}  // namespace systolic
