#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "systolic/complex.hpp"
#include "systolic/convex.hpp"
#include "systolic/cover.hpp"
#include "systolic/homology.hpp"

namespace systolic {

// Twisted discrete-harmonic representatives: for a class w in H^1(.; R) the
// PL function g minimising sum_s vol(s) |grad(g + <w, c>)|^2 with c the
// integer cocycle. Linear in w, so one factorisation serves every class.
// comass(w) = max gradient norm over top simplices. It is a norm dual to a
// lower bound of the stable norm, and exact on flat and product meshes.
class HarmonicFields {
 public:
  HarmonicFields(const WeightedComplex& complex, const HomologyModel& homology);

  int betti() const { return betti_; }
  /// Vertex values of the representative of w, pinned to 0 at vertex 0.
  std::vector<double> field(const Eigen::VectorXd& w) const;
  double comass(const Eigen::VectorXd& w) const;
  /// Per top simplex, H_s with |grad|^2 = w^T H_s w.
  const std::vector<Eigen::MatrixXd>& gradient_forms() const { return forms_; }

 private:
  int betti_;
  Eigen::MatrixXd basis_;  // vertices x b
  std::vector<Eigen::MatrixXd> forms_;
};

enum class UnitBallMethod { harmonic, graph };

/// Polyhedral stable-norm unit ball on H_1(.; R) = R^b in facet form, one
/// supporting functional per primitive class h with |h|_inf <= box.
/// harmonic: w = h / comass(h). graph: the LP-optimal dual of the graph
/// stable norm at h. Either way the body contains the true unit ball and
/// touches it along the sampled directions.
SymmetricBody stable_unit_ball(const WeightedComplex& complex, const HomologyModel& homology,
                               UnitBallMethod method = UnitBallMethod::harmonic, int box = 3);

/// Equivariant PL function: value at lifted vertex (v, k) is
/// base_values[v] + <slope, k>.
struct LipschitzField {
  std::vector<double> base_values;
  Eigen::VectorXd slope;
  /// max over edges of |delta f| - length.
  double lipschitz_margin = 0.0;
  /// max |f(x + v) - f(x) - <slope, v>| over checked pairs.
  double equivariance_residual = 0.0;

  double value(int v, const Eigen::VectorXi& deck) const {
    return base_values[v] + slope.dot(deck.cast<double>());
  }
};

/// McShane extension over a cover window: f(x) = min_k <L, k> + d(x, x0 + k)
/// over the orbit of x0 inside the window. Certifies 1-Lipschitz on every
/// window edge and equivariance between cells of the core box
/// |k|_inf <= core.
struct McShaneResult {
  LipschitzField field;
  /// Values on all window vertices.
  std::vector<double> window_values;
  int core = 0;
};
McShaneResult mcshane_extend(const CoverWindow& window, const HomologyModel& homology,
                             int base_vertex, const Eigen::VectorXd& slope, int core = 1);

enum class FieldMethod { harmonic, mcshane };

struct JacobiMap {
  WeightedComplex complex;
  Eigen::MatrixXi cocycle;
  int betti = 0;
  RankOneDecomposition decomposition;
  Eigen::MatrixXd q;
  std::vector<LipschitzField> fields;
  /// Vertex images in R^b; they descend to R^b / Z^b.
  std::vector<Eigen::VectorXd> images;

  /// Columns: image(s[j]) - image(s[0]) lifted across the simplex, j >= 1.
  Eigen::MatrixXd simplex_differences(const std::vector<int>& simplex) const;
};

struct JacobiOptions {
  FieldMethod method = FieldMethod::harmonic;
  bool certify = true;
  int window_radius = 3;
};

/// F = (sqrt(lambda_i) f_i) projected onto L(V) and pulled back by L, i.e.
/// image(x) = Q^{-1} sum lambda_i L_i f_i(x). Identity on H_1 by
/// construction. With certify, throws if any trace exceeds b.
JacobiMap build_jacobi_map(const WeightedComplex& complex, const HomologyModel& homology,
                           const RankOneDecomposition& decomposition,
                           const JacobiOptions& options = {});

struct JacobianCertificate {
  /// Per top simplex: trace of A*A, coarea Jacobian, bound (trace/b)^{b/2}.
  std::vector<double> trace, jacobian, amgm_bound;
  /// Per b-dimensional face.
  std::vector<double> face_trace, face_jacobian;
  double max_trace = 0.0, max_jacobian = 0.0;
  double max_face_trace = 0.0, max_face_jacobian = 0.0;
  /// max of J - (trace/b)^{b/2}; <= 0 up to rounding.
  double max_amgm_violation = 0.0;
  int worst_simplex = -1;
  int betti = 0;
  bool trace_ok = false;
  bool jacobian_ok = false;
  double max_lipschitz_margin = 0.0;
  double max_equivariance_residual = 0.0;
};
JacobianCertificate jacobian_certificate(const JacobiMap& map);

struct FiberMeasure {
  int dimension = 0;
  /// (n - b)-volume for curve and surface fibres; 0 for point fibres.
  double volume = 0.0;
  /// Points for point fibres, simplex pieces otherwise.
  int pieces = 0;

  /// Counting measure for point fibres, volume otherwise.
  double measure() const { return dimension == 0 ? pieces : volume; }
};
/// Level set over p in R^b / Z^b traced simplex by simplex (fibre dimension
/// 0, 1 or 2). Throws if p lies within 1e-9 of a vertex image.
FiberMeasure fiber_extract(const JacobiMap& map, const Eigen::VectorXd& p);

struct CoareaReport {
  double volume = 0.0;
  double image_volume = 0.0;
  double min_fiber = 0.0;
  double mean_fiber = 0.0;
  double max_fiber = 0.0;
  int regular_samples = 0;
  int rejected_samples = 0;
  /// (volume - min_fiber * image_volume) / volume.
  double slack = 0.0;
  bool pass = false;
};
CoareaReport coarea_audit(const JacobiMap& map, int samples, std::uint64_t seed = 1,
                          double tolerance = 0.03);

}  // namespace systolic
