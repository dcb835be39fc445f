#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "systolic/complex.hpp"
#include "systolic/homology.hpp"

namespace systolic {

/// Real 1-chain: coefficient per edge (along a -> b) and its homology class.
struct CycleChain {
  std::vector<double> coefficients;
  Eigen::VectorXd cls;

  double mass(const WeightedComplex& complex) const;
  /// Largest |signed coefficient sum| over vertices.
  double boundary_residual(const WeightedComplex& complex) const;
};

enum class SystoleKind { homotopy, phi_relative, stable };
std::string to_string(SystoleKind kind);

struct SystoleReport {
  SystoleKind kind = SystoleKind::homotopy;
  double value = 0.0;
  /// Closed vertex walk (homotopy and phi kinds).
  std::vector<int> witness;
  /// Minimising chain (stable kind).
  CycleChain chain;
  /// Integer class of the witness, when meaningful.
  Eigen::VectorXi cls;
  std::uint32_t z2_bits = 0;
};

/// Shortest closed walk that is nonzero in H_1(.; Z) or in the Z2 layer.
/// Each vertex is a source of a Dijkstra search in the implicit cover
/// labelled by (integer class, Z2 bits); two different labels meeting at a
/// vertex close a loop. Searches stop at half the current best plus one
/// edge, and finished sources are removed from later searches.
SystoleReport homotopy_systole(const WeightedComplex& complex, const HomologyModel& homology);

/// Shortest closed walk with odd value under phi.
SystoleReport phi_systole(const WeightedComplex& complex, const Z2Cochain& phi);

// Stable norm by the LP dual: max <w, h> over w with <w, [c]> <= length(c)
// for every cycle c. Cycles are added lazily by negative-cycle separation
// and cached across calls, so one solver should serve many classes.
class StableNormSolver {
 public:
  StableNormSolver(const WeightedComplex& complex, const HomologyModel& homology);

  double norm(const Eigen::VectorXd& h);
  double norm(const Eigen::VectorXi& h) { return norm(Eigen::VectorXd(h.cast<double>())); }
  /// Optimal chain of the last norm() call.
  const CycleChain& last_chain() const { return last_chain_; }
  const Eigen::VectorXd& last_dual() const { return last_w_; }
  /// True if <w, [c]> <= length(c) + tol for every cycle c.
  bool dual_feasible(const Eigen::VectorXd& w, double tol = 1e-12);
  /// Largest t with t e_j dual-feasible (bisection).
  double axis_dual_radius(int j);
  int cut_count() const { return static_cast<int>(cuts_.size()); }

 private:
  struct Cut {
    Eigen::VectorXd cls;
    double length;
    std::map<int, double> chain;
  };
  const WeightedComplex& complex_;
  const HomologyModel& homology_;
  std::vector<Cut> cuts_;
  CycleChain last_chain_;
  Eigen::VectorXd last_w_;
  double scale_;

  bool separate(const Eigen::VectorXd& w, double tol, Cut* out);
  void add_walk_cut(const std::vector<int>& walk);
};

double stable_norm(const WeightedComplex& complex, const HomologyModel& homology,
                   const Eigen::VectorXi& h);

/// Minimum stable norm over nonzero classes with |h|_inf <= box. Certified:
/// every class outside the box has norm >= (box + 1) * min_j t_j with t_j
/// the axis dual radii; if that bound does not beat the best, throws and
/// asks for a larger box.
SystoleReport stable_systole(const WeightedComplex& complex, const HomologyModel& homology,
                             int box = 3);
SystoleReport stable_systole(StableNormSolver& solver, int betti, int box = 3);

/// Area of the metric ball of the given radius about a vertex, from the
/// fast-marching distance and exact PL sublevel areas per triangle.
double ball_area(const WeightedComplex& surface, int center, double radius);
double ball_area(const WeightedComplex& surface, const std::vector<double>& distance, double radius);

}  // namespace systolic
