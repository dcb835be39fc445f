#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "systolic/complex.hpp"

namespace systolic {

/// Shortest edge-path distances from weighted seeds (vertex, initial value).
std::vector<double> graph_distances(const WeightedComplex& complex,
                                    const std::vector<std::pair<int, double>>& seeds);
std::vector<double> graph_distances(const WeightedComplex& complex, int source);

/// Fast-marching distance on a surface: triangle updates through a virtual
/// source (exact for straight-line distance across flat regions), with the
/// edge update as fallback. Values never exceed the graph distance.
std::vector<double> surface_distances(const WeightedComplex& surface, int source);

// Per-top-simplex inverse Gram matrices, for gradients of PL functions.
class SimplexFrames {
 public:
  explicit SimplexFrames(const WeightedComplex& complex);
  const Eigen::MatrixXd& gram_inverse(int s) const { return gram_inv_[s]; }
  /// |grad f|^2 on simplex s for vertex values f (indexed by vertex id).
  double gradient_sq(const WeightedComplex& complex, int s, const std::vector<double>& f) const;

 private:
  std::vector<Eigen::MatrixXd> gram_inv_;
};

/// Largest per-simplex gradient norm of a PL function.
double max_gradient(const WeightedComplex& complex, const SimplexFrames& frames,
                    const std::vector<double>& f);

/// Flattens a PL function until every simplex gradient is <= 1: repeated
/// local contraction towards each offending simplex's maximum, so fixes
/// drift downhill (towards the source of a distance field) instead of
/// spreading outward. A global rescale handles anything left after the
/// sweeps. Never breaks an edge Lipschitz bound that already holds.
std::vector<double> clamp_gradient(const WeightedComplex& complex, const SimplexFrames& frames,
                                   std::vector<double> f, int sweeps = 200);

/// Fraction of a flat triangle where the linear interpolant of (f0, f1, f2)
/// is <= r.
double sublevel_fraction(double f0, double f1, double f2, double r);

}  // namespace systolic
