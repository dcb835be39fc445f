#pragma once

#include <vector>

#include "systolic/complex.hpp"

namespace systolic {

// Surface with a distinguished boundary circle. The circle should sit
// isometrically: surface distance between boundary points at least their
// arc distance along the circle.
struct FillingSurface {
  WeightedComplex complex;
  /// Ordered boundary loop (no repeated endpoint).
  std::vector<int> boundary;
  /// Arc-length parameter of each boundary vertex, starting at 0.
  std::vector<double> arc;
  double perimeter = 0.0;
  /// min over boundary pairs of surface distance - arc distance.
  double embedding_margin = 0.0;
};

/// Filling bounded by the given loop of boundary vertices.
FillingSurface make_filling(WeightedComplex complex, std::vector<int> boundary);
/// Filling whose boundary edges form exactly one circle.
FillingSurface filling_from_boundary(WeightedComplex complex);

/// Cut a closed surface along a simple one-sided edge loop (a closed vertex
/// walk, endpoint repeated or not). Each loop vertex splits into one copy
/// per side, so the new boundary circle has twice the loop's length.
/// Throws if the loop is not simple or is two-sided.
FillingSurface open_along_loop(const WeightedComplex& surface, std::vector<int> loop);

struct DiamondReport {
  double perimeter = 0.0;
  double filling_area = 0.0;
  /// Area enclosed by the boundary image under x -> (d(p, x), d(q, x)).
  double certified_lower_bound = 0.0;
  /// 2 s (P/2 - s) for the realised arc separation s of p and q;
  /// P^2 / 8 at exact quarter separation.
  double target = 0.0;
  /// (P/2)^2 / certified_lower_bound: bound on the ratio for the loop
  /// that was opened.
  double ratio_bound = 0.0;
  /// (P/2)^2 / filling_area.
  double measured_ratio = 0.0;
  double separation = 0.0;
  double separation_error = 0.0;
  double embedding_margin = 0.0;
  /// max over edges of |delta d| - length, both coordinates.
  double max_lipschitz_excess = 0.0;
  double max_jacobian = 0.0;
  int p = -1;
  int q = -1;
  bool pass = false;
};

/// Two-point distance-coordinate certificate. Requires
/// embedding_margin >= -margin_tolerance * perimeter; passes if the
/// certified bound reaches target * (1 - tolerance).
DiamondReport diamond_certificate(const FillingSurface& filling, double tolerance = 0.03,
                                  double margin_tolerance = 0.02);

}  // namespace systolic
