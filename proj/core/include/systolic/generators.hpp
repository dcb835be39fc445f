#pragma once

#include <cstdint>

#include "systolic/complex.hpp"
#include "systolic/lattice.hpp"

namespace systolic {

// Built-in meshes. Every periodic generator attaches per-edge periods, so
// homology classes come out in the coordinates of the input lattice basis.

/// Flat 2-torus R^2 / L on an m x m grid (m >= 3). The basis is
/// Gauss-reduced internally so every triangle is non-obtuse.
WeightedComplex flat_torus(const LatticeBasis& basis, int resolution);

/// Circle of the given total length as a graph with n >= 3 vertices.
WeightedComplex circle_graph(int n, double total_length);

/// Round sphere (UV mesh, 4*2^s meridians, 2*2^s latitude bands), chord
/// edge lengths. Antipodally symmetric.
WeightedComplex round_sphere(int level, double radius = 1.0);
/// Round RP^2: the closed northern half with antipodal equator points
/// identified. Needs level >= 1.
WeightedComplex round_rp2(int level, double radius = 1.0);
/// Closed northern hemisphere; boundary is the equator.
WeightedComplex round_hemisphere(int level, double radius = 1.0);

/// Flat disk on a polar grid with `rings` rings of 6k vertices.
WeightedComplex flat_disk(int rings, double radius = 1.0);

/// Flat Moebius band [0, core] x [-w/2, w/2] / (0, y) ~ (core, -y);
/// `across` must be even so the core curve is an edge loop.
WeightedComplex flat_moebius(int along, int across, double core_length, double width);

/// Flat circle bundle over R^2 / L: the quotient of R^2 x (R / eps Z) by
/// (x, t) -> (x + a, -t) and (x, t) -> (x + b, t), a and b the basis rows.
/// Non-orientable, first Betti number 2, the fibre is a 2-torsion class.
WeightedComplex twisted_circle_bundle(const LatticeBasis& base, int resolution,
                                      double fiber_length, int fiber_segments);

/// Product of two complexes with the staircase triangulation of each
/// product cell (vertex order = global vertex id) and product edge lengths.
WeightedComplex product_complex(const WeightedComplex& x, const WeightedComplex& y);

/// Random multiplicative length perturbation in [1 - amplitude, 1 + amplitude],
/// retried until every simplex stays valid.
WeightedComplex perturbed_lengths(const WeightedComplex& complex, double amplitude,
                                  std::uint64_t seed);

}  // namespace systolic
