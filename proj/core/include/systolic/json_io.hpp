#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "systolic/complex.hpp"
#include "systolic/convex.hpp"
#include "systolic/filling.hpp"
#include "systolic/inequality.hpp"
#include "systolic/jacobi.hpp"
#include "systolic/lattice.hpp"
#include "systolic/systoles.hpp"

namespace systolic {

using json = nlohmann::json;

/// "A2", [[1, 0], [0, 1]], or {"lattice": name-or-rows, "scale": c,
/// "systole": s}; "systole" rescales so the shortest vector has length s.
LatticeBasis lattice_from_json(const json& j);
json to_json(const LatticeBasis& basis);

/// {"facets": [[...], ...]}; one functional per +/- pair.
SymmetricBody body_from_json(const json& j);

/// Either a generator descriptor {"type": "flat_torus" | "round_rp2" |
/// "round_sphere" | "round_hemisphere" | "flat_disk" | "flat_moebius" |
/// "twisted_bundle" | "circle" | "product", ...} or an explicit complex
/// {"vertices": n, "edges": [[a, b, length], ...], "simplices": [[...]],
/// "orientable": bool, "periods": [[...], ...]}. Optional "scale".
WeightedComplex mesh_from_json(const json& j);
json to_json(const WeightedComplex& complex);

json to_json(const ShortVectorResult& r);
json to_json(const RankOneDecomposition& d);
json to_json(const SystoleReport& r);
json to_json(const JacobianCertificate& c);
json to_json(const CoareaReport& r);
json to_json(const DiamondReport& r);
json to_json(const InequalityReport& r);

/// Runs the suite named by config["suite"]. Keys per suite (all optional):
/// seed, tolerance, resolution, lattice, level, count, dimension,
/// fiber_length, sweep, rp2_level, sigma2 (2 or "pi/2"), centers.
std::vector<InequalityReport> run_suite(const json& config);

/// "<parameter>,<ratio>" lines with a header.
std::string reports_csv(const std::vector<InequalityReport>& reports);

}  // namespace systolic
