#include "systolic/json_io.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "systolic/error.hpp"
#include "systolic/generators.hpp"

namespace systolic {

namespace {

template <typename T>
T get(const json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("bad value for '") + key + "': " + e.what());
  }
}

Eigen::MatrixXd matrix_from_json(const json& rows) {
  if (!rows.is_array() || rows.empty()) throw InvalidInput("expected a non-empty array of rows");
  const std::size_t cols = rows[0].size();
  Eigen::MatrixXd m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_array() || rows[i].size() != cols) throw InvalidInput("ragged matrix");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = rows[i][k].get<double>();
  }
  return m;
}

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }
json vector_json(const Eigen::VectorXi& v) { return std::vector<int>(v.data(), v.data() + v.size()); }

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) rows.push_back(vector_json(Eigen::VectorXd(m.row(i).transpose())));
  return rows;
}

double sigma2_from_json(const json& config) {
  if (!config.contains("sigma2")) return 2.0;
  const auto& s = config["sigma2"];
  if (s.is_string()) {
    if (s == "pi/2") return std::numbers::pi / 2;
    if (s == "2") return 2.0;
    throw InvalidInput("sigma2 must be 2 or \"pi/2\"");
  }
  return s.get<double>();
}

}  // namespace

LatticeBasis lattice_from_json(const json& j) {
  if (j.is_string()) return catalog_lattice(j.get<std::string>());
  if (j.is_array()) return LatticeBasis(matrix_from_json(j));
  if (!j.is_object() || !j.contains("lattice")) throw InvalidInput("lattice must be a name, a row array or an object with 'lattice'");
  LatticeBasis b = lattice_from_json(j["lattice"]);
  if (j.contains("scale")) b = b.scaled(get<double>(j, "scale", 1.0));
  if (j.contains("systole")) {
    const double s = get<double>(j, "systole", 1.0);
    if (!(s > 0.0)) throw InvalidInput("systole must be positive");
    b = b.scaled(s / shortest_vector(b).length);
  }
  return b;
}

json to_json(const LatticeBasis& basis) { return matrix_json(basis.rows()); }

SymmetricBody body_from_json(const json& j) {
  const json& f = j.is_object() ? j.at("facets") : j;
  const Eigen::MatrixXd m = matrix_from_json(f);
  std::vector<Eigen::VectorXd> facets;
  for (int i = 0; i < m.rows(); ++i) facets.emplace_back(m.row(i).transpose());
  return SymmetricBody(static_cast<int>(m.cols()), std::move(facets));
}

WeightedComplex mesh_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("mesh must be a JSON object");
  WeightedComplex out = [&]() -> WeightedComplex {
    if (!j.contains("type")) {
      const int n = j.at("vertices").get<int>();
      std::vector<Edge> edges;
      for (const auto& e : j.at("edges")) edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>()});
      auto simplices = j.at("simplices").get<std::vector<std::vector<int>>>();
      const bool orientable = j.contains("orientable") ? j["orientable"].get<bool>() : detect_orientable(n, simplices);
      WeightedComplex c(n, std::move(edges), std::move(simplices), orientable);
      if (j.contains("periods")) {
        const auto rows = j["periods"].get<std::vector<std::vector<int>>>();
        if (!rows.empty()) {
          Eigen::MatrixXi p(rows.size(), rows[0].size());
          for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t k = 0; k < rows[i].size(); ++k) p(i, k) = rows[i][k];
          c = c.with_periods(std::move(p));
        }
      }
      return c;
    }
    const std::string type = j["type"].get<std::string>();
    const int res = get<int>(j, "resolution", 16);
    const int level = get<int>(j, "level", 3);
    const double radius = get<double>(j, "radius", 1.0);
    if (type == "flat_torus") return flat_torus(lattice_from_json(j.value("lattice", json("Z2"))), res);
    if (type == "round_rp2") return round_rp2(level, radius);
    if (type == "round_sphere") return round_sphere(level, radius);
    if (type == "round_hemisphere") return round_hemisphere(level, radius);
    if (type == "flat_disk") return flat_disk(get<int>(j, "rings", 20), radius);
    if (type == "flat_moebius")
      return flat_moebius(get<int>(j, "along", 20), get<int>(j, "across", 6), get<double>(j, "core_length", 1.0),
                          get<double>(j, "width", 0.5));
    if (type == "twisted_bundle")
      return twisted_circle_bundle(lattice_from_json(j.value("lattice", json("A2"))), res,
                                   get<double>(j, "fiber_length", 0.1), get<int>(j, "fiber_segments", 3));
    if (type == "circle") return circle_graph(get<int>(j, "vertices", 12), get<double>(j, "length", 1.0));
    if (type == "product") {
      const auto& f = j.at("factors");
      if (!f.is_array() || f.size() != 2) throw InvalidInput("product needs exactly two factors");
      return product_complex(mesh_from_json(f[0]), mesh_from_json(f[1]));
    }
    throw InvalidInput("unknown mesh type '" + type + "'");
  }();
  if (j.contains("perturb")) {
    const auto& p = j["perturb"];
    out = perturbed_lengths(out, get<double>(p, "amplitude", 0.05), get<std::uint64_t>(p, "seed", 1));
  }
  if (j.contains("scale")) out = out.scaled(get<double>(j, "scale", 1.0));
  return out;
}

json to_json(const WeightedComplex& c) {
  json edges = json::array();
  for (const auto& e : c.edges()) edges.push_back({e.a, e.b, e.length});
  json j{{"vertices", c.vertex_count()}, {"edges", edges}, {"simplices", c.simplices()}, {"orientable", c.orientable()}};
  if (c.periods().size() > 0) {
    json rows = json::array();
    for (int i = 0; i < c.periods().rows(); ++i) rows.push_back(vector_json(Eigen::VectorXi(c.periods().row(i).transpose())));
    j["periods"] = rows;
  }
  return j;
}

json to_json(const ShortVectorResult& r) {
  return {{"coefficients", vector_json(r.coefficients)}, {"vector", vector_json(r.vector)}, {"length", r.length}};
}

json to_json(const RankOneDecomposition& d) {
  json terms = json::array();
  for (const auto& t : d.terms) terms.push_back({{"lambda", t.lambda}, {"functional", vector_json(t.functional)}});
  return {{"terms", terms}, {"lambda_sum", d.lambda_sum()}, {"residual", d.residual}, {"q", matrix_json(d.reconstruct())}};
}

json to_json(const SystoleReport& r) {
  json j{{"kind", to_string(r.kind)}, {"value", r.value}, {"z2_bits", r.z2_bits}};
  if (!r.witness.empty()) j["witness"] = r.witness;
  if (r.cls.size() > 0) j["class"] = vector_json(r.cls);
  return j;
}

json to_json(const JacobianCertificate& c) {
  return {{"betti", c.betti},
          {"max_trace", c.max_trace},
          {"max_jacobian", c.max_jacobian},
          {"max_face_trace", c.max_face_trace},
          {"max_face_jacobian", c.max_face_jacobian},
          {"max_amgm_violation", c.max_amgm_violation},
          {"worst_simplex", c.worst_simplex},
          {"max_lipschitz_margin", c.max_lipschitz_margin},
          {"max_equivariance_residual", c.max_equivariance_residual},
          {"trace_ok", c.trace_ok},
          {"jacobian_ok", c.jacobian_ok}};
}

json to_json(const CoareaReport& r) {
  return {{"volume", r.volume},         {"image_volume", r.image_volume}, {"min_fiber", r.min_fiber},
          {"mean_fiber", r.mean_fiber}, {"max_fiber", r.max_fiber},       {"regular_samples", r.regular_samples},
          {"rejected_samples", r.rejected_samples}, {"slack", r.slack},  {"pass", r.pass}};
}

json to_json(const DiamondReport& r) {
  return {{"perimeter", r.perimeter},
          {"filling_area", r.filling_area},
          {"certified_lower_bound", r.certified_lower_bound},
          {"ratio_bound", r.ratio_bound},
          {"target", r.target},
          {"measured_ratio", r.measured_ratio},
          {"separation", r.separation},
          {"separation_error", r.separation_error},
          {"embedding_margin", r.embedding_margin},
          {"max_lipschitz_excess", r.max_lipschitz_excess},
          {"max_jacobian", r.max_jacobian},
          {"pass", r.pass}};
}

json to_json(const InequalityReport& r) {
  return {{"inequality", to_string(r.id)},
          {"lhs", r.lhs},
          {"rhs", r.rhs},
          {"ratio", r.ratio},
          {"systolic_ratio", r.systolic_ratio},
          {"tolerance", r.tolerance},
          {"constants", r.constants},
          {"measurements", r.measurements},
          {"metric", r.metric},
          {"parameter", r.parameter},
          {"warnings", r.warnings},
          {"pass", r.pass}};
}

std::vector<InequalityReport> run_suite(const json& config) {
  if (!config.is_object() || !config.contains("suite")) throw InvalidInput("config needs a 'suite' entry");
  const InequalityId id = inequality_from_string(config["suite"].get<std::string>());
  const auto seed = get<std::uint64_t>(config, "seed", 1);
  const bool has_res = config.contains("resolution");
  const int res = get<int>(config, "resolution", 0);
  auto tol = [&](double fallback) { return get<double>(config, "tolerance", fallback); };
  auto lattice = [&](const char* fallback) { return lattice_from_json(config.value("lattice", json(fallback))); };

  std::vector<InequalityReport> out;
  switch (id) {
    case InequalityId::loewner:
      out.push_back(loewner_suite(lattice("A2"), has_res ? res : 32, tol(0.02)));
      break;
    case InequalityId::pu:
      out.push_back(pu_suite(get<int>(config, "level", has_res ? res : 5), tol(0.02)));
      break;
    case InequalityId::gromov:
      out = gromov_suite(get<int>(config, "dimension", 2), get<int>(config, "count", 200), seed, tol(0.02));
      break;
    case InequalityId::berge_martinet:
      out = berge_martinet_suite(get<int>(config, "count", 20), seed, tol(1e-9));
      break;
    case InequalityId::ball_tqi:
      out.push_back(ball_tqi_suite(lattice("Z2"), has_res ? res : 32, get<int>(config, "centers", 16), tol(0.03)));
      break;
    case InequalityId::corollary11: {
      const double eps = get<double>(config, "fiber_length", 0.1);
      const int r = has_res ? res : 16;
      out.push_back(corollary11_suite(eps, lattice("A2"), r, tol(0.02)));
      for (const auto& b : random_lattices(2, get<int>(config, "sweep", 0), seed))
        out.push_back(corollary11_suite(eps, b, r, tol(0.02)));
      break;
    }
    case InequalityId::theorem12: {
      Theorem12Options o;
      o.rp2_level = get<int>(config, "rp2_level", 2);
      o.torus_resolution = has_res ? res : 6;
      o.sigma2 = sigma2_from_json(config);
      const json lat = config.value("lattice", json{{"lattice", "A2"}, {"systole", std::numbers::pi}});
      out.push_back(theorem12_suite(lattice_from_json(lat), o, tol(0.02)));
      int index = 1;
      for (const auto& b : random_lattices(2, get<int>(config, "sweep", 0), seed)) {
        auto r = theorem12_suite(b.scaled(std::numbers::pi), o, tol(0.02));
        r.parameter = index++;
        out.push_back(std::move(r));
      }
      break;
    }
  }
  return out;
}

std::string reports_csv(const std::vector<InequalityReport>& reports) {
  std::ostringstream os;
  os.precision(12);
  os << "parameter,ratio\n";
  for (const auto& r : reports) os << r.parameter << "," << r.ratio << "\n";
  return os.str();
}

}  // namespace systolic
