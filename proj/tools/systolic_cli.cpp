// systolic: run lattice, ellipsoid, systole, Jacobi-map, filling and
// inequality checks and emit JSON reports.
// Exit status: 0 all checks pass, 1 a check or certificate failed,
// 2 bad input or infrastructure error.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include "systolic/convex.hpp"
#include "systolic/error.hpp"
#include "systolic/filling.hpp"
#include "systolic/generators.hpp"
#include "systolic/homology.hpp"
#include "systolic/inequality.hpp"
#include "systolic/jacobi.hpp"
#include "systolic/json_io.hpp"
#include "systolic/lattice.hpp"
#include "systolic/systoles.hpp"

using namespace systolic;

namespace {

struct Options {
  std::string config_path;
  std::string out_path;
  std::string csv_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> resolution;
};

struct Outcome {
  json report;
  bool pass = true;
  std::string csv;
};

json load_config(const Options& o) {
  json cfg = json::object();
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw InvalidInput("cannot open config '" + o.config_path + "'");
    try {
      in >> cfg;
    } catch (const json::exception& e) {
      throw InvalidInput(std::string("config is not valid JSON: ") + e.what());
    }
  }
  if (o.seed) cfg["seed"] = *o.seed;
  if (o.resolution) cfg["resolution"] = *o.resolution;
  return cfg;
}

int resolution(const json& cfg, int fallback) { return cfg.value("resolution", fallback); }

Outcome run_lattice(const json& cfg) {
  std::vector<std::pair<std::string, LatticeBasis>> items;
  if (cfg.contains("lattice")) {
    items.emplace_back(cfg["lattice"].is_string() ? cfg["lattice"].get<std::string>() : "input",
                       lattice_from_json(cfg["lattice"]));
  } else {
    for (const auto& n : catalog_names()) items.emplace_back(n, catalog_lattice(n));
  }
  Outcome out;
  json rows = json::array();
  for (const auto& [name, b] : items) {
    const int d = b.dimension();
    const double hr = hermite_ratio(b);
    const double bound = hermite_ratio_bound(d);
    json row{{"name", name},
             {"dimension", d},
             {"covolume", covolume(b)},
             {"shortest_vector", to_json(shortest_vector(b))},
             {"hermite_ratio", hr},
             {"hermite_bound", bound}};
    bool ok = hr <= bound * (1 + 1e-9);
    if (d <= 4) {
      const double bm = berge_martinet_ratio(b);
      row["berge_martinet_ratio"] = bm;
      row["berge_martinet_constant"] = berge_martinet_constant(d);
      ok = ok && bm <= berge_martinet_constant(d) * (1 + 1e-9);
    }
    row["pass"] = ok;
    out.pass = out.pass && ok;
    rows.push_back(row);
  }
  out.report = {{"lattices", rows}};
  return out;
}

Outcome run_john(const json& cfg) {
  std::optional<SymmetricBody> body;
  std::string source;
  if (cfg.contains("body")) {
    body = body_from_json(cfg["body"]);
    source = "body";
  } else {
    const json mesh = cfg.value("mesh", json{{"type", "flat_torus"}, {"lattice", "A2"}, {"resolution", resolution(cfg, 16)}});
    const auto c = mesh_from_json(mesh);
    const auto h = build_homology(c);
    const auto method = cfg.value("method", std::string("harmonic")) == "graph" ? UnitBallMethod::graph : UnitBallMethod::harmonic;
    body = stable_unit_ball(c, h, method, cfg.value("box", 3));
    source = "stable unit ball";
  }
  const Ellipsoid e = john_inscribed(*body);
  const auto d = decompose_rank_one(*body, e);
  const int dim = body->dimension();
  double worst_dual = 0.0;
  for (const auto& t : d.terms) worst_dual = std::max(worst_dual, std::abs(body->dual_norm(t.functional) - 1.0));
  Outcome out;
  const bool ok_sum = std::abs(d.lambda_sum() - dim) <= 1e-8;
  const bool ok_count = static_cast<int>(d.terms.size()) <= max_rank_one_terms(dim);
  const bool ok_res = d.residual <= 1e-6;
  const bool ok_dual = worst_dual <= 1e-6;
  out.pass = ok_sum && ok_count && ok_res && ok_dual;
  out.report = {{"source", source},
                {"dimension", dim},
                {"facets", body->facets().size()},
                {"decomposition", to_json(d)},
                {"max_dual_norm_error", worst_dual},
                {"checks", {{"lambda_sum", ok_sum}, {"term_count", ok_count}, {"residual", ok_res}, {"dual_norms", ok_dual}}},
                {"pass", out.pass}};
  return out;
}

Outcome run_systole(const json& cfg) {
  const json mesh = cfg.value("mesh", json{{"type", "flat_torus"}, {"lattice", "A2"}, {"resolution", resolution(cfg, 32)}});
  const auto c = mesh_from_json(mesh);
  const auto h = build_homology(c);
  json r{{"vertices", c.vertex_count()}, {"volume", c.volume()}, {"betti", h.betti}, {"z2_rank", h.z2_rank}};
  if (h.betti > 0 || h.z2_rank > 0) {
    const auto pi = homotopy_systole(c, h);
    r["homotopy"] = to_json(pi);
    if (c.dimension() == 2) r["systolic_ratio"] = pi.value * pi.value / c.volume();
    const Z2Cochain phi = h.z2_rank > 0 ? h.z2_class(0) : h.integer_class_mod2(0);
    r["phi_relative"] = to_json(phi_systole(c, phi));
  }
  if (h.betti > 0) {
    StableNormSolver solver(c, h);
    r["stable"] = to_json(stable_systole(solver, h.betti, cfg.value("box", 3)));
  }
  return {r, true, ""};
}

Outcome run_jacobi(const json& cfg) {
  const json mesh = cfg.value("mesh", json{{"type", "twisted_bundle"}, {"lattice", "A2"}, {"resolution", resolution(cfg, 16)},
                                           {"fiber_length", 0.1}});
  const auto c = mesh_from_json(mesh);
  const auto h = build_homology(c);
  const auto body = stable_unit_ball(c, h);
  const auto d = decompose_rank_one(body, john_inscribed(body));
  JacobiOptions opt;
  opt.method = cfg.value("method", std::string("harmonic")) == "mcshane" ? FieldMethod::mcshane : FieldMethod::harmonic;
  opt.certify = false;
  const auto map = build_jacobi_map(c, h, d, opt);
  const auto cert = jacobian_certificate(map);
  Outcome out;
  out.report = {{"betti", h.betti}, {"decomposition", to_json(d)}, {"certificate", to_json(cert)}};
  out.pass = cert.trace_ok && cert.jacobian_ok && cert.max_lipschitz_margin <= 1e-9 &&
             cert.max_equivariance_residual <= 1e-12;
  const int fdim = c.dimension() - h.betti;
  if (fdim >= 0 && fdim <= 2) {
    const auto audit = coarea_audit(map, cfg.value("samples", 50), cfg.value("seed", std::uint64_t{1}));
    out.report["coarea"] = to_json(audit);
    out.pass = out.pass && audit.pass;
  }
  out.report["pass"] = out.pass;
  return out;
}

Outcome run_filling(const json& cfg) {
  const std::string mode = cfg.value("mode", std::string("open"));
  FillingSurface f = [&] {
    if (mode == "boundary") {
      const json mesh = cfg.value("surface", json{{"type", "round_hemisphere"}, {"level", resolution(cfg, 5)}});
      return filling_from_boundary(mesh_from_json(mesh));
    }
    if (mode != "open") throw InvalidInput("filling mode must be 'open' or 'boundary'");
    const json mesh = cfg.value("surface", json{{"type", "round_rp2"}, {"level", resolution(cfg, 5)}});
    const auto s = mesh_from_json(mesh);
    const auto h = build_homology(s);
    const Z2Cochain phi = h.z2_rank > 0 ? h.z2_class(0) : h.integer_class_mod2(0);
    const auto w = phi_systole(s, phi);
    return open_along_loop(s, w.witness);
  }();
  Outcome out;
  try {
    const auto r = diamond_certificate(f, cfg.value("tolerance", 0.03));
    out.report = to_json(r);
    out.pass = r.pass;
  } catch (const CertificationError& e) {
    out.report = {{"perimeter", f.perimeter},
                  {"filling_area", f.complex.volume()},
                  {"embedding_margin", f.embedding_margin},
                  {"rejected", e.what()},
                  {"pass", false}};
    out.pass = false;
  }
  return out;
}

Outcome run_inequality(const json& cfg) {
  const auto reports = run_suite(cfg);
  Outcome out;
  json rows = json::array();
  for (const auto& r : reports) {
    rows.push_back(to_json(r));
    out.pass = out.pass && r.pass;
  }
  out.report = {{"suite", cfg["suite"]}, {"reports", rows}, {"pass", out.pass}};
  out.csv = reports_csv(reports);
  return out;
}

void emit(const Options& o, const json& report) {
  const std::string text = report.dump(2) + "\n";
  if (o.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out_path);
  if (!f) throw std::runtime_error("cannot write '" + o.out_path + "'");
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Systolic geometry verification toolkit"};
  app.require_subcommand(1);
  Options opt;
  std::uint64_t seed = 0;
  int res = 0;
  using Runner = Outcome (*)(const json&);
  const std::pair<const char*, Runner> commands[] = {
      {"lattice", run_lattice}, {"john", run_john},         {"systole", run_systole},
      {"jacobi", run_jacobi},   {"filling", run_filling}, {"inequality", run_inequality},
  };
  const char* help[] = {
      "Hermite and Berge-Martinet ratios of lattices",
      "John ellipsoid and rank-one decomposition of a symmetric body",
      "Homotopy, phi-relative and stable systoles of a mesh",
      "Area-nonexpanding Jacobi map certificate and coarea audit",
      "Diamond certificate for a filling surface",
      "Inequality suite from a config file",
  };
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    auto* sub = app.add_subcommand(commands[i].first, help[i]);
    sub->add_option("--config", opt.config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out_path, "write the JSON report here instead of stdout");
    sub->add_option("--csv", opt.csv_path, "also write <parameter>,<ratio> CSV (inequality only)");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--resolution", res, "mesh resolution or subdivision level");
    subs.push_back(sub);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::size_t which = 0;
  for (; which < subs.size(); ++which)
    if (subs[which]->parsed()) break;
  auto* sub = subs[which];
  if (sub->count("--seed")) opt.seed = seed;
  if (sub->count("--resolution")) opt.resolution = res;

  json report{{"command", commands[which].first}};
  try {
    const json cfg = load_config(opt);
    Outcome o = commands[which].second(cfg);
    report["status"] = o.pass ? "pass" : "violation";
    report["result"] = std::move(o.report);
    emit(opt, report);
    if (!opt.csv_path.empty()) {
      std::ofstream f(opt.csv_path);
      if (!f) throw std::runtime_error("cannot write '" + opt.csv_path + "'");
      f << o.csv;
    }
    return o.pass ? 0 : 1;
  } catch (const CertificationError& e) {
    report["status"] = "violation";
    report["error"] = {{"kind", e.kind()}, {"message", e.what()}, {"residual", e.residual()}};
    try {
      emit(opt, report);
    } catch (...) {
    }
    std::cerr << "certification failed: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    report["status"] = "error";
    report["error"] = {{"kind", e.kind()}, {"message", e.what()}};
    try {
      emit(opt, report);
    } catch (...) {
    }
    std::cerr << "error (" << e.kind() << "): " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
