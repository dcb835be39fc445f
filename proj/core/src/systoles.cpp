#include "systolic/systoles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <unordered_map>

#include "systolic/distance.hpp"
#include "systolic/error.hpp"
#include "systolic/simplex_lp.hpp"

namespace systolic {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxLabelRank = 4;

struct Label {
  std::array<std::int16_t, kMaxLabelRank> h{};
  std::uint32_t bits = 0;
  bool operator==(const Label& o) const { return h == o.h && bits == o.bits; }
  bool trivial() const {
    return bits == 0 && std::all_of(h.begin(), h.end(), [](std::int16_t x) { return x == 0; });
  }
};

struct StateKey {
  int v;
  Label label;
  bool operator==(const StateKey& o) const { return v == o.v && label == o.label; }
};

struct StateHash {
  std::size_t operator()(const StateKey& k) const {
    std::size_t x = static_cast<std::size_t>(k.v) * 0x9E3779B97F4A7C15ull;
    for (auto c : k.label.h) x = (x ^ static_cast<std::uint16_t>(c)) * 0x100000001B3ull;
    return x ^ (k.label.bits * 0xC2B2AE3D27D4EB4Full);
  }
};

// Loop search in the implicit cover whose deck labels are per-edge integer
// increments (up to four) and Z2 bits.
class LoopSearch {
 public:
  LoopSearch(const WeightedComplex& complex, std::vector<std::array<std::int16_t, kMaxLabelRank>> inc,
             std::vector<std::uint32_t> bits, int rank)
      : c_(complex), inc_(std::move(inc)), bits_(std::move(bits)), rank_(rank) {
    for (const auto& e : complex.edges()) max_edge_ = std::max(max_edge_, e.length);
  }

  void seed(double value, std::vector<int> walk) {
    if (value < best_) {
      best_ = value;
      witness_ = std::move(walk);
    }
  }

  void run() {
    const int nv = c_.vertex_count();
    std::vector<char> removed(nv, 0);
    std::vector<int> first_at(nv, -1);
    std::vector<int> touched;
    for (int s = 0; s < nv; ++s) {
      states_.clear();
      index_.clear();
      for (int v : touched) first_at[v] = -1;
      touched.clear();
      using Item = std::pair<double, int>;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
      add_state({s, Label{}}, 0.0, -1);
      heap.push({0.0, 0});
      while (!heap.empty()) {
        auto [d, idx] = heap.top();
        heap.pop();
        if (d > states_[idx].d) continue;
        if (d > 0.5 * best_ + max_edge_) break;
        const int v = states_[idx].key.v;
        if (first_at[v] < 0) {
          first_at[v] = idx;
          touched.push_back(v);
        } else if (!(states_[first_at[v]].key.label == states_[idx].key.label)) {
          const double cand = d + states_[first_at[v]].d;
          if (cand < best_) {
            best_ = cand;
            witness_ = close(first_at[v], idx);
          }
          continue;
        }
        const Label lab = states_[idx].key.label;
        for (auto [w, e] : c_.neighbours(v)) {
          if (removed[w]) continue;
          const double nd = d + c_.edge(e).length;
          if (nd > 0.5 * best_ + max_edge_) continue;
          Label nl = lab;
          const int sign = v < w ? 1 : -1;
          for (int i = 0; i < rank_; ++i) nl.h[i] = static_cast<std::int16_t>(nl.h[i] + sign * inc_[e][i]);
          nl.bits ^= bits_[e];
          const StateKey key{w, nl};
          auto it = index_.find(key);
          if (it == index_.end()) {
            const int ni = add_state(key, nd, idx);
            heap.push({nd, ni});
          } else if (nd < states_[it->second].d) {
            states_[it->second].d = nd;
            states_[it->second].parent = idx;
            heap.push({nd, it->second});
          }
        }
      }
      removed[s] = 1;
    }
  }

  double best() const { return best_; }
  const std::vector<int>& witness() const { return witness_; }

 private:
  struct State {
    StateKey key;
    double d;
    int parent;
  };
  const WeightedComplex& c_;
  std::vector<std::array<std::int16_t, kMaxLabelRank>> inc_;
  std::vector<std::uint32_t> bits_;
  int rank_;
  double max_edge_ = 0.0;
  double best_ = kInf;
  std::vector<int> witness_;
  std::vector<State> states_;
  std::unordered_map<StateKey, int, StateHash> index_;

  int add_state(const StateKey& key, double d, int parent) {
    const int idx = static_cast<int>(states_.size());
    states_.push_back({key, d, parent});
    index_.emplace(key, idx);
    return idx;
  }

  std::vector<int> path(int idx) const {
    std::vector<int> p;
    for (int i = idx; i >= 0; i = states_[i].parent) p.push_back(states_[i].key.v);
    std::reverse(p.begin(), p.end());
    return p;
  }

  std::vector<int> close(int a, int b) const {
    std::vector<int> w = path(a);
    const std::vector<int> back = path(b);
    w.insert(w.end(), back.rbegin() + 1, back.rend());
    return w;
  }
};

}  // namespace

std::string to_string(SystoleKind kind) {
  switch (kind) {
    case SystoleKind::homotopy: return "homotopy";
    case SystoleKind::phi_relative: return "phi_relative";
    case SystoleKind::stable: return "stable";
  }
  return "unknown";
}

double CycleChain::mass(const WeightedComplex& complex) const {
  double m = 0.0;
  for (int e = 0; e < complex.edge_count(); ++e) m += std::abs(coefficients[e]) * complex.edge(e).length;
  return m;
}

double CycleChain::boundary_residual(const WeightedComplex& complex) const {
  std::vector<double> div(complex.vertex_count(), 0.0);
  for (int e = 0; e < complex.edge_count(); ++e) {
    div[complex.edge(e).a] -= coefficients[e];
    div[complex.edge(e).b] += coefficients[e];
  }
  double r = 0.0;
  for (double x : div) r = std::max(r, std::abs(x));
  return r;
}

SystoleReport homotopy_systole(const WeightedComplex& complex, const HomologyModel& homology) {
  if (homology.betti == 0 && homology.z2_rank == 0) {
    throw TopologyError("no detectable noncontractible loop");
  }
  if (homology.betti > kMaxLabelRank) throw BudgetExceeded("homotopy systole supports b <= 4");
  std::vector<std::array<std::int16_t, kMaxLabelRank>> inc(complex.edge_count());
  for (int e = 0; e < complex.edge_count(); ++e) {
    for (int i = 0; i < homology.betti; ++i) inc[e][i] = static_cast<std::int16_t>(homology.cocycle(e, i));
  }
  LoopSearch search(complex, std::move(inc), homology.z2, homology.betti);
  for (const auto& g : homology.generator_loops) search.seed(walk_length(complex, g), g);
  search.run();
  SystoleReport r;
  r.kind = SystoleKind::homotopy;
  r.witness = search.witness();
  r.value = walk_length(complex, r.witness);
  r.cls = homology.walk_class(complex, r.witness);
  r.z2_bits = homology.walk_z2(complex, r.witness);
  return r;
}

SystoleReport phi_systole(const WeightedComplex& complex, const Z2Cochain& phi) {
  if (static_cast<int>(phi.size()) != complex.edge_count()) throw InvalidInput("phi needs one value per edge");
  if (std::none_of(phi.begin(), phi.end(), [](std::uint8_t x) { return x != 0; })) {
    throw TopologyError("trivial phi");
  }
  std::vector<std::uint32_t> bits(phi.begin(), phi.end());
  LoopSearch search(complex, std::vector<std::array<std::int16_t, kMaxLabelRank>>(complex.edge_count()),
                    std::move(bits), 0);
  search.run();
  if (search.witness().empty()) throw TopologyError("trivial phi (cochain is a coboundary)");
  SystoleReport r;
  r.kind = SystoleKind::phi_relative;
  r.witness = search.witness();
  r.value = walk_length(complex, r.witness);
  r.z2_bits = static_cast<std::uint32_t>(walk_parity(complex, phi, r.witness));
  return r;
}

// ---------------------------------------------------------------- stable norm

StableNormSolver::StableNormSolver(const WeightedComplex& complex, const HomologyModel& homology)
    : complex_(complex), homology_(homology) {
  if (homology.betti < 1) throw InvalidInput("stable norm needs b >= 1");
  double mean = 0.0;
  for (const auto& e : complex.edges()) mean += e.length;
  scale_ = mean / complex.edge_count();
  for (const auto& g : homology.generator_loops) {
    add_walk_cut(g);
    add_walk_cut(std::vector<int>(g.rbegin(), g.rend()));
  }
}

void StableNormSolver::add_walk_cut(const std::vector<int>& walk) {
  Cut cut;
  cut.cls = homology_.walk_class(complex_, walk).cast<double>();
  cut.length = walk_length(complex_, walk);
  for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
    const int e = complex_.find_edge(walk[i], walk[i + 1]);
    cut.chain[e] += walk[i] < walk[i + 1] ? 1.0 : -1.0;
  }
  cuts_.push_back(std::move(cut));
}

bool StableNormSolver::separate(const Eigen::VectorXd& w, double tol, Cut* out) {
  const int nv = complex_.vertex_count();
  const int ne = complex_.edge_count();
  std::vector<double> wy(ne);
  for (int e = 0; e < ne; ++e) wy[e] = homology_.cocycle.row(e).cast<double>().dot(w);
  const double relax_tol = tol * scale_;

  std::vector<double> dist(nv, 0.0);
  std::vector<int> parent(nv, -1);
  std::vector<char> in_queue(nv, 1);
  std::deque<int> queue;
  for (int v = 0; v < nv; ++v) queue.push_back(v);

  auto arc_cost = [&](int from, int e) {
    const Edge& ed = complex_.edge(e);
    return from == ed.a ? ed.length - wy[e] : ed.length + wy[e];
  };
  // Cycle in the parent graph, if any (parent[v] = arriving edge).
  auto find_cycle = [&]() -> std::vector<int> {
    std::vector<int> color(nv, 0);
    for (int s = 0; s < nv; ++s) {
      if (color[s]) continue;
      std::vector<int> trail;
      int v = s;
      while (v >= 0 && color[v] == 0) {
        color[v] = 1;
        trail.push_back(v);
        const int e = parent[v];
        if (e < 0) {
          v = -1;
          break;
        }
        const Edge& ed = complex_.edge(e);
        v = ed.a == v ? ed.b : ed.a;
      }
      if (v >= 0 && color[v] == 1) {
        // v lies on a cycle of the current trail.
        std::vector<int> cyc;
        int x = v;
        do {
          cyc.push_back(x);
          const Edge& ed = complex_.edge(parent[x]);
          x = ed.a == x ? ed.b : ed.a;
        } while (x != v);
        cyc.push_back(v);
        // Parent links point backwards along the cycle; reverse to get the
        // traversal direction.
        std::reverse(cyc.begin(), cyc.end());
        for (int t : trail) color[t] = 2;
        return cyc;
      }
      for (int t : trail) color[t] = 2;
    }
    return {};
  };

  long relaxations = 0;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    in_queue[u] = 0;
    for (auto [v, e] : complex_.neighbours(u)) {
      const double nd = dist[u] + arc_cost(u, e);
      if (nd < dist[v] - relax_tol) {
        dist[v] = nd;
        parent[v] = e;
        if (++relaxations % nv == 0) {
          std::vector<int> cyc = find_cycle();
          if (!cyc.empty()) {
            Cut cut;
            cut.cls = Eigen::VectorXd::Zero(homology_.betti);
            cut.length = 0.0;
            double reduced = 0.0;
            for (std::size_t i = 0; i + 1 < cyc.size(); ++i) {
              const int ce = complex_.find_edge(cyc[i], cyc[i + 1]);
              const double sgn = cyc[i] < cyc[i + 1] ? 1.0 : -1.0;
              cut.chain[ce] += sgn;
              cut.cls += sgn * homology_.cocycle.row(ce).cast<double>().transpose();
              cut.length += complex_.edge(ce).length;
              reduced += arc_cost(cyc[i], ce);
            }
            if (reduced < -relax_tol) {
              *out = std::move(cut);
              return true;
            }
          }
        }
        if (!in_queue[v]) {
          in_queue[v] = 1;
          queue.push_back(v);
        }
      }
    }
  }
  return false;
}

bool StableNormSolver::dual_feasible(const Eigen::VectorXd& w, double tol) {
  Cut cut;
  if (separate(w, tol, &cut)) {
    cuts_.push_back(std::move(cut));
    return false;
  }
  return true;
}

double StableNormSolver::norm(const Eigen::VectorXd& h) {
  const int b = homology_.betti;
  if (h.size() != b) throw InvalidInput("class has wrong dimension");
  for (int iter = 0; iter < 10000; ++iter) {
    const int m = static_cast<int>(cuts_.size());
    Eigen::MatrixXd a(m, b);
    Eigen::VectorXd rhs(m);
    for (int k = 0; k < m; ++k) {
      a.row(k) = cuts_[k].cls.transpose();
      rhs[k] = cuts_[k].length;
    }
    const LpSolution sol = maximize_free(h, a, rhs);
    if (sol.status != LpStatus::optimal) throw ConvergenceError("stable norm master LP unbounded", 0.0);
    Cut cut;
    if (separate(sol.x, 1e-12, &cut)) {
      cuts_.push_back(std::move(cut));
      continue;
    }
    last_w_ = sol.x;
    last_chain_.coefficients.assign(complex_.edge_count(), 0.0);
    last_chain_.cls = Eigen::VectorXd::Zero(b);
    for (int k = 0; k < m; ++k) {
      if (sol.dual[k] <= 0.0) continue;
      for (auto [e, c] : cuts_[k].chain) last_chain_.coefficients[e] += sol.dual[k] * c;
      last_chain_.cls += sol.dual[k] * cuts_[k].cls;
    }
    return std::max(0.0, sol.value);
  }
  throw ConvergenceError("stable norm cutting planes did not converge", 0.0);
}

double StableNormSolver::axis_dual_radius(int j) {
  const int b = homology_.betti;
  double lo = 0.0;
  double hi = walk_length(complex_, homology_.generator_loops[j]);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(b);
  for (int it = 0; it < 60 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    w[j] = mid;
    if (dual_feasible(w)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double stable_norm(const WeightedComplex& complex, const HomologyModel& homology,
                   const Eigen::VectorXi& h) {
  if (h.size() != homology.betti) throw InvalidInput("class not representable: wrong dimension");
  if (h.isZero()) return 0.0;
  StableNormSolver solver(complex, homology);
  return solver.norm(h);
}

SystoleReport stable_systole(StableNormSolver& solver, int b, int box) {
  if (b < 1) throw InvalidInput("stable systole needs b >= 1");
  if (box < 1) throw InvalidInput("class box must be >= 1");
  SystoleReport best;
  best.kind = SystoleKind::stable;
  best.value = kInf;
  Eigen::VectorXi h = Eigen::VectorXi::Constant(b, -box);
  for (;;) {
    int first = 0;
    while (first < b && h[first] == 0) ++first;
    if (first < b && h[first] > 0) {
      const double v = solver.norm(h);
      if (v < best.value - 1e-12) {
        best.value = v;
        best.cls = h;
        best.chain = solver.last_chain();
      }
    }
    int i = b - 1;
    while (i >= 0 && h[i] == box) h[i--] = -box;
    if (i < 0) break;
    ++h[i];
  }
  double tmin = kInf;
  for (int j = 0; j < b; ++j) tmin = std::min(tmin, solver.axis_dual_radius(j));
  if ((box + 1) * tmin <= best.value) {
    throw CertificationError("class box too small to certify the stable systole; increase the box",
                             best.value - (box + 1) * tmin);
  }
  return best;
}

SystoleReport stable_systole(const WeightedComplex& complex, const HomologyModel& homology, int box) {
  StableNormSolver solver(complex, homology);
  return stable_systole(solver, homology.betti, box);
}

double ball_area(const WeightedComplex& surface, const std::vector<double>& distance, double radius) {
  if (surface.dimension() != 2) throw InvalidInput("ball area needs a surface");
  double area = 0.0;
  const auto& simplices = surface.simplices();
  for (int s = 0; s < static_cast<int>(simplices.size()); ++s) {
    const auto& t = simplices[s];
    area += surface.simplex_volume(s) * sublevel_fraction(distance[t[0]], distance[t[1]], distance[t[2]], radius);
  }
  return area;
}

double ball_area(const WeightedComplex& surface, int center, double radius) {
  if (center < 0 || center >= surface.vertex_count()) throw InvalidInput("center out of range");
  return ball_area(surface, surface_distances(surface, center), radius);
}

}  // namespace systolic
