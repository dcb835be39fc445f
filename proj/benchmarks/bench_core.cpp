#include <benchmark/benchmark.h>

#include <random>

#include "systolic/convex.hpp"
#include "systolic/filling.hpp"
#include "systolic/generators.hpp"
#include "systolic/homology.hpp"
#include "systolic/inequality.hpp"
#include "systolic/jacobi.hpp"
#include "systolic/lattice.hpp"
#include "systolic/systoles.hpp"

using namespace systolic;

static void BM_ShortestVector(benchmark::State& state) {
  const auto lattices = random_lattices(static_cast<int>(state.range(0)), 32, 5);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(shortest_vector(lattices[i++ % lattices.size()]).length);
}
BENCHMARK(BM_ShortestVector)->DenseRange(2, 8, 2);

static void BM_JohnEllipsoid(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::vector<Eigen::VectorXd> facets;
  for (int j = 0; j < 4 * d; ++j) {
    Eigen::VectorXd a(d);
    for (int i = 0; i < d; ++i) a[i] = g(rng);
    facets.push_back(a);
  }
  const SymmetricBody body(d, facets);
  for (auto _ : state) {
    const auto e = john_inscribed(body);
    benchmark::DoNotOptimize(decompose_rank_one(body, e).residual);
  }
}
BENCHMARK(BM_JohnEllipsoid)->DenseRange(2, 6, 2);

static void BM_HomotopySystole(benchmark::State& state) {
  const auto t = flat_torus(catalog_lattice("A2"), static_cast<int>(state.range(0)));
  const auto h = build_homology(t);
  for (auto _ : state) benchmark::DoNotOptimize(homotopy_systole(t, h).value);
}
BENCHMARK(BM_HomotopySystole)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_StableNorm(benchmark::State& state) {
  const auto t = perturbed_lengths(flat_torus(catalog_lattice("A2"), static_cast<int>(state.range(0))), 0.2, 1);
  const auto h = build_homology(t);
  for (auto _ : state) {
    StableNormSolver solver(t, h);  // cold: cut generation included
    benchmark::DoNotOptimize(solver.norm(Eigen::VectorXi(Eigen::Vector2i(3, -2))));
  }
}
BENCHMARK(BM_StableNorm)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_PhiSystoleProjectivePlane(benchmark::State& state) {
  const auto rp = round_rp2(static_cast<int>(state.range(0)));
  const auto phi = build_homology(rp).z2_class(0);
  for (auto _ : state) benchmark::DoNotOptimize(phi_systole(rp, phi).value);
}
BENCHMARK(BM_PhiSystoleProjectivePlane)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

static void BM_JacobiBundle(benchmark::State& state) {
  const auto c = twisted_circle_bundle(catalog_lattice("A2"), static_cast<int>(state.range(0)), 0.1, 3);
  const auto h = build_homology(c);
  const auto body = stable_unit_ball(c, h);
  const auto d = decompose_rank_one(body, john_inscribed(body));
  for (auto _ : state) benchmark::DoNotOptimize(jacobian_certificate(build_jacobi_map(c, h, d)).max_jacobian);
}
BENCHMARK(BM_JacobiBundle)->Arg(6)->Arg(12)->Unit(benchmark::kMillisecond);

static void BM_DiamondHemisphere(benchmark::State& state) {
  const auto f = filling_from_boundary(round_hemisphere(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(diamond_certificate(f).certified_lower_bound);
}
BENCHMARK(BM_DiamondHemisphere)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
