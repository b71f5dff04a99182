#include <string>

#include <benchmark/benchmark.h>

#include "toricq/polytope_io.hpp"
#include "toricq/quantization.hpp"

using namespace toricq;

namespace {

DelzantPolytope shipped(const char* name) {
  return load_polytope(std::string(TORICQ_DATA_DIR) + "/polytopes/" + name);
}

void BM_IntegrateGaussianOnSquare(benchmark::State& state) {
  const auto region = triangulate(shipped("square_corrected.json"));
  const double s = static_cast<double>(state.range(0));
  const Integrand f = [s](const Eigen::VectorXd& x) { return std::exp(-s * x.squaredNorm()); };
  for (auto _ : state) benchmark::DoNotOptimize(integrate(f, region).value);
}
BENCHMARK(BM_IntegrateGaussianOnSquare)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_NormSquared(benchmark::State& state) {
  const char* file = state.range(0) == 1 ? "cp1_corrected.json" : "square_corrected.json";
  const MabuchiRay ray(SymplecticPotential::guillemin(shipped(file)), 1);
  const IntVector m(static_cast<std::size_t>(state.range(0)), 0);
  for (auto _ : state) benchmark::DoNotOptimize(norm_squared(ray, m, 40.0).tilde_norm_squared);
}
BENCHMARK(BM_NormSquared)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_LegendreInverse(benchmark::State& state) {
  const auto pot = SymplecticPotential::guillemin(shipped("hirzebruch1_corrected.json"));
  const Eigen::VectorXd y = Eigen::Vector2d(1.5, -2.0);
  for (auto _ : state) benchmark::DoNotOptimize(legendre_inverse(pot, y));
}
BENCHMARK(BM_LegendreInverse);

}  // namespace

BENCHMARK_MAIN();
