#include <ridge/linalg.hpp>
#include <ridge/pde/diffusion_model.hpp>
#include <ridge/random.hpp>
#include <ridge/ridge.hpp>

#include <benchmark/benchmark.h>

using namespace ridge;

namespace {

Matrix random_spd(Index n, std::uint64_t seed) {
  SampleStream stream(seed, 0);
  Matrix g(n, n);
  stream.normals({g.data(), static_cast<std::size_t>(g.size())});
  return g * g.transpose() / static_cast<double>(n) + 0.5 * Matrix::Identity(n, n);
}

pde::DiffusionModel point_pair(Index grid) {
  pde::ScenarioOptions opts;
  opts.kind = pde::Scenario::PointPair;
  opts.alpha = 10.0;
  return pde::DiffusionModel(pde::Mesh2D(grid), opts);
}

void BM_SymEig(benchmark::State& state) {
  const Matrix a = random_spd(state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(sym_eig(a));
}
BENCHMARK(BM_SymEig)->Arg(16)->Arg(64)->Arg(144)->Unit(benchmark::kMillisecond);

void BM_GeneralizedEig(benchmark::State& state) {
  const SpdMatrix h(random_spd(state.range(0), 2));
  const SpdMatrix sigma(random_spd(state.range(0), 3));
  for (auto _ : state) benchmark::DoNotOptimize(generalized_eig(h, sigma));
}
BENCHMARK(BM_GeneralizedEig)->Arg(16)->Arg(64)->Arg(144)->Unit(benchmark::kMillisecond);

void BM_PdeJacobian(benchmark::State& state) {
  const pde::DiffusionModel model = point_pair(state.range(0));
  Vector x(model.input_dim());
  SampleStream(4, 0).normals({x.data(), static_cast<std::size_t>(x.size())});
  for (auto _ : state) benchmark::DoNotOptimize(model.jacobian(x));
}
BENCHMARK(BM_PdeJacobian)->Arg(8)->Arg(12)->Arg(24)->Unit(benchmark::kMicrosecond);

void BM_EstimateH(benchmark::State& state) {
  const pde::Mesh2D mesh(12);
  const pde::DiffusionModel model = point_pair(12);
  const GaussianMeasure mu(Vector::Zero(mesh.cell_count()), pde::build_field_covariance(mesh, 0.15));
  const Execution exec{static_cast<unsigned>(state.range(1))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_h(model, mu, SampleStream(5, 0), state.range(0), exec));
  }
}
BENCHMARK(BM_EstimateH)->Args({100, 1})->Args({100, 4})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
