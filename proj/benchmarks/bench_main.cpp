#include <benchmark/benchmark.h>

#include "surf4/catalog.hpp"
#include "surf4/figures.hpp"
#include "surf4/frame.hpp"
#include "surf4/invariants.hpp"
#include "surf4/meridian.hpp"
#include "surf4/net.hpp"
#include "surf4/reconstruct.hpp"

using namespace surf4;

namespace {

void BM_EvaluateJet(benchmark::State& state) {
  const SurfaceModel torus = catalog("clifford_torus", {1.0});
  const int order = static_cast<int>(state.range(0));
  double u = 0.1;
  for (auto _ : state) {
    u += 1e-6;
    benchmark::DoNotOptimize(evaluate_jet(torus, {u, 0.7}, order));
  }
}
BENCHMARK(BM_EvaluateJet)->Arg(2)->Arg(3);

void BM_InvariantRecord(benchmark::State& state) {
  const SurfaceModel m = catalog("generic_graph");
  const SurfaceJet jet = evaluate_jet(m, {0.2, -0.3}, 2);
  for (auto _ : state) benchmark::DoNotOptimize(invariant_record(jet));
}
BENCHMARK(BM_InvariantRecord);

void BM_CurvatureEllipse(benchmark::State& state) {
  const SurfaceModel m = catalog("generic_graph");
  const SurfaceJet jet = evaluate_jet(m, {0.2, -0.3}, 2);
  for (auto _ : state) benchmark::DoNotOptimize(curvature_ellipse(jet));
}
BENCHMARK(BM_CurvatureEllipse);

void BM_GeometricFrame(benchmark::State& state) {
  const SurfaceModel m = catalog("meridian_sphere", {1.0});
  for (auto _ : state)
    benchmark::DoNotOptimize(geometric_frame(m, {1.1, 0.5}));
}
BENCHMARK(BM_GeometricFrame);

void BM_BuildNet(benchmark::State& state) {
  const SurfaceModel m = catalog("meridian_sphere", {1.0});
  const int n = static_cast<int>(state.range(0));
  const double h = 0.48 / (n - 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(build_net(m, {1.0, 0.4}, n, n, h, h));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_BuildNet)->Arg(9)->Arg(17);

void BM_Reconstruct(benchmark::State& state) {
  const SurfaceModel m = catalog("meridian_sphere", {1.0});
  const int n = static_cast<int>(state.range(0));
  const double h = 0.48 / (n - 1);
  const InvariantFieldGrid g = build_net(m, {1.0, 0.4}, n, n, h, h);
  ReconstructOptions opts;
  opts.residual_threshold = 1.0;
  opts.check_compatibility = false;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        reconstruct(g, g.frames.at(0, 0), g.positions.at(0, 0), opts));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_Reconstruct)->Arg(9)->Arg(17)->Arg(33);

void BM_SphericalCurve(benchmark::State& state) {
  const CurvatureFn kappa = [](double v) {
    return std::array<double, 2>{std::sin(v), std::cos(v)};
  };
  const FrenetTriple start{Vector4(1, 0, 0, 0), Vector4(0, 1, 0, 0),
                           Vector4(0, 0, 1, 0)};
  for (auto _ : state)
    benchmark::DoNotOptimize(SphericalCurve(kappa, 0, 6.0, start));
}
BENCHMARK(BM_SphericalCurve);

}  // namespace

BENCHMARK_MAIN();
