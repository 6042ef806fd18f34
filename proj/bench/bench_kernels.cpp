// Serial reference kernels against their OpenMP versions.

#include <benchmark/benchmark.h>

#include "twistor/continuation.hpp"
#include "twistor/metric.hpp"
#include "twistor/sphere_map.hpp"
#include "twistor/taming.hpp"

using namespace twistor;

namespace {

std::vector<Point> scan_points(int n) {
  GridSpec spec;
  spec.half_width = 0.4;
  spec.n = n;
  return grid_points(spec);
}

template <RegionReport (*Scan)(const MetricChart&, const std::vector<Point>&)>
void BM_RegionScan(benchmark::State& state) {
  const MetricChart chart = catalog("fubini-study-cp2");
  const std::vector<Point> pts = scan_points(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Scan(chart, pts));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(pts.size()));
}

template <CROperatorMatrix (*Linearize)(const DiscretizedSphereMap&, const TargetModel&, int)>
void BM_Linearize(benchmark::State& state) {
  const DiscretizedSphereMap u = bolt_lift(static_cast<int>(state.range(0)));
  const TargetModel target = bolt_product_target(1);
  for (auto _ : state) benchmark::DoNotOptimize(Linearize(u, target, 8));
}

}  // namespace

BENCHMARK(BM_RegionScan<region_scan_serial>)->Name("region_scan/serial")->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RegionScan<region_scan>)->Name("region_scan/openmp")->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Linearize<linearize_serial>)->Name("linearize/serial")->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Linearize<linearize>)->Name("linearize/openmp")->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
