#include <benchmark/benchmark.h>

#include "singlab/data_maps.hpp"
#include "singlab/measure_lab.hpp"
#include "singlab/random.hpp"
#include "singlab/slices.hpp"
#include "singlab/topology.hpp"

namespace {

using namespace singlab;

PlaneDataset gaussian_plane(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Vec2> p(n);
  for (auto& q : p) q = {standard_normal(rng), standard_normal(rng)};
  return PlaneDataset(std::move(p));
}

void BM_Fitter(benchmark::State& state, MapKind kind) {
  const auto x = gaussian_plane(static_cast<std::size_t>(state.range(0)), 7);
  const DataMapSpec spec = kind == MapKind::LsLine   ? DataMapSpec::ls_line()
                           : kind == MapKind::PcLine ? DataMapSpec::pc_line()
                                                     : DataMapSpec::lad_line();
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(spec, x));
}
BENCHMARK_CAPTURE(BM_Fitter, ls, MapKind::LsLine)->Arg(4)->Arg(32);
BENCHMARK_CAPTURE(BM_Fitter, pc, MapKind::PcLine)->Arg(4)->Arg(32);
BENCHMARK_CAPTURE(BM_Fitter, lad, MapKind::LadLine)->Arg(4)->Arg(32);

void BM_ShrunkBoundaryWinding(benchmark::State& state) {
  const SliceField field(SliceSpec{}, DataMapSpec::pc_line());
  for (auto _ : state) benchmark::DoNotOptimize(winding_on_circle(field, {0, 0}, 0.999, 64));
}
BENCHMARK(BM_ShrunkBoundaryWinding);

void BM_LocalizePc(benchmark::State& state) {
  const SliceField field(SliceSpec{}, DataMapSpec::pc_line());
  for (auto _ : state) benchmark::DoNotOptimize(localize_singularities(field, {{-0.7, -0.7}, {0.7, 0.7}}));
}
BENCHMARK(BM_LocalizePc)->Unit(benchmark::kMillisecond);

void BM_DistanceCdf(benchmark::State& state) {
  CdfOptions o;
  o.n_samples = static_cast<std::size_t>(state.range(0));
  o.bootstrap = 0;
  for (auto _ : state) benchmark::DoNotOptimize(distance_cdf(DataMapSpec::pc_line(), o));
}
BENCHMARK(BM_DistanceCdf)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
