// Serial reference vs OpenMP for the independent-work kernels:
// per-sample trap inversion and the embedding multi-start.

#include <map>

#include <benchmark/benchmark.h>

#include "ptfourwell/init.hpp"
#include "ptfourwell/physical_map.hpp"

using namespace ptfw;

namespace {

struct InversionFixture {
  physical::TrapGeometry trap = physical::lattice_trap(-122, -80, -122, 4, 4, 0.5);
  physical::GaussianAnsatz widths;
  double ref = 0.0;
  std::vector<physical::OuterTargets> series;

  explicit InversionFixture(int samples) {
    const auto k = physical::PhysicalConstants::rubidium87(1e5, 10.9);
    widths = physical::optimize_widths(trap, physical::reduced_interaction(k, 2e-6),
                                       physical::harmonic_width_guess(trap))
                 .ansatz;
    ref = physical::energy_reference(physical::matrix_elements(trap, widths, 0.0));
    for (int i = 0; i < samples; ++i) {
      const double f = static_cast<double>(i) / samples;
      series.push_back(physical::outer_targets({-122.0 + 8 * f, -122.0 - 8 * f, -0.03 * f, 0.03 * f},
                                               trap, widths, ref));
    }
  }
};

const InversionFixture& fixture(int samples) {
  static std::map<int, InversionFixture> cache;
  auto it = cache.find(samples);
  if (it == cache.end()) it = cache.emplace(samples, InversionFixture(samples)).first;
  return it->second;
}

void BM_InvertSeries(benchmark::State& state, physical::Execution exec) {
  const auto& f = fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(physical::invert_trap_series(f.series, f.trap, f.widths, f.ref, exec));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Embedding(benchmark::State& state, init::Execution exec) {
  init::EmbeddingSpec spec;
  spec.middle = init::two_mode_superposition(1.0, 0.5, 0.3);
  spec.n0 = 10.25;
  spec.n3 = 0.25;
  spec.gamma = 0.5;
  spec.d = 0.4;
  init::EmbeddingOptions opts;
  opts.execution = exec;
  opts.grid = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(init::embed_pt_state(spec, opts));
}

}  // namespace

BENCHMARK_CAPTURE(BM_InvertSeries, serial, physical::Execution::serial)->Arg(64)->Arg(512);
BENCHMARK_CAPTURE(BM_InvertSeries, openmp, physical::Execution::openmp)->Arg(64)->Arg(512);
BENCHMARK_CAPTURE(BM_Embedding, serial, init::Execution::serial)->Arg(8)->Arg(16);
BENCHMARK_CAPTURE(BM_Embedding, openmp, init::Execution::parallel)->Arg(8)->Arg(16);

BENCHMARK_MAIN();
