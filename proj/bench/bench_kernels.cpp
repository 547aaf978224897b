// Serial reference kernels against their OpenMP counterparts.
// Thread count follows OMP_NUM_THREADS.
#include <numbers>

#include <benchmark/benchmark.h>

#include "straintomo/elasticity.hpp"
#include "straintomo/kernels.hpp"
#include "straintomo/mask.hpp"
#include "straintomo/phantoms.hpp"
#include "straintomo/sinogram.hpp"

using namespace straintomo;

namespace {

struct Setup {
  Grid2 grid;
  TensorField2 field;
  std::vector<double> angles;
  OffsetSpec offsets;
  std::vector<double> rows;

  explicit Setup(int n)
      : grid(Grid2::centered(n, 2.4 / n)),
        angles(uniform_angles(90, std::numbers::pi)),
        offsets(default_offsets(grid)) {
    AirySpec spec;
    spec.grid = grid;
    field = airy_stress(spec);
    rows.assign(angles.size() * offsets.n_s, 0.0);
    kernels::parallel::lrt(field, angles, offsets, rows);
  }
};

template <bool Parallel>
void BM_Radon(benchmark::State& state) {
  const Setup s(static_cast<int>(state.range(0)));
  std::vector<double> out(s.rows.size());
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::parallel::radon(s.grid, s.field.c11, s.angles, s.offsets, out);
    } else {
      kernels::serial::radon(s.grid, s.field.c11, s.angles, s.offsets, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_Lrt(benchmark::State& state) {
  const Setup s(static_cast<int>(state.range(0)));
  std::vector<double> out(s.rows.size());
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::parallel::lrt(s.field, s.angles, s.offsets, out);
    } else {
      kernels::serial::lrt(s.field, s.angles, s.offsets, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_Backproject(benchmark::State& state) {
  const Setup s(static_cast<int>(state.range(0)));
  kernels::BackprojectionWeights w{{std::vector<double>(s.angles.size(), 1.0)}};
  std::vector<std::vector<double>> outs(1);
  for (auto _ : state) {
    outs[0].assign(s.grid.size(), 0.0);
    if constexpr (Parallel) {
      kernels::parallel::backproject(s.grid, s.rows, s.angles, s.offsets, w, outs);
    } else {
      kernels::serial::backproject(s.grid, s.rows, s.angles, s.offsets, w, outs);
    }
    benchmark::DoNotOptimize(outs[0].data());
  }
}

template <bool Parallel>
void BM_Assembly(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid2 g = Grid2::centered(n, 2.4 / n);
  const TriMesh mesh = build_mesh(disk_mask(g, 1.0), 4.0 * g.dx);
  const ElasticConstants c{1.0, 0.3, PlaneMode::plane_stress};
  for (auto _ : state) {
    auto k = Parallel ? assembly::parallel(mesh, c) : assembly::serial(mesh, c);
    benchmark::DoNotOptimize(k.nonZeros());
  }
  state.counters["triangles"] = static_cast<double>(mesh.triangles.size());
}

}  // namespace

BENCHMARK(BM_Radon<false>)->Name("radon/serial")->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Radon<true>)->Name("radon/parallel")->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Lrt<false>)->Name("lrt/serial")->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Lrt<true>)->Name("lrt/parallel")->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Backproject<false>)->Name("backproject/serial")->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Backproject<true>)->Name("backproject/parallel")->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Assembly<false>)->Name("assembly/serial")->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Assembly<true>)->Name("assembly/parallel")->Arg(200)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
