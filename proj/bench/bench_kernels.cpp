// Serial reference kernels against the OpenMP ones on representative sizes.
//   ./bench_kernels --benchmark_filter=Boundary

#include <benchmark/benchmark.h>

#include <cmath>

#include "semirecon/kernels.hpp"

using namespace semirecon;

namespace {

double smooth(Point p, double t) { return std::sin(2.0 * t + p.x) * (1.0 + p.y) + t; }

struct Rect {
  DomainSpec domain = DomainSpec::rectangle(1.0, 1.0);
  SpatialGrid grid;
  KernelEvaluator ev{domain};

  explicit Rect(int n) : grid(build_grid(domain, n, n)) {}
};

template <auto Fn>
void boundary(benchmark::State& state) {
  const Rect r(static_cast<int>(state.range(0)));
  const auto nodes = boundary_nodes(r.grid);
  const auto g = BoundaryTrace::sample(nodes, TimeGrid(1.0, static_cast<int>(state.range(1))),
                                       [](const BoundaryNode& b, double t) { return smooth(b.position, t); });
  for (auto _ : state) benchmark::DoNotOptimize(Fn(r.ev, g, nodes));
}

template <auto Fn>
void domain(benchmark::State& state) {
  const Rect r(static_cast<int>(state.range(0)));
  const auto h = SpaceTimeField::sample(r.grid, TimeGrid(1.0, static_cast<int>(state.range(1))), smooth);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(r.ev, h));
}

template <auto Project, auto Convolve>
void modal(benchmark::State& state) {
  const Rect r(static_cast<int>(state.range(0)));
  const EigenBasis basis(r.domain, 64);
  const auto h = SpaceTimeField::sample(r.grid, TimeGrid(1.0, static_cast<int>(state.range(1))), smooth);
  for (auto _ : state) benchmark::DoNotOptimize(Convolve(Project(h, basis, 64), basis));
}

}  // namespace

BENCHMARK(boundary<reference::propagate_boundary>)->Name("Boundary/reference")->Args({8, 32})->Unit(benchmark::kMillisecond);
BENCHMARK(boundary<parallel::propagate_boundary>)->Name("Boundary/parallel")->Args({8, 32})->Args({16, 128})->Unit(benchmark::kMillisecond);
BENCHMARK(domain<reference::propagate_domain>)->Name("Domain/reference")->Args({8, 16})->Unit(benchmark::kMillisecond);
BENCHMARK(domain<parallel::propagate_domain>)->Name("Domain/parallel")->Args({8, 16})->Args({64, 128})->Unit(benchmark::kMillisecond);
BENCHMARK(modal<reference::project, reference::convolve_modes>)->Name("ProjectConvolve/reference")->Args({64, 256})->Unit(benchmark::kMillisecond);
BENCHMARK(modal<parallel::project, parallel::convolve_modes>)->Name("ProjectConvolve/parallel")->Args({64, 256})->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
