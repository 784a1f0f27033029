// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "dicke/exact_oracle.hpp"
#include "dicke/hp_series.hpp"
#include "dicke/sparse.hpp"
#include "dicke/sweep_io.hpp"
#include "dicke/variational_solver.hpp"

using namespace dicke;

namespace {

const ModelParams kParams{1.0, 1.0, HalfInteger::from_double(20)};

const CsrMatrix& hamiltonian() {
  static const CsrMatrix h = build_hamiltonian(kParams, BasisSpec{kParams.j, 512});
  return h;
}

template <void (*Kernel)(const CsrMatrix&, std::span<const double>, std::span<double>)>
void BM_matvec(benchmark::State& state) {
  const CsrMatrix& h = hamiltonian();
  const auto n = static_cast<std::size_t>(h.dimension());
  std::vector<double> x(n, 1.0), y(n);
  for (auto _ : state) {
    Kernel(h, x, y);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_matvec<matvec_serial>)->Name("matvec/serial");
BENCHMARK(BM_matvec<matvec>)->Name("matvec/parallel");

template <double (*Kernel)(HalfInteger, int)>
void BM_sup_deviation(benchmark::State& state) {
  const HalfInteger j = HalfInteger::from_double(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(j, 1001));
}
BENCHMARK(BM_sup_deviation<sup_deviation_serial>)->Name("sup_deviation/serial")->Arg(100)->Arg(1000);
BENCHMARK(BM_sup_deviation<sup_deviation>)->Name("sup_deviation/parallel")->Arg(100)->Arg(1000);

template <std::vector<double> (*Kernel)(const ModelParams&, double, int)>
void BM_scan(benchmark::State& state) {
  const ModelParams p{1.0, 1.0, HalfInteger::from_double(1000)};
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(p, std::sqrt(p.j.atoms()), 512));
}
BENCHMARK(BM_scan<scan_reduced_energy_serial>)->Name("scan_reduced_energy/serial");
BENCHMARK(BM_scan<scan_reduced_energy>)->Name("scan_reduced_energy/parallel");

SweepSpec finite_j_sweep(int workers) {
  SweepSpec spec;
  spec.task = TaskKind::MeanFieldFiniteJ;
  spec.axes.push_back(Axis{AxisParam::Gamma, 0.0, 2.0, 64, Spacing::Linear, {}});
  spec.workers = workers;
  return spec;
}

void BM_sweep_serial(benchmark::State& state) {
  const SweepSpec spec = finite_j_sweep(1);
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep_serial(spec));
}
BENCHMARK(BM_sweep_serial)->Name("run_sweep/serial");

void BM_sweep(benchmark::State& state) {
  const SweepSpec spec = finite_j_sweep(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(spec));
}
BENCHMARK(BM_sweep)->Name("run_sweep/workers")->Arg(1)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
