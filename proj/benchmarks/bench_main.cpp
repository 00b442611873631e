#include <benchmark/benchmark.h>

#include "deltaloop/curve.hpp"
#include "deltaloop/operator1d.hpp"
#include "deltaloop/strip.hpp"
#include "deltaloop/transverse.hpp"

using namespace deltaloop;

namespace {

const ArcCurve& ellipse() {
  static const ArcCurve c = build_curve(CurveSpec::ellipse(2.0, 1.0));
  return c;
}

void BM_BuildEllipse(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_curve(CurveSpec::ellipse(2.0, 1.0)).length());
}
BENCHMARK(BM_BuildEllipse)->Unit(benchmark::kMillisecond);

void BM_Eigenvalues1D(benchmark::State& state) {
  const auto op = build_S(ellipse(), {static_cast<std::size_t>(state.range(0)), Boundary::periodic});
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues_1d(op, 20).values.back());
}
BENCHMARK(BM_Eigenvalues1D)->Arg(512)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_CountBelow(benchmark::State& state) {
  const auto op = build_U(ellipse(), 0.05, Sign::minus, {static_cast<std::size_t>(state.range(0)), Boundary::periodic});
  for (auto _ : state) benchmark::DoNotOptimize(count_below(op, 2500.0));
}
BENCHMARK(BM_CountBelow)->Arg(1024)->Arg(8192)->Unit(benchmark::kMillisecond);

void BM_SolveZetaPlus(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(solve_zeta_plus(0.1, 100.0).zeta);
}
BENCHMARK(BM_SolveZetaPlus);

void BM_SolveZetaMinus(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(solve_zeta_minus(0.1, 100.0, 1.0).zeta);
}
BENCHMARK(BM_SolveZetaMinus);

void BM_TransverseOracle(benchmark::State& state) {
  const TransverseProblem p{1.0, 10.0, 1.0, Sign::minus};
  for (auto _ : state) benchmark::DoNotOptimize(fd_transverse_oracle(p, 4000, 2).values[1]);
}
BENCHMARK(BM_TransverseOracle)->Unit(benchmark::kMillisecond);

void BM_StripLowest(benchmark::State& state) {
  const auto geometry = StripGeometry::from_curve(build_curve(CurveSpec::circle(1.0)));
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto op = assemble_strip(geometry, 0.1, 40.0, {4 * n, n}, Sign::minus);
  for (auto _ : state) benchmark::DoNotOptimize(strip_eigenpairs(op, 3).values[0]);
}
BENCHMARK(BM_StripLowest)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
