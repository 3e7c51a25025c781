#include <benchmark/benchmark.h>

#include "anonmech/anonmech.hpp"

namespace {

using namespace anonmech;
using Q = Rational;

// T periods, n evenly spaced atoms, unit arrivals of every type each period.
Market grid_market(std::size_t periods, std::size_t atoms, bool bounded) {
  Market m;
  m.periods = periods;
  for (std::size_t i = 1; i <= atoms; ++i) m.atoms.push_back(Q(static_cast<long>(i), static_cast<long>(atoms)));
  for (auto& a : m.atoms) a.canonicalize();
  m.mass.assign(periods, std::vector<Q>(atoms, Q(1, static_cast<long>(atoms))));
  m.inventory = bounded ? Inventory::of(Q(static_cast<long>(periods), 2)) : Inventory::unbounded();
  m.discounts = DiscountSchedule::uniform(periods);
  for (std::size_t t = 0; t < periods; ++t) m.discounts.delta[t] = Q(static_cast<long>(20 - t), 20);
  return m;
}

template <class S>
void BM_Evaluate(benchmark::State& state) {
  const auto m = grid_market(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)), true);
  Evaluator<S> ev(m);
  const auto a = random_start(ev.instance(), 7);
  for (auto _ : state) benchmark::DoNotOptimize(ev.evaluate(a));
}
BENCHMARK(BM_Evaluate<Q>)->Args({3, 3})->Args({6, 10})->Args({12, 20});
BENCHMARK(BM_Evaluate<double>)->Args({3, 3})->Args({6, 10})->Args({12, 20});

template <class S>
void BM_SolveCoordinate(benchmark::State& state) {
  const auto m = grid_market(4, static_cast<std::size_t>(state.range(0)), true);
  Evaluator<S> ev(m);
  const auto a = random_start(ev.instance(), 3);
  const auto lp = build_coordinate_lp(ev, a, 1);
  for (auto _ : state) benchmark::DoNotOptimize(solve_coordinate(lp));
}
BENCHMARK(BM_SolveCoordinate<Q>)->Arg(3)->Arg(10)->Arg(20);
BENCHMARK(BM_SolveCoordinate<double>)->Arg(3)->Arg(10)->Arg(20);

template <class S>
void BM_CoordinateAscent(benchmark::State& state) {
  const auto m = grid_market(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)), true);
  AscentOptions<S> opts;
  opts.starts = 4;
  for (auto _ : state) benchmark::DoNotOptimize(coordinate_ascent<S>(m, opts));
}
BENCHMARK(BM_CoordinateAscent<Q>)->Args({2, 2})->Args({3, 5})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CoordinateAscent<double>)->Args({2, 2})->Args({3, 5})->Args({6, 10})->Unit(benchmark::kMillisecond);

void BM_BruteForce(benchmark::State& state) {
  const auto m = grid_market(static_cast<std::size_t>(state.range(0)), 3, false);
  Evaluator<Q> ev(m);
  const auto grid = OracleGrid<Q>::with_levels({Q(0), Q(1, 2), Q(1)});
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_optimal(ev, grid));
}
BENCHMARK(BM_BruteForce)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
