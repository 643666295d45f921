#include <benchmark/benchmark.h>

#include <random>

#include "cpgenus/bieberbach.hpp"
#include "cpgenus/classdata.hpp"
#include "cpgenus/cplattice.hpp"
#include "cpgenus/cyclotomic.hpp"
#include "cpgenus/linalg.hpp"

using namespace cpgenus;

namespace {

linalg::IntMatrix random_matrix(std::size_t n, std::mt19937_64& rng) {
  linalg::IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = static_cast<long>(rng() % 201) - 100;
  return m;
}

void BM_Hnf(benchmark::State& state) {
  std::mt19937_64 rng(7);
  auto m = random_matrix(static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(linalg::hnf(m));
}
BENCHMARK(BM_Hnf)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_Maillet(benchmark::State& state) {
  auto p = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(classdata::maillet_h_minus(p));
}
BENCHMARK(BM_Maillet)->Arg(23)->Arg(31)->Arg(61);

void BM_PrincipalCube(benchmark::State& state) {
  auto cube = cyclo::ideal_power(cyclo::split_prime_ideal(23, 47), 3);
  for (auto _ : state) benchmark::DoNotOptimize(cyclo::is_principal(cube));
}
BENCHMARK(BM_PrincipalCube)->Unit(benchmark::kMillisecond);

void BM_Decompose(benchmark::State& state) {
  auto h = classdata::builtin_class_group(7);
  auto refs = classdata::builtin_references(7);
  std::vector<cyclo::CycloIdeal> ideals{cyclo::split_prime_ideal(7, 29), cyclo::split_prime_ideal(7, 43)};
  std::mt19937_64 rng(11);
  auto m = lattice::construct(7, {2, 1, 1}, ideals);
  m = lattice::conjugate(m, linalg::random_unimodular(m.rank(), rng, 3, 2 * m.rank()));
  for (auto _ : state) benchmark::DoNotOptimize(lattice::decompose(m, h, refs));
}
BENCHMARK(BM_Decompose)->Unit(benchmark::kMillisecond);

void BM_Enumerate(benchmark::State& state) {
  auto h = classdata::builtin_class_group(23);
  auto n = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(bieberbach::enumerate(n, 23, h));
}
BENCHMARK(BM_Enumerate)->Arg(24)->Arg(46);

}  // namespace

BENCHMARK_MAIN();
