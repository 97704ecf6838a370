// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <map>

#include "sigspace/dictionary.hpp"
#include "sigspace/kernels.hpp"
#include "sigspace/theory.hpp"

using namespace sigspace;

namespace {

const Dictionary<Complex>& dft(Index d) {
  static std::map<Index, Dictionary<Complex>> cache;
  auto it = cache.find(d);
  if (it == cache.end()) it = cache.emplace(d, overcomplete_dft(d, 4)).first;
  return it->second;
}

Vec<Complex> probe(Index d) {
  return gaussian_matrix<Complex>(d, 1, 7, 1.0, true).col(0);
}

template <bool Parallel>
void BM_correlate(benchmark::State& state) {
  const auto d = static_cast<Index>(state.range(0));
  const auto& A = dft(d).matrix();
  const Vec<Complex> z = probe(d);
  for (auto _ : state) {
    if constexpr (Parallel) benchmark::DoNotOptimize(kernels::correlate<Complex>(A, z));
    else benchmark::DoNotOptimize(kernels::serial::correlate<Complex>(A, z));
  }
}

template <bool Parallel>
void BM_max_coherence(benchmark::State& state) {
  const auto& A = dft(static_cast<Index>(state.range(0))).matrix();
  for (auto _ : state) {
    if constexpr (Parallel) benchmark::DoNotOptimize(kernels::max_coherence<Complex>(A));
    else benchmark::DoNotOptimize(kernels::serial::max_coherence<Complex>(A));
  }
}

template <bool Parallel>
void BM_neighborhoods(benchmark::State& state) {
  const auto& A = dft(static_cast<Index>(state.range(0))).matrix();
  for (auto _ : state) {
    if constexpr (Parallel) benchmark::DoNotOptimize(kernels::neighborhoods<Complex>(A, 0.9));
    else benchmark::DoNotOptimize(kernels::serial::neighborhoods<Complex>(A, 0.9));
  }
}

template <bool Parallel>
void BM_max_over_supports(benchmark::State& state) {
  const RealMat M = gaussian_matrix<Real>(10, 16, 3, 0.1);
  auto f = [&](const std::vector<Index>& T) {
    RealMat sub(M.rows(), static_cast<Index>(T.size()));
    for (std::size_t j = 0; j < T.size(); ++j) sub.col(static_cast<Index>(j)) = M.col(T[j]);
    return sub.norm();
  };
  const auto k = static_cast<Index>(state.range(0));
  for (auto _ : state) {
    if constexpr (Parallel) benchmark::DoNotOptimize(kernels::max_over_supports(16, k, f));
    else benchmark::DoNotOptimize(kernels::serial::max_over_supports(16, k, f));
  }
}

}  // namespace

BENCHMARK(BM_correlate<false>)->Arg(256)->Arg(1024);
BENCHMARK(BM_correlate<true>)->Arg(256)->Arg(1024);
BENCHMARK(BM_max_coherence<false>)->Arg(128)->Arg(256);
BENCHMARK(BM_max_coherence<true>)->Arg(128)->Arg(256);
BENCHMARK(BM_neighborhoods<false>)->Arg(128)->Arg(256);
BENCHMARK(BM_neighborhoods<true>)->Arg(128)->Arg(256);
BENCHMARK(BM_max_over_supports<false>)->Arg(3)->Arg(5);
BENCHMARK(BM_max_over_supports<true>)->Arg(3)->Arg(5);

BENCHMARK_MAIN();
