#include <benchmark/benchmark.h>

#include "schmidtfock/bipartite.hpp"
#include "schmidtfock/fock.hpp"
#include "schmidtfock/pairing.hpp"
#include "schmidtfock/random.hpp"
#include "schmidtfock/rdm.hpp"

namespace {

using namespace schmidtfock;

void BM_EnumerateBosonBasis(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_basis(Statistics::boson, d, 5).size());
}
BENCHMARK(BM_EnumerateBosonBasis)->Arg(6)->Arg(10)->Arg(14);

void BM_RankUnrankFermion(benchmark::State& state) {
  const FockSpace space(Statistics::fermion, 20, 10);
  std::uint64_t key = 0;
  for (auto _ : state) {
    const OccupationVector occ = space.unrank(key);
    benchmark::DoNotOptimize(space.rank(occ));
    key = (key + 7919) % space.dimension();
  }
}
BENCHMARK(BM_RankUnrankFermion);

void BM_RdmRandomState(benchmark::State& state) {
  Rng rng(1);
  const PureState psi = random_state(Statistics::fermion, 10, 5, rng);
  const int M = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rdm(psi, M).trace());
}
BENCHMARK(BM_RdmRandomState)->DenseRange(1, 3);

void BM_SchmidtDecompose(benchmark::State& state) {
  Rng rng(2);
  const PureState psi = random_state(Statistics::boson, 6, 5, rng);
  for (auto _ : state) benchmark::DoNotOptimize(schmidt_decompose(build_gamma(psi, 2)).rank);
}
BENCHMARK(BM_SchmidtDecompose);

void BM_PairingGroundState(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PairingModel model = PairingModel::uniform(Statistics::fermion, n, n / 2, 1.0, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(ground_state(model).energy);
}
BENCHMARK(BM_PairingGroundState)->Arg(6)->Arg(8)->Arg(10);

}  // namespace
BENCHMARK_MAIN();
