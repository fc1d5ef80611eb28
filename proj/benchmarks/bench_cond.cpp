#include <benchmark/benchmark.h>

#include "termsq/build.hpp"

using namespace termsq;

static void BM_ValidateDiagonal(benchmark::State& state) {
  const RCondPtr d = buildRDelta();
  Window w;
  w.rows = 6;
  w.cols = 6;
  w.coefCap = static_cast<std::uint64_t>(state.range(0));
  w.cohereBlocks = 4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(validateR(*d, w).valid);
  }
}
BENCHMARK(BM_ValidateDiagonal)->Arg(10)->Arg(50);

static void BM_SigmaStack(benchmark::State& state) {
  const RCondPtr q = stackConditions(buildRDelta(), buildRMult());
  const TermGridPtr sig = sigma(q);
  for (auto _ : state) {
    for (std::uint32_t n = 0; n < 6; ++n) {
      for (std::uint32_t m = 0; m < 12; ++m) {
        benchmark::DoNotOptimize(sig->at(n, m));
      }
    }
  }
}
BENCHMARK(BM_SigmaStack);

static void BM_BuildAndValidate(benchmark::State& state) {
  PresentedSubstitution phi;
  phi.set(VariableId::fromPair(0, 0),
          termNot(Term::variable(VariableId::fromPair(0, 0))));
  Window w;
  w.rows = 5;
  w.cols = 8;
  w.coefCap = 6;
  w.cohereBlocks = 4;
  for (auto _ : state) {
    auto built = matrixToCondition(composedMatrix(
        scheduleMatrix(), std::make_shared<PresentedSubstitution>(phi)));
    benchmark::DoNotOptimize(
        validateR(*std::get<RCondPtr>(built), w).valid);
  }
}
BENCHMARK(BM_BuildAndValidate);
