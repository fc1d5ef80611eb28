#include <benchmark/benchmark.h>

#include <random>

#include "termsq/term.hpp"

using namespace termsq;

namespace {

Term randomTerm(std::mt19937_64& rng, std::uint32_t arity) {
  std::vector<VariableId> support;
  for (std::uint32_t i = 0; i < arity; ++i) support.emplace_back(i);
  std::vector<bool> bits(std::uint64_t{1} << arity);
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = rng() & 1;
  return Term::fromTable(support, bits);
}

}  // namespace

static void BM_Equiv(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const Term a = randomTerm(rng, static_cast<std::uint32_t>(state.range(0)));
  const Term b = randomTerm(rng, static_cast<std::uint32_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(equiv(a, b));
  }
}
BENCHMARK(BM_Equiv)->Arg(8)->Arg(12)->Arg(16);

static void BM_Substitute(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const Term t = randomTerm(rng, 8);
  Substitution phi(Substitution::Tail::Identity);
  for (std::uint32_t k = 0; k < 8; ++k) {
    phi.set(VariableId(k), randomTerm(rng, 4));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(substitute(t, phi));
  }
}
BENCHMARK(BM_Substitute);

static void BM_Normalize(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const Term t = randomTerm(rng, static_cast<std::uint32_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(normalize(t));
  }
}
BENCHMARK(BM_Normalize)->Arg(8)->Arg(14);

static void BM_Determines(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::vector<Term> family;
  for (int i = 0; i < 6; ++i) family.push_back(randomTerm(rng, 8));
  const Term target = randomTerm(rng, 8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(determines(family, target));
  }
}
BENCHMARK(BM_Determines);
