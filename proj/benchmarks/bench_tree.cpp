#include <benchmark/benchmark.h>

#include <random>

#include "termsq/tree.hpp"

using namespace termsq;

namespace {

ClippedTree randomTree(std::mt19937_64& rng, std::uint32_t depth) {
  const TreeNode base = TreeNode{1} << depth;
  std::vector<TreeNode> leaves;
  for (TreeNode b = 0; b < base; ++b) {
    if (rng() & 1) leaves.push_back(base | b);
  }
  if (leaves.empty()) leaves.push_back(base);
  return ClippedTree::fromLeaves(depth, leaves);
}

}  // namespace

static void BM_CanonicalRoundTrip(benchmark::State& state) {
  std::mt19937_64 rng(5);
  const auto depth = static_cast<std::uint32_t>(state.range(0));
  const ClippedTree t = randomTree(rng, depth);
  for (auto _ : state) {
    benchmark::DoNotOptimize(treeOfTerms(canonicalTerms(t), depth) == t);
  }
}
BENCHMARK(BM_CanonicalRoundTrip)->Arg(5)->Arg(8);

static void BM_CommonRefinement(benchmark::State& state) {
  std::mt19937_64 rng(6);
  const ClippedTree a = randomTree(rng, 8);
  const ClippedTree b = randomTree(rng, 8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(searchCommonRefinement(a, b, 2));
  }
}
BENCHMARK(BM_CommonRefinement);

static void BM_RefinementWitness(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const ClippedTree t = ClippedTree::fullBinary(7);
  const ClippedTree sub = randomTree(rng, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(refinementSubstitution(t, sub).certified);
  }
}
BENCHMARK(BM_RefinementWitness);
