#include <doctest.h>

#include <random>

#include "termsq/tree.hpp"

using namespace termsq;

namespace {

ClippedTree figureTree() {
  return ClippedTree::fromLeafStrings(3, {"000", "001", "011", "110", "111"});
}

std::vector<std::string> memberStrings(const Front& f) {
  std::vector<std::string> out;
  for (TreeNode n : f.members) out.push_back(nodeString(n));
  return out;
}

}  // namespace

TEST_CASE("validation accepts the worked trees and counts fronts") {
  const TreeReport full = validateTree(ClippedTree::fullBinary(3));
  CHECK(full.valid);
  CHECK(full.fullFronts == 3);
  const TreeReport fig = validateTree(figureTree());
  CHECK(fig.valid);
  CHECK(fig.fullFronts == 2);
}

TEST_CASE("validation pinpoints a childless internal node") {
  // 0 is present without any child.
  const ClippedTree broken = ClippedTree::fromNodesUnchecked(
      2, {nodeFromString(""), nodeFromString("0"), nodeFromString("1"),
          nodeFromString("10"), nodeFromString("11")});
  const TreeReport rep = validateTree(broken);
  CHECK_FALSE(rep.valid);
  REQUIRE(!rep.offenders.empty());
  CHECK(nodeString(rep.offenders.front()) == "0");
}

TEST_CASE("splitting fronts of the worked trees") {
  const auto full = splittingFronts(ClippedTree::fullBinary(3));
  REQUIRE(full.size() == 3);
  CHECK(memberStrings(full[0]) == std::vector<std::string>{""});
  CHECK(memberStrings(full[1]) == std::vector<std::string>{"0", "1"});
  CHECK(full[2].members.size() == 4);

  const auto fig = splittingFronts(figureTree());
  REQUIRE(fig.size() == 2);
  CHECK(memberStrings(fig[0]) == std::vector<std::string>{""});
  CHECK(memberStrings(fig[1]) == std::vector<std::string>{"0", "11"});

  const ClippedTree branch = ClippedTree::fromLeafStrings(3, {"010"});
  CHECK(splittingFronts(branch).empty());
}

TEST_CASE("canonical terms of the worked trees") {
  const auto ts = canonicalTerms(figureTree());
  REQUIRE(ts.size() == 3);
  CHECK(equiv(ts[0], Term::variable(VariableId(0))));
  const Term t1 = Term::fromFunction(
      {VariableId(0), VariableId(1)},
      [](const std::vector<bool>& a) { return a[0] ? true : a[1]; });
  CHECK(equiv(ts[1], t1));
  const Term t2 = Term::fromFunction(
      {VariableId(0), VariableId(1), VariableId(2)},
      [](const std::vector<bool>& a) {
        if (!a[0] && !a[1]) return a[2];
        if (!a[0] && a[1]) return true;
        return a[1];
      });
  CHECK(equiv(ts[2], t2));

  const auto full = canonicalTerms(ClippedTree::fullBinary(2));
  CHECK(equiv(full[0], Term::variable(VariableId(0))));
  CHECK(equiv(full[1], Term::variable(VariableId(1))));

  const auto single = canonicalTerms(ClippedTree::fromLeafStrings(3, {"000"}));
  for (const Term& t : single) {
    CHECK(t == Term::constant(false));
  }
}

TEST_CASE("trees from terms") {
  const auto ts = canonicalTerms(figureTree());
  CHECK(treeOfTerms(ts, 3) == figureTree());

  const std::vector<Term> ones{Term::constant(true), Term::constant(true)};
  CHECK(treeOfTerms(ones, 2) == ClippedTree::fromLeafStrings(2, {"11"}));

  const std::vector<Term> frees{Term::variable(VariableId(0)),
                                Term::variable(VariableId(1))};
  CHECK(treeOfTerms(frees, 2) == ClippedTree::fullBinary(2));
}

TEST_CASE("round trip over sampled trees") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 300; ++i) {
    const std::uint32_t depth = 3 + i % 4;
    const TreeNode base = TreeNode{1} << depth;
    std::vector<TreeNode> leaves;
    for (TreeNode b = 0; b < base; ++b) {
      if (rng() & 1) leaves.push_back(base | b);
    }
    if (leaves.empty()) leaves.push_back(base);
    const ClippedTree t = ClippedTree::fromLeaves(depth, leaves);
    CHECK(treeOfTerms(canonicalTerms(t), depth) == t);
  }
}

TEST_CASE("refinement substitution reproduces the worked values") {
  const ClippedTree sub = ClippedTree::fromLeafStrings(3, {"110", "111"});
  const RefinementWitness w = refinementSubstitution(figureTree(), sub);
  CHECK(w.certified == 2);
  CHECK(equiv(w.phi.image(VariableId(0)), Term::constant(true)));
  CHECK(equiv(w.phi.image(VariableId(1)), Term::variable(VariableId(1))));
}

TEST_CASE("refining a tree by itself certifies the identity") {
  const ClippedTree t = figureTree();
  const RefinementWitness w = refinementSubstitution(t, t);
  CHECK(w.certified == 2);
  for (std::uint32_t n = 0; n < w.certified; ++n) {
    // phi_n is x'_n, i.e. the primed copy of the same choice.
    CHECK(equiv(w.phi.image(VariableId(n)),
                Term::variable(VariableId(2 * n + 1))));
  }
}

TEST_CASE("a single branch certifies constant choices") {
  const ClippedTree t = ClippedTree::fullBinary(3);
  const ClippedTree branch = ClippedTree::fromLeafStrings(3, {"101"});
  const RefinementWitness w = refinementSubstitution(t, branch);
  CHECK(w.certified == 3);
  CHECK(equiv(w.phi.image(VariableId(0)), Term::constant(true)));
  CHECK(equiv(w.phi.image(VariableId(1)), Term::constant(false)));
  CHECK(equiv(w.phi.image(VariableId(2)), Term::constant(true)));
}

TEST_CASE("refinement rejects bad inputs") {
  CHECK_THROWS(refinementSubstitution(figureTree(),
                                      ClippedTree::fromLeafStrings(3, {"010"})));
  CHECK_THROWS(refinementSubstitution(figureTree(),
                                      ClippedTree::fromLeafStrings(2, {"11"})));
}

TEST_CASE("the witness certifies the order, with a window bound") {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 100; ++i) {
    const std::uint32_t depth = 4 + i % 3;
    const TreeNode base = TreeNode{1} << depth;
    std::vector<TreeNode> leaves;
    for (TreeNode b = 0; b < base; ++b) {
      if (rng() & 1) leaves.push_back(base | b);
    }
    if (leaves.empty()) leaves.push_back(base);
    const ClippedTree t = ClippedTree::fromLeaves(depth, leaves);
    std::vector<TreeNode> kept;
    for (TreeNode leaf : t.leaves()) {
      if (rng() & 1) kept.push_back(leaf);
    }
    if (kept.empty()) kept.push_back(t.leaves().front());
    const ClippedTree sub = ClippedTree::fromLeaves(depth, kept);
    const RefinementWitness w = refinementSubstitution(t, sub);
    const auto tsT = canonicalTerms(t);
    const auto tsS = canonicalTerms(sub);
    const auto primed = [](const Term& term) {
      return substitute(term, [](VariableId v) {
        return Term::variable(VariableId(2 * v.raw + 1));
      });
    };
    for (std::uint32_t l = 0; l < w.certified && l < depth; ++l) {
      CHECK(equiv(substitute(tsT[l], w.phi), primed(tsS[l])));
    }
    // Order preservation under the tree map: the composed terms trace a
    // subtree of the original image.
    std::vector<Term> composed;
    for (std::uint32_t l = 0; l < depth && l < w.certified; ++l) {
      composed.push_back(substitute(tsT[l], w.phi));
    }
    if (composed.size() == depth) {
      const ClippedTree image = treeOfTerms(composed, depth);
      for (TreeNode n : image.nodes()) CHECK(t.hasNode(n));
    }
  }
}

TEST_CASE("the tree map is not injective") {
  // Distinct sequences, equal images: swap the two free choices behind
  // a forced first bit.
  const std::vector<Term> a{Term::constant(false),
                            Term::variable(VariableId(0)),
                            Term::variable(VariableId(1))};
  const std::vector<Term> b{Term::constant(false),
                            Term::variable(VariableId(1)),
                            Term::variable(VariableId(0))};
  CHECK_FALSE(equiv(a[1], b[1]));
  CHECK(treeOfTerms(a, 3) == treeOfTerms(b, 3));
}

TEST_CASE("early canonical terms determine the choice variables") {
  // For each front fully below the depth, x_n is determined by the
  // terms up to the front's deepest member.
  std::mt19937_64 rng(33);
  for (int i = 0; i < 50; ++i) {
    const std::uint32_t depth = 5;
    const TreeNode base = TreeNode{1} << depth;
    std::vector<TreeNode> leaves;
    for (TreeNode b = 0; b < base; ++b) {
      if (rng() & 1) leaves.push_back(base | b);
    }
    if (leaves.empty()) leaves.push_back(base);
    const ClippedTree t = ClippedTree::fromLeaves(depth, leaves);
    const auto fronts = splittingFronts(t);
    const auto ts = canonicalTerms(t);
    for (const Front& f : fronts) {
      std::uint32_t l = 0;
      for (TreeNode n : f.members) l = std::max(l, nodeLength(n) + 1);
      if (l > depth) continue;
      CHECK(determines(std::span<const Term>(ts.data(), l),
                       Term::variable(VariableId(f.index))));
    }
  }
}

TEST_CASE("common refinement search") {
  const ClippedTree full = ClippedTree::fullBinary(4);
  const auto self = searchCommonRefinement(full, full, 3);
  REQUIRE(self.has_value());
  CHECK(*self == full);

  // Two trees sharing only one branch have no splitting refinement.
  const ClippedTree left = ClippedTree::fromLeafStrings(
      3, {"000", "001", "010", "011", "111"});
  const ClippedTree right = ClippedTree::fromLeafStrings(
      3, {"100", "101", "110", "111"});
  CHECK_FALSE(searchCommonRefinement(left, right, 1).has_value());

  const auto fig = searchCommonRefinement(figureTree(),
                                          ClippedTree::fullBinary(3), 1);
  REQUIRE(fig.has_value());
  CHECK(*fig == figureTree());
}
