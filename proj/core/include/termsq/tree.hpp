#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "termsq/term.hpp"

namespace termsq {

// A tree node: a binary string of length <= 30, encoded with a leading
// 1 bit ((1 << len) | bits). The empty string is 1.
using TreeNode = std::uint32_t;

constexpr TreeNode kRootNode = 1;
constexpr std::uint32_t nodeLength(TreeNode n) {
  std::uint32_t l = 0;
  while (n >> (l + 1)) ++l;
  return l;
}
constexpr TreeNode nodeChild(TreeNode n, bool bit) {
  return (n << 1) | (bit ? 1 : 0);
}
constexpr TreeNode nodeParent(TreeNode n) { return n >> 1; }
std::string nodeString(TreeNode n);
TreeNode nodeFromString(const std::string& s);

// A depth-d observation of a perfect subtree of the full binary tree:
// a prefix-closed nonempty set of binary strings of length <= d in which
// every node of length < d has a child and every maximal node has
// length exactly d.
class ClippedTree {
 public:
  // Leaves are depth-d nodes; the prefix closure is taken.
  static ClippedTree fromLeaves(std::uint32_t depth,
                                const std::vector<TreeNode>& leaves);
  static ClippedTree fromLeafStrings(std::uint32_t depth,
                                     const std::vector<std::string>& leaves);
  static ClippedTree fullBinary(std::uint32_t depth);
  // Raw node set, not validated; use validateTree to check it.
  static ClippedTree fromNodesUnchecked(std::uint32_t depth,
                                        std::vector<TreeNode> nodes);

  std::uint32_t depth() const { return depth_; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }  // sorted
  bool hasNode(TreeNode n) const;
  std::vector<TreeNode> leaves() const;

  friend bool operator==(const ClippedTree&, const ClippedTree&) = default;

 private:
  std::uint32_t depth_ = 0;
  std::vector<TreeNode> nodes_;  // sorted by (length, bits)
};

struct TreeReport {
  bool valid = true;
  std::vector<TreeNode> offenders;  // childless internals, gaps, strays
  std::vector<std::string> problems;
  // Number of splitting fronts fully contained strictly below the depth.
  std::uint32_t fullFronts = 0;
};

struct Front {
  std::uint32_t index = 0;
  std::vector<TreeNode> members;
};

// Confirms the clipped-tree invariants; never throws.
TreeReport validateTree(const ClippedTree& t);

// F_0, F_1, ... for every front of n-th splitting nodes that is met by
// every depth-d leaf strictly below the depth.
std::vector<Front> splittingFronts(const ClippedTree& t);

// Terms t_0..t_{d-1} over x_0..x_{d-1} (raw ids 0..d-1): t_l is the l-th
// bit of the branch as a function of the left/right choices at the
// splitting fronts. Results are normalized; t_l uses only x_j, j <= l.
std::vector<Term> canonicalTerms(const ClippedTree& t);

// The tree of all length-<=d prefixes of evaluations of ts over every
// assignment of the joint support.
ClippedTree treeOfTerms(std::span<const Term> ts, std::uint32_t d,
                        std::uint32_t supportCap = kDefaultSupportCap);

struct RefinementWitness {
  // phi_0..phi_{certified-1} are trustworthy at this depth; the
  // substitution maps x_n to a term in the primed variables and hands
  // everything beyond the certified window to the identity.
  std::uint32_t certified = 0;
  Substitution phi{Substitution::Tail::Identity};
};

// Expresses the subtree's choices: phi_n gives T's choice at its n-th
// splitting front as a term in Tsub's choice variables primed(0..n).
// Default primed range: odd raw ids.
RefinementWitness refinementSubstitution(
    const ClippedTree& t, const ClippedTree& tsub,
    const std::function<VariableId(std::uint32_t)>& primed =
        [](std::uint32_t j) { return VariableId(2 * j + 1); });

// A common clipped subtree in which every depth-d leaf has at least
// minSplits splitting nodes strictly below it, if one exists at this
// depth.
std::optional<ClippedTree> searchCommonRefinement(const ClippedTree& t1,
                                                  const ClippedTree& t2,
                                                  std::uint32_t minSplits);

}  // namespace termsq
