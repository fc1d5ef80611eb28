#include "termsq/tree.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace termsq {

std::string nodeString(TreeNode n) {
  const std::uint32_t l = nodeLength(n);
  std::string s(l, '0');
  for (std::uint32_t i = 0; i < l; ++i) {
    if ((n >> (l - 1 - i)) & 1) s[i] = '1';
  }
  return s;
}

TreeNode nodeFromString(const std::string& s) {
  TreeNode n = kRootNode;
  for (char c : s) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("tree node string must be over {0,1}");
    }
    n = nodeChild(n, c == '1');
  }
  return n;
}

ClippedTree ClippedTree::fromLeaves(std::uint32_t depth,
                                    const std::vector<TreeNode>& leaves) {
  std::set<TreeNode> nodes;
  for (TreeNode leaf : leaves) {
    if (nodeLength(leaf) != depth) {
      throw std::invalid_argument("leaf length must equal the depth");
    }
    for (TreeNode n = leaf; n >= kRootNode; n = nodeParent(n)) {
      nodes.insert(n);
      if (n == kRootNode) break;
    }
  }
  if (nodes.empty()) {
    throw std::invalid_argument("a clipped tree must be nonempty");
  }
  ClippedTree t;
  t.depth_ = depth;
  t.nodes_.assign(nodes.begin(), nodes.end());
  return t;
}

ClippedTree ClippedTree::fromLeafStrings(
    std::uint32_t depth, const std::vector<std::string>& leaves) {
  std::vector<TreeNode> ls;
  ls.reserve(leaves.size());
  for (const auto& s : leaves) ls.push_back(nodeFromString(s));
  return fromLeaves(depth, ls);
}

ClippedTree ClippedTree::fullBinary(std::uint32_t depth) {
  std::vector<TreeNode> leaves;
  leaves.reserve(std::size_t{1} << depth);
  const TreeNode base = TreeNode{1} << depth;
  for (TreeNode b = 0; b < base; ++b) leaves.push_back(base | b);
  return fromLeaves(depth, leaves);
}

ClippedTree ClippedTree::fromNodesUnchecked(std::uint32_t depth,
                                            std::vector<TreeNode> nodes) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  ClippedTree t;
  t.depth_ = depth;
  t.nodes_ = std::move(nodes);
  return t;
}

bool ClippedTree::hasNode(TreeNode n) const {
  return std::binary_search(nodes_.begin(), nodes_.end(), n);
}

std::vector<TreeNode> ClippedTree::leaves() const {
  std::vector<TreeNode> out;
  for (TreeNode n : nodes_) {
    if (nodeLength(n) == depth_) out.push_back(n);
  }
  return out;
}

TreeReport validateTree(const ClippedTree& t) {
  TreeReport r;
  if (t.nodes().empty() || !t.hasNode(kRootNode)) {
    r.valid = false;
    r.problems.push_back("missing root");
    return r;
  }
  for (TreeNode n : t.nodes()) {
    const std::uint32_t l = nodeLength(n);
    if (l > t.depth()) {
      r.valid = false;
      r.offenders.push_back(n);
      r.problems.push_back("node " + nodeString(n) + " beyond depth");
      continue;
    }
    if (n != kRootNode && !t.hasNode(nodeParent(n))) {
      r.valid = false;
      r.offenders.push_back(n);
      r.problems.push_back("node " + nodeString(n) + " missing parent");
    }
    if (l < t.depth() && !t.hasNode(nodeChild(n, false)) &&
        !t.hasNode(nodeChild(n, true))) {
      r.valid = false;
      r.offenders.push_back(n);
      r.problems.push_back("childless internal node " + nodeString(n));
    }
  }
  if (r.valid) {
    // Least number of splits along any root-to-leaf path.
    std::uint32_t best = t.depth() + 1;
    for (TreeNode leaf : t.leaves()) {
      std::uint32_t splits = 0;
      for (TreeNode n = leaf; n != kRootNode; n = nodeParent(n)) {
        const TreeNode p = nodeParent(n);
        if (t.hasNode(nodeChild(p, false)) && t.hasNode(nodeChild(p, true))) {
          ++splits;
        }
      }
      best = std::min(best, splits);
    }
    r.fullFronts = best;
  }
  return r;
}

namespace {

bool isSplitting(const ClippedTree& t, TreeNode n) {
  return t.hasNode(nodeChild(n, false)) && t.hasNode(nodeChild(n, true));
}

// Splitting rank of every splitting node (number of splitting nodes on
// the path strictly below it), computed top-down.
std::map<TreeNode, std::uint32_t> splitRanks(const ClippedTree& t) {
  std::map<TreeNode, std::uint32_t> rank;
  for (TreeNode n : t.nodes()) {
    if (nodeLength(n) >= t.depth()) continue;
    if (!isSplitting(t, n)) continue;
    std::uint32_t r = 0;
    for (TreeNode p = n; p != kRootNode;) {
      p = nodeParent(p);
      if (isSplitting(t, p)) ++r;
    }
    rank[n] = r;
  }
  return rank;
}

}  // namespace

std::vector<Front> splittingFronts(const ClippedTree& t) {
  const auto ranks = splitRanks(t);
  const TreeReport rep = validateTree(t);
  std::vector<Front> fronts(rep.fullFronts);
  for (std::uint32_t n = 0; n < rep.fullFronts; ++n) fronts[n].index = n;
  for (const auto& [node, r] : ranks) {
    if (r < rep.fullFronts) fronts[r].members.push_back(node);
  }
  return fronts;
}

namespace {

// Walk the tree for `steps` edges, taking choices[k] at the k-th
// splitting node encountered; returns the node reached.
TreeNode walk(const ClippedTree& t, std::uint64_t choices,
              std::uint32_t nchoices, std::uint32_t steps) {
  TreeNode cur = kRootNode;
  std::uint32_t used = 0;
  for (std::uint32_t s = 0; s < steps; ++s) {
    const bool l = t.hasNode(nodeChild(cur, false));
    const bool r = t.hasNode(nodeChild(cur, true));
    bool bit;
    if (l && r) {
      // choices are MSB-first: choice k sits at bit nchoices-1-k.
      bit = (choices >> (nchoices - 1 - used)) & 1;
      ++used;
    } else if (l || r) {
      bit = r;
    } else {
      throw std::invalid_argument("walk: childless internal node");
    }
    cur = nodeChild(cur, bit);
  }
  return cur;
}

}  // namespace

std::vector<Term> canonicalTerms(const ClippedTree& t) {
  std::vector<Term> ts;
  ts.reserve(t.depth());
  for (std::uint32_t l = 0; l < t.depth(); ++l) {
    std::vector<VariableId> support;
    for (std::uint32_t j = 0; j <= l; ++j) support.emplace_back(j);
    const std::uint32_t arity = l + 1;
    std::vector<bool> bits(std::uint64_t{1} << arity);
    for (std::uint64_t idx = 0; idx < bits.size(); ++idx) {
      const TreeNode n = walk(t, idx, arity, l + 1);
      bits[idx] = n & 1;
    }
    ts.push_back(normalize(Term::fromTable(std::move(support), bits)));
  }
  return ts;
}

ClippedTree treeOfTerms(std::span<const Term> ts, std::uint32_t d,
                        std::uint32_t supportCap) {
  if (ts.size() < d) {
    throw std::invalid_argument("treeOfTerms: need at least d terms");
  }
  std::vector<VariableId> u;
  for (std::uint32_t l = 0; l < d; ++l) {
    u.insert(u.end(), ts[l].support().begin(), ts[l].support().end());
  }
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  if (u.size() > std::min(supportCap, kHardSupportCap)) {
    throw HorizonError("treeOfTerms: support horizon exceeded");
  }
  std::set<TreeNode> nodes;
  const std::uint64_t total = std::uint64_t{1} << u.size();
  for (std::uint64_t uIdx = 0; uIdx < total; ++uIdx) {
    Assignment a;
    for (std::size_t p = 0; p < u.size(); ++p) {
      a.set(u[p], (uIdx >> (u.size() - 1 - p)) & 1);
    }
    TreeNode n = kRootNode;
    nodes.insert(n);
    for (std::uint32_t l = 0; l < d; ++l) {
      n = nodeChild(n, eval(ts[l], a));
      nodes.insert(n);
    }
  }
  return ClippedTree::fromNodesUnchecked(
      d, std::vector<TreeNode>(nodes.begin(), nodes.end()));
}

RefinementWitness refinementSubstitution(
    const ClippedTree& t, const ClippedTree& tsub,
    const std::function<VariableId(std::uint32_t)>& primed) {
  if (t.depth() != tsub.depth()) {
    throw std::invalid_argument("refinementSubstitution: depth mismatch");
  }
  for (TreeNode n : tsub.nodes()) {
    if (!t.hasNode(n)) {
      throw std::invalid_argument("refinementSubstitution: not a subtree (" +
                                  nodeString(n) + ")");
    }
  }
  const auto tRanks = splitRanks(t);

  // phi_n is certified when every leaf of the subtree passes a rank-n
  // splitting node of t strictly below the depth.
  std::uint32_t certified = t.depth() + 1;
  for (TreeNode leaf : tsub.leaves()) {
    std::uint32_t count = 0;
    for (TreeNode n = leaf; n != kRootNode;) {
      n = nodeParent(n);
      if (tRanks.count(n)) ++count;
    }
    certified = std::min(certified, count);
  }

  RefinementWitness w;
  w.certified = certified;
  for (std::uint32_t n = 0; n < certified; ++n) {
    std::vector<VariableId> support;
    for (std::uint32_t j = 0; j <= n; ++j) support.push_back(primed(j));
    const std::uint32_t arity = n + 1;
    std::vector<bool> bits(std::uint64_t{1} << arity);
    for (std::uint64_t idx = 0; idx < bits.size(); ++idx) {
      // Walk the subtree consuming primed choices until we cross the
      // rank-n splitting node of t; record the direction taken there.
      TreeNode cur = kRootNode;
      std::uint32_t used = 0;
      bool found = false;
      while (nodeLength(cur) < tsub.depth()) {
        const bool l = tsub.hasNode(nodeChild(cur, false));
        const bool r = tsub.hasNode(nodeChild(cur, true));
        bool bit;
        if (l && r) {
          if (used >= arity) {
            throw std::logic_error(
                "refinementSubstitution: certified front needs an "
                "out-of-range choice");
          }
          bit = (idx >> (arity - 1 - used)) & 1;
          ++used;
        } else {
          bit = r;
        }
        auto it = tRanks.find(cur);
        if (it != tRanks.end() && it->second == n) {
          bits[idx] = bit;
          found = true;
          break;
        }
        cur = nodeChild(cur, bit);
      }
      if (!found) {
        throw std::logic_error(
            "refinementSubstitution: certified front not met");
      }
    }
    w.phi.set(VariableId(n),
              normalize(Term::fromTable(std::move(support), bits)));
  }
  return w;
}

namespace {

struct RefinementDp {
  const ClippedTree* t1;
  const ClippedTree* t2;
  std::uint32_t depth;
  std::map<TreeNode, std::int32_t> memo;

  bool inBoth(TreeNode n) const { return t1->hasNode(n) && t2->hasNode(n); }

  // Best achievable "min splits along any leaf path" in a pruned common
  // subtree rooted at n, or -1 when n cannot reach the full depth.
  std::int32_t best(TreeNode n) {
    if (!inBoth(n)) return -1;
    if (nodeLength(n) == depth) return 0;
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
    const std::int32_t b0 = best(nodeChild(n, false));
    const std::int32_t b1 = best(nodeChild(n, true));
    std::int32_t r = std::max(b0, b1);  // keep one child: no split here
    if (b0 >= 0 && b1 >= 0) r = std::max(r, 1 + std::min(b0, b1));
    memo[n] = r;
    return r;
  }

  void reconstruct(TreeNode n, std::uint32_t need,
                   std::vector<TreeNode>& out) {
    out.push_back(n);
    if (nodeLength(n) == depth) return;
    const std::int32_t b0 = best(nodeChild(n, false));
    const std::int32_t b1 = best(nodeChild(n, true));
    // Keep both children whenever that still meets the requirement;
    // otherwise follow the better single child.
    if (b0 >= 0 && b1 >= 0 && need <= 1 + std::uint32_t(std::min(b0, b1))) {
      const std::uint32_t sub = need == 0 ? 0 : need - 1;
      reconstruct(nodeChild(n, false), sub, out);
      reconstruct(nodeChild(n, true), sub, out);
      return;
    }
    const bool takeRight = b1 > b0;
    reconstruct(nodeChild(n, takeRight), need, out);
  }
};

}  // namespace

std::optional<ClippedTree> searchCommonRefinement(const ClippedTree& t1,
                                                  const ClippedTree& t2,
                                                  std::uint32_t minSplits) {
  if (t1.depth() != t2.depth()) {
    throw std::invalid_argument("searchCommonRefinement: depth mismatch");
  }
  RefinementDp dp{&t1, &t2, t1.depth(), {}};
  const std::int32_t b = dp.best(kRootNode);
  if (b < 0 || std::uint32_t(b) < minSplits) return std::nullopt;
  std::vector<TreeNode> nodes;
  dp.reconstruct(kRootNode, minSplits, nodes);
  return ClippedTree::fromNodesUnchecked(t1.depth(), std::move(nodes));
}

}  // namespace termsq
