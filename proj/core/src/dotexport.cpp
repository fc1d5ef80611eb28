#include "termsq/dotexport.hpp"

#include <map>
#include <sstream>

namespace termsq {

namespace {
const char* kFrontColors[] = {"lightblue", "lightgreen", "lightsalmon",
                              "gold",      "plum",       "khaki"};
}

std::string treeToDot(const ClippedTree& t) {
  std::map<TreeNode, std::uint32_t> frontOf;
  for (const Front& f : splittingFronts(t)) {
    for (TreeNode n : f.members) frontOf[n] = f.index;
  }
  std::ostringstream os;
  os << "digraph tree {\n  rankdir=TB;\n  node [shape=circle];\n";
  for (TreeNode n : t.nodes()) {
    os << "  n" << n << " [label=\"" << (n == kRootNode ? "e" : nodeString(n))
       << "\"";
    auto it = frontOf.find(n);
    if (it != frontOf.end()) {
      os << ",style=filled,fillcolor=\""
         << kFrontColors[it->second % (sizeof(kFrontColors) /
                                       sizeof(kFrontColors[0]))]
         << "\",xlabel=\"F" << it->second << "\"";
    }
    os << "];\n";
  }
  for (TreeNode n : t.nodes()) {
    if (n == kRootNode) continue;
    os << "  n" << nodeParent(n) << " -> n" << n << " [label=\""
       << (n & 1 ? "1" : "0") << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

std::string gridToDot(const TermGrid& grid, std::uint32_t rows,
                      std::uint32_t cols) {
  std::ostringstream os;
  os << "digraph grid {\n  node [shape=box];\n";
  for (std::uint32_t n = 0; n < rows; ++n) {
    for (std::uint32_t m = 0; m < cols; ++m) {
      const Term t = grid.at(n, m);
      os << "  c" << n << "_" << m << " [label=\"(" << n << "," << m << ") "
         << t.toString() << "\"";
      if (!t.isConstant()) os << ",style=filled,fillcolor=lightyellow";
      os << ",pos=\"" << m << ",-" << double(n) << "!\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace termsq
