#pragma once

#include <string>

#include "termsq/qstar.hpp"
#include "termsq/tree.hpp"

namespace termsq {

// DOT rendering of a clipped tree; splitting fronts are colored by
// index. Node ordering is stable.
std::string treeToDot(const ClippedTree& t);

// DOT rendering of a term-grid window as a labeled grid graph.
std::string gridToDot(const TermGrid& grid, std::uint32_t rows,
                      std::uint32_t cols);

}  // namespace termsq
