#pragma once

#include <string>

#include "termsq/build.hpp"
#include "termsq/ordinal.hpp"
#include "termsq/prep.hpp"
#include "termsq/qstar.hpp"
#include "termsq/rcond.hpp"
#include "termsq/term.hpp"
#include "termsq/tree.hpp"

namespace termsq {

// JSON wire formats (bit-exact where stated):
//   term      { "support": [k, ...], "table": "0101..." }
//   ordinal   [[exp, coef], ...]
//   tree      { "depth": d, "leaves": ["000", ...] }
//   subst     { "N": n, "table": {"k": term, ...}, "tail": "identity" }
//   matrix    { "kind": "schedule" } |
//             { "kind": "composed", "base": matrix, "by": grid } |
//             { "kind": "perturbed", "base": matrix,
//               "cells": [{"n":, "m":, "term":}, ...] }
//   grid      { "kind": "subst", ... } | { "kind": "sigma", "cond": cond }
//   cond      { "kind": "trivial" | "rdelta" } |
//             { "kind": "rmult" } |
//             { "kind": "builder", "matrix": matrix } |
//             { "kind": "stack", "bottom": cond, "top": cond } |
//             { "kind": "override", "base": cond,
//               "cells": [{"row":, "alpha":, "term":}, ...] }

std::string termToJson(const Term& t);
Term termFromJson(const std::string& json);

std::string ordinalToJson(const Ordinal& o);
Ordinal ordinalFromJson(const std::string& json);

std::string treeToJson(const ClippedTree& t);
ClippedTree treeFromJson(const std::string& json);

std::string substToJson(const PresentedSubstitution& phi);
PresentedSubstitution substFromJson(const std::string& json);

std::string matrixToJson(const PresentedMatrixPtr& m);
PresentedMatrixPtr matrixFromJson(const std::string& json);

// prep      { "delta": ordinal, "families": [{ "level":, "row":, "m":,
//             "nu": {"prefix": [ordinal...], "stride": ordinal,
//                    "start":, "offset": ordinal},
//             "blockSizes": {"prefix": [..], "tail": 1},
//             "f": ["0110", ...] }] }
// bitseq    { "height": ordinal, "default": 0|1,
//             "exceptions": [{"at": ordinal, "bit": 0|1}] }
std::string prepToJson(const TablePrep& prep);
std::shared_ptr<TablePrep> prepFromJson(const std::string& json);
std::string bitseqToJson(const BitSeq& seq);
BitSeq bitseqFromJson(const std::string& json);

std::string conditionToJson(const RCondPtr& c);
RCondPtr conditionFromJson(const std::string& json);

}  // namespace termsq
