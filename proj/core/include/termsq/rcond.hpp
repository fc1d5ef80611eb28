#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "termsq/ordinal.hpp"
#include "termsq/prep.hpp"
#include "termsq/qstar.hpp"
#include "termsq/term.hpp"

namespace termsq {

class RCondition;
using RCondPtr = std::shared_ptr<const RCondition>;
class PresentedMatrix;
using PresentedMatrixPtr = std::shared_ptr<const PresentedMatrix>;

enum class GenTag { Trivial, RDelta, RMult, Builder, Stack, Override, Explicit };

struct CellKey {
  std::uint32_t row = 0;
  Ordinal alpha;
  friend bool operator==(const CellKey&, const CellKey&) = default;
  friend bool operator<(const CellKey& a, const CellKey& b) {
    if (a.row != b.row) return a.row < b.row;
    return a.alpha < b.alpha;
  }
};

// A finitely presented condition: prep data up to delta plus an
// ordinal-indexed matrix of terms of height delta + omega. The matrix
// is intensional (rule plus exceptions); every predicate about it is
// window-scoped.
class RCondition : public Prep {
 public:
  // height = delta() + omega; prep families are presented for every
  // limit level <= delta().
  Ordinal height() const { return add(delta(), Ordinal::omega()); }
  // Matrix entry at (n, alpha), alpha < height().
  virtual Term cell(std::uint32_t n, const Ordinal& alpha) const = 0;
  virtual GenTag tag() const = 0;

  // Stack structure, when present.
  virtual RCondPtr stackBottom() const { return nullptr; }
  virtual RCondPtr stackTop() const { return nullptr; }
  // Override structure, when present.
  virtual RCondPtr overrideBase() const { return nullptr; }
  virtual const std::map<CellKey, Term>* overrideCellMap() const {
    return nullptr;
  }
  // Builder structure, when present.
  virtual PresentedMatrixPtr builderInput() const { return nullptr; }
  // Table-backed prep of a hand-built condition, when present.
  virtual std::shared_ptr<const TablePrep> explicitPrep() const {
    return nullptr;
  }

  // Determination hints for this condition's finite columns (see
  // TermGrid::determinationHints); drives sigma(p) as a substitution.
  virtual TermGrid::HintSet sigmaDeterminationHints(const Pair& v) const {
    (void)v;
    return {{}, false};
  }
};

// The unit of stacking: delta = 0, matrix = top row only.
RCondPtr trivialCondition();

// Places q on top of p: prep shifted by p's delta, matrix above p's
// delta copied from q, matrix below composed with sigma(q).
RCondPtr stackConditions(RCondPtr p, RCondPtr q);

// A copy of base with finitely many matrix cells replaced (test and
// counterexample fixture; the result is usually not a valid condition).
RCondPtr overrideCells(RCondPtr base, std::map<CellKey, Term> cells);

// Hand-built condition: explicit cells over a default-0 matrix, with
// table-backed prep.
RCondPtr explicitCondition(Ordinal delta, std::map<CellKey, Term> cells,
                           std::shared_ptr<const TablePrep> prep);

struct SplitError {
  std::string reason;
};

struct SplitParts {
  RCondPtr bottom;
  RCondPtr top;
};

// Splits q at the given level when that level is a stacking boundary of
// its presentation; q =* stack(bottom, top). Splitting elsewhere is not
// derivable from a finite window and is reported as an error.
std::variant<SplitParts, SplitError> splitCondition(RCondPtr q,
                                                    const Ordinal& at);

// The finite-ordinal columns of the matrix, as a grid (also usable as a
// substitution).
TermGridPtr sigma(RCondPtr p);

// ---- Validation ------------------------------------------------------------

struct RViolation {
  std::string clause;  // "top-row" | "dependence" | "coherence" | "prep"
  std::uint32_t row = 0;
  Ordinal alpha;
  std::string detail;
};

struct RValidationReport {
  bool valid = true;  // no hard violations
  std::vector<RViolation> violations;
  // Sites or cells whose presentation lies beyond the numeric horizon
  // (e.g. nu families starting past the representable range); these are
  // unconfirmed rather than violated.
  std::vector<RViolation> horizonNotes;
  std::uint64_t cellsChecked = 0;
  std::uint64_t sitesChecked = 0;
  std::string summary() const;
};

// Per-clause verdicts on all addressable cells of the window: top-row
// law, strict row dependence below delta, and term-form coherence at
// every addressable limit level.
RValidationReport validateR(const RCondition& p, const Window& w);

struct StrongerVerdict {
  bool ok = true;
  std::string detail;
  std::optional<CellKey> firstFail;
};

// Extracts the witness phi(n,m) = q(n, delta_p + m) and verifies
// p(n,alpha) o phi =* q(n,alpha) on the addressable window, plus prep
// agreement below delta_p.
StrongerVerdict termStronger(const RCondition& q, const RCondition& p,
                             const Window& w);

// Window probes: cells equivalent and prep families identical within
// the window.
bool sameOnWindow(const RCondition& a, const RCondition& b, const Window& w,
                  std::string* why = nullptr);

struct EvaluatedCell {
  std::uint32_t row = 0;
  Ordinal alpha;
  std::optional<bool> value;  // set when the assignment covers the cell
  Term residual;              // cell with assigned variables fixed
};

// Evaluates every addressable cell under the (finite) assignment; cells
// whose support exceeds it are reported symbolic.
std::vector<EvaluatedCell> evaluateUnder(const RCondition& p,
                                         const Assignment& b, const Window& w);

}  // namespace termsq
