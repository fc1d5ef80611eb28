#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "termsq/term.hpp"

namespace termsq {

// Finite scope within which every verdict about an infinite presented
// object is certified.
struct Window {
  std::uint32_t rows = 8;
  std::uint32_t cols = 8;
  std::uint64_t coefCap = 8;       // ordinal coefficient cap
  std::uint32_t supportCap = kDefaultSupportCap;
  std::uint32_t cohereBlocks = 6;  // blocks examined per coherence site
  std::uint32_t searchBound = 64;  // tau bound for determination searches
};

// An omega x omega square of terms, presented by rule. Serves both as a
// term matrix and, via x_{n,m} -> at(n,m), as a substitution.
class TermGrid {
 public:
  virtual ~TermGrid() = default;
  virtual Term at(std::uint32_t n, std::uint32_t m) const = 0;
  Term image(VariableId v) const {
    const auto [i, j] = v.pairView();
    return at(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
  }
  std::function<Term(VariableId)> asImages() const {
    return [this](VariableId v) { return image(v); };
  }
  // Slots whose entries are worth reading when hunting a finite family
  // that determines the variable at pair v. Slot coordinates may exceed
  // the variable range (they are grid positions, not variables).
  // complete=false records that some slots were dropped because they
  // lie beyond the numeric horizon; an unknown structure reports no
  // slots and complete=false.
  struct HintSet {
    std::vector<Pair> slots;
    bool complete = true;
  };
  virtual HintSet determinationHints(const Pair& v) const {
    (void)v;
    return {{}, false};
  }
};

// Hint chaining for composed grids base o phi: hints of the outer map,
// then hints of the base for each intermediate slot.
TermGrid::HintSet chainHints(const TermGrid& base, const TermGrid& phi,
                             const Pair& v);

using TermGridPtr = std::shared_ptr<const TermGrid>;

// The identity square x_{n,m}.
TermGridPtr identityGrid();
// Row-n entry of the cyclic schedule [0] ++ [x_{i,j} : i+j<n, tau order].
Term scheduleEntry(std::uint32_t n, std::uint32_t m);
// Cellwise composition: at(n,m) = base.at(n,m) o phi.
TermGridPtr composeGrid(TermGridPtr base, TermGridPtr phi,
                        std::uint32_t supportCap = kDefaultSupportCap);

// A Q_*-style substitution given as a finite table plus a rule tail.
// Identity tail: phi(x_k) = x_k for all k >= prefix. ZeroSchedule tail:
// phi(x_{n,m}) follows the cyclic row schedule (0 and every variable
// x_{i,j} with i+j<n, in tau order), which pads with 0 infinitely often.
class PresentedSubstitution : public TermGrid {
 public:
  enum class Tail { Identity, ZeroSchedule };

  explicit PresentedSubstitution(Tail tail = Tail::Identity) : tail_(tail) {}

  // Entries must have raw id < prefix; terms are normalized on entry.
  void set(VariableId v, const Term& t);
  std::uint32_t prefix() const { return prefix_; }
  Tail tailMode() const { return tail_; }
  const std::map<std::uint32_t, Term>& entries() const { return table_; }

  Term image(VariableId v) const;
  Term at(std::uint32_t n, std::uint32_t m) const override;
  HintSet determinationHints(const Pair& v) const override;

  // Substitution with identity tail, for plain term operations.
  Substitution asSubstitution() const;

 private:
  std::uint32_t prefix_ = 0;
  std::map<std::uint32_t, Term> table_;
  Tail tail_;
};

// Composition of presented substitutions (identity tails): the result
// maps x_v to psi-image of phi(x_v).
PresentedSubstitution composePresented(
    const PresentedSubstitution& phi, const PresentedSubstitution& psi,
    std::uint32_t supportCap = kDefaultSupportCap);

// ---- Validation ------------------------------------------------------------

// QStarStarOrder is the witness-side dependence of the double-square
// order (row bound i <= n, against the condition rows' strict i < n);
// the two predicates are deliberately kept separate.
enum class ConditionMode { SStar, QStar, QStarStar, QStarStarOrder };

struct CellViolation {
  std::string clause;
  std::uint32_t n = 0, m = 0;
  std::string detail;
};

enum class DetStatus {
  Determined,          // witness found
  Undetermined,        // exact verdict: no finite family determines it
  UnconfirmedAtHorizon // search exhausted the window without a witness
};

struct DeterminationResult {
  VariableId var;
  DetStatus status = DetStatus::UnconfirmedAtHorizon;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> witnessCells;
};

struct OccurrenceCount {
  VariableId var;
  std::uint64_t count = 0;  // cells equal to the variable within the window
};

struct ConditionReport {
  bool hardValid = true;  // no clause violations
  std::vector<CellViolation> violations;
  std::vector<DeterminationResult> determinations;
  // QStarStar only: occurrence statistics within the window.
  std::vector<OccurrenceCount> occurrences;
  std::vector<std::uint64_t> zeroCountPerRow;
  std::size_t undeterminedHard() const;
  std::string summary() const;
};

// Checks the dependence clause on all window cells and runs the
// determination search for every variable in the window. For a
// PresentedSubstitution with identity tail the determination verdict is
// exact; for a bare grid an unconfirmed search is a soft verdict.
ConditionReport validateCondition(const TermGrid& grid, ConditionMode mode,
                                  const Window& w);
ConditionReport validateCondition(const PresentedSubstitution& phi,
                                  ConditionMode mode, const Window& w);

// SStar mode for plain term sequences t_0, t_1, ... over single-index
// variables.
ConditionReport validateSequence(std::span<const Term> ts, const Window& w);

struct WitnessVerdict {
  bool ok = true;
  std::optional<std::pair<std::uint32_t, std::uint32_t>> firstFail;
};

// Verifies t_{n,m} =* s_{n,m} o phi on every window cell.
WitnessVerdict verifyOrderWitness(const TermGrid& s, const TermGrid& t,
                                  const TermGrid& phi, const Window& w);

}  // namespace termsq
