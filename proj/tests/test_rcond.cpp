#include <doctest.h>

#include <random>

#include "termsq/build.hpp"
#include "termsq/rcond.hpp"

using namespace termsq;

namespace {

Window smallWindow() {
  Window w;
  w.rows = 4;
  w.cols = 5;
  w.coefCap = 4;
  w.cohereBlocks = 3;
  return w;
}

}  // namespace

TEST_CASE("heights compose under stacking") {
  const RCondPtr d = buildRDelta();
  CHECK(d->height().toString() == "w^2+w");
  const RCondPtr dd = stackConditions(d, d);
  CHECK(dd->height().toString() == "w^2*2+w");
  CHECK(dd->delta().toString() == "w^2*2");
}

TEST_CASE("the trivial condition is the unit of stacking") {
  const RCondPtr d = buildRDelta();
  const RCondPtr left = stackConditions(trivialCondition(), d);
  const RCondPtr right = stackConditions(d, trivialCondition());
  std::string why;
  CHECK(sameOnWindow(*left, *d, smallWindow(), &why));
  CHECK(sameOnWindow(*right, *d, smallWindow(), &why));
}

TEST_CASE("the diagonal condition validates on a window") {
  const RValidationReport rep = validateR(*buildRDelta(), smallWindow());
  CHECK(rep.valid);
  CHECK(rep.horizonNotes.empty());
}

TEST_CASE("a perturbed top row is flagged") {
  const RCondPtr d = buildRDelta();
  std::map<CellKey, Term> cells;
  cells.insert({CellKey{1, add(Ordinal::omegaSq(), Ordinal::nat(2))},
                Term::constant(false)});
  const RCondPtr broken = overrideCells(d, std::move(cells));
  const RValidationReport rep = validateR(*broken, smallWindow());
  CHECK_FALSE(rep.valid);
  bool hit = false;
  for (const auto& v : rep.violations) {
    if (v.clause == "top-row" && v.row == 1) hit = true;
  }
  CHECK(hit);
}

TEST_CASE("a cell using its own row is a dependence violation") {
  const RCondPtr d = buildRDelta();
  std::map<CellKey, Term> cells;
  cells.insert({CellKey{1, Ordinal::nat(4)},
                Term::variable(VariableId::fromPair(1, 0))});
  const RCondPtr broken = overrideCells(d, std::move(cells));
  const RValidationReport rep = validateR(*broken, smallWindow());
  CHECK_FALSE(rep.valid);
  bool hit = false;
  for (const auto& v : rep.violations) {
    if (v.clause == "dependence") hit = true;
  }
  CHECK(hit);
}

TEST_CASE("a broken coherence site is flagged") {
  const RCondPtr d = buildRDelta();
  // Cell (1, w+5) carries x(0,0); cutting it off from its family below
  // breaks coherence at level w.
  std::map<CellKey, Term> cells;
  cells.insert({CellKey{1, add(Ordinal::omega(), Ordinal::nat(5))},
                Term::variable(VariableId::fromPair(0, 1))});
  const RCondPtr broken = overrideCells(d, std::move(cells));
  Window w = smallWindow();
  w.cols = 6;
  const RValidationReport rep = validateR(*broken, w);
  CHECK_FALSE(rep.valid);
  bool hit = false;
  for (const auto& v : rep.violations) {
    if (v.clause == "coherence") hit = true;
  }
  CHECK(hit);
}

TEST_CASE("split undoes stack and rejects other levels") {
  const RCondPtr p = buildRDelta();
  const RCondPtr q = buildRMult();
  const RCondPtr stacked = stackConditions(p, q);
  auto parts = splitCondition(stacked, p->delta());
  REQUIRE(std::holds_alternative<SplitParts>(parts));
  std::string why;
  CHECK(sameOnWindow(*std::get<SplitParts>(parts).bottom, *p, smallWindow(),
                     &why));
  CHECK(sameOnWindow(*std::get<SplitParts>(parts).top, *q, smallWindow(),
                     &why));

  // Splitting at the condition's own height leaves a trivial top.
  auto top = splitCondition(stacked, stacked->delta());
  REQUIRE(std::holds_alternative<SplitParts>(top));
  CHECK(std::get<SplitParts>(top).top->tag() == GenTag::Trivial);

  // An atomic condition does not split strictly inside.
  auto bad = splitCondition(p, Ordinal::omega());
  CHECK(std::holds_alternative<SplitError>(bad));

  // Re-association: splitting a three-stack inside the top part.
  const RCondPtr three = stackConditions(stacked, buildRDelta());
  auto inner = splitCondition(three, add(p->delta(), q->delta()));
  REQUIRE(std::holds_alternative<SplitParts>(inner));
  CHECK(sameOnWindow(*std::get<SplitParts>(inner).bottom, *stacked,
                     smallWindow(), &why));
}

TEST_CASE("sigma reads the finite columns") {
  const TermGridPtr s = sigma(buildRDelta());
  CHECK(equiv(s->at(2, 11), Term::variable(VariableId::fromPair(0, 0))));
  CHECK(s->at(0, 7) == Term::constant(false));
  // Stacking composes sigma images.
  const RCondPtr p = buildRDelta();
  const RCondPtr q = buildRMult();
  const TermGridPtr lhs = sigma(stackConditions(p, q));
  const TermGridPtr rhs = composeGrid(sigma(p), sigma(q));
  for (std::uint32_t n = 0; n < 4; ++n) {
    for (std::uint32_t m = 0; m < 6; ++m) {
      CHECK(equiv(lhs->at(n, m), rhs->at(n, m)));
    }
  }
}

TEST_CASE("term-stronger verdicts") {
  const RCondPtr p = buildRDelta();
  const Window w = smallWindow();
  CHECK(termStronger(*p, *p, w).ok);

  const RCondPtr q1 = stackConditions(p, buildRDelta());
  const RCondPtr q2 = stackConditions(p, buildRMult());
  CHECK(termStronger(*q1, *p, w).ok);
  CHECK(termStronger(*q2, *p, w).ok);
  // Two extensions of a common base need not be comparable.
  CHECK_FALSE(termStronger(*q1, *q2, w).ok);
  CHECK_FALSE(termStronger(*q2, *q1, w).ok);

  // Perturbing one low cell of q breaks the verdict there.
  std::map<CellKey, Term> cells;
  cells.insert({CellKey{2, Ordinal::nat(11)}, Term::constant(true)});
  const RCondPtr broken = overrideCells(q1, std::move(cells));
  Window wide = w;
  wide.coefCap = 12;
  const StrongerVerdict v = termStronger(*broken, *p, wide);
  CHECK_FALSE(v.ok);
  REQUIRE(v.firstFail.has_value());
  CHECK(v.firstFail->row == 2);
}

TEST_CASE("evaluation under finite assignments") {
  const RCondPtr d = buildRDelta();
  Window w;
  w.rows = 3;
  w.cols = 4;
  w.coefCap = 12;

  Assignment b;
  b.set(VariableId::fromPair(0, 0), true);
  bool sawConcrete = false;
  for (const EvaluatedCell& ec : evaluateUnder(*d, b, w)) {
    if (ec.row == 2 && ec.alpha == Ordinal::nat(11)) {
      REQUIRE(ec.value.has_value());
      CHECK(*ec.value == true);
      sawConcrete = true;
    }
  }
  CHECK(sawConcrete);

  // An empty assignment leaves the top row symbolic.
  bool sawSymbolic = false;
  for (const EvaluatedCell& ec : evaluateUnder(*d, Assignment{}, w)) {
    if (!ec.value) sawSymbolic = true;
  }
  CHECK(sawSymbolic);

  // A total assignment on the window support makes everything concrete.
  Assignment all;
  for (std::uint32_t i = 0; i < 3; ++i) {
    for (std::uint32_t j = 0; j < 16; ++j) {
      all.set(VariableId::fromPair(i, j), (i + j) % 2 == 0);
    }
  }
  for (const EvaluatedCell& ec : evaluateUnder(*d, all, w)) {
    CHECK(ec.value.has_value());
  }
}

TEST_CASE("sigma cells admit determining sets from lower rows") {
  // Within a window, the choice variables are pinned down by cells in
  // higher rows; the search reports the witness.
  const TermGridPtr s = sigma(buildRDelta());
  Window w;
  w.rows = 4;
  w.cols = 14;
  const ConditionReport rep = validateCondition(*s, ConditionMode::QStar, w);
  CHECK(rep.hardValid);
  bool found = false;
  for (const auto& d : rep.determinations) {
    if (d.var == VariableId::fromPair(0, 0) &&
        d.status == DetStatus::Determined) {
      REQUIRE(!d.witnessCells.empty());
      CHECK(d.witnessCells.front().first > 0);
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("stacking preserves window validity") {
  Window w = smallWindow();
  const RCondPtr stacked =
      stackConditions(buildRDelta(), buildRMult());
  const RValidationReport rep = validateR(*stacked, w);
  CHECK(rep.valid);

  PresentedSubstitution phi;
  phi.set(VariableId::fromPair(0, 0),
          termNot(Term::variable(VariableId::fromPair(0, 0))));
  auto built = matrixToCondition(composedMatrix(
      scheduleMatrix(), std::make_shared<PresentedSubstitution>(phi)));
  const RCondPtr withBuilder =
      stackConditions(std::get<RCondPtr>(built), buildRDelta());
  CHECK(validateR(*withBuilder, w).valid);
}

TEST_CASE("a second stacked copy witnesses the composed square") {
  Window w;
  w.rows = 3;
  w.cols = 13;
  const TermGridPtr s = sigma(buildRDelta());
  const TermGridPtr composed = composeGrid(s, s);
  CHECK(verifyOrderWitness(*s, *composed, *s, w).ok);
}

TEST_CASE("hand-built conditions validate through table-backed prep") {
  // Height w+w: the only coherence sites sit at level w and target the
  // top row x_{n,m}. Families read residue classes of the bottom rows.
  const Ordinal w1 = Ordinal::omega();
  auto prep = std::make_shared<TablePrep>(w1);
  std::map<CellKey, Term> cells;
  const std::uint32_t rows = 2, cols = 2, blocks = 5;
  for (std::uint32_t n = 0; n < rows; ++n) {
    for (std::uint32_t m = 0; m < cols; ++m) {
      TablePrep::FamilySpec spec;
      spec.nu.stride = Ordinal::nat(rows * cols);
      spec.nu.offset = Ordinal::nat(n * cols + m);
      prep->setFamily({w1, n, m}, spec);
      for (std::uint32_t k = 0; k < blocks; ++k) {
        cells.insert(
            {CellKey{n + 1, Ordinal::nat((n * cols + m) + k * rows * cols)},
             Term::variable(VariableId::fromPair(n, m))});
      }
    }
  }
  const RCondPtr cond = explicitCondition(w1, std::move(cells), prep);
  Window w;
  w.rows = rows;
  w.cols = cols;
  w.coefCap = 3;
  w.cohereBlocks = blocks - 1;
  const RValidationReport rep = validateR(*cond, w);
  CHECK(rep.valid);

  // Erasing one early placed cell shifts the stable block, not the
  // verdict; erasing the tail of a family kills it.
  std::map<CellKey, Term> flip;
  flip.insert({CellKey{1, Ordinal::nat(0)}, Term::constant(false)});
  CHECK(validateR(*overrideCells(cond, std::move(flip)), w).valid);
  std::map<CellKey, Term> killAll;
  for (std::uint32_t k = 0; k < blocks; ++k) {
    killAll.insert({CellKey{1, Ordinal::nat(k * rows * cols)},
                    Term::constant(false)});
  }
  CHECK_FALSE(validateR(*overrideCells(cond, std::move(killAll)), w).valid);
}

TEST_CASE("a hand-built block function checks in term form") {
  // One site at level w whose block of two bottom cells computes the
  // top value by XOR.
  const Ordinal w1 = Ordinal::omega();
  auto prep = std::make_shared<TablePrep>(w1);
  TablePrep::FamilySpec spec;
  spec.nu.stride = Ordinal::nat(1);
  spec.blockSizePrefix = {2, 2, 2, 2};
  spec.blockSizeTail = 2;
  for (int k = 0; k < 4; ++k) {
    spec.fTables.push_back({false, true, true, false});
  }
  prep->setFamily({w1, 0, 0}, spec);
  // Bottom cells alternate x(0,0)-dependent parity: t, t^x, t, t^x, ...
  // so every block XORs to x(0,0) = the top-row target.
  std::map<CellKey, Term> cells;
  const Term zero = Term::constant(false);
  const Term x = Term::variable(VariableId::fromPair(0, 0));
  for (std::uint32_t i = 0; i < 8; i += 2) {
    cells.insert({CellKey{1, Ordinal::nat(i + 1)}, x});
  }
  const RCondPtr cond = explicitCondition(w1, std::move(cells), prep);
  (void)zero;
  Window w;
  w.rows = 1;
  w.cols = 1;
  w.coefCap = 2;
  w.cohereBlocks = 3;
  CHECK(validateR(*cond, w).valid);
}

TEST_CASE("stacking is associative on windows") {
  const RCondPtr a = buildRDelta();
  const RCondPtr b = buildRMult();
  const RCondPtr c = buildRDelta();
  const RCondPtr left = stackConditions(stackConditions(a, b), c);
  const RCondPtr right = stackConditions(a, stackConditions(b, c));
  Window w;
  w.rows = 3;
  w.cols = 4;
  w.coefCap = 6;
  w.cohereBlocks = 2;
  std::string why;
  CHECK(sameOnWindow(*left, *right, w, &why));
}

TEST_CASE("random stacks stay window-consistent") {
  std::mt19937_64 rng(61);
  Window w;
  w.rows = 3;
  w.cols = 4;
  w.coefCap = 4;
  w.cohereBlocks = 2;
  for (int i = 0; i < 20; ++i) {
    RCondPtr cond = rng() & 1 ? buildRDelta() : buildRMult();
    const int extra = 1 + rng() % 2;
    for (int s = 0; s < extra; ++s) {
      cond = stackConditions(cond, rng() & 1 ? buildRDelta() : buildRMult());
    }
    const RValidationReport rep = validateR(*cond, w);
    CHECK(rep.valid);
    // The square image stays inside the single-square class once a
    // diagonal copy tops the stack.
    const RCondPtr topped = stackConditions(cond, buildRDelta());
    Window qw;
    qw.rows = 4;
    qw.cols = 6;
    CHECK(validateCondition(*sigma(topped), ConditionMode::QStar, qw)
              .hardValid);
  }
}
