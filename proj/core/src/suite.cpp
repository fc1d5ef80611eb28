#include "termsq/suite.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <sstream>

#include "termsq/build.hpp"
#include "termsq/ordinal.hpp"
#include "termsq/prep.hpp"
#include "termsq/qstar.hpp"
#include "termsq/rcond.hpp"
#include "termsq/term.hpp"
#include "termsq/tree.hpp"

namespace termsq {

namespace {

using Rng = std::mt19937_64;

struct Check {
  bool pass = true;
  std::string detail;
  std::uint64_t cases = 0;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
  void require(bool ok, const std::string& why) {
    ++cases;
    if (!ok) fail(why);
  }
};

// ---- samplers ---------------------------------------------------------------

Term randomTerm(Rng& rng, std::uint32_t varPool, std::uint32_t maxSupport) {
  std::uniform_int_distribution<std::uint32_t> supDist(0, maxSupport);
  const std::uint32_t arity = supDist(rng);
  std::vector<std::uint32_t> ids(varPool);
  for (std::uint32_t i = 0; i < varPool; ++i) ids[i] = i;
  std::shuffle(ids.begin(), ids.end(), rng);
  std::vector<VariableId> support;
  for (std::uint32_t i = 0; i < arity && i < varPool; ++i) {
    support.emplace_back(ids[i]);
  }
  std::sort(support.begin(), support.end());
  std::vector<bool> bits(std::uint64_t{1} << support.size());
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = rng() & 1;
  return Term::fromTable(std::move(support), bits);
}

Substitution randomSubstitution(Rng& rng, std::uint32_t domainSize,
                                std::uint32_t varPool,
                                std::uint32_t maxSupport) {
  Substitution phi(Substitution::Tail::Identity);
  for (std::uint32_t k = 0; k < domainSize; ++k) {
    phi.set(VariableId(k), randomTerm(rng, varPool, maxSupport));
  }
  return phi;
}

// A presented substitution that is valid in QStar mode by construction:
// phi(x_k) = x_k XOR g(strictly tau-below variables), so each variable
// is recovered from the family bottom-up.
PresentedSubstitution randomValidPhi(Rng& rng, std::uint32_t prefix) {
  PresentedSubstitution phi;
  for (std::uint32_t k = 0; k < prefix; ++k) {
    Term img = Term::variable(VariableId(k));
    if (k > 0 && (rng() & 1)) {
      std::uniform_int_distribution<std::uint32_t> below(0, k - 1);
      Term g = randomTerm(rng, k, std::min<std::uint32_t>(k, 3));
      img = termXor(img, g);
    }
    if (!(img == Term::variable(VariableId(k)))) phi.set(VariableId(k), img);
  }
  return phi;
}

std::vector<TreeNode> randomLeafSet(Rng& rng, std::uint32_t depth) {
  const TreeNode base = TreeNode{1} << depth;
  std::uniform_int_distribution<std::uint32_t> density(20, 80);
  const std::uint32_t pct = density(rng);
  std::vector<TreeNode> leaves;
  for (TreeNode b = 0; b < base; ++b) {
    if (rng() % 100 < pct) leaves.push_back(base | b);
  }
  if (leaves.empty()) {
    leaves.push_back(base | static_cast<TreeNode>(rng() % base));
  }
  return leaves;
}

ClippedTree randomTree(Rng& rng, std::uint32_t depth) {
  return ClippedTree::fromLeaves(depth, randomLeafSet(rng, depth));
}

ClippedTree randomSubtree(Rng& rng, const ClippedTree& t) {
  std::vector<TreeNode> leaves = t.leaves();
  std::vector<TreeNode> kept;
  for (TreeNode leaf : leaves) {
    if (rng() & 1) kept.push_back(leaf);
  }
  if (kept.empty()) kept.push_back(leaves[rng() % leaves.size()]);
  return ClippedTree::fromLeaves(t.depth(), kept);
}

// Renames x_j to primed(j) = x_{2j+1}.
Term primeVariables(const Term& t) {
  return substitute(t, [](VariableId v) {
    return Term::variable(VariableId(2 * v.raw + 1));
  });
}

const Term& figureTreeT2() {
  static const Term t2 = Term::fromFunction(
      {VariableId(0), VariableId(1), VariableId(2)},
      [](const std::vector<bool>& a) {
        if (!a[0] && !a[1]) return a[2];
        if (!a[0] && a[1]) return true;
        return a[1];
      });
  return t2;
}

ClippedTree figureTree() {
  return ClippedTree::fromLeafStrings(3, {"000", "001", "011", "110", "111"});
}

// ---- criteria ---------------------------------------------------------------

Check criterion1(const VerificationProfile&) {
  Check c;
  const ClippedTree t = figureTree();
  const auto ts = canonicalTerms(t);
  c.require(ts.size() == 3, "three canonical terms expected");
  c.require(equiv(ts[0], Term::variable(VariableId(0))), "t0 must be x0");
  const Term t1 = Term::fromFunction(
      {VariableId(0), VariableId(1)},
      [](const std::vector<bool>& a) { return a[0] ? true : a[1]; });
  c.require(equiv(ts[1], t1), "t1 mismatch");
  c.require(equiv(ts[2], figureTreeT2()), "t2 mismatch");

  const ClippedTree tsub = ClippedTree::fromLeafStrings(3, {"110", "111"});
  const RefinementWitness w = refinementSubstitution(t, tsub);
  c.require(w.certified >= 2, "two certified entries expected");
  c.require(w.phi.table().count(VariableId(0)) == 1 &&
                w.phi.table().count(VariableId(1)) == 1,
            "phi must carry explicit entries for x0 and x1");
  c.require(equiv(w.phi.image(VariableId(0)), Term::constant(true)),
            "phi0 must be the constant 1");
  c.require(equiv(w.phi.image(VariableId(1)), Term::variable(VariableId(1))),
            "phi1 must be the first primed variable");
  c.require(equiv(substitute(ts[2], w.phi), Term::variable(VariableId(1))),
            "t2 o phi must collapse to the first primed variable");
  return c;
}

Check criterion2(const VerificationProfile&) {
  Check c;
  c.require(tau(1, 2) == 7, "tau(1,2) must be 7");
  std::vector<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 100; ++i) {
    for (std::uint64_t j = 0; j < 100; ++j) {
      const std::uint64_t k = tau(i, j);
      seen.push_back(k);
      const auto [a, b] = tauInv(k);
      c.require(a == i && b == j, "tauInv round trip failed");
    }
  }
  std::sort(seen.begin(), seen.end());
  c.require(std::adjacent_find(seen.begin(), seen.end()) == seen.end(),
            "tau not injective on [0,100)^2");
  // Anything triangle-below a pair has a sum no larger than the pair's.
  std::vector<Pair> pairs;
  for (std::uint64_t i = 0; i < 100; ++i) {
    for (std::uint64_t j = 0; j < 100; ++j) pairs.push_back({i, j});
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    return tau(a) < tau(b);
  });
  std::uint64_t maxSum = 0;
  for (const Pair& p : pairs) {
    const std::uint64_t sum = p.first + p.second;
    c.require(sum >= maxSum, "pair sums must be monotone along tau");
    maxSum = std::max(maxSum, sum);
  }
  return c;
}

Check criterion3(const VerificationProfile& profile) {
  Check c;
  // Exhaustive: every valid depth-4 clipped tree is the prefix closure
  // of a nonempty set of depth-4 leaves.
  const std::uint32_t exhaustiveMax = profile.quick ? 4095 : 65535;
  for (std::uint32_t mask = 1; mask <= exhaustiveMax; ++mask) {
    std::vector<TreeNode> leaves;
    for (std::uint32_t b = 0; b < 16; ++b) {
      if (mask & (1u << b)) leaves.push_back((1u << 4) | b);
    }
    const ClippedTree t = ClippedTree::fromLeaves(4, leaves);
    const auto ts = canonicalTerms(t);
    if (!(treeOfTerms(ts, 4) == t)) {
      c.fail("depth-4 round trip failed at mask " + std::to_string(mask));
      return c;
    }
    ++c.cases;
  }
  Rng rng(profile.seed * 31 + 3);
  const std::uint32_t samples =
      profile.quick ? profile.treeSamples / 20 : profile.treeSamples;
  for (std::uint32_t s = 0; s < samples; ++s) {
    const std::uint32_t depth = 5 + s % 4;
    const ClippedTree t = randomTree(rng, depth);
    const auto ts = canonicalTerms(t);
    if (!(treeOfTerms(ts, depth) == t)) {
      c.fail("sampled round trip failed at depth " + std::to_string(depth));
      return c;
    }
    ++c.cases;
  }
  return c;
}

Check criterion4(const VerificationProfile& profile) {
  Check c;
  Rng rng(profile.seed * 31 + 4);
  const std::uint32_t triples =
      profile.quick ? profile.algebraTriples / 20 : profile.algebraTriples;
  const Substitution id = Substitution::identity();
  for (std::uint32_t s = 0; s < triples; ++s) {
    const Term t = randomTerm(rng, 6, 6);
    const Substitution phi = randomSubstitution(rng, 6, 6, 3);
    const Substitution psi = randomSubstitution(rng, 6, 6, 3);
    const Substitution chi = randomSubstitution(rng, 6, 6, 3);

    // substitute distributes over compose.
    const Term lhs = substitute(t, compose(phi, psi));
    const Term rhs = substitute(substitute(t, phi), psi);
    if (!equiv(lhs, rhs)) {
      c.fail("compose/substitute mismatch at sample " + std::to_string(s));
      return c;
    }
    // Associativity of composition, on a shared domain probe.
    const Substitution a1 = compose(compose(phi, psi), chi);
    const Substitution a2 = compose(phi, compose(psi, chi));
    for (std::uint32_t k = 0; k < 6; ++k) {
      if (!equiv(a1.image(VariableId(k)), a2.image(VariableId(k)))) {
        c.fail("composition not associative at sample " + std::to_string(s));
        return c;
      }
    }
    // Identity laws.
    if (!equiv(substitute(t, id), t)) {
      c.fail("identity substitution failed");
      return c;
    }
    // eval o substitute consistency, over the full relevant support.
    const Term st = substitute(t, phi);
    std::vector<VariableId> u = st.support();
    for (VariableId v : t.support()) {
      const Term img = phi.image(v);
      u.insert(u.end(), img.support().begin(), img.support().end());
    }
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    const std::uint64_t total = std::uint64_t{1} << u.size();
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      Assignment a;
      for (std::size_t p = 0; p < u.size(); ++p) {
        a.set(u[p], (idx >> (u.size() - 1 - p)) & 1);
      }
      Assignment aPrime;
      for (VariableId v : t.support()) aPrime.set(v, eval(phi.image(v), a));
      if (eval(st, a) != eval(t, aPrime)) {
        c.fail("eval/substitute inconsistency at sample " + std::to_string(s));
        return c;
      }
    }
    ++c.cases;
  }
  return c;
}

Check criterion5(const VerificationProfile& profile) {
  Check c;
  Rng rng(profile.seed * 31 + 5);
  const std::uint32_t samples = profile.quick ? profile.refinementSamples / 20
                                              : profile.refinementSamples;
  for (std::uint32_t s = 0; s < samples; ++s) {
    const std::uint32_t depth = 5 + s % 3;
    const ClippedTree t = randomTree(rng, depth);
    const ClippedTree tsub = randomSubtree(rng, t);
    const RefinementWitness w = refinementSubstitution(t, tsub);
    const auto tsT = canonicalTerms(t);
    const auto tsS = canonicalTerms(tsub);
    const std::uint32_t upto =
        std::min<std::uint32_t>(w.certified, depth);
    for (std::uint32_t l = 0; l < upto; ++l) {
      if (!equiv(substitute(tsT[l], w.phi), primeVariables(tsS[l]))) {
        c.fail("witness does not certify order at sample " +
               std::to_string(s));
        return c;
      }
    }
    // Refinements of a common tree always admit a common refinement
    // with two splitting levels.
    ClippedTree common = randomTree(rng, depth);
    while (!searchCommonRefinement(common, common, 2)) {
      common = randomTree(rng, depth);
    }
    auto extend = [&](const ClippedTree& base) {
      std::vector<TreeNode> leaves = base.leaves();
      for (TreeNode extra : randomLeafSet(rng, depth)) {
        if (rng() & 1) leaves.push_back(extra);
      }
      return ClippedTree::fromLeaves(depth, leaves);
    };
    const ClippedTree r1 = extend(common);
    const ClippedTree r2 = extend(common);
    const auto found = searchCommonRefinement(r1, r2, 2);
    if (!found) {
      c.fail("no common refinement found below two refinements at sample " +
             std::to_string(s));
      return c;
    }
    const TreeReport rep = validateTree(*found);
    if (!rep.valid) {
      c.fail("common refinement invalid at sample " + std::to_string(s));
      return c;
    }
    ++c.cases;
  }
  return c;
}

Check criterion6(const VerificationProfile& profile) {
  Check c;
  const RCondPtr rdelta = buildRDelta();
  Window w;
  w.rows = 10;
  w.cols = profile.quick ? 6 : 10;
  w.coefCap = profile.quick ? 12 : 50;
  w.cohereBlocks = 4;
  const RValidationReport rep = validateR(*rdelta, w);
  c.require(rep.valid, "validate_R rejected the diagonal condition: " +
                           (rep.violations.empty()
                                ? std::string("?")
                                : rep.violations.front().detail));
  c.require(rep.horizonNotes.empty(),
            "diagonal condition has sites beyond the horizon");

  const TermGridPtr sig = sigma(rdelta);
  Window qw;
  qw.rows = profile.quick ? 12 : 30;
  qw.cols = profile.quick ? 12 : 30;
  const ConditionReport qrep = validateCondition(*sig, ConditionMode::QStar, qw);
  c.require(qrep.hardValid, "sigma image fails the square validation");
  bool x00Determined = false;
  for (const auto& d : qrep.determinations) {
    if (d.var == VariableId::fromPair(0, 0) &&
        d.status == DetStatus::Determined) {
      x00Determined = true;
    }
  }
  c.require(x00Determined, "x(0,0) must be determined within the window");

  for (std::uint32_t n = 0; n < 10; ++n) {
    std::uint32_t zeros = 0;
    for (std::uint32_t m = 0; m < 200; ++m) {
      const Term cell = sig->at(n, m);
      if (cell.isConstant() && !cell.constantValue()) {
        ++zeros;
      } else if (!cell.isConstant()) {
        const auto [i, j] = cell.support().front().pairView();
        c.require(cell.support().size() == 1 &&
                      equiv(cell, Term::variable(cell.support().front())),
                  "entries must be variables or zero");
        c.require(i + j < n, "variable entry too high for its row");
      }
    }
    c.require(zeros >= 10, "row " + std::to_string(n) +
                               " shows fewer than 10 zeros before column 200");
  }
  return c;
}

RCondPtr sampleCondition(Rng& rng, std::uint32_t budget);

RCondPtr sampleAtom(Rng& rng) {
  switch (rng() % 3) {
    case 0:
      return buildRDelta();
    case 1:
      return buildRMult();
    default: {
      const PresentedSubstitution phi = randomValidPhi(rng, 4 + rng() % 4);
      auto built = matrixToCondition(composedMatrix(
          scheduleMatrix(), std::make_shared<PresentedSubstitution>(phi)));
      return std::get<RCondPtr>(built);
    }
  }
}

RCondPtr sampleCondition(Rng& rng, std::uint32_t budget) {
  if (budget == 0 || rng() % 2 == 0) return sampleAtom(rng);
  return stackConditions(sampleCondition(rng, budget - 1), sampleAtom(rng));
}

Check criterion7(const VerificationProfile& profile) {
  Check c;
  Rng rng(profile.seed * 31 + 7);
  const std::uint32_t pairs =
      profile.quick ? std::max(2u, profile.stackPairs / 20) : profile.stackPairs;
  Window w;
  w.rows = 4;
  w.cols = 6;
  w.coefCap = 12;
  w.cohereBlocks = 3;
  for (std::uint32_t s = 0; s < pairs; ++s) {
    const RCondPtr p = sampleCondition(rng, 1);
    const RCondPtr q = sampleCondition(rng, 1);
    const RCondPtr stacked = stackConditions(p, q);
    // sigma is a homomorphism for stacking; columns reach past the
    // first coded diagonals.
    const TermGridPtr lhs = sigma(stacked);
    const TermGridPtr rhs = composeGrid(sigma(p), sigma(q));
    for (std::uint32_t n = 0; n < w.rows; ++n) {
      for (std::uint32_t m = 0; m < 13; ++m) {
        if (!equiv(lhs->at(n, m), rhs->at(n, m))) {
          c.fail("sigma homomorphism failed at sample " + std::to_string(s));
          return c;
        }
      }
    }
    // split o stack is the identity on the window.
    const auto parts = splitCondition(stacked, p->delta());
    if (const auto* err = std::get_if<SplitError>(&parts)) {
      c.fail("split rejected a stacking boundary: " + err->reason);
      return c;
    }
    const auto& [bottom, top] = std::get<SplitParts>(parts);
    std::string why;
    if (!sameOnWindow(*bottom, *p, w, &why) ||
        !sameOnWindow(*top, *q, w, &why)) {
      c.fail("split/stack round trip failed at sample " + std::to_string(s) +
             ": " + why);
      return c;
    }
    // Stacking always lands term-below the base.
    if (!termStronger(*stacked, *p, w).ok) {
      c.fail("stacked condition not term-stronger at sample " +
             std::to_string(s));
      return c;
    }
    ++c.cases;
  }
  return c;
}

Check criterion8(const VerificationProfile& profile) {
  Check c;
  Rng rng(profile.seed * 31 + 8);
  const std::uint32_t samples = profile.quick
                                    ? std::max(2u, profile.substitutionSamples / 20)
                                    : profile.substitutionSamples;
  Window w;
  w.rows = 5;
  w.cols = 10;
  w.coefCap = 8;
  w.cohereBlocks = 4;
  for (std::uint32_t s = 0; s < samples; ++s) {
    const std::uint32_t prefix = 2 + s % 11;  // N <= 12
    const PresentedSubstitution phi = randomValidPhi(rng, prefix);
    if (!validateCondition(phi, ConditionMode::QStar, w).hardValid) {
      c.fail("sampler produced an invalid presentation at sample " +
             std::to_string(s));
      return c;
    }
    const PresentedMatrixPtr input = composedMatrix(
        scheduleMatrix(), std::make_shared<PresentedSubstitution>(phi));
    auto built = matrixToCondition(input);
    if (const auto* err = std::get_if<BuildError>(&built)) {
      c.fail("builder rejected a valid input at sample " + std::to_string(s) +
             ": " + err->detail);
      return c;
    }
    const RCondPtr q = std::get<RCondPtr>(built);
    const TermGridPtr sig = sigma(q);
    for (std::uint32_t n = 0; n < 6; ++n) {
      for (std::uint32_t m = 0; m < 10; ++m) {
        if (!equiv(sig->at(n, m), input->at(n, m))) {
          c.fail("sigma(q) differs from the input at sample " +
                 std::to_string(s));
          return c;
        }
      }
    }
    const RValidationReport rep = validateR(*q, w);
    if (!rep.valid) {
      c.fail("built condition invalid at sample " + std::to_string(s) + ": " +
             (rep.violations.empty() ? std::string("?")
                                     : rep.violations.front().detail));
      return c;
    }
    if (!rep.horizonNotes.empty()) {
      c.fail("built condition not fully presentable at sample " +
             std::to_string(s) + ": " + rep.horizonNotes.front().detail);
      return c;
    }
    ++c.cases;
  }
  return c;
}

Check criterion9(const VerificationProfile& profile) {
  Check c;
  // The same substitution stream as the builder sweep.
  Rng rng(profile.seed * 31 + 8);
  Rng baseRng(profile.seed * 31 + 9);
  const std::uint32_t samples = profile.quick
                                    ? std::max(2u, profile.substitutionSamples / 25)
                                    : profile.substitutionSamples;
  Window w;
  w.rows = 4;
  w.cols = 6;
  w.coefCap = 12;
  w.cohereBlocks = 3;
  for (std::uint32_t s = 0; s < samples; ++s) {
    const std::uint32_t prefix = 2 + s % 11;
    const PresentedSubstitution phi = randomValidPhi(rng, prefix);
    RCondPtr p;
    switch (baseRng() % 3) {
      case 0: p = buildRDelta(); break;
      case 1: p = buildRMult(); break;
      default: p = stackConditions(buildRDelta(), buildRMult()); break;
    }
    auto result = absorbSubstitution(p, phi, w);
    if (const auto* err = std::get_if<BuildError>(&result)) {
      c.fail("pipeline rejected sample " + std::to_string(s) + ": " +
             err->detail);
      return c;
    }
    const PipelineResult& r = std::get<PipelineResult>(result);
    if (!r.qStronger) {
      c.fail("q not term-stronger than p at sample " + std::to_string(s));
      return c;
    }
    if (!r.sigmaMatches) {
      c.fail("sigma(q) mismatch at sample " + std::to_string(s) + ": " +
             r.detail);
      return c;
    }
    if (!r.witnessHolds) {
      c.fail("order witness failed at sample " + std::to_string(s));
      return c;
    }
    ++c.cases;
  }
  return c;
}

Check criterion10(const VerificationProfile& profile) {
  Check c;
  Rng rng(profile.seed * 31 + 10);
  constexpr std::uint32_t kRows = 6;
  constexpr std::uint32_t kLevels = 10;  // limit levels w, w*2, ..., w*10
  constexpr std::uint32_t kSiteCols = 5; // 50 sites per row
  const Ordinal height = Ordinal::monomial(1, kLevels + 1);

  auto prep = std::make_shared<TablePrep>(Ordinal::monomial(1, kLevels));
  for (std::uint32_t r = 0; r < kRows; ++r) {
    for (std::uint32_t b = 0; b < kLevels; ++b) {
      for (std::uint32_t m = 0; m < kSiteCols; ++m) {
        TablePrep::FamilySpec spec;
        spec.nu.stride = Ordinal::nat(kSiteCols);
        spec.nu.offset = add(Ordinal::monomial(1, b), Ordinal::nat(m));
        prep->setFamily({Ordinal::monomial(1, b + 1), r, m}, spec);
      }
    }
  }

  // Build the family top-down: every row's site values become the
  // targets realized by extending the row below it. Extensions start
  // from an all-zero base of height w, so the lowest limit level (whose
  // nu positions sit inside the base) reads stable zeros.
  std::vector<BitSeq> rows;
  rows.reserve(kRows);
  std::map<std::pair<Ordinal, std::uint32_t>, bool> want;
  for (std::uint32_t b = 1; b < kLevels; ++b) {
    for (std::uint32_t m = 0; m < kSiteCols; ++m) {
      want[{Ordinal::monomial(1, b + 1), m}] = rng() & 1;
    }
  }
  const auto expectedRow0 = want;
  rows.push_back(BitSeq(height));  // row 0 carries no data reconstruct reads
  std::vector<std::map<std::pair<Ordinal, std::uint32_t>, bool>> expected;
  expected.push_back(expectedRow0);
  ExtendParams ep;
  ep.blocksPerSite = 14;
  for (std::uint32_t r = 1; r < kRows; ++r) {
    const BitSeq base(Ordinal::omega());
    const ExtendResult ext =
        extendCondition(*prep, base, height, want, r - 1, ep);
    rows.push_back(ext.seq);
    // The new row's own site values are whatever the extension wrote.
    want.clear();
    for (std::uint32_t b = 1; b < kLevels; ++b) {
      for (std::uint32_t m = 0; m < kSiteCols; ++m) {
        const Ordinal level = Ordinal::monomial(1, b + 1);
        want[{level, m}] = ext.seq.at(add(level, Ordinal::nat(m)));
      }
    }
    expected.push_back(want);
  }

  ReconstructParams rp;
  rp.blocks = 12;
  rp.stabilityRuns = 3;
  rp.coefCap = kLevels + 1;
  rp.siteCols = kSiteCols;
  auto checkReport = [&](const ReconstructionReport& rep,
                         const std::string& label) {
    std::uint64_t checked = 0;
    for (const RecoveredSite& site : rep.sites) {
      if (!site.stable) {
        c.fail(label + ": unstable site at level " + site.level.toString());
        return;
      }
      const auto it = expected[site.row].find({site.level, site.m});
      if (it == expected[site.row].end()) continue;
      if (site.value != it->second) {
        c.fail(label + ": wrong value at row " + std::to_string(site.row) +
               ", level " + site.level.toString() + "+" +
               std::to_string(site.m));
        return;
      }
      ++checked;
    }
    if (checked < (kRows - 1) * (kLevels - 1) * kSiteCols) {
      c.fail(label + ": only " + std::to_string(checked) +
             " sites recovered");
    }
  };
  checkReport(reconstruct(*prep, rows, rp), "clean");
  if (!c.pass) return c;
  c.cases = (kRows - 1) * (kLevels - 1) * kSiteCols;

  // Finite perturbations below the read positions leave every verdict
  // unchanged: flip bits read only by blocks before the stability tail.
  const std::uint32_t perturbations =
      profile.quick ? 3 : profile.perturbations;
  for (std::uint32_t t = 0; t < perturbations; ++t) {
    std::vector<BitSeq> jittered = rows;
    const std::uint32_t r = 1 + rng() % (kRows - 1);
    const std::uint32_t b = 1 + rng() % (kLevels - 1);
    const std::uint32_t m = rng() % kSiteCols;
    const FamilyKey key{Ordinal::monomial(1, b + 1),
                        static_cast<std::uint32_t>(r - 1), m};
    const std::uint64_t block = rng() % 3;  // well before the final runs
    const Ordinal pos = prep->nuAt(key, prep->jAt(key, block));
    jittered[r].set(pos, !jittered[r].at(pos));
    checkReport(reconstruct(*prep, jittered, rp),
                "perturbation " + std::to_string(t));
    if (!c.pass) return c;
  }
  return c;
}

struct CriterionSpec {
  int id;
  const char* name;
  Check (*run)(const VerificationProfile&);
};

constexpr CriterionSpec kSpecs[] = {
    {1, "worked example: canonical terms, refinement witness, collapse",
     criterion1},
    {2, "pairing suite: value, bijectivity, sum monotonicity", criterion2},
    {3, "tree/term round trip: exhaustive depth 4 plus samples", criterion3},
    {4, "substitution algebra laws on random triples", criterion4},
    {5, "refinement witnesses certify order; common refinements exist",
     criterion5},
    {6, "diagonal condition: validation, square image, row bounds, zeros",
     criterion6},
    {7, "stacking algebra: sigma homomorphism and split/stack round trip",
     criterion7},
    {8, "builder: sigma round trip and validation over sampled inputs",
     criterion8},
    {9, "absorption pipeline: strength, sigma identity, order witness",
     criterion9},
    {10, "reconstruction: extended families recovered from their tails",
     criterion10},
};

}  // namespace

bool SuiteReport::allPass() const {
  return std::all_of(results.begin(), results.end(),
                     [](const CriterionResult& r) { return r.pass; });
}

std::string SuiteReport::render() const {
  std::ostringstream os;
  os << "seed " << seed << "\n";
  for (const CriterionResult& r : results) {
    os << (r.pass ? "[PASS]" : "[FAIL]") << " criterion " << r.id << ": "
       << r.name;
    if (!r.pass) os << " -- " << r.detail;
    os << "\n";
  }
  os << (allPass() ? "all criteria passed" : "CRITERIA FAILED") << "\n";
  return os.str();
}

CriterionResult runCriterion(int id, const VerificationProfile& profile) {
  for (const CriterionSpec& spec : kSpecs) {
    if (spec.id != id) continue;
    CriterionResult r;
    r.id = id;
    r.name = spec.name;
    const auto start = std::chrono::steady_clock::now();
    try {
      const Check c = spec.run(profile);
      r.pass = c.pass;
      r.detail = c.pass ? std::to_string(c.cases) + " cases" : c.detail;
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - start)
                    .count();
    return r;
  }
  throw std::invalid_argument("unknown criterion id " + std::to_string(id));
}

SuiteReport runSuite(const VerificationProfile& profile) {
  std::vector<int> ids;
  for (int i = 1; i <= kCriteria; ++i) ids.push_back(i);
  return runSuite(profile, ids);
}

SuiteReport runSuite(const VerificationProfile& profile,
                     const std::vector<int>& ids) {
  SuiteReport rep;
  rep.seed = profile.seed;
  for (int id : ids) rep.results.push_back(runCriterion(id, profile));
  return rep;
}

}  // namespace termsq
