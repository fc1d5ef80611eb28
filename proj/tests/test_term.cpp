#include <doctest.h>

#include <random>

#include "termsq/term.hpp"

using namespace termsq;

namespace {

const VariableId x0{0}, x1{1}, x2{2}, x5{5};

// The three-case term from the depth-3 worked example.
Term figureT2() {
  return Term::fromFunction({x0, x1, x2}, [](const std::vector<bool>& a) {
    if (!a[0] && !a[1]) return a[2];
    if (!a[0] && a[1]) return true;
    return a[1];
  });
}

Term xorTerm(VariableId a, VariableId b) {
  return termXor(Term::variable(a), Term::variable(b));
}

Term randomTerm(std::mt19937_64& rng, std::uint32_t pool,
                std::uint32_t maxArity) {
  std::vector<std::uint32_t> ids(pool);
  for (std::uint32_t i = 0; i < pool; ++i) ids[i] = i;
  std::shuffle(ids.begin(), ids.end(), rng);
  std::vector<VariableId> support;
  for (std::uint32_t i = 0; i < rng() % (maxArity + 1) && i < pool; ++i) {
    support.emplace_back(ids[i]);
  }
  std::sort(support.begin(), support.end());
  std::vector<bool> bits(std::uint64_t{1} << support.size());
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = rng() & 1;
  return Term::fromTable(support, bits);
}

}  // namespace

TEST_CASE("eval selects the table entry") {
  CHECK(eval(figureT2(), Assignment{{x0, false}, {x1, true}, {x2, false}}));
  CHECK(eval(Term::variable(x0), Assignment{{x0, true}}));
  CHECK_FALSE(eval(Term::constant(false), Assignment{}));
}

TEST_CASE("eval demands a total assignment on the support") {
  CHECK_THROWS_AS(eval(figureT2(), Assignment{{x0, false}}),
                  MissingVariableError);
}

TEST_CASE("substitution collapses the worked example") {
  // x0 -> 1, x1 -> x'(0) kills both x0=0 branches.
  Substitution phi(Substitution::Tail::Identity);
  phi.set(x0, Term::constant(true));
  phi.set(x1, Term::variable(x1));
  const Term result = substitute(figureT2(), phi);
  CHECK(equiv(result, Term::variable(x1)));
}

TEST_CASE("substituting the identity is the identity") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const Term t = randomTerm(rng, 6, 5);
    CHECK(equiv(substitute(t, Substitution::identity()), t));
  }
}

TEST_CASE("xor substitution example") {
  Substitution phi(Substitution::Tail::None);
  phi.set(x0, Term::constant(true));
  phi.set(x1, Term::variable(x2));
  const Term got = substitute(xorTerm(x0, x1), phi);
  CHECK(equiv(got, termNot(Term::variable(x2))));
}

TEST_CASE("substitute without an image for a support variable fails") {
  Substitution phi(Substitution::Tail::None);
  phi.set(x0, Term::constant(true));
  CHECK_THROWS_AS(substitute(xorTerm(x0, x1), phi), MissingVariableError);
}

TEST_CASE("compose agrees with sequential substitution pointwise") {
  Substitution phi(Substitution::Tail::Identity);
  phi.set(x0, Term::variable(x1));
  Substitution psi(Substitution::Tail::Identity);
  psi.set(x1, Term::constant(false));
  const Substitution both = compose(phi, psi);
  CHECK(equiv(both.image(x0), Term::constant(false)));
  CHECK(equiv(both.image(x1), Term::constant(false)));
}

TEST_CASE("compose is associative and respects identity") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 200; ++i) {
    Substitution phi(Substitution::Tail::Identity);
    Substitution psi(Substitution::Tail::Identity);
    Substitution chi(Substitution::Tail::Identity);
    for (std::uint32_t k = 0; k < 5; ++k) {
      phi.set(VariableId(k), randomTerm(rng, 5, 3));
      psi.set(VariableId(k), randomTerm(rng, 5, 3));
      chi.set(VariableId(k), randomTerm(rng, 5, 3));
    }
    const Term t = randomTerm(rng, 5, 4);
    CHECK(equiv(substitute(t, compose(phi, psi)),
                substitute(substitute(t, phi), psi)));
    const Substitution l = compose(compose(phi, psi), chi);
    const Substitution r = compose(phi, compose(psi, chi));
    for (std::uint32_t k = 0; k < 5; ++k) {
      CHECK(equiv(l.image(VariableId(k)), r.image(VariableId(k))));
    }
    // Left identity.
    const Substitution leftId = compose(Substitution::identity(), psi);
    for (std::uint32_t k = 0; k < 5; ++k) {
      CHECK(equiv(leftId.image(VariableId(k)), psi.image(VariableId(k))));
    }
  }
}

TEST_CASE("extensional equality ignores dummy variables") {
  // x0 padded with an inert x5.
  const Term padded = Term::fromTableString({x0, x5}, "0011");
  CHECK(equiv(padded, Term::variable(x0)));
  CHECK(equiv(xorTerm(x0, x0), Term::constant(false)));
  const Term handBuilt = Term::fromTableString({x0, x1, x2}, "01110011");
  CHECK(equiv(figureT2(), handBuilt));
}

TEST_CASE("determination on the worked example") {
  const Term t0 = Term::variable(x0);
  const Term t1 = Term::fromFunction(
      {x0, x1}, [](const std::vector<bool>& a) { return a[0] || a[1]; });
  const Term t2 = figureT2();
  const Term sx1 = Term::variable(x1);
  const std::vector<Term> one{t0};
  const std::vector<Term> two{t0, t1};
  const std::vector<Term> three{t0, t1, t2};
  CHECK(determines(one, Term::variable(x0)));
  CHECK_FALSE(determines(two, sx1));
  CHECK(determines(three, sx1));
}

TEST_CASE("determination is monotone in the family") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 200; ++i) {
    std::vector<Term> family;
    for (int k = 0; k < 4; ++k) family.push_back(randomTerm(rng, 5, 3));
    const Term target = randomTerm(rng, 5, 3);
    bool prev = false;
    for (std::size_t len = 1; len <= family.size(); ++len) {
      const bool now = determines(
          std::span<const Term>(family.data(), len), target);
      if (prev) CHECK(now);
      prev = now;
    }
  }
}

TEST_CASE("normalize drops dummies, collapses contradictions, idempotent") {
  const Term padded = Term::fromTableString({x0, x5}, "0011");
  const Term n = normalize(padded);
  CHECK(n.support().size() == 1);
  CHECK(n.support()[0].raw == x0.raw);

  const Term contradiction =
      termAnd(Term::variable(x0), termNot(Term::variable(x0)));
  CHECK(contradiction == Term::constant(false));

  std::mt19937_64 rng(14);
  for (int i = 0; i < 200; ++i) {
    const Term t = randomTerm(rng, 6, 5);
    CHECK(normalize(normalize(t)) == normalize(t));
    CHECK(equiv(normalize(t), t));
  }
}

TEST_CASE("normalization picks one representative per function class") {
  // All 256 truth tables over {x0,x1,x2}, each padded with every subset
  // of dummy behavior, normalize to the table-determined representative.
  std::vector<VariableId> support{x0, x1, x2};
  for (std::uint32_t bits = 0; bits < 256; ++bits) {
    std::vector<bool> table(8);
    for (int i = 0; i < 8; ++i) table[i] = (bits >> i) & 1;
    const Term a = Term::fromTable(support, table);
    // Same function with an extra inert variable.
    std::vector<bool> padded(16);
    for (int i = 0; i < 16; ++i) padded[i] = table[i >> 1];
    const Term b = Term::fromTable({x0, x1, x2, VariableId(7)}, padded);
    CHECK(normalize(a) == normalize(b));
  }
}

TEST_CASE("joint support beyond the horizon raises") {
  std::vector<VariableId> big;
  for (std::uint32_t i = 0; i < 22; ++i) big.emplace_back(i);
  std::vector<bool> bits(std::uint64_t{1} << 22);
  const Term wide = Term::fromTable(big, bits);
  CHECK_THROWS_AS(equiv(wide, Term::constant(false), 20), HorizonError);
}

TEST_CASE("table serialization order is pinned") {
  // Index reads the support-ordered assignment as a binary number with
  // the last support variable least significant.
  const Term t = figureT2();
  CHECK(t.tableString() == "01110011");
}
