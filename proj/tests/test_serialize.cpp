#include <doctest.h>

#include "termsq/serialize.hpp"
#include "termsq/suite.hpp"
#include "termsq/dotexport.hpp"

using namespace termsq;

TEST_CASE("terms round trip bit-exactly") {
  const Term t = Term::fromTableString(
      {VariableId(0), VariableId(1), VariableId(2)}, "01110011");
  const std::string json = termToJson(t);
  CHECK(json.find("01110011") != std::string::npos);
  CHECK(termFromJson(json) == t);
}

TEST_CASE("ordinals round trip") {
  const Ordinal o = add(add(Ordinal::omegaSq(), Ordinal::omega()),
                        Ordinal::nat(4));
  CHECK(ordinalToJson(o) == "[[2,1],[1,1],[0,4]]");
  CHECK(ordinalFromJson(ordinalToJson(o)) == o);
}

TEST_CASE("trees round trip through their leaves") {
  const ClippedTree t =
      ClippedTree::fromLeafStrings(3, {"000", "001", "011", "110", "111"});
  CHECK(treeFromJson(treeToJson(t)) == t);
}

TEST_CASE("presented substitutions round trip") {
  PresentedSubstitution phi;
  phi.set(VariableId(2), termXor(Term::variable(VariableId(2)),
                                 Term::variable(VariableId(0))));
  const PresentedSubstitution back = substFromJson(substToJson(phi));
  CHECK(back.prefix() == phi.prefix());
  CHECK(equiv(back.image(VariableId(2)), phi.image(VariableId(2))));
  CHECK(equiv(back.image(VariableId(5)), Term::variable(VariableId(5))));
}

TEST_CASE("condition recipes parse") {
  const RCondPtr stack = conditionFromJson(
      R"({"kind":"stack","bottom":{"kind":"rdelta"},"top":{"kind":"rmult"}})");
  CHECK(stack->tag() == GenTag::Stack);
  CHECK(stack->delta().toString() == "w^2*2");

  const RCondPtr built = conditionFromJson(
      R"({"kind":"builder","matrix":{"kind":"composed",
          "base":{"kind":"schedule"},
          "by":{"kind":"subst","tail":"identity",
                "table":{"0":{"support":[0],"table":"10"}}}}})");
  CHECK(built->tag() == GenTag::Builder);
  // Slot (0,0) now carries NOT x(0,0).
  CHECK(equiv(built->cell(1, Ordinal::nat(1)),
              termNot(Term::variable(VariableId(0)))));
}

TEST_CASE("unknown kinds are rejected with a message") {
  CHECK_THROWS_AS(conditionFromJson(R"({"kind":"mystery"})"),
                  std::invalid_argument);
}

TEST_CASE("prep tables and bit sequences round trip") {
  TablePrep prep(Ordinal::omegaSq());
  TablePrep::FamilySpec spec;
  spec.nu.prefix = {Ordinal::nat(3)};
  spec.nu.stride = Ordinal::omega();
  spec.nu.startIndex = 1;
  spec.blockSizePrefix = {2};
  spec.fTables = {{false, true, true, false}};
  prep.setFamily({Ordinal::omegaSq(), 1, 2}, spec);
  const auto back = prepFromJson(prepToJson(prep));
  const FamilyKey key{Ordinal::omegaSq(), 1, 2};
  CHECK(back->nuAt(key, 0) == Ordinal::nat(3));
  CHECK(back->nuAt(key, 1) == Ordinal::omega());
  CHECK(back->jAt(key, 1) == 2);
  CHECK(back->fApply(key, 0, {false, true}));
  CHECK_FALSE(back->identityCoding(key));

  BitSeq seq(Ordinal::omegaSq(), false);
  seq.set(add(Ordinal::omega(), Ordinal::nat(2)), true);
  const BitSeq seqBack = bitseqFromJson(bitseqToJson(seq));
  CHECK(seqBack.at(add(Ordinal::omega(), Ordinal::nat(2))));
  CHECK_FALSE(seqBack.at(Ordinal::nat(7)));
}

TEST_CASE("suite reports are byte-identical for one seed") {
  VerificationProfile profile;
  profile.quick = true;
  const SuiteReport a = runSuite(profile, {1, 2});
  const SuiteReport b = runSuite(profile, {1, 2});
  CHECK(a.render() == b.render());
}

TEST_CASE("explicit conditions carry their prep tables") {
  auto prep = std::make_shared<TablePrep>(Ordinal::omega());
  TablePrep::FamilySpec spec;
  spec.nu.stride = Ordinal::nat(1);
  prep->setFamily({Ordinal::omega(), 0, 0}, spec);
  std::map<CellKey, Term> cells;
  cells.insert({CellKey{1, Ordinal::nat(0)}, Term::constant(true)});
  const RCondPtr cond =
      explicitCondition(Ordinal::omega(), std::move(cells), prep);
  const RCondPtr back = conditionFromJson(conditionToJson(cond));
  CHECK(back->tag() == GenTag::Explicit);
  CHECK(back->delta() == Ordinal::omega());
  CHECK(back->cell(1, Ordinal::nat(0)) == Term::constant(true));
  CHECK(back->cell(1, Ordinal::nat(3)) == Term::constant(false));
  CHECK(equiv(back->cell(0, Ordinal::omega()),
              Term::variable(VariableId::fromPair(0, 0))));
  CHECK(back->nuAt({Ordinal::omega(), 0, 0}, 4) == Ordinal::nat(4));
}

TEST_CASE("the empty grid window renders an empty graph") {
  const std::string dot = gridToDot(*identityGrid(), 0, 0);
  CHECK(dot == "digraph grid {\n  node [shape=box];\n}\n");
}
