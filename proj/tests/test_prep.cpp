#include <doctest.h>

#include "termsq/prep.hpp"

using namespace termsq;

namespace {

Ordinal w(std::uint64_t c) { return Ordinal::monomial(1, c); }

// Identity-coded family at level w^2 reading along w*(k+1).
TablePrep identityPrep() {
  TablePrep prep(Ordinal::omegaSq());
  TablePrep::FamilySpec spec;
  spec.nu.stride = Ordinal::omega();
  spec.nu.startIndex = 1;
  prep.setFamily({Ordinal::omegaSq(), 0, 0}, spec);
  return prep;
}

}  // namespace

TEST_CASE("g reads one bit under identity coding") {
  const TablePrep prep = identityPrep();
  const FamilyKey key{Ordinal::omegaSq(), 0, 0};
  const BitSeq ones(Ordinal::omegaSq(), true);
  const BitSeq zeros(Ordinal::omegaSq(), false);
  for (std::uint64_t k = 0; k < 8; ++k) {
    CHECK(gEval(prep, key, k, ones));
    CHECK_FALSE(gEval(prep, key, k, zeros));
  }
}

TEST_CASE("block functions fold their window") {
  // Blocks of size 2, f = XOR of the block, positions 0,1,2,... below w.
  TablePrep prep(w(1));
  TablePrep::FamilySpec spec;
  spec.nu.stride = Ordinal::nat(1);
  spec.blockSizePrefix = {2, 2, 2, 2};
  spec.blockSizeTail = 2;
  for (int k = 0; k < 4; ++k) spec.fTables.push_back({false, true, true, false});
  prep.setFamily({w(1), 0, 0}, spec);
  BitSeq eta(w(1));
  for (std::uint64_t i = 0; i < 8; ++i) eta.set(Ordinal::nat(i), i % 2 == 1);
  const FamilyKey key{w(1), 0, 0};
  CHECK(gEval(prep, key, 0, eta));  // bits (0,1) -> xor = 1
  CHECK(gEval(prep, key, 1, eta));
}

TEST_CASE("coherence search returns the least stable block") {
  const TablePrep prep = identityPrep();
  const FamilyKey key{Ordinal::omegaSq(), 0, 0};
  const BitSeq ones(Ordinal::omegaSq(), true);
  CHECK(checkCohereBits(prep, key, true, ones, 8) == 0);

  BitSeq mixed(Ordinal::omegaSq(), true);
  mixed.set(w(1), false);  // block 0 reads w*1
  CHECK(checkCohereBits(prep, key, true, mixed, 8) == 1);
  CHECK_FALSE(checkCohereBits(prep, key, false, ones, 8).has_value());
}

TEST_CASE("finite modification shifts the stable block boundedly") {
  const TablePrep prep = identityPrep();
  const FamilyKey key{Ordinal::omegaSq(), 0, 0};
  BitSeq source(Ordinal::omegaSq(), true);
  // Flip three early read positions.
  for (std::uint64_t k = 0; k < 3; ++k) {
    source.set(w(k + 1), false);
  }
  const auto k0 = checkCohereBits(prep, key, true, source, 10);
  REQUIRE(k0.has_value());
  CHECK(*k0 <= 3);
}

TEST_CASE("extension with no targets is the padded default") {
  const TablePrep prep = identityPrep();
  const ExtendResult ext = extendCondition(prep, BitSeq(w(1)),
                                           Ordinal::omegaSq(), {}, 0);
  CHECK(ext.seq.height() == Ordinal::omegaSq());
  CHECK(ext.seq.exceptions().empty());
  // The all-zero extension coheres with target 0.
  CHECK(checkCohereBits(prep, {Ordinal::omegaSq(), 0, 0}, false, ext.seq, 6)
            .has_value());
}

TEST_CASE("extension realizes a target along the family tail") {
  const TablePrep prep = identityPrep();
  std::map<std::pair<Ordinal, std::uint32_t>, bool> targets;
  targets[{Ordinal::omegaSq(), 0}] = true;
  const ExtendResult ext =
      extendCondition(prep, BitSeq(w(1)), Ordinal::omegaSq(), targets, 0);
  const auto k0 =
      checkCohereBits(prep, {Ordinal::omegaSq(), 0, 0}, true, ext.seq, 7);
  REQUIRE(k0.has_value());
  CHECK(*k0 == 0);
}

TEST_CASE("overlapping families with clashing targets conflict") {
  TablePrep prep(Ordinal::omegaSq());
  TablePrep::FamilySpec spec;
  spec.nu.stride = Ordinal::omega();
  spec.nu.startIndex = 1;
  prep.setFamily({Ordinal::omegaSq(), 0, 0}, spec);
  prep.setFamily({Ordinal::omegaSq(), 0, 1}, spec);  // the same positions
  std::map<std::pair<Ordinal, std::uint32_t>, bool> targets;
  targets[{Ordinal::omegaSq(), 0}] = true;
  targets[{Ordinal::omegaSq(), 1}] = false;
  CHECK_THROWS_AS(extendCondition(prep, BitSeq(w(1)), Ordinal::omegaSq(),
                                  targets, 0),
                  PrepConflictError);
}

TEST_CASE("reconstruction recovers constant families") {
  // Families at levels w*(b+1) for row 0, reading m + 3k inside block b.
  TablePrep prep(w(3));
  for (std::uint32_t b = 0; b < 3; ++b) {
    for (std::uint32_t m = 0; m < 3; ++m) {
      TablePrep::FamilySpec spec;
      spec.nu.stride = Ordinal::nat(3);
      spec.nu.offset = add(w(b), Ordinal::nat(m));
      prep.setFamily({w(b + 1), 0, m}, spec);
    }
  }
  const Ordinal height = w(4);
  ReconstructParams rp;
  rp.coefCap = 4;
  rp.siteCols = 3;
  for (bool bit : {true, false}) {
    const std::vector<BitSeq> rows{BitSeq(height, bit), BitSeq(height, bit)};
    const ReconstructionReport rep = reconstruct(prep, rows, rp);
    CHECK(rep.allStable);
    CHECK(rep.sites.size() == 9);
    for (const RecoveredSite& s : rep.sites) CHECK(s.value == bit);
  }
}

TEST_CASE("term-form coherence finds one stable block for all assignments") {
  const TablePrep prep = identityPrep();
  const FamilyKey key{Ordinal::omegaSq(), 0, 0};
  const Term x = Term::variable(VariableId::fromPair(0, 0));
  // Sources all equal to the variable: both assignments agree blockwise.
  CHECK(checkCohereTerms(prep, key, x, [&](std::uint64_t) { return x; }, 6) ==
        0);
  // A flipped early source shifts the boundary by one block.
  CHECK(checkCohereTerms(prep, key, x,
                         [&](std::uint64_t i) {
                           return i == 0 ? termNot(x) : x;
                         },
                         6) == 1);
  // A source that never matches has no stable block.
  CHECK_FALSE(checkCohereTerms(prep, key, x,
                               [&](std::uint64_t) {
                                 return Term::constant(false);
                               },
                               6)
                  .has_value());
}
