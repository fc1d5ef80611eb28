#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <functional>
#include <span>
#include <vector>

#include "termsq/ordinal.hpp"
#include "termsq/term.hpp"

namespace termsq {

// Index of one (nu, j, f) family: the limit level, the row of the site
// it serves, and the finite offset m. The family at (level, row, m)
// computes the value at site level+m of row `row` from the row below it
// (row+1 in matrix conventions).
struct FamilyKey {
  Ordinal level;
  std::uint32_t row = 0;
  std::uint32_t m = 0;

  friend bool operator==(const FamilyKey&, const FamilyKey&) = default;
  friend bool operator<(const FamilyKey& a, const FamilyKey& b) {
    if (a.level != b.level) return a.level < b.level;
    if (a.row != b.row) return a.row < b.row;
    return a.m < b.m;
  }
};

// Presented preparatory data. nu enumerations are strictly increasing
// and live below their level; j is increasing with j(0) = 0; f maps each
// block's bits onto a single bit, surjectively.
class Prep {
 public:
  virtual ~Prep() = default;
  // Families are presented for every limit level <= delta().
  virtual Ordinal delta() const = 0;
  virtual Ordinal nuAt(const FamilyKey& key, std::uint64_t i) const = 0;
  virtual std::uint64_t jAt(const FamilyKey& key, std::uint64_t k) const = 0;
  std::uint64_t blockSize(const FamilyKey& key, std::uint64_t k) const {
    return jAt(key, k + 1) - jAt(key, k);
  }
  virtual bool identityCoding(const FamilyKey& key) const = 0;
  virtual bool fApply(const FamilyKey& key, std::uint64_t k,
                      const std::vector<bool>& block) const = 0;
};

// A finitely presented 0-1 sequence on the ordinals below its height:
// finite exception table over a constant default.
class BitSeq {
 public:
  explicit BitSeq(Ordinal height, bool defaultBit = false)
      : height_(std::move(height)), default_(defaultBit) {}

  const Ordinal& height() const { return height_; }
  bool defaultBit() const { return default_; }
  bool at(const Ordinal& pos) const;
  void set(const Ordinal& pos, bool b);
  const std::map<Ordinal, bool>& exceptions() const { return except_; }
  BitSeq withHeight(Ordinal h) const;

 private:
  Ordinal height_;
  bool default_;
  std::map<Ordinal, bool> except_;
};

// Explicit table-backed prep for hand-built data.
class TablePrep : public Prep {
 public:
  struct NuSpec {
    std::vector<Ordinal> prefix;  // explicit first members
    // Members beyond the prefix: offset + stride*(startIndex + i),
    // where stride is a monomial.
    Ordinal stride = Ordinal::omega();
    std::uint64_t startIndex = 0;
    Ordinal offset;
  };
  struct FamilySpec {
    NuSpec nu;
    std::vector<std::uint64_t> blockSizePrefix;  // sizes of blocks 0,1,...
    std::uint64_t blockSizeTail = 1;
    // Truth tables for the first blocks (bit i of the block is the most
    // significant); blocks beyond the table prefix are identity (and
    // must have size 1).
    std::vector<std::vector<bool>> fTables;
  };

  explicit TablePrep(Ordinal delta) : delta_(std::move(delta)) {}

  void setFamily(const FamilyKey& key, FamilySpec spec);
  bool hasFamily(const FamilyKey& key) const;

  Ordinal delta() const override { return delta_; }
  Ordinal nuAt(const FamilyKey& key, std::uint64_t i) const override;
  std::uint64_t jAt(const FamilyKey& key, std::uint64_t k) const override;
  bool identityCoding(const FamilyKey& key) const override;
  bool fApply(const FamilyKey& key, std::uint64_t k,
              const std::vector<bool>& block) const override;
  const std::map<FamilyKey, FamilySpec>& families() const { return specs_; }

 private:
  const FamilySpec& spec(const FamilyKey& key) const;
  Ordinal delta_;
  std::map<FamilyKey, FamilySpec> specs_;
};

// g_{level,row,m,k}(eta): f applied to the eta-values read along the
// k-th j-block of nu.
bool gEval(const Prep& prep, const FamilyKey& key, std::uint64_t k,
           const BitSeq& eta);

// Least k0 <= maxBlocks with g equal to the target on every block in
// [k0, maxBlocks]; nullopt when there is none within the horizon.
std::optional<std::uint64_t> checkCohereBits(const Prep& prep,
                                             const FamilyKey& key, bool target,
                                             const BitSeq& source,
                                             std::uint64_t maxBlocks);

// Term form: one k0 for every assignment of the joint support. source
// maps the nu index i to the term at position nu(i).
std::optional<std::uint64_t> checkCohereTerms(
    const Prep& prep, const FamilyKey& key, const Term& target,
    const std::function<Term(std::uint64_t)>& source, std::uint64_t maxBlocks,
    std::uint32_t supportCap = kDefaultSupportCap);

struct ExtendParams {
  std::uint64_t blocksPerSite = 8;  // blocks claimed per coherence site
  std::uint64_t scanBlocks = 64;    // give up after this many skipped blocks
};

class PrepConflictError : public std::runtime_error {
 public:
  explicit PrepConflictError(const std::string& what)
      : std::runtime_error(what) {}
};

struct ExtendResult {
  BitSeq seq;
  // First fully claimed block per coherence site (a k0 certificate).
  std::map<std::pair<Ordinal, std::uint32_t>, std::uint64_t> firstBlock;
};

// Extends q to height beta, writing bits along the tails of the nu
// families at row `row` so that the extension coheres with the given
// target at each listed site (level, m). Unwritten positions read the
// sequence default.
ExtendResult extendCondition(
    const Prep& prep, const BitSeq& q, const Ordinal& beta,
    const std::map<std::pair<Ordinal, std::uint32_t>, bool>& targets,
    std::uint32_t row = 0, const ExtendParams& params = {});

struct RecoveredSite {
  Ordinal level;
  std::uint32_t row = 0;  // the row whose value is recovered
  std::uint32_t m = 0;
  bool value = false;
  bool stable = false;
  std::uint64_t runStart = 0;  // first block of the final constant run
};

struct ReconstructionReport {
  std::vector<RecoveredSite> sites;
  bool allStable = true;
};

struct ReconstructParams {
  std::uint64_t blocks = 12;       // g evaluations per site
  std::uint64_t stabilityRuns = 3; // agreeing final blocks required
  std::uint64_t coefCap = 8;       // addressable levels
  std::uint32_t siteCols = 8;      // offsets m per level
};

// Recovers the site values of rows 0..rows.size()-2 from the rows one
// level down: row n's value at level+m is the stabilized g of row n+1.
ReconstructionReport reconstruct(const Prep& prep,
                                 std::span<const BitSeq> rows,
                                 const ReconstructParams& params = {});

}  // namespace termsq
