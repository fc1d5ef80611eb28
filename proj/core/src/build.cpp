#include "termsq/build.hpp"

#include <algorithm>
#include <mutex>
#include <set>

namespace termsq {

// ---- Coding ---------------------------------------------------------------

namespace {

std::uint64_t tauChecked(std::uint64_t a, std::uint64_t b) {
  const unsigned __int128 d = static_cast<unsigned __int128>(a) + b;
  const unsigned __int128 r = a + d * (d + 1) / 2;
  if (r > (std::uint64_t{1} << 62)) {
    throw HorizonError("coding: value beyond the representable range");
  }
  return static_cast<std::uint64_t>(r);
}

}  // namespace

std::uint64_t encodeSeq(std::span<const std::uint64_t> seq) {
  if (seq.size() < 2) {
    throw std::invalid_argument("encodeSeq: sequences must have length >= 2");
  }
  std::uint64_t e = seq[0];
  for (std::size_t i = 1; i < seq.size(); ++i) e = tauChecked(e, seq[i]);
  return 2 * tauChecked(static_cast<std::uint64_t>(seq.size() - 1), e) + 1;
}

std::optional<std::vector<std::uint64_t>> decodeSeq(std::uint64_t code) {
  if (code % 2 == 0) return std::nullopt;
  const auto [l, e0] = tauInv((code - 1) / 2);
  if (l == 0) return std::nullopt;
  std::vector<std::uint64_t> seq(l + 1);
  std::uint64_t e = e0;
  for (std::uint64_t i = l; i >= 1; --i) {
    const auto [prev, a] = tauInv(e);
    seq[i] = a;
    e = prev;
  }
  seq[0] = e;
  return seq;
}

// ---- Presented matrices ----------------------------------------------------

Term PresentedMatrix::at(std::uint32_t n, std::uint32_t m) const {
  if (auto e = exceptionAt(n, m)) return *e;
  const std::uint64_t idx = m % rowPeriod(n);
  if (idx == 0) return Term::constant(false);
  const auto [i, j] = tauInv(idx - 1);
  return slotTerm(i, j);
}

namespace {

class ScheduleMatrix final : public PresentedMatrix {
 public:
  Term slotTerm(std::uint64_t i, std::uint64_t j) const override {
    return Term::variable(VariableId::fromPair(i, j));
  }
  HintSet determinationHints(const Pair& v) const override {
    return {{v}, true};
  }
};

class ComposedMatrix final : public PresentedMatrix {
 public:
  ComposedMatrix(PresentedMatrixPtr base, TermGridPtr phi, std::uint32_t cap)
      : base_(std::move(base)), phi_(std::move(phi)), cap_(cap) {}

  Term slotTerm(std::uint64_t i, std::uint64_t j) const override {
    const Pair key{i, j};
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    // Over the plain schedule the slot is the identity variable, whose
    // image is a direct grid lookup; this also reaches slots whose
    // variable ids would overflow.
    Term t;
    if (dynamic_cast<const ScheduleMatrix*>(base_.get()) != nullptr &&
        tau(i, j) > 0xffffffffull) {
      if (i > 0xffffffffull || j > 0xffffffffull) {
        throw HorizonError("composed slot beyond the representable range");
      }
      t = normalize(phi_->at(static_cast<std::uint32_t>(i),
                             static_cast<std::uint32_t>(j)));
    } else {
      t = substitute(base_->slotTerm(i, j), phi_->asImages(), cap_);
    }
    memo_.emplace(key, t);
    return t;
  }
  std::optional<Term> exceptionAt(std::uint32_t n,
                                  std::uint32_t m) const override {
    if (auto e = base_->exceptionAt(n, m)) {
      return substitute(*e, phi_->asImages(), cap_);
    }
    return std::nullopt;
  }
  std::vector<std::uint32_t> exceptionColumns(std::uint32_t n) const override {
    return base_->exceptionColumns(n);
  }
  HintSet determinationHints(const Pair& v) const override {
    return chainHints(*base_, *phi_, v);
  }

 private:
  PresentedMatrixPtr base_;
  TermGridPtr phi_;
  std::uint32_t cap_;
  mutable std::mutex mu_;
  mutable std::map<Pair, Term> memo_;
};

class PerturbedMatrix final : public PresentedMatrix {
 public:
  PerturbedMatrix(PresentedMatrixPtr base,
                  std::map<std::pair<std::uint32_t, std::uint32_t>, Term> cells)
      : base_(std::move(base)), cells_(std::move(cells)) {}

  Term slotTerm(std::uint64_t i, std::uint64_t j) const override {
    return base_->slotTerm(i, j);
  }
  std::optional<Term> exceptionAt(std::uint32_t n,
                                  std::uint32_t m) const override {
    auto it = cells_.find({n, m});
    if (it != cells_.end()) return it->second;
    return base_->exceptionAt(n, m);
  }
  std::vector<std::uint32_t> exceptionColumns(std::uint32_t n) const override {
    std::vector<std::uint32_t> cols = base_->exceptionColumns(n);
    for (const auto& [cell, t] : cells_) {
      if (cell.first == n) cols.push_back(cell.second);
    }
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    return cols;
  }
  HintSet determinationHints(const Pair& v) const override {
    return base_->determinationHints(v);
  }

 private:
  PresentedMatrixPtr base_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, Term> cells_;
};

}  // namespace

PresentedMatrixPtr scheduleMatrix() {
  return std::make_shared<ScheduleMatrix>();
}

PresentedMatrixPtr composedMatrix(PresentedMatrixPtr base, TermGridPtr phi,
                                  std::uint32_t supportCap) {
  return std::make_shared<ComposedMatrix>(std::move(base), std::move(phi),
                                          supportCap);
}

PresentedMatrixPtr perturbedMatrix(
    PresentedMatrixPtr base,
    std::map<std::pair<std::uint32_t, std::uint32_t>, Term> cells) {
  return std::make_shared<PerturbedMatrix>(std::move(base), std::move(cells));
}

// ---- The diagonal/builder kernel -------------------------------------------

namespace {

std::uint64_t omegaCoefficient(const Ordinal& alpha) {
  for (const auto& m : alpha.monomials()) {
    if (m.exp == 1) return m.coef;
  }
  return 0;
}

// Slot coordinates usable within the numeric horizon.
constexpr std::uint64_t kRowHorizon = std::uint64_t{1} << 20;
constexpr std::uint64_t kColHorizon = (std::uint64_t{1} << 31) - 1;

// Determination data for one variable: a pruned set of recurring slots
// whose terms jointly determine it, and the least row from which all of
// them recur.
struct DetInfo {
  std::vector<Term> terms;
  std::vector<Pair> slots;
  std::uint64_t threshold = 0;
};

struct DetEntry {
  std::optional<DetInfo> info;
  // True when the search had to drop hints beyond the numeric horizon:
  // a failure then means "not presentable here", not "violated".
  bool horizonLimited = false;
};

class GeneratedCondition final : public RCondition {
 public:
  // A null matrix gives the diagonal condition: thresholds n0+m0+2,
  // identity coding everywhere, and its own generated bottom rows.
  GeneratedCondition(PresentedMatrixPtr matrix, BuildParams params, GenTag tag)
      : matrix_(std::move(matrix)), params_(params), tag_(tag) {}

  Ordinal delta() const override { return Ordinal::omegaSq(); }
  GenTag tag() const override { return tag_; }
  PresentedMatrixPtr builderInput() const override { return matrix_; }

  Term cell(std::uint32_t n, const Ordinal& alpha) const override {
    if (!(alpha < delta())) {
      const std::uint64_t m = leftSubtract(delta(), alpha).finiteValue();
      return Term::variable(VariableId::fromPair(n, m));
    }
    const auto [limitPart, c] = decompose(alpha);
    const std::uint64_t b = omegaCoefficient(limitPart);
    if (b == 0 && matrix_) {
      return matrix_->at(n, static_cast<std::uint32_t>(c));
    }
    return generatedCell(n, b, c);
  }

  TermGrid::HintSet sigmaDeterminationHints(const Pair& v) const override {
    if (matrix_) return matrix_->determinationHints(v);
    // Diagonal mode: the earliest column carrying x_v sits in row
    // v.i+v.j+2 under the code of (v.i, v.j, 0, ..., 0).
    std::vector<std::uint64_t> seq{v.first, v.second};
    seq.resize(v.second + 3, 0);
    try {
      return {{Pair{v.first + v.second + 2, encodeSeq(seq)}}, true};
    } catch (const HorizonError&) {
      return {{}, false};
    }
  }

  Ordinal nuAt(const FamilyKey& key, std::uint64_t i) const override;
  std::uint64_t jAt(const FamilyKey& key, std::uint64_t k) const override;
  bool identityCoding(const FamilyKey& key) const override;
  bool fApply(const FamilyKey& key, std::uint64_t k,
              const std::vector<bool>& block) const override;

  // Verifies the determination hypothesis for every variable with tau
  // below the eager bound; failures within the numeric horizon are
  // reported, failures beyond it are left to window-time verdicts.
  std::optional<BuildError> verifyDetermination() const;

 private:
  Term generatedCell(std::uint32_t n, std::uint64_t b, std::uint64_t c) const;
  std::optional<Pair> placedVariable(std::uint32_t n, std::uint64_t b,
                                     std::uint64_t c) const;
  // Least row from which the variable's determining set recurs; nullopt
  // when that row lies beyond the numeric horizon.
  std::optional<std::uint64_t> thresholdFor(const Pair& v) const;
  const DetEntry& detEntry(const Pair& v) const;  // builder mode only

  struct BkBlock {
    std::vector<std::uint64_t> cols;
    std::vector<bool> table;  // over 2^cols.size(), first column = MSB
  };
  struct BkSite {
    std::vector<BkBlock> blocks;
    std::vector<std::uint64_t> jPrefix{0};  // cumulative block sizes
  };
  const BkSite& bkEnsure(std::uint32_t n, std::uint64_t c,
                         std::uint64_t blocks) const;
  void bkStage(std::uint64_t stage) const;
  std::uint64_t columnOfSlot(std::uint64_t row, const Pair& slot,
                             const Term& want, std::uint64_t from) const;
  std::uint64_t columnOfZero(std::uint64_t row, std::uint64_t from) const;

  PresentedMatrixPtr matrix_;
  BuildParams params_;
  GenTag tag_;

  mutable std::mutex detMu_;
  mutable std::map<std::uint64_t, DetEntry> detMemo_;
  mutable std::mutex bkMu_;
  mutable std::map<std::uint64_t, BkSite> bkSites_;
  mutable std::map<std::uint64_t, std::uint64_t> watermark_;
  mutable std::uint64_t bkStages_ = 0;
};

std::optional<Pair> GeneratedCondition::placedVariable(std::uint32_t n,
                                                       std::uint64_t b,
                                                       std::uint64_t c) const {
  const auto seq = decodeSeq(c);
  if (!seq) return std::nullopt;
  if (n != (*seq)[0] + seq->size() - 1) return std::nullopt;
  const Pair v{(*seq)[0], (*seq)[1]};
  const auto t = thresholdFor(v);
  if (!t || n + b < *t) return std::nullopt;
  return v;
}

Term GeneratedCondition::generatedCell(std::uint32_t n, std::uint64_t b,
                                       std::uint64_t c) const {
  if (const auto v = placedVariable(n, b, c)) {
    return Term::variable(VariableId::fromPair(v->first, v->second));
  }
  return Term::constant(false);
}

std::optional<std::uint64_t> GeneratedCondition::thresholdFor(
    const Pair& v) const {
  if (!matrix_) return v.first + v.second + 2;
  const DetEntry& e = detEntry(v);
  if (!e.info) return std::nullopt;
  return e.info->threshold;
}

const DetEntry& GeneratedCondition::detEntry(const Pair& v) const {
  const std::uint64_t key = tauChecked(v.first, v.second);
  if (key > params_.varBound) {
    throw HorizonError("builder: variable x(" + std::to_string(v.first) + "," +
                       std::to_string(v.second) +
                       ") beyond the presented variable bound");
  }
  std::lock_guard<std::mutex> lock(detMu_);
  auto it = detMemo_.find(key);
  if (it != detMemo_.end()) return it->second;

  const Term target = Term::variable(VariableId::fromPair(v.first, v.second));
  DetEntry entry;

  std::vector<Pair> slots;
  std::vector<Term> terms;
  const TermGrid::HintSet hints = matrix_->determinationHints(v);
  entry.horizonLimited = !hints.complete;
  for (const Pair& w : hints.slots) {
    if (w.first > kRowHorizon || w.second > kColHorizon) {
      entry.horizonLimited = true;
      continue;
    }
    Term t = matrix_->slotTerm(w.first, w.second);
    if (t.isConstant()) continue;
    slots.push_back(w);
    terms.push_back(std::move(t));
  }
  bool ok = false;
  if (!terms.empty()) {
    try {
      ok = determines(terms, target, params_.supportCap);
    } catch (const HorizonError&) {
      entry.horizonLimited = true;
    }
  }
  if (!ok && !entry.horizonLimited) {
    // Fallback: grow along the cone of influence over small slots.
    slots.clear();
    terms.clear();
    std::set<std::uint32_t> cone{static_cast<std::uint32_t>(key)};
    bool grew = true;
    while (grew && !ok) {
      grew = false;
      for (std::uint64_t k = 0; k <= params_.searchBound && !ok; ++k) {
        const Pair w = tauInv(k);
        if (std::find(slots.begin(), slots.end(), w) != slots.end()) continue;
        const Term t = matrix_->slotTerm(w.first, w.second);
        if (t.isConstant()) continue;
        const bool touches =
            std::any_of(t.support().begin(), t.support().end(),
                        [&](VariableId u) { return cone.count(u.raw) != 0; });
        if (!touches) continue;
        for (VariableId u : t.support()) cone.insert(u.raw);
        slots.push_back(w);
        terms.push_back(t);
        grew = true;
        try {
          ok = determines(terms, target, params_.supportCap);
        } catch (const HorizonError&) {
          slots.pop_back();
          terms.pop_back();
          grew = false;
          break;
        }
      }
    }
  }

  if (ok) {
    for (std::size_t i = terms.size(); i-- > 0;) {
      if (terms.size() == 1) break;
      std::vector<Term> trial = terms;
      trial.erase(trial.begin() + i);
      if (determines(trial, target, params_.supportCap)) {
        terms.erase(terms.begin() + i);
        slots.erase(slots.begin() + i);
      }
    }
    std::uint64_t maxSum = 0;
    for (const Pair& w : slots) maxSum = std::max(maxSum, w.first + w.second);
    entry.info = DetInfo{std::move(terms), std::move(slots),
                         std::max(v.first + 2, maxSum + 1)};
  }
  auto [pos, inserted] = detMemo_.emplace(key, std::move(entry));
  return pos->second;
}

Ordinal GeneratedCondition::nuAt(const FamilyKey& key, std::uint64_t i) const {
  if (key.level == delta()) {
    const auto t = thresholdFor({key.row, key.m});
    if (!t) {
      throw HorizonError(
          "nu: determining rows for x(" + std::to_string(key.row) + "," +
          std::to_string(key.m) + ") lie beyond the numeric horizon");
    }
    const std::uint64_t startB =
        std::max<std::uint64_t>(1, *t > key.row + 1 ? *t - (key.row + 1) : 1);
    const std::uint64_t code =
        encodeSeq(std::vector<std::uint64_t>{key.row, key.m});
    return add(Ordinal::monomial(1, startB + i), Ordinal::nat(code));
  }
  const std::uint64_t b = omegaCoefficient(key.level);
  if (b == 0 || !(key.level < delta())) {
    throw HorizonError("nu: level " + key.level.toString() +
                       " not presented");
  }
  if (b == 1 && matrix_) {
    const BkSite& site = bkEnsure(key.row, key.m, i + 1);
    std::uint64_t rem = i;
    for (const BkBlock& blk : site.blocks) {
      if (rem < blk.cols.size()) return Ordinal::nat(blk.cols[rem]);
      rem -= blk.cols.size();
    }
    throw HorizonError("nu: bookkeeping ran short");  // unreachable
  }
  if (placedVariable(key.row, b, key.m)) {
    auto seq = *decodeSeq(key.m);
    seq.push_back(i);
    return add(Ordinal::monomial(1, b - 1), Ordinal::nat(encodeSeq(seq)));
  }
  // Zero-pointing filler: even offsets never decode, so the cells they
  // reach are the constant 0.
  return add(Ordinal::monomial(1, b - 1),
             Ordinal::nat(2 * (tauChecked(key.m, i) + 1)));
}

std::uint64_t GeneratedCondition::jAt(const FamilyKey& key,
                                      std::uint64_t k) const {
  const std::uint64_t b = omegaCoefficient(key.level);
  if (matrix_ && b == 1 && key.level < delta()) {
    if (k == 0) return 0;
    const BkSite& site = bkEnsure(key.row, key.m, k);
    return site.jPrefix[k];
  }
  return k;
}

bool GeneratedCondition::identityCoding(const FamilyKey& key) const {
  const std::uint64_t b = omegaCoefficient(key.level);
  return !(matrix_ && b == 1 && key.level < delta());
}

bool GeneratedCondition::fApply(const FamilyKey& key, std::uint64_t k,
                                const std::vector<bool>& block) const {
  if (identityCoding(key)) {
    if (block.size() != 1) {
      throw std::invalid_argument("fApply: identity blocks have one bit");
    }
    return block[0];
  }
  const BkSite& site = bkEnsure(key.row, key.m, k + 1);
  const BkBlock& blk = site.blocks[k];
  if (block.size() != blk.cols.size()) {
    throw std::invalid_argument("fApply: block size mismatch");
  }
  std::uint64_t idx = 0;
  for (bool bit : block) idx = (idx << 1) | (bit ? 1 : 0);
  return blk.table[idx];
}

const GeneratedCondition::BkSite& GeneratedCondition::bkEnsure(
    std::uint32_t n, std::uint64_t c, std::uint64_t blocks) const {
  std::lock_guard<std::mutex> lock(bkMu_);
  const std::uint64_t siteIdx = tauChecked(n, c);
  const std::uint64_t lastStage =
      tauChecked(siteIdx, blocks == 0 ? 0 : blocks - 1);
  while (bkStages_ <= lastStage) bkStage(bkStages_++);
  return bkSites_[siteIdx];
}

void GeneratedCondition::bkStage(std::uint64_t stage) const {
  const auto [siteIdx, blockNo] = tauInv(stage);
  (void)blockNo;  // one site's stages arrive in block order
  const auto [n64, c] = tauInv(siteIdx);
  const std::uint32_t n = static_cast<std::uint32_t>(n64);
  BkSite& site = bkSites_[siteIdx];
  const std::uint64_t row = n + 1;
  std::uint64_t& wm = watermark_[row];

  BkBlock blk;
  if (const auto v = placedVariable(n, 1, c)) {
    const DetEntry& e = detEntry(*v);
    if (!e.info) {
      throw HorizonError("bookkeeping: undetermined variable encountered");
    }
    const DetInfo& di = *e.info;
    std::uint64_t from = wm;
    for (std::size_t s = 0; s < di.slots.size(); ++s) {
      const std::uint64_t col =
          columnOfSlot(row, di.slots[s], di.terms[s], from);
      blk.cols.push_back(col);
      from = col + 1;
    }
    // The block function: read the determining terms, emit the variable.
    const Term target =
        Term::variable(VariableId::fromPair(v->first, v->second));
    std::vector<VariableId> u = target.support();
    for (const Term& t : di.terms) {
      u.insert(u.end(), t.support().begin(), t.support().end());
    }
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    if (u.size() > params_.supportCap) {
      throw HorizonError("bookkeeping: joint support beyond the window");
    }
    blk.table.assign(std::uint64_t{1} << di.terms.size(), false);
    const std::uint64_t total = std::uint64_t{1} << u.size();
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      Assignment a;
      for (std::size_t p = 0; p < u.size(); ++p) {
        a.set(u[p], (idx >> (u.size() - 1 - p)) & 1);
      }
      std::uint64_t pattern = 0;
      for (const Term& t : di.terms) {
        pattern = (pattern << 1) | (eval(t, a) ? 1 : 0);
      }
      blk.table[pattern] = eval(target, a);
    }
  } else {
    blk.cols.push_back(columnOfZero(row, wm));
    blk.table = {false, true};
  }
  wm = blk.cols.back() + 1;
  site.jPrefix.push_back(site.jPrefix.back() + blk.cols.size());
  site.blocks.push_back(std::move(blk));
}

std::uint64_t GeneratedCondition::columnOfSlot(std::uint64_t row,
                                               const Pair& slot,
                                               const Term& want,
                                               std::uint64_t from) const {
  const std::uint64_t period =
      PresentedMatrix::rowPeriod(static_cast<std::uint32_t>(row));
  const std::uint64_t residue = 1 + tauChecked(slot.first, slot.second);
  if (residue >= period) {
    throw HorizonError("bookkeeping: slot does not recur in this row");
  }
  std::uint64_t col =
      from <= residue
          ? residue
          : residue + ((from - residue + period - 1) / period) * period;
  for (std::uint32_t guard = 0; guard < 1024; ++guard, col += period) {
    const Term got = matrix_->at(static_cast<std::uint32_t>(row),
                                 static_cast<std::uint32_t>(col));
    if (equiv(got, want, params_.supportCap)) return col;
  }
  throw HorizonError("bookkeeping: no clean column for a determining slot");
}

std::uint64_t GeneratedCondition::columnOfZero(std::uint64_t row,
                                               std::uint64_t from) const {
  const std::uint64_t period =
      PresentedMatrix::rowPeriod(static_cast<std::uint32_t>(row));
  const Term zero = Term::constant(false);
  std::uint64_t col = ((from + period - 1) / period) * period;
  for (std::uint32_t guard = 0; guard < 1024; ++guard, col += period) {
    const Term got = matrix_->at(static_cast<std::uint32_t>(row),
                                 static_cast<std::uint32_t>(col));
    if (equiv(got, zero, params_.supportCap)) return col;
  }
  throw HorizonError("bookkeeping: zero columns hidden beyond the horizon");
}

std::optional<BuildError> GeneratedCondition::verifyDetermination() const {
  const std::uint64_t bound = std::min(params_.varBound, std::uint64_t{64});
  for (std::uint64_t k = 0; k <= bound; ++k) {
    const Pair v = tauInv(k);
    const DetEntry& e = detEntry(v);
    if (!e.info && !e.horizonLimited) {
      return BuildError{"determination",
                        "x(" + std::to_string(v.first) + "," +
                            std::to_string(v.second) +
                            ") is not determined by any recurring set "
                            "within the search bound"};
    }
  }
  return std::nullopt;
}

}  // namespace

RCondPtr buildRDelta() {
  return std::make_shared<GeneratedCondition>(nullptr, BuildParams{},
                                              GenTag::RDelta);
}

std::variant<RCondPtr, BuildError> matrixToCondition(
    PresentedMatrixPtr matrix, const BuildParams& params) {
  // Hypothesis: strict row dependence, on the recurring slots and on
  // the exceptions within the window.
  for (std::uint64_t k = 0; k <= params.varBound; ++k) {
    const Pair w = tauInv(k);
    if (w.first + w.second + 1 > params.hypRows) continue;
    const Term t = normalize(matrix->slotTerm(w.first, w.second));
    for (VariableId u : t.support()) {
      if (u.pairView().first > w.first + w.second) {
        return BuildError{
            "dependence", "slot x(" + std::to_string(w.first) + "," +
                              std::to_string(w.second) + ") carries " +
                              toString(u) + " into row " +
                              std::to_string(w.first + w.second + 1)};
      }
    }
  }
  for (std::uint32_t n = 0; n < params.hypRows; ++n) {
    for (std::uint32_t m : matrix->exceptionColumns(n)) {
      const Term t = normalize(matrix->at(n, m));
      for (VariableId u : t.support()) {
        if (u.pairView().first >= n) {
          return BuildError{"dependence",
                            "cell (" + std::to_string(n) + "," +
                                std::to_string(m) + ") uses " + toString(u)};
        }
      }
    }
  }
  // Hypothesis: zeros recur in every row.
  const Term zero = Term::constant(false);
  for (std::uint32_t n = 0; n < params.hypRows; ++n) {
    bool found = false;
    for (std::uint32_t m = 0; m <= params.zeroScan && !found; ++m) {
      if (equiv(matrix->at(n, m), zero, params.supportCap)) found = true;
    }
    if (!found) {
      return BuildError{"zeros", "row " + std::to_string(n) +
                                     " shows no zero within the scan window"};
    }
  }
  auto cond = std::make_shared<GeneratedCondition>(std::move(matrix), params,
                                                   GenTag::Builder);
  // Hypothesis: every eagerly checked variable has a determining set.
  if (auto err = cond->verifyDetermination()) return *err;
  return RCondPtr(cond);
}

RCondPtr buildRMult() {
  return std::make_shared<GeneratedCondition>(scheduleMatrix(), BuildParams{},
                                              GenTag::RMult);
}

std::variant<PipelineResult, BuildError> absorbSubstitution(
    RCondPtr p, const PresentedSubstitution& phi, const Window& w,
    const BuildParams& params) {
  PipelineResult out;
  const RCondPtr rmult = buildRMult();
  const RCondPtr rdelta = buildRDelta();
  const auto phiGrid = std::make_shared<PresentedSubstitution>(phi);

  const RCondPtr sCond = stackConditions(stackConditions(p, rmult), rdelta);
  out.sBar = sigma(sCond);
  out.tBar = composeGrid(out.sBar, phiGrid, w.supportCap);

  // sigma(rmult) o sigma(rdelta) o phi, as a presented matrix.
  PresentedMatrixPtr input = composedMatrix(
      composedMatrix(scheduleMatrix(), sigma(rdelta), w.supportCap), phiGrid,
      w.supportCap);
  auto built = matrixToCondition(std::move(input), params);
  if (auto* err = std::get_if<BuildError>(&built)) return *err;
  out.r = std::get<RCondPtr>(built);

  out.q = stackConditions(stackConditions(p, out.r), rdelta);

  out.qStronger = termStronger(*out.q, *p, w).ok;
  const TermGridPtr sigmaQ = sigma(out.q);
  const TermGridPtr sigmaDelta = sigma(rdelta);
  const TermGridPtr want = composeGrid(out.tBar, sigmaDelta, w.supportCap);
  out.sigmaMatches = true;
  for (std::uint32_t n = 0; n < w.rows && out.sigmaMatches; ++n) {
    for (std::uint32_t m = 0; m < w.cols && out.sigmaMatches; ++m) {
      if (!equiv(sigmaQ->at(n, m), want->at(n, m), w.supportCap)) {
        out.sigmaMatches = false;
        out.detail = "sigma mismatch at (" + std::to_string(n) + "," +
                     std::to_string(m) + ")";
      }
    }
  }
  out.witnessHolds = verifyOrderWitness(*out.tBar, *sigmaQ, *sigmaDelta, w).ok;
  return out;
}

}  // namespace termsq
