#include "termsq/rcond.hpp"

#include <algorithm>
#include <set>

namespace termsq {

namespace {

class TrivialCondition final : public RCondition {
 public:
  Ordinal delta() const override { return Ordinal(); }
  Term cell(std::uint32_t n, const Ordinal& alpha) const override {
    if (!alpha.isFinite()) {
      throw HorizonError("trivial condition: cell beyond height");
    }
    return Term::variable(VariableId::fromPair(n, alpha.finiteValue()));
  }
  GenTag tag() const override { return GenTag::Trivial; }
  Ordinal nuAt(const FamilyKey&, std::uint64_t) const override {
    throw HorizonError("trivial condition has no prep families");
  }
  std::uint64_t jAt(const FamilyKey&, std::uint64_t) const override {
    throw HorizonError("trivial condition has no prep families");
  }
  bool identityCoding(const FamilyKey&) const override { return true; }
  bool fApply(const FamilyKey&, std::uint64_t,
              const std::vector<bool>&) const override {
    throw HorizonError("trivial condition has no prep families");
  }
  TermGrid::HintSet sigmaDeterminationHints(const Pair& v) const override {
    return {{v}, true};
  }
};

class SigmaGrid final : public TermGrid {
 public:
  explicit SigmaGrid(RCondPtr cond) : cond_(std::move(cond)) {}
  Term at(std::uint32_t n, std::uint32_t m) const override {
    return cond_->cell(n, Ordinal::nat(m));
  }
  HintSet determinationHints(const Pair& v) const override {
    return cond_->sigmaDeterminationHints(v);
  }

 private:
  RCondPtr cond_;
};

class StackCondition final : public RCondition {
 public:
  StackCondition(RCondPtr bottom, RCondPtr top, std::uint32_t cap)
      : bottom_(std::move(bottom)),
        top_(std::move(top)),
        bottomDelta_(bottom_->delta()),
        delta_(add(bottomDelta_, top_->delta())),
        topSigma_(std::make_shared<SigmaGrid>(top_)),
        cap_(cap) {}

  Ordinal delta() const override { return delta_; }
  Term cell(std::uint32_t n, const Ordinal& alpha) const override {
    if (!(alpha < bottomDelta_)) {
      return top_->cell(n, leftSubtract(bottomDelta_, alpha));
    }
    return substitute(bottom_->cell(n, alpha), topSigma_->asImages(), cap_);
  }
  GenTag tag() const override { return GenTag::Stack; }
  RCondPtr stackBottom() const override { return bottom_; }
  RCondPtr stackTop() const override { return top_; }

  Ordinal nuAt(const FamilyKey& key, std::uint64_t i) const override {
    if (key.level <= bottomDelta_) return bottom_->nuAt(key, i);
    return add(bottomDelta_, top_->nuAt(rebase(key), i));
  }
  std::uint64_t jAt(const FamilyKey& key, std::uint64_t k) const override {
    if (key.level <= bottomDelta_) return bottom_->jAt(key, k);
    return top_->jAt(rebase(key), k);
  }
  bool identityCoding(const FamilyKey& key) const override {
    if (key.level <= bottomDelta_) return bottom_->identityCoding(key);
    return top_->identityCoding(rebase(key));
  }
  bool fApply(const FamilyKey& key, std::uint64_t k,
              const std::vector<bool>& block) const override {
    if (key.level <= bottomDelta_) return bottom_->fApply(key, k, block);
    return top_->fApply(rebase(key), k, block);
  }
  TermGrid::HintSet sigmaDeterminationHints(const Pair& v) const override {
    TermGrid::HintSet out;
    const TermGrid::HintSet outer = top_->sigmaDeterminationHints(v);
    out.complete = outer.complete;
    for (const Pair& u : outer.slots) {
      const TermGrid::HintSet sub = bottom_->sigmaDeterminationHints(u);
      if (!sub.complete) out.complete = false;
      out.slots.insert(out.slots.end(), sub.slots.begin(), sub.slots.end());
    }
    std::sort(out.slots.begin(), out.slots.end());
    out.slots.erase(std::unique(out.slots.begin(), out.slots.end()),
                    out.slots.end());
    return out;
  }

 private:
  FamilyKey rebase(const FamilyKey& key) const {
    return {leftSubtract(bottomDelta_, key.level), key.row, key.m};
  }
  RCondPtr bottom_;
  RCondPtr top_;
  Ordinal bottomDelta_;
  Ordinal delta_;
  std::shared_ptr<const TermGrid> topSigma_;
  std::uint32_t cap_;
};

class OverrideCondition final : public RCondition {
 public:
  OverrideCondition(RCondPtr base, std::map<CellKey, Term> cells)
      : base_(std::move(base)), cells_(std::move(cells)) {}

  Ordinal delta() const override { return base_->delta(); }
  Term cell(std::uint32_t n, const Ordinal& alpha) const override {
    auto it = cells_.find(CellKey{n, alpha});
    if (it != cells_.end()) return it->second;
    return base_->cell(n, alpha);
  }
  GenTag tag() const override { return GenTag::Override; }
  RCondPtr overrideBase() const override { return base_; }
  const std::map<CellKey, Term>* overrideCellMap() const override {
    return &cells_;
  }
  Ordinal nuAt(const FamilyKey& key, std::uint64_t i) const override {
    return base_->nuAt(key, i);
  }
  std::uint64_t jAt(const FamilyKey& key, std::uint64_t k) const override {
    return base_->jAt(key, k);
  }
  bool identityCoding(const FamilyKey& key) const override {
    return base_->identityCoding(key);
  }
  bool fApply(const FamilyKey& key, std::uint64_t k,
              const std::vector<bool>& block) const override {
    return base_->fApply(key, k, block);
  }

 private:
  RCondPtr base_;
  std::map<CellKey, Term> cells_;
};

class ExplicitCondition final : public RCondition {
 public:
  ExplicitCondition(Ordinal delta, std::map<CellKey, Term> cells,
                    std::shared_ptr<const TablePrep> prep)
      : delta_(std::move(delta)), cells_(std::move(cells)),
        prep_(std::move(prep)) {}

  Ordinal delta() const override { return delta_; }
  Term cell(std::uint32_t n, const Ordinal& alpha) const override {
    auto it = cells_.find(CellKey{n, alpha});
    if (it != cells_.end()) return it->second;
    if (!(alpha < delta_)) {
      const Ordinal m = leftSubtract(delta_, alpha);
      return Term::variable(VariableId::fromPair(n, m.finiteValue()));
    }
    return Term::constant(false);
  }
  GenTag tag() const override { return GenTag::Explicit; }
  const std::map<CellKey, Term>* overrideCellMap() const override {
    return &cells_;
  }
  std::shared_ptr<const TablePrep> explicitPrep() const override {
    return prep_;
  }
  Ordinal nuAt(const FamilyKey& key, std::uint64_t i) const override {
    return prep_->nuAt(key, i);
  }
  std::uint64_t jAt(const FamilyKey& key, std::uint64_t k) const override {
    return prep_->jAt(key, k);
  }
  bool identityCoding(const FamilyKey& key) const override {
    return prep_->identityCoding(key);
  }
  bool fApply(const FamilyKey& key, std::uint64_t k,
              const std::vector<bool>& block) const override {
    return prep_->fApply(key, k, block);
  }

 private:
  Ordinal delta_;
  std::map<CellKey, Term> cells_;
  std::shared_ptr<const TablePrep> prep_;
};

}  // namespace

RCondPtr trivialCondition() { return std::make_shared<TrivialCondition>(); }

RCondPtr stackConditions(RCondPtr p, RCondPtr q) {
  return std::make_shared<StackCondition>(std::move(p), std::move(q),
                                          kDefaultSupportCap);
}

RCondPtr overrideCells(RCondPtr base, std::map<CellKey, Term> cells) {
  return std::make_shared<OverrideCondition>(std::move(base),
                                             std::move(cells));
}

RCondPtr explicitCondition(Ordinal delta, std::map<CellKey, Term> cells,
                           std::shared_ptr<const TablePrep> prep) {
  return std::make_shared<ExplicitCondition>(std::move(delta),
                                             std::move(cells),
                                             std::move(prep));
}

std::variant<SplitParts, SplitError> splitCondition(RCondPtr q,
                                                    const Ordinal& at) {
  if (at > q->delta()) {
    return SplitError{"split level beyond the condition's height"};
  }
  if (at.isZero()) return SplitParts{trivialCondition(), q};
  if (at == q->delta()) return SplitParts{q, trivialCondition()};
  if (q->tag() == GenTag::Stack) {
    const RCondPtr bottom = q->stackBottom();
    const RCondPtr top = q->stackTop();
    const Ordinal db = bottom->delta();
    if (at == db) return SplitParts{bottom, top};
    if (at < db) {
      auto sub = splitCondition(bottom, at);
      if (auto* err = std::get_if<SplitError>(&sub)) return *err;
      auto& parts = std::get<SplitParts>(sub);
      return SplitParts{parts.bottom, stackConditions(parts.top, top)};
    }
    auto sub = splitCondition(top, leftSubtract(db, at));
    if (auto* err = std::get_if<SplitError>(&sub)) return *err;
    auto& parts = std::get<SplitParts>(sub);
    return SplitParts{stackConditions(bottom, parts.bottom), parts.top};
  }
  return SplitError{
      "not splittable here: " + at.toString() +
      " is not a stacking boundary of this presentation, and the rows "
      "below it are not expressible through the row at that level on a "
      "finite window"};
}

TermGridPtr sigma(RCondPtr p) { return std::make_shared<SigmaGrid>(std::move(p)); }

std::string RValidationReport::summary() const {
  std::string s = valid ? "valid" : "invalid";
  s += " (" + std::to_string(cellsChecked) + " cells, " +
       std::to_string(sitesChecked) + " coherence sites, " +
       std::to_string(violations.size()) + " violations, " +
       std::to_string(horizonNotes.size()) + " beyond horizon)";
  return s;
}

namespace {

std::optional<std::uint64_t> termCohereK0(const RCondition& p,
                                          const FamilyKey& key,
                                          const Term& target,
                                          std::uint64_t maxBlocks,
                                          std::uint32_t supportCap) {
  return checkCohereTerms(
      p, key, target,
      [&p, &key](std::uint64_t i) {
        return p.cell(key.row + 1, p.nuAt(key, i));
      },
      maxBlocks, supportCap);
}

}  // namespace

RValidationReport validateR(const RCondition& p, const Window& w) {
  RValidationReport rep;
  const Ordinal delta = p.delta();
  const Ordinal height = p.height();

  // Top-row law and row dependence.
  for (const Ordinal& alpha : addressable(height, w.coefCap)) {
    for (std::uint32_t n = 0; n < w.rows; ++n) {
      Term c;
      try {
        c = p.cell(n, alpha);
      } catch (const HorizonError& e) {
        rep.horizonNotes.push_back({"cell", n, alpha, e.what()});
        continue;
      }
      ++rep.cellsChecked;
      if (!(alpha < delta)) {
        const std::uint64_t m = leftSubtract(delta, alpha).finiteValue();
        const Term want = Term::variable(VariableId::fromPair(n, m));
        if (!equiv(c, want, w.supportCap)) {
          rep.valid = false;
          rep.violations.push_back(
              {"top-row", n, alpha,
               "expected " + want.toString() + ", got " + c.toString()});
        }
      } else {
        const Term cn = normalize(c);
        for (VariableId u : cn.support()) {
          if (u.pairView().first >= n) {
            rep.valid = false;
            rep.violations.push_back(
                {"dependence", n, alpha, "cell uses " + toString(u)});
          }
        }
      }
    }
  }

  // Coherence at every addressable limit level, plus light prep sanity.
  const std::uint32_t disMembers = 3;
  for (const Ordinal& level :
       addressableLimits(add(delta, Ordinal::nat(1)), w.coefCap)) {
    for (std::uint32_t n = 0; n < w.rows; ++n) {
      std::set<Ordinal> seen;
      for (std::uint32_t m = 0; m < w.cols; ++m) {
        const FamilyKey key{level, n, m};
        ++rep.sitesChecked;
        try {
          Ordinal prev;
          for (std::uint64_t i = 0; i < disMembers; ++i) {
            Ordinal member = p.nuAt(key, i);
            if (!(member < level)) {
              rep.valid = false;
              rep.violations.push_back({"prep", n, level,
                                        "nu member " + member.toString() +
                                            " not below its level"});
            }
            if (i > 0 && !(prev < member)) {
              rep.valid = false;
              rep.violations.push_back(
                  {"prep", n, level, "nu not strictly increasing"});
            }
            if (!seen.insert(member).second) {
              rep.valid = false;
              rep.violations.push_back(
                  {"prep", n, level,
                   "nu families at one level/row intersect (m=" +
                       std::to_string(m) + ")"});
            }
            prev = std::move(member);
          }
          const Term target = p.cell(n, add(level, Ordinal::nat(m)));
          const auto k0 =
              termCohereK0(p, key, target, w.cohereBlocks, w.supportCap);
          if (!k0) {
            rep.valid = false;
            rep.violations.push_back(
                {"coherence", n, level,
                 "no k0 within " + std::to_string(w.cohereBlocks) +
                     " blocks at offset " + std::to_string(m)});
          }
        } catch (const HorizonError& e) {
          rep.horizonNotes.push_back({"site", n, level, e.what()});
        }
      }
    }
  }
  return rep;
}

StrongerVerdict termStronger(const RCondition& q, const RCondition& p,
                             const Window& w) {
  StrongerVerdict v;
  const Ordinal dp = p.delta();
  if (q.delta() < dp) {
    v.ok = false;
    v.detail = "height(q) below height(p)";
    return v;
  }
  const auto phi = [&q, &dp](VariableId var) {
    const auto [n, m] = var.pairView();
    return q.cell(static_cast<std::uint32_t>(n), add(dp, Ordinal::nat(m)));
  };
  for (std::uint32_t n = 0; n < w.rows; ++n) {
    for (const Ordinal& alpha : addressable(dp, w.coefCap)) {
      const Term lhs = substitute(p.cell(n, alpha), phi, w.supportCap);
      const Term rhs = q.cell(n, alpha);
      if (!equiv(lhs, rhs, w.supportCap)) {
        v.ok = false;
        v.firstFail = CellKey{n, alpha};
        v.detail = "cell (" + std::to_string(n) + "," + alpha.toString() +
                   "): " + rhs.toString() + " differs from composed " +
                   lhs.toString();
        return v;
      }
    }
  }
  // Prep extension: q's families below p's height must be p's.
  for (const Ordinal& level :
       addressableLimits(add(dp, Ordinal::nat(1)), w.coefCap)) {
    for (std::uint32_t n = 0; n < w.rows; ++n) {
      for (std::uint32_t m = 0; m < w.cols; ++m) {
        const FamilyKey key{level, n, m};
        try {
          for (std::uint64_t i = 0; i < w.cohereBlocks; ++i) {
            if (!(p.nuAt(key, i) == q.nuAt(key, i))) {
              v.ok = false;
              v.detail = "prep mismatch at level " + level.toString();
              return v;
            }
          }
          if (p.identityCoding(key) != q.identityCoding(key)) {
            v.ok = false;
            v.detail = "coding mismatch at level " + level.toString();
            return v;
          }
          if (!p.identityCoding(key)) {
            for (std::uint64_t k = 0; k < w.cohereBlocks; ++k) {
              if (p.jAt(key, k + 1) != q.jAt(key, k + 1)) {
                v.ok = false;
                v.detail = "j mismatch at level " + level.toString();
                return v;
              }
              const std::uint64_t size = p.blockSize(key, k);
              if (size > 16) throw HorizonError("block beyond window");
              std::vector<bool> block(size);
              for (std::uint64_t pat = 0; pat < (std::uint64_t{1} << size);
                   ++pat) {
                for (std::uint64_t b = 0; b < size; ++b) {
                  block[b] = (pat >> (size - 1 - b)) & 1;
                }
                if (p.fApply(key, k, block) != q.fApply(key, k, block)) {
                  v.ok = false;
                  v.detail = "f mismatch at level " + level.toString();
                  return v;
                }
              }
            }
          }
        } catch (const HorizonError&) {
          // Family not presented this far on one side; outside the window.
        }
      }
    }
  }
  return v;
}

bool sameOnWindow(const RCondition& a, const RCondition& b, const Window& w,
                  std::string* why) {
  if (!(a.delta() == b.delta())) {
    if (why) *why = "different heights";
    return false;
  }
  for (std::uint32_t n = 0; n < w.rows; ++n) {
    for (const Ordinal& alpha : addressable(a.height(), w.coefCap)) {
      if (!equiv(a.cell(n, alpha), b.cell(n, alpha), w.supportCap)) {
        if (why) {
          *why = "cell (" + std::to_string(n) + "," + alpha.toString() +
                 ") differs";
        }
        return false;
      }
    }
  }
  for (const Ordinal& level :
       addressableLimits(add(a.delta(), Ordinal::nat(1)), w.coefCap)) {
    for (std::uint32_t n = 0; n < w.rows; ++n) {
      for (std::uint32_t m = 0; m < w.cols; ++m) {
        const FamilyKey key{level, n, m};
        try {
          for (std::uint64_t i = 0; i < w.cohereBlocks; ++i) {
            if (!(a.nuAt(key, i) == b.nuAt(key, i))) {
              if (why) *why = "nu differs at level " + level.toString();
              return false;
            }
          }
        } catch (const HorizonError&) {
        }
      }
    }
  }
  return true;
}

std::vector<EvaluatedCell> evaluateUnder(const RCondition& p,
                                         const Assignment& b,
                                         const Window& w) {
  std::vector<EvaluatedCell> out;
  const auto images = [&b](VariableId v) {
    const auto bit = b.get(v);
    return bit ? Term::constant(*bit) : Term::variable(v);
  };
  for (std::uint32_t n = 0; n < w.rows; ++n) {
    for (const Ordinal& alpha : addressable(p.height(), w.coefCap)) {
      EvaluatedCell ec{n, alpha, std::nullopt, Term::constant(false)};
      ec.residual = substitute(p.cell(n, alpha), images, w.supportCap);
      if (ec.residual.isConstant()) ec.value = ec.residual.constantValue();
      out.push_back(std::move(ec));
    }
  }
  return out;
}

}  // namespace termsq
