#include "termsq/qstar.hpp"

#include <algorithm>
#include <set>

namespace termsq {

namespace {

class IdentityGrid final : public TermGrid {
 public:
  Term at(std::uint32_t n, std::uint32_t m) const override {
    return Term::variable(VariableId::fromPair(n, m));
  }
  HintSet determinationHints(const Pair& v) const override {
    return {{v}, true};
  }
};

class ComposedGrid final : public TermGrid {
 public:
  ComposedGrid(TermGridPtr base, TermGridPtr phi, std::uint32_t cap)
      : base_(std::move(base)), phi_(std::move(phi)), cap_(cap) {}
  Term at(std::uint32_t n, std::uint32_t m) const override {
    return substitute(base_->at(n, m), phi_->asImages(), cap_);
  }
  HintSet determinationHints(const Pair& v) const override {
    return chainHints(*base_, *phi_, v);
  }

 private:
  TermGridPtr base_;
  TermGridPtr phi_;
  std::uint32_t cap_;
};

}  // namespace

TermGrid::HintSet chainHints(const TermGrid& base, const TermGrid& phi,
                             const Pair& v) {
  TermGrid::HintSet out;
  const TermGrid::HintSet outer = phi.determinationHints(v);
  out.complete = outer.complete;
  for (const Pair& u : outer.slots) {
    const TermGrid::HintSet sub = base.determinationHints(u);
    if (!sub.complete) out.complete = false;
    out.slots.insert(out.slots.end(), sub.slots.begin(), sub.slots.end());
  }
  std::sort(out.slots.begin(), out.slots.end());
  out.slots.erase(std::unique(out.slots.begin(), out.slots.end()),
                  out.slots.end());
  return out;
}

TermGridPtr identityGrid() { return std::make_shared<IdentityGrid>(); }

TermGridPtr composeGrid(TermGridPtr base, TermGridPtr phi,
                        std::uint32_t supportCap) {
  return std::make_shared<ComposedGrid>(std::move(base), std::move(phi),
                                        supportCap);
}

// The cyclic row schedule: row n cycles through [0] ++ [x_w : w in tau
// order, i+j < n]. Pairs with i+j<n are exactly those with tau < n(n+1)/2.
Term scheduleEntry(std::uint32_t n, std::uint32_t m) {
  const std::uint64_t period = 1 + std::uint64_t{n} * (n + 1) / 2;
  const std::uint64_t idx = m % period;
  if (idx == 0) return Term::constant(false);
  return Term::variable(VariableId(static_cast<std::uint32_t>(idx - 1)));
}

void PresentedSubstitution::set(VariableId v, const Term& t) {
  table_.insert_or_assign(v.raw, normalize(t));
  prefix_ = std::max(prefix_, v.raw + 1);
}

Term PresentedSubstitution::image(VariableId v) const {
  auto it = table_.find(v.raw);
  if (it != table_.end()) return it->second;
  if (tail_ == Tail::Identity) return Term::variable(v);
  const auto [n, m] = v.pairView();
  return scheduleEntry(static_cast<std::uint32_t>(n),
                       static_cast<std::uint32_t>(m));
}

Term PresentedSubstitution::at(std::uint32_t n, std::uint32_t m) const {
  return image(VariableId::fromPair(n, m));
}

Substitution PresentedSubstitution::asSubstitution() const {
  Substitution s(Substitution::Tail::Identity);
  for (const auto& [raw, t] : table_) s.set(VariableId(raw), t);
  return s;
}

TermGrid::HintSet PresentedSubstitution::determinationHints(
    const Pair& v) const {
  if (tail_ != Tail::Identity) return {{}, false};
  const std::uint64_t key = tau(v);
  if (key >= prefix_ || !table_.count(static_cast<std::uint32_t>(key))) {
    return {{v}, true};  // the tail hands the variable to itself
  }
  // The table entries, plus every tail variable they mention, jointly
  // determine each prefix variable of a valid presentation.
  std::set<Pair> out;
  for (const auto& [raw, t] : table_) {
    out.insert(VariableId(raw).pairView());
    for (VariableId u : t.support()) {
      if (u.raw >= prefix_ || !table_.count(u.raw)) {
        out.insert(u.pairView());
      }
    }
  }
  return {{out.begin(), out.end()}, true};
}

PresentedSubstitution composePresented(const PresentedSubstitution& phi,
                                       const PresentedSubstitution& psi,
                                       std::uint32_t supportCap) {
  if (phi.tailMode() != PresentedSubstitution::Tail::Identity ||
      psi.tailMode() != PresentedSubstitution::Tail::Identity) {
    throw std::invalid_argument(
        "composePresented: identity tails required");
  }
  PresentedSubstitution out;
  const std::uint32_t n = std::max(phi.prefix(), psi.prefix());
  for (std::uint32_t k = 0; k < n; ++k) {
    const Term img =
        substitute(phi.image(VariableId(k)), psi.asImages(), supportCap);
    if (!(img == Term::variable(VariableId(k)))) out.set(VariableId(k), img);
  }
  return out;
}

namespace {

bool pairwiseDependenceOk(ConditionMode mode, VariableId used,
                          std::uint32_t n, std::uint32_t m) {
  switch (mode) {
    case ConditionMode::QStar:
      return used.raw <= tau(n, m);
    case ConditionMode::QStarStar:
      return used.pairView().first < n;
    case ConditionMode::QStarStarOrder:
      return used.pairView().first <= n;
    case ConditionMode::SStar:
      return false;  // handled by validateSequence
  }
  return false;
}

// Exact determination check for an identity-tail presentation: the
// variable is determined by the full family iff it is determined by the
// table entries together with the identity images of every tail
// variable occurring in them.
DeterminationResult exactDetermination(const PresentedSubstitution& phi,
                                       VariableId v, std::uint32_t cap) {
  DeterminationResult r{v, DetStatus::Undetermined, {}};
  if (v.raw >= phi.prefix() || !phi.entries().count(v.raw)) {
    // Tail (or untouched) variable: its own image is the witness.
    r.status = DetStatus::Determined;
    const auto [i, j] = v.pairView();
    r.witnessCells.push_back({static_cast<std::uint32_t>(i),
                              static_cast<std::uint32_t>(j)});
    return r;
  }
  std::vector<Term> family;
  std::set<std::uint32_t> tailVars;
  for (const auto& [raw, t] : phi.entries()) {
    family.push_back(t);
    for (VariableId u : t.support()) {
      if (u.raw >= phi.prefix() || !phi.entries().count(u.raw)) {
        tailVars.insert(u.raw);
      }
    }
  }
  for (std::uint32_t raw : tailVars) {
    family.push_back(Term::variable(VariableId(raw)));
  }
  if (determines(family, Term::variable(v), cap)) {
    r.status = DetStatus::Determined;
    for (const auto& [raw, t] : phi.entries()) {
      const auto [i, j] = VariableId(raw).pairView();
      r.witnessCells.push_back({static_cast<std::uint32_t>(i),
                                static_cast<std::uint32_t>(j)});
    }
  }
  return r;
}

// Windowed determination search over grid cells in tau order. A cell
// that equals the variable outright is an immediate witness; otherwise
// grow a set of cells whose supports touch the variable's cone.
DeterminationResult searchDetermination(const TermGrid& grid, VariableId v,
                                        const Window& w) {
  DeterminationResult r{v, DetStatus::UnconfirmedAtHorizon, {}};
  const Term target = Term::variable(v);

  std::vector<std::pair<std::uint32_t, std::uint32_t>> order;
  order.reserve(std::size_t{w.rows} * w.cols);
  for (std::uint32_t n = 0; n < w.rows; ++n) {
    for (std::uint32_t m = 0; m < w.cols; ++m) order.push_back({n, m});
  }
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    return tau(a.first, a.second) < tau(b.first, b.second);
  });

  std::vector<Term> cellTerms;
  cellTerms.reserve(order.size());
  for (const auto& [n, m] : order) cellTerms.push_back(grid.at(n, m));

  for (std::size_t i = 0; i < order.size(); ++i) {
    if (cellTerms[i] == target || equiv(cellTerms[i], target, w.supportCap)) {
      r.status = DetStatus::Determined;
      r.witnessCells = {order[i]};
      return r;
    }
  }

  constexpr std::size_t kMaxSet = 16;
  std::vector<Term> acc;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> cells;
  std::set<std::uint32_t> cone{v.raw};
  bool grew = true;
  while (grew && acc.size() < kMaxSet) {
    grew = false;
    for (std::size_t i = 0; i < order.size() && acc.size() < kMaxSet; ++i) {
      const Term& cell = cellTerms[i];
      if (cell.isConstant()) continue;
      if (std::find(cells.begin(), cells.end(), order[i]) != cells.end()) {
        continue;
      }
      const bool touches =
          std::any_of(cell.support().begin(), cell.support().end(),
                      [&](VariableId u) { return cone.count(u.raw) != 0; });
      if (!touches) continue;
      acc.push_back(cell);
      cells.push_back(order[i]);
      for (VariableId u : cell.support()) cone.insert(u.raw);
      grew = true;
      bool ok = false;
      try {
        ok = determines(acc, target, w.supportCap);
      } catch (const HorizonError&) {
        return r;  // joint support outgrew the window
      }
      if (ok) {
        r.status = DetStatus::Determined;
        r.witnessCells = cells;
        return r;
      }
    }
  }
  return r;
}

void checkDependence(const TermGrid& grid, ConditionMode mode,
                     const Window& w, ConditionReport& rep) {
  for (std::uint32_t n = 0; n < w.rows; ++n) {
    for (std::uint32_t m = 0; m < w.cols; ++m) {
      const Term cell = normalize(grid.at(n, m));
      for (VariableId u : cell.support()) {
        if (!pairwiseDependenceOk(mode, u, n, m)) {
          rep.hardValid = false;
          rep.violations.push_back(
              {"dependence", n, m,
               "cell uses " + toString(u) + " outside its scope"});
        }
      }
    }
  }
}

}  // namespace

std::size_t ConditionReport::undeterminedHard() const {
  std::size_t c = 0;
  for (const auto& d : determinations) {
    if (d.status == DetStatus::Undetermined) ++c;
  }
  return c;
}

std::string ConditionReport::summary() const {
  std::string s = hardValid ? "valid" : "invalid";
  s += " (" + std::to_string(violations.size()) + " violations, ";
  std::size_t det = 0, soft = 0;
  for (const auto& d : determinations) {
    if (d.status == DetStatus::Determined) ++det;
    if (d.status == DetStatus::UnconfirmedAtHorizon) ++soft;
  }
  s += std::to_string(det) + " determined, " +
       std::to_string(undeterminedHard()) + " undetermined, " +
       std::to_string(soft) + " unconfirmed)";
  return s;
}

ConditionReport validateCondition(const TermGrid& grid, ConditionMode mode,
                                  const Window& w) {
  ConditionReport rep;
  checkDependence(grid, mode, w, rep);

  // Determination / occurrence bookkeeping per variable in the window.
  const Term zero = Term::constant(false);
  if (mode == ConditionMode::QStarStar) {
    rep.zeroCountPerRow.assign(w.rows, 0);
    for (std::uint32_t n = 0; n < w.rows; ++n) {
      for (std::uint32_t m = 0; m < w.cols; ++m) {
        if (equiv(grid.at(n, m), zero, w.supportCap)) {
          ++rep.zeroCountPerRow[n];
        }
      }
    }
  }
  for (std::uint32_t i = 0; i < w.rows; ++i) {
    for (std::uint32_t j = 0; j < w.cols; ++j) {
      const VariableId v = VariableId::fromPair(i, j);
      if (mode == ConditionMode::QStarStar) {
        OccurrenceCount oc{v, 0};
        const Term tv = Term::variable(v);
        for (std::uint32_t n = 0; n < w.rows; ++n) {
          for (std::uint32_t m = 0; m < w.cols; ++m) {
            if (equiv(grid.at(n, m), tv, w.supportCap)) ++oc.count;
          }
        }
        rep.occurrences.push_back(oc);
      } else {
        rep.determinations.push_back(searchDetermination(grid, v, w));
      }
    }
  }
  return rep;
}

ConditionReport validateCondition(const PresentedSubstitution& phi,
                                  ConditionMode mode, const Window& w) {
  ConditionReport rep;
  checkDependence(phi, mode, w, rep);
  if (mode == ConditionMode::QStarStar) {
    // Occurrence statistics as for a bare grid.
    ConditionReport gridRep =
        validateCondition(static_cast<const TermGrid&>(phi), mode, w);
    gridRep.violations = rep.violations;
    gridRep.hardValid = rep.hardValid;
    return gridRep;
  }
  // Exact determination for the identity-tail presentation: every
  // variable of the prefix, plus everything the tail hands to itself.
  if (phi.tailMode() == PresentedSubstitution::Tail::Identity) {
    for (std::uint32_t raw = 0; raw < phi.prefix(); ++raw) {
      auto d = exactDetermination(phi, VariableId(raw), w.supportCap);
      if (d.status == DetStatus::Undetermined) {
        rep.hardValid = false;
        const auto [i, j] = VariableId(raw).pairView();
        rep.violations.push_back(
            {"determination", static_cast<std::uint32_t>(i),
             static_cast<std::uint32_t>(j),
             toString(VariableId(raw)) + " not determined by the family"});
      }
      rep.determinations.push_back(std::move(d));
    }
  } else {
    for (std::uint32_t i = 0; i < w.rows; ++i) {
      for (std::uint32_t j = 0; j < w.cols; ++j) {
        rep.determinations.push_back(
            searchDetermination(phi, VariableId::fromPair(i, j), w));
      }
    }
  }
  return rep;
}

ConditionReport validateSequence(std::span<const Term> ts, const Window& w) {
  ConditionReport rep;
  for (std::uint32_t i = 0; i < ts.size(); ++i) {
    const Term cell = normalize(ts[i]);
    for (VariableId u : cell.support()) {
      if (u.raw > i) {
        rep.hardValid = false;
        rep.violations.push_back(
            {"dependence", i, 0,
             "t_" + std::to_string(i) + " uses " + toString(u)});
      }
    }
  }
  // Determination of x_j by prefixes of the sequence.
  for (std::uint32_t j = 0; j < w.cols && j < ts.size(); ++j) {
    DeterminationResult r{VariableId(j), DetStatus::UnconfirmedAtHorizon, {}};
    for (std::uint32_t len = 1; len <= ts.size(); ++len) {
      if (determines(std::span<const Term>(ts.data(), len),
                     Term::variable(VariableId(j)), w.supportCap)) {
        r.status = DetStatus::Determined;
        for (std::uint32_t i = 0; i < len; ++i) r.witnessCells.push_back({i, 0});
        break;
      }
    }
    rep.determinations.push_back(std::move(r));
  }
  return rep;
}

WitnessVerdict verifyOrderWitness(const TermGrid& s, const TermGrid& t,
                                  const TermGrid& phi, const Window& w) {
  WitnessVerdict v;
  for (std::uint32_t n = 0; n < w.rows; ++n) {
    for (std::uint32_t m = 0; m < w.cols; ++m) {
      const Term lhs = t.at(n, m);
      const Term rhs = substitute(s.at(n, m), phi.asImages(), w.supportCap);
      if (!equiv(lhs, rhs, w.supportCap)) {
        v.ok = false;
        if (!v.firstFail) v.firstFail = {{n, m}};
        return v;
      }
    }
  }
  return v;
}

}  // namespace termsq
