#include "termsq/term.hpp"

#include <algorithm>
#include <unordered_map>

namespace termsq {

namespace {

std::vector<std::uint64_t> makeWords(std::uint32_t arity) {
  const std::uint64_t bits = std::uint64_t{1} << arity;
  return std::vector<std::uint64_t>((bits + 63) / 64, 0);
}

void checkSupportCap(std::size_t size, std::uint32_t cap, const char* who) {
  const std::uint32_t hard = std::min(cap, kHardSupportCap);
  if (size > hard) {
    throw HorizonError(std::string(who) + ": support horizon exceeded (" +
                       std::to_string(size) + " > " + std::to_string(hard) +
                       " variables)");
  }
}

// Sorted union of supports.
std::vector<VariableId> supportUnion(
    std::span<const std::vector<VariableId>* const> supports) {
  std::vector<VariableId> u;
  for (const auto* s : supports) u.insert(u.end(), s->begin(), s->end());
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  return u;
}

// Positions of the (sorted) sub-support inside the (sorted) union.
std::vector<std::uint32_t> positionsIn(const std::vector<VariableId>& sub,
                                       const std::vector<VariableId>& u) {
  std::vector<std::uint32_t> pos;
  pos.reserve(sub.size());
  std::size_t j = 0;
  for (const VariableId v : sub) {
    while (j < u.size() && u[j] < v) ++j;
    pos.push_back(static_cast<std::uint32_t>(j));
  }
  return pos;
}

// Index into a term's table given the union-assignment and the term's
// variable positions inside the union. Union bit p lives at
// (uIdx >> (uArity-1-p)) & 1.
std::uint64_t projectIndex(std::uint64_t uIdx, std::uint32_t uArity,
                           const std::vector<std::uint32_t>& pos) {
  std::uint64_t idx = 0;
  for (const std::uint32_t p : pos) {
    idx = (idx << 1) | ((uIdx >> (uArity - 1 - p)) & 1);
  }
  return idx;
}

struct VecHash {
  std::size_t operator()(const std::vector<std::uint64_t>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (std::uint64_t x : v) {
      h ^= x;
      h *= 1099511628211ull;
    }
    return h;
  }
};

}  // namespace

std::string toString(VariableId v) {
  const auto [i, j] = v.pairView();
  return "x" + std::to_string(v.raw) + "(" + std::to_string(i) + "," +
         std::to_string(j) + ")";
}

Assignment::Assignment(
    std::initializer_list<std::pair<VariableId, bool>> init) {
  for (const auto& [v, b] : init) bits_[v] = b;
}

std::optional<bool> Assignment::get(VariableId v) const {
  auto it = bits_.find(v);
  if (it == bits_.end()) return std::nullopt;
  return it->second;
}

Term::Term(bool constantValue) : words_(1, constantValue ? 1 : 0) {}

Term Term::variable(VariableId v) {
  Term t;
  t.support_ = {v};
  t.words_ = makeWords(1);
  t.setBit(1, true);
  return t;
}

Term Term::fromTable(std::vector<VariableId> support,
                     const std::vector<bool>& bits) {
  if (!std::is_sorted(support.begin(), support.end()) ||
      std::adjacent_find(support.begin(), support.end()) != support.end()) {
    throw std::invalid_argument("Term: support must be strictly increasing");
  }
  checkSupportCap(support.size(), kHardSupportCap, "Term::fromTable");
  if (bits.size() != (std::uint64_t{1} << support.size())) {
    throw std::invalid_argument("Term: table size must be 2^|support|");
  }
  Term t;
  t.support_ = std::move(support);
  t.words_ = makeWords(t.arity());
  for (std::uint64_t i = 0; i < bits.size(); ++i) t.setBit(i, bits[i]);
  return t;
}

Term Term::fromTableString(std::vector<VariableId> support,
                           const std::string& bits01) {
  std::vector<bool> bits;
  bits.reserve(bits01.size());
  for (char c : bits01) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("Term: table string must be over {0,1}");
    }
    bits.push_back(c == '1');
  }
  return fromTable(std::move(support), bits);
}

Term Term::fromFunction(
    std::vector<VariableId> support,
    const std::function<bool(const std::vector<bool>&)>& fn) {
  const std::uint32_t l = static_cast<std::uint32_t>(support.size());
  checkSupportCap(l, kHardSupportCap, "Term::fromFunction");
  std::vector<bool> bits(std::uint64_t{1} << l);
  std::vector<bool> row(l);
  for (std::uint64_t idx = 0; idx < bits.size(); ++idx) {
    for (std::uint32_t p = 0; p < l; ++p) row[p] = (idx >> (l - 1 - p)) & 1;
    bits[idx] = fn(row);
  }
  return fromTable(std::move(support), bits);
}

bool Term::tableBit(std::uint64_t index) const {
  return (words_[index >> 6] >> (index & 63)) & 1;
}

void Term::setBit(std::uint64_t index, bool b) {
  if (b) {
    words_[index >> 6] |= std::uint64_t{1} << (index & 63);
  } else {
    words_[index >> 6] &= ~(std::uint64_t{1} << (index & 63));
  }
}

std::string Term::tableString() const {
  std::string s(tableSize(), '0');
  for (std::uint64_t i = 0; i < tableSize(); ++i) {
    if (tableBit(i)) s[i] = '1';
  }
  return s;
}

bool Term::mentions(VariableId v) const {
  return std::binary_search(support_.begin(), support_.end(), v);
}

bool operator==(const Term& a, const Term& b) {
  return a.support_ == b.support_ && a.words_ == b.words_;
}

std::string Term::toString() const {
  if (isConstant()) return constantValue() ? "1" : "0";
  if (arity() == 1 && tableBit(0) == false && tableBit(1) == true) {
    return termsq::toString(support_[0]);
  }
  std::string s = "t{";
  for (std::size_t i = 0; i < support_.size(); ++i) {
    if (i) s += ",";
    s += "x" + std::to_string(support_[i].raw);
  }
  s += ":" + tableString() + "}";
  return s;
}

bool eval(const Term& t, const Assignment& a) {
  std::uint64_t idx = 0;
  for (const VariableId v : t.support()) {
    const auto b = a.get(v);
    if (!b) {
      throw MissingVariableError("eval: assignment missing " + toString(v));
    }
    idx = (idx << 1) | (*b ? 1 : 0);
  }
  return t.tableBit(idx);
}

Term substitute(const Term& t, const std::function<Term(VariableId)>& images,
                std::uint32_t supportCap) {
  if (t.isConstant()) return t;
  std::vector<Term> imgs;
  imgs.reserve(t.arity());
  for (const VariableId v : t.support()) imgs.push_back(images(v));

  std::vector<const std::vector<VariableId>*> sups;
  sups.reserve(imgs.size());
  for (const Term& im : imgs) sups.push_back(&im.support());
  const std::vector<VariableId> u = supportUnion(sups);
  checkSupportCap(u.size(), supportCap, "substitute");

  const std::uint32_t uArity = static_cast<std::uint32_t>(u.size());
  std::vector<std::vector<std::uint32_t>> pos;
  pos.reserve(imgs.size());
  for (const Term& im : imgs) pos.push_back(positionsIn(im.support(), u));

  std::vector<bool> bits(std::uint64_t{1} << uArity);
  for (std::uint64_t uIdx = 0; uIdx < bits.size(); ++uIdx) {
    std::uint64_t tIdx = 0;
    for (std::size_t i = 0; i < imgs.size(); ++i) {
      const bool b = imgs[i].tableBit(projectIndex(uIdx, uArity, pos[i]));
      tIdx = (tIdx << 1) | (b ? 1 : 0);
    }
    bits[uIdx] = t.tableBit(tIdx);
  }
  return normalize(Term::fromTable(u, bits));
}

Term substitute(const Term& t, const Substitution& phi,
                std::uint32_t supportCap) {
  return substitute(
      t, [&phi](VariableId v) { return phi.image(v); }, supportCap);
}

Term Substitution::image(VariableId v) const {
  auto it = images_.find(v);
  if (it != images_.end()) return it->second;
  if (tail_ == Tail::Identity) return Term::variable(v);
  throw MissingVariableError("Substitution: no image for " + toString(v));
}

Substitution compose(const Substitution& phi, const Substitution& psi,
                     std::uint32_t supportCap) {
  Substitution out(phi.tail() == Substitution::Tail::Identity &&
                           psi.tail() == Substitution::Tail::Identity
                       ? Substitution::Tail::Identity
                       : Substitution::Tail::None);
  for (const auto& [v, img] : phi.table()) {
    out.set(v, substitute(img, psi, supportCap));
  }
  for (const auto& [v, img] : psi.table()) {
    if (!phi.hasExplicit(v)) {
      if (phi.tail() == Substitution::Tail::Identity) {
        out.set(v, img);
      } else {
        throw MissingVariableError("compose: " + toString(v) +
                                   " outside the domain of the first map");
      }
    }
  }
  return out;
}

bool equiv(const Term& t, const Term& s, std::uint32_t supportCap) {
  const std::vector<const std::vector<VariableId>*> sups = {&t.support(),
                                                            &s.support()};
  const std::vector<VariableId> u = supportUnion(sups);
  checkSupportCap(u.size(), supportCap, "equiv");
  const std::uint32_t uArity = static_cast<std::uint32_t>(u.size());
  const auto tPos = positionsIn(t.support(), u);
  const auto sPos = positionsIn(s.support(), u);
  const std::uint64_t total = std::uint64_t{1} << uArity;
  for (std::uint64_t uIdx = 0; uIdx < total; ++uIdx) {
    if (t.tableBit(projectIndex(uIdx, uArity, tPos)) !=
        s.tableBit(projectIndex(uIdx, uArity, sPos))) {
      return false;
    }
  }
  return true;
}

bool determines(std::span<const Term> ts, const Term& s,
                std::uint32_t supportCap) {
  std::vector<const std::vector<VariableId>*> sups;
  sups.reserve(ts.size() + 1);
  for (const Term& t : ts) sups.push_back(&t.support());
  sups.push_back(&s.support());
  const std::vector<VariableId> u = supportUnion(sups);
  checkSupportCap(u.size(), supportCap, "determines");

  const std::uint32_t uArity = static_cast<std::uint32_t>(u.size());
  std::vector<std::vector<std::uint32_t>> pos;
  pos.reserve(ts.size());
  for (const Term& t : ts) pos.push_back(positionsIn(t.support(), u));
  const auto sPos = positionsIn(s.support(), u);

  const std::size_t keyWords = (ts.size() + 63) / 64;
  std::unordered_map<std::vector<std::uint64_t>, bool, VecHash> seen;
  const std::uint64_t total = std::uint64_t{1} << uArity;
  std::vector<std::uint64_t> key(keyWords == 0 ? 1 : keyWords);
  for (std::uint64_t uIdx = 0; uIdx < total; ++uIdx) {
    std::fill(key.begin(), key.end(), 0);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (ts[i].tableBit(projectIndex(uIdx, uArity, pos[i]))) {
        key[i >> 6] |= std::uint64_t{1} << (i & 63);
      }
    }
    const bool sv = s.tableBit(projectIndex(uIdx, uArity, sPos));
    auto [it, inserted] = seen.try_emplace(key, sv);
    if (!inserted && it->second != sv) return false;
  }
  return true;
}

Term normalize(const Term& t) {
  const std::uint32_t l = t.arity();
  if (l == 0) return t;

  // Essential variables: flipping the variable's bit changes the table.
  std::vector<bool> essential(l, false);
  const std::uint64_t total = t.tableSize();
  for (std::uint32_t p = 0; p < l; ++p) {
    const std::uint64_t stride = std::uint64_t{1} << (l - 1 - p);
    for (std::uint64_t idx = 0; idx < total && !essential[p]; ++idx) {
      if ((idx & stride) == 0 && t.tableBit(idx) != t.tableBit(idx | stride)) {
        essential[p] = true;
      }
    }
  }

  std::vector<VariableId> newSupport;
  std::vector<std::uint32_t> keptPos;
  for (std::uint32_t p = 0; p < l; ++p) {
    if (essential[p]) {
      newSupport.push_back(t.support()[p]);
      keptPos.push_back(p);
    }
  }
  if (newSupport.size() == t.support().size()) return t;

  const std::uint32_t nl = static_cast<std::uint32_t>(newSupport.size());
  std::vector<bool> bits(std::uint64_t{1} << nl);
  for (std::uint64_t nIdx = 0; nIdx < bits.size(); ++nIdx) {
    std::uint64_t oIdx = 0;
    for (std::uint32_t q = 0; q < nl; ++q) {
      if ((nIdx >> (nl - 1 - q)) & 1) {
        oIdx |= std::uint64_t{1} << (l - 1 - keptPos[q]);
      }
    }
    bits[nIdx] = t.tableBit(oIdx);
  }
  return Term::fromTable(std::move(newSupport), bits);
}

namespace {
Term apply2(const Term& a, const Term& b, std::uint32_t supportCap,
            bool (*op)(bool, bool)) {
  const std::vector<const std::vector<VariableId>*> sups = {&a.support(),
                                                            &b.support()};
  const std::vector<VariableId> u = supportUnion(sups);
  checkSupportCap(u.size(), supportCap, "apply2");
  const std::uint32_t uArity = static_cast<std::uint32_t>(u.size());
  const auto aPos = positionsIn(a.support(), u);
  const auto bPos = positionsIn(b.support(), u);
  std::vector<bool> bits(std::uint64_t{1} << uArity);
  for (std::uint64_t uIdx = 0; uIdx < bits.size(); ++uIdx) {
    bits[uIdx] = op(a.tableBit(projectIndex(uIdx, uArity, aPos)),
                    b.tableBit(projectIndex(uIdx, uArity, bPos)));
  }
  return normalize(Term::fromTable(u, bits));
}
}  // namespace

Term termNot(const Term& t) {
  std::vector<bool> bits(t.tableSize());
  for (std::uint64_t i = 0; i < bits.size(); ++i) bits[i] = !t.tableBit(i);
  return normalize(Term::fromTable(t.support(), bits));
}

Term termAnd(const Term& a, const Term& b, std::uint32_t supportCap) {
  return apply2(a, b, supportCap, [](bool x, bool y) { return x && y; });
}

Term termOr(const Term& a, const Term& b, std::uint32_t supportCap) {
  return apply2(a, b, supportCap, [](bool x, bool y) { return x || y; });
}

Term termXor(const Term& a, const Term& b, std::uint32_t supportCap) {
  return apply2(a, b, supportCap, [](bool x, bool y) { return x != y; });
}

}  // namespace termsq
