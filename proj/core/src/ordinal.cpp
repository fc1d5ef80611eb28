#include "termsq/ordinal.hpp"

#include <algorithm>
#include <stdexcept>

namespace termsq {

Ordinal::Ordinal(std::vector<Monomial> monomials)
    : monomials_(std::move(monomials)) {
  for (std::size_t i = 0; i < monomials_.size(); ++i) {
    if (monomials_[i].coef == 0) {
      throw std::invalid_argument("Ordinal: zero coefficient");
    }
    if (i > 0 && monomials_[i - 1].exp <= monomials_[i].exp) {
      throw std::invalid_argument(
          "Ordinal: exponents must strictly decrease");
    }
  }
}

Ordinal Ordinal::nat(std::uint64_t n) { return monomial(0, n); }

Ordinal Ordinal::monomial(std::uint32_t exp, std::uint64_t coef) {
  Ordinal o;
  if (coef != 0) o.monomials_.push_back({exp, coef});
  return o;
}

bool Ordinal::isFinite() const {
  return monomials_.empty() ||
         (monomials_.size() == 1 && monomials_[0].exp == 0);
}

bool Ordinal::isLimit() const {
  return !isZero() && monomials_.back().exp > 0;
}

std::uint32_t Ordinal::degree() const {
  return monomials_.empty() ? 0 : monomials_.front().exp;
}

std::uint64_t Ordinal::finiteValue() const {
  if (!isFinite()) {
    throw std::invalid_argument("Ordinal::finiteValue on infinite ordinal");
  }
  return monomials_.empty() ? 0 : monomials_[0].coef;
}

std::string Ordinal::toString() const {
  if (isZero()) return "0";
  std::string s;
  for (std::size_t i = 0; i < monomials_.size(); ++i) {
    if (i) s += "+";
    const auto& [e, c] = monomials_[i];
    if (e == 0) {
      s += std::to_string(c);
    } else {
      s += (e == 1) ? "w" : "w^" + std::to_string(e);
      if (c != 1) s += "*" + std::to_string(c);
    }
  }
  return s;
}

std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
  const std::size_t n = std::min(a.monomials_.size(), b.monomials_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a.monomials_[i].exp != b.monomials_[i].exp) {
      return a.monomials_[i].exp <=> b.monomials_[i].exp;
    }
    if (a.monomials_[i].coef != b.monomials_[i].coef) {
      return a.monomials_[i].coef <=> b.monomials_[i].coef;
    }
  }
  return a.monomials_.size() <=> b.monomials_.size();
}

Ordinal add(const Ordinal& a, const Ordinal& b) {
  if (b.isZero()) return a;
  const std::uint32_t lead = b.monomials().front().exp;
  std::vector<Ordinal::Monomial> out;
  for (const auto& m : a.monomials()) {
    if (m.exp > lead) out.push_back(m);
  }
  std::vector<Ordinal::Monomial> rest = b.monomials();
  // Coefficients at the absorption boundary add up.
  for (const auto& m : a.monomials()) {
    if (m.exp == lead) rest.front().coef += m.coef;
  }
  out.insert(out.end(), rest.begin(), rest.end());
  return Ordinal(std::move(out));
}

Decomposition decompose(const Ordinal& a) {
  std::vector<Ordinal::Monomial> lim = a.monomials();
  std::uint64_t fin = 0;
  if (!lim.empty() && lim.back().exp == 0) {
    fin = lim.back().coef;
    lim.pop_back();
  }
  return {Ordinal(std::move(lim)), fin};
}

Ordinal leftSubtract(const Ordinal& a, const Ordinal& c) {
  if (a > c) {
    throw std::invalid_argument("leftSubtract: minuend below subtrahend");
  }
  const auto& am = a.monomials();
  const auto& cm = c.monomials();
  // Walk the shared prefix of equal monomials.
  std::size_t i = 0;
  while (i < am.size() && i < cm.size() && am[i] == cm[i]) ++i;
  if (i == am.size()) {
    // a is a prefix of c: remainder is c's tail.
    return Ordinal(std::vector<Ordinal::Monomial>(cm.begin() + i, cm.end()));
  }
  // First difference: c's monomial dominates a's. Everything of a from
  // here on is absorbed by that monomial.
  std::vector<Ordinal::Monomial> out;
  if (am[i].exp == cm[i].exp) {
    // Same exponent, larger coefficient on c's side.
    out.push_back({cm[i].exp, cm[i].coef - am[i].coef});
    out.insert(out.end(), cm.begin() + i + 1, cm.end());
  } else {
    out.insert(out.end(), cm.begin() + i, cm.end());
  }
  return Ordinal(std::move(out));
}

namespace {
void enumerateBelow(std::uint32_t exp, const Ordinal& bound,
                    std::uint64_t coefCap, std::vector<Ordinal::Monomial>& acc,
                    std::vector<Ordinal>& out) {
  // acc holds monomials with exponents > exp; extend with coefficients
  // for exponents exp, exp-1, ..., 0 in increasing ordinal order.
  if (exp == 0) {
    for (std::uint64_t c = 0; c <= coefCap; ++c) {
      if (c) acc.push_back({0, c});
      Ordinal o{std::vector<Ordinal::Monomial>(acc)};
      if (c) acc.pop_back();
      if (o < bound) out.push_back(std::move(o));
    }
    return;
  }
  for (std::uint64_t c = 0; c <= coefCap; ++c) {
    if (c) acc.push_back({exp, c});
    enumerateBelow(exp - 1, bound, coefCap, acc, out);
    if (c) acc.pop_back();
  }
}
}  // namespace

std::vector<Ordinal> addressable(const Ordinal& bound, std::uint64_t coefCap) {
  std::vector<Ordinal> out;
  if (bound.isZero()) return out;
  std::vector<Ordinal::Monomial> acc;
  enumerateBelow(bound.degree(), bound, coefCap, acc, out);
  return out;
}

std::vector<Ordinal> addressableLimits(const Ordinal& bound,
                                       std::uint64_t coefCap) {
  std::vector<Ordinal> out;
  for (Ordinal& o : addressable(bound, coefCap)) {
    if (o.isLimit()) out.push_back(std::move(o));
  }
  return out;
}

}  // namespace termsq
