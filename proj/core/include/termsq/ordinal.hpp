#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace termsq {

// An ordinal below omega^omega in Cantor normal form: a finite list of
// monomials (exponent, coefficient) with strictly decreasing exponents
// and positive coefficients. The empty list is 0.
class Ordinal {
 public:
  struct Monomial {
    std::uint32_t exp;
    std::uint64_t coef;
    friend bool operator==(const Monomial&, const Monomial&) = default;
  };

  Ordinal() = default;
  // Monomials must already be in CNF (validated).
  explicit Ordinal(std::vector<Monomial> monomials);

  static Ordinal nat(std::uint64_t n);
  static Ordinal omega() { return monomial(1, 1); }
  static Ordinal omegaSq() { return monomial(2, 1); }
  // omega^exp * coef (zero coef gives 0).
  static Ordinal monomial(std::uint32_t exp, std::uint64_t coef);

  bool isZero() const { return monomials_.empty(); }
  bool isFinite() const;
  // Nonzero with no finite part.
  bool isLimit() const;
  std::uint32_t degree() const;  // leading exponent; 0 for finite

  const std::vector<Monomial>& monomials() const { return monomials_; }
  // Valid only when isFinite().
  std::uint64_t finiteValue() const;

  std::string toString() const;  // e.g. "w^2*3+w+4"

  friend bool operator==(const Ordinal& a, const Ordinal& b) {
    return a.monomials_ == b.monomials_;
  }
  friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);

 private:
  std::vector<Monomial> monomials_;
};

// Standard ordinal sum in CNF (absorption on the left).
Ordinal add(const Ordinal& a, const Ordinal& b);

// a = limitPart + finitePart with limitPart limit or zero.
struct Decomposition {
  Ordinal limitPart;
  std::uint64_t finitePart;
};
Decomposition decompose(const Ordinal& a);

// The unique b with a + b == c; requires a <= c.
Ordinal leftSubtract(const Ordinal& a, const Ordinal& c);

// All ordinals < bound whose CNF coefficients are all <= coefCap, in
// increasing order.
std::vector<Ordinal> addressable(const Ordinal& bound, std::uint64_t coefCap);

// The limit ordinals among addressable(bound, coefCap), excluding 0.
std::vector<Ordinal> addressableLimits(const Ordinal& bound,
                                       std::uint64_t coefCap);

}  // namespace termsq
