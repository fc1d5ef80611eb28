#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "termsq/pairing.hpp"

namespace termsq {

// Soft cap on the joint support of any truth-table sweep. Sweeps are
// 2^|support|; callers may raise it explicitly.
inline constexpr std::uint32_t kDefaultSupportCap = 20;
// Hard cap; beyond this the table would not fit in memory anyway.
inline constexpr std::uint32_t kHardSupportCap = 26;

// Raised when an operation would have to sweep more assignments (or scan
// further into a presented object) than the configured horizon allows.
class HorizonError : public std::runtime_error {
 public:
  explicit HorizonError(const std::string& what) : std::runtime_error(what) {}
};

class MissingVariableError : public std::runtime_error {
 public:
  explicit MissingVariableError(const std::string& what)
      : std::runtime_error(what) {}
};

// A binary variable. The single-index variable x_k and the pair-indexed
// variable x_{i,j} share one namespace: x_{i,j} is the variable with raw
// id tau(i,j).
struct VariableId {
  std::uint32_t raw = 0;

  constexpr VariableId() = default;
  constexpr explicit VariableId(std::uint32_t r) : raw(r) {}

  static VariableId fromPair(std::uint64_t i, std::uint64_t j) {
    const std::uint64_t raw = tau(i, j);
    if (raw > 0xffffffffull) {
      throw HorizonError("variable id beyond the representable range");
    }
    return VariableId(static_cast<std::uint32_t>(raw));
  }
  Pair pairView() const { return tauInv(raw); }

  friend constexpr bool operator==(VariableId a, VariableId b) {
    return a.raw == b.raw;
  }
  friend constexpr auto operator<=>(VariableId a, VariableId b) {
    return a.raw <=> b.raw;
  }
};

std::string toString(VariableId v);

// Finite partial map from variables to bits.
class Assignment {
 public:
  Assignment() = default;
  Assignment(std::initializer_list<std::pair<VariableId, bool>> init);

  void set(VariableId v, bool b) { bits_[v] = b; }
  std::optional<bool> get(VariableId v) const;
  bool contains(VariableId v) const { return bits_.count(v) != 0; }
  std::size_t size() const { return bits_.size(); }
  const std::map<VariableId, bool>& entries() const { return bits_; }

 private:
  std::map<VariableId, bool> bits_;
};

// A boolean term: an explicit finite support together with a truth table.
// The support is strictly increasing in raw variable id (the tau order);
// table index: the support-ordered assignment read as a binary number,
// most significant bit first, so the last support variable is the least
// significant bit.
class Term {
 public:
  Term() : Term(false) {}
  explicit Term(bool constantValue);

  static Term constant(bool b) { return Term(b); }
  static Term variable(VariableId v);
  // support must be strictly increasing; bits.size() == 2^support.size().
  static Term fromTable(std::vector<VariableId> support,
                        const std::vector<bool>& bits);
  static Term fromTableString(std::vector<VariableId> support,
                              const std::string& bits01);
  // Build from a predicate over the support-ordered assignment.
  static Term fromFunction(
      std::vector<VariableId> support,
      const std::function<bool(const std::vector<bool>&)>& fn);

  const std::vector<VariableId>& support() const { return support_; }
  std::uint32_t arity() const {
    return static_cast<std::uint32_t>(support_.size());
  }
  std::uint64_t tableSize() const { return std::uint64_t{1} << arity(); }
  bool tableBit(std::uint64_t index) const;
  std::string tableString() const;

  bool isConstant() const { return support_.empty(); }
  // Valid only when isConstant().
  bool constantValue() const { return tableBit(0); }
  bool mentions(VariableId v) const;

  // Structural equality (same support, same table). Normalized terms are
  // structurally equal iff they are equal as functions.
  friend bool operator==(const Term& a, const Term& b);

  std::string toString() const;

 private:
  std::vector<VariableId> support_;
  std::vector<std::uint64_t> words_;  // 2^arity bits

  void setBit(std::uint64_t index, bool b);
  friend Term normalize(const Term& t);
  friend class TermSweep;
};

// ---- Substitutions -------------------------------------------------------

// A finite map from variables to terms. Variables outside the table are
// resolved by the tail convention: None = error, Identity = x -> x.
class Substitution {
 public:
  enum class Tail { None, Identity };

  explicit Substitution(Tail tail = Tail::None) : tail_(tail) {}
  static Substitution identity() { return Substitution(Tail::Identity); }

  void set(VariableId v, Term t) { images_.insert_or_assign(v, std::move(t)); }
  bool hasExplicit(VariableId v) const { return images_.count(v) != 0; }
  // Image of v under the table + tail convention; throws
  // MissingVariableError when the tail is None and v is unmapped.
  Term image(VariableId v) const;
  Tail tail() const { return tail_; }
  const std::map<VariableId, Term>& table() const { return images_; }

 private:
  std::map<VariableId, Term> images_;
  Tail tail_;
};

// ---- Operations ----------------------------------------------------------

// Table entry selected by a. a must cover support(t).
bool eval(const Term& t, const Assignment& a);

// t with every support variable replaced by its image; the result is
// normalized. images(v) is consulted once per support variable.
Term substitute(const Term& t, const std::function<Term(VariableId)>& images,
                std::uint32_t supportCap = kDefaultSupportCap);
Term substitute(const Term& t, const Substitution& phi,
                std::uint32_t supportCap = kDefaultSupportCap);

// Pointwise composition: substitute(t, compose(phi, psi)) agrees with
// substitute(substitute(t, phi), psi) for every t.
Substitution compose(const Substitution& phi, const Substitution& psi,
                     std::uint32_t supportCap = kDefaultSupportCap);

// Extensional equality: equal under every assignment of the joint support.
bool equiv(const Term& t, const Term& s,
           std::uint32_t supportCap = kDefaultSupportCap);

// Whether the joint value of ts fixes the value of s under every
// assignment of the union support.
bool determines(std::span<const Term> ts, const Term& s,
                std::uint32_t supportCap = kDefaultSupportCap);

// Canonical representative of the extensional-equality class: minimal
// essential support, tau-sorted. Idempotent.
Term normalize(const Term& t);

// Pointwise combinators (results normalized).
Term termNot(const Term& t);
Term termAnd(const Term& a, const Term& b,
             std::uint32_t supportCap = kDefaultSupportCap);
Term termOr(const Term& a, const Term& b,
            std::uint32_t supportCap = kDefaultSupportCap);
Term termXor(const Term& a, const Term& b,
             std::uint32_t supportCap = kDefaultSupportCap);

}  // namespace termsq
