#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "termsq/qstar.hpp"
#include "termsq/rcond.hpp"

namespace termsq {

// ---- Coding ---------------------------------------------------------------

// Injective code for finite sequences of naturals (length >= 2) with
// range inside the odd numbers (hence coinfinite): fold the entries
// through tau and tag with the length.
std::uint64_t encodeSeq(std::span<const std::uint64_t> seq);
// Total inverse on the code's range; nullopt off it (in particular on
// every even number).
std::optional<std::vector<std::uint64_t>> decodeSeq(std::uint64_t code);

// ---- Presented matrices ----------------------------------------------------

// The decidable presented class of term squares: row n cycles through
// [0] ++ [slot(i,j) : i+j<n in tau order], with finitely many exception
// cells. slot(i,j) is the recurring term bound to the variable slot
// x_{i,j}; for the plain schedule it is x_{i,j} itself.
class PresentedMatrix : public TermGrid {
 public:
  Term at(std::uint32_t n, std::uint32_t m) const final;
  virtual Term slotTerm(std::uint64_t i, std::uint64_t j) const = 0;
  virtual std::optional<Term> exceptionAt(std::uint32_t /*n*/,
                                          std::uint32_t /*m*/) const {
    return std::nullopt;
  }
  virtual std::vector<std::uint32_t> exceptionColumns(
      std::uint32_t /*n*/) const {
    return {};
  }
  static std::uint64_t rowPeriod(std::uint32_t n) {
    return 1 + std::uint64_t{n} * (n + 1) / 2;
  }
};

// slot(i,j) = x_{i,j}: the multiplexer schedule itself.
PresentedMatrixPtr scheduleMatrix();
// slot(i,j) = base.slot(i,j) o phi (cellwise composition).
PresentedMatrixPtr composedMatrix(PresentedMatrixPtr base, TermGridPtr phi,
                                  std::uint32_t supportCap = kDefaultSupportCap);
// base with finitely many cells replaced.
PresentedMatrixPtr perturbedMatrix(
    PresentedMatrixPtr base,
    std::map<std::pair<std::uint32_t, std::uint32_t>, Term> cells);

// ---- Explicit conditions ----------------------------------------------------

// The diagonal condition at height w^2 + w: every matrix entry is a
// variable x_{n0,m0} (placed along coded diagonals, rows above n0+m0+1)
// or the constant 0; prep is identity-coded throughout.
RCondPtr buildRDelta();

struct BuildParams {
  // Determination searches run over slots with tau <= searchBound.
  std::uint64_t searchBound = 96;
  // Variables with tau(v) <= varBound get their determination data
  // verified eagerly; cells and families beyond raise HorizonError.
  std::uint64_t varBound = 512;
  std::uint32_t supportCap = kDefaultSupportCap;
  // Hypothesis windows: dependence rows and the zero-scan length.
  std::uint32_t hypRows = 12;
  std::uint32_t zeroScan = 256;
};

struct BuildError {
  std::string hypothesis;  // "dependence" | "zeros" | "determination"
  std::string detail;
};

// Realizes a presented matrix as a condition at height w^2 + w with the
// matrix as its finite columns: levels above w identity-coded, level w
// carrying block functions that compute each placed variable from a
// determining set of matrix cells.
std::variant<RCondPtr, BuildError> matrixToCondition(
    PresentedMatrixPtr matrix, const BuildParams& params = {});

// The multiplexer condition: the schedule matrix realized as a
// condition. Every variable x_{i,j} with i+j<n, and the constant 0,
// recurs infinitely often in row n.
RCondPtr buildRMult();

// ---- The absorption pipeline ------------------------------------------------

struct PipelineResult {
  TermGridPtr sBar;  // sigma(p <stack> rmult <stack> rdelta)
  TermGridPtr tBar;  // sBar o phi
  RCondPtr r;        // realization of sigma(rmult) o sigma(rdelta) o phi
  RCondPtr q;        // p <stack> r <stack> rdelta
  bool qStronger = false;
  bool sigmaMatches = false;   // sigma(q) =* tBar o sigma(rdelta) on window
  bool witnessHolds = false;   // order witness sigma(rdelta) certifies it
  std::string detail;
};

// Absorbs a presented substitution below a condition: produces a
// stronger condition whose sigma-image lies below sBar o phi, together
// with the window certificates.
std::variant<PipelineResult, BuildError> absorbSubstitution(
    RCondPtr p, const PresentedSubstitution& phi, const Window& w,
    const BuildParams& params = {});

}  // namespace termsq
