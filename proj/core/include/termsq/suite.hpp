#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace termsq {

// Deterministic verification sweep: all randomness flows from the one
// seed, reports are byte-identical for identical (profile, version).
struct VerificationProfile {
  std::uint64_t seed = 905;
  bool quick = false;  // scaled-down sweep for smoke runs
  // Sweep sizes; the full defaults match the acceptance gate.
  std::uint32_t treeSamples = 10000;
  std::uint32_t algebraTriples = 10000;
  std::uint32_t refinementSamples = 1000;
  std::uint32_t stackPairs = 100;
  std::uint32_t substitutionSamples = 100;
  std::uint32_t perturbations = 10;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct SuiteReport {
  std::uint64_t seed = 0;
  std::vector<CriterionResult> results;
  bool allPass() const;
  std::string render() const;  // one line per criterion, deterministic
};

inline constexpr int kCriteria = 10;

// Runs one criterion (1-based id) or the whole gate.
CriterionResult runCriterion(int id, const VerificationProfile& profile);
SuiteReport runSuite(const VerificationProfile& profile);
SuiteReport runSuite(const VerificationProfile& profile,
                     const std::vector<int>& ids);

}  // namespace termsq
