#include "termsq/prep.hpp"

#include <algorithm>
#include <set>

namespace termsq {

bool BitSeq::at(const Ordinal& pos) const {
  if (!(pos < height_)) {
    throw HorizonError("BitSeq: position " + pos.toString() +
                       " beyond height " + height_.toString());
  }
  auto it = except_.find(pos);
  return it == except_.end() ? default_ : it->second;
}

void BitSeq::set(const Ordinal& pos, bool b) {
  if (!(pos < height_)) {
    throw HorizonError("BitSeq::set beyond height");
  }
  if (b == default_) {
    except_.erase(pos);
  } else {
    except_[pos] = b;
  }
}

BitSeq BitSeq::withHeight(Ordinal h) const {
  BitSeq out(std::move(h), default_);
  for (const auto& [pos, b] : except_) {
    if (pos < out.height_) out.except_[pos] = b;
  }
  return out;
}

void TablePrep::setFamily(const FamilyKey& key, FamilySpec spec) {
  if (!key.level.isLimit()) {
    throw std::invalid_argument("TablePrep: family level must be a limit");
  }
  specs_[key] = std::move(spec);
}

bool TablePrep::hasFamily(const FamilyKey& key) const {
  return specs_.count(key) != 0;
}

const TablePrep::FamilySpec& TablePrep::spec(const FamilyKey& key) const {
  auto it = specs_.find(key);
  if (it == specs_.end()) {
    throw HorizonError("TablePrep: family (" + key.level.toString() + "," +
                       std::to_string(key.row) + "," + std::to_string(key.m) +
                       ") not presented");
  }
  return it->second;
}

Ordinal TablePrep::nuAt(const FamilyKey& key, std::uint64_t i) const {
  const FamilySpec& s = spec(key);
  if (i < s.nu.prefix.size()) return s.nu.prefix[i];
  const std::uint64_t k = s.nu.startIndex + (i - s.nu.prefix.size());
  Ordinal scaled;
  if (!s.nu.stride.isZero() && k != 0) {
    const auto& mono = s.nu.stride.monomials().front();
    scaled = Ordinal::monomial(mono.exp, mono.coef * k);
  }
  return add(s.nu.offset, scaled);
}

std::uint64_t TablePrep::jAt(const FamilyKey& key, std::uint64_t k) const {
  const FamilySpec& s = spec(key);
  std::uint64_t j = 0;
  for (std::uint64_t b = 0; b < k; ++b) {
    j += b < s.blockSizePrefix.size() ? s.blockSizePrefix[b]
                                      : s.blockSizeTail;
  }
  return j;
}

bool TablePrep::identityCoding(const FamilyKey& key) const {
  const FamilySpec& s = spec(key);
  if (!s.fTables.empty()) return false;
  if (s.blockSizeTail != 1) return false;
  return std::all_of(s.blockSizePrefix.begin(), s.blockSizePrefix.end(),
                     [](std::uint64_t b) { return b == 1; });
}

bool TablePrep::fApply(const FamilyKey& key, std::uint64_t k,
                       const std::vector<bool>& block) const {
  const FamilySpec& s = spec(key);
  if (k < s.fTables.size()) {
    std::uint64_t idx = 0;
    for (bool b : block) idx = (idx << 1) | (b ? 1 : 0);
    const auto& table = s.fTables[k];
    if (table.size() != (std::uint64_t{1} << block.size())) {
      throw std::invalid_argument("TablePrep: f table size mismatch");
    }
    return table[idx];
  }
  if (block.size() != 1) {
    throw std::invalid_argument(
        "TablePrep: identity tail needs single-bit blocks");
  }
  return block[0];
}

bool gEval(const Prep& prep, const FamilyKey& key, std::uint64_t k,
           const BitSeq& eta) {
  const std::uint64_t lo = prep.jAt(key, k);
  const std::uint64_t hi = prep.jAt(key, k + 1);
  if (hi <= lo) {
    throw std::invalid_argument("gEval: j must be strictly increasing");
  }
  std::vector<bool> block;
  block.reserve(hi - lo);
  for (std::uint64_t i = lo; i < hi; ++i) {
    block.push_back(eta.at(prep.nuAt(key, i)));
  }
  return prep.fApply(key, k, block);
}

std::optional<std::uint64_t> checkCohereBits(const Prep& prep,
                                             const FamilyKey& key, bool target,
                                             const BitSeq& source,
                                             std::uint64_t maxBlocks) {
  std::optional<std::uint64_t> k0;
  for (std::uint64_t k = 0; k <= maxBlocks; ++k) {
    if (gEval(prep, key, k, source) == target) {
      if (!k0) k0 = k;
    } else {
      k0.reset();
    }
  }
  return k0;
}

std::optional<std::uint64_t> checkCohereTerms(
    const Prep& prep, const FamilyKey& key, const Term& target,
    const std::function<Term(std::uint64_t)>& source, std::uint64_t maxBlocks,
    std::uint32_t supportCap) {
  std::optional<std::uint64_t> k0;
  for (std::uint64_t k = 0; k <= maxBlocks; ++k) {
    const std::uint64_t lo = prep.jAt(key, k);
    const std::uint64_t hi = prep.jAt(key, k + 1);
    std::vector<Term> srcs;
    srcs.reserve(hi - lo);
    for (std::uint64_t i = lo; i < hi; ++i) srcs.push_back(source(i));
    bool ok = true;
    if (prep.identityCoding(key) && srcs.size() == 1) {
      ok = equiv(srcs[0], target, supportCap);
    } else {
      std::vector<VariableId> u = target.support();
      for (const Term& t : srcs) {
        u.insert(u.end(), t.support().begin(), t.support().end());
      }
      std::sort(u.begin(), u.end());
      u.erase(std::unique(u.begin(), u.end()), u.end());
      if (u.size() > supportCap) {
        throw HorizonError("checkCohereTerms: joint support beyond window");
      }
      const std::uint64_t total = std::uint64_t{1} << u.size();
      std::vector<bool> block(srcs.size());
      for (std::uint64_t idx = 0; idx < total && ok; ++idx) {
        Assignment a;
        for (std::size_t pos = 0; pos < u.size(); ++pos) {
          a.set(u[pos], (idx >> (u.size() - 1 - pos)) & 1);
        }
        for (std::size_t si = 0; si < srcs.size(); ++si) {
          block[si] = eval(srcs[si], a);
        }
        if (prep.fApply(key, k, block) != eval(target, a)) ok = false;
      }
    }
    if (ok) {
      if (!k0) k0 = k;
    } else {
      k0.reset();
    }
  }
  return k0;
}

ExtendResult extendCondition(
    const Prep& prep, const BitSeq& q, const Ordinal& beta,
    const std::map<std::pair<Ordinal, std::uint32_t>, bool>& targets,
    std::uint32_t row, const ExtendParams& params) {
  if (!(q.height() < beta) || !beta.isLimit()) {
    throw std::invalid_argument(
        "extendCondition: target height must be a limit above the base");
  }
  ExtendResult out{q.withHeight(beta), {}};
  std::set<Ordinal> claimed;

  // Distinct families may only share finitely many positions. Probe the
  // presented tails pairwise; heavy overlap within the scan window
  // signals invalid prep.
  {
    std::vector<std::pair<FamilyKey, std::set<Ordinal>>> members;
    for (const auto& [site, target] : targets) {
      const FamilyKey key{site.first, row, site.second};
      std::set<Ordinal> mine;
      try {
        for (std::uint64_t i = 0; i < params.scanBlocks; ++i) {
          mine.insert(prep.nuAt(key, i));
        }
      } catch (const HorizonError&) {
        // Short presentations are probed as far as they reach.
      }
      for (const auto& [other, theirs] : members) {
        std::uint64_t shared = 0;
        for (const Ordinal& pos : mine) shared += theirs.count(pos);
        if (shared > params.blocksPerSite) {
          throw PrepConflictError(
              "extendCondition: nu families at (" + key.level.toString() +
              "," + std::to_string(key.m) + ") and (" +
              other.level.toString() + "," + std::to_string(other.m) +
              ") share " + std::to_string(shared) +
              " positions within the horizon; distinct families may only "
              "overlap finitely");
        }
      }
      members.emplace_back(key, std::move(mine));
    }
  }

  for (const auto& [site, target] : targets) {
    const auto& [level, m] = site;
    if (!(q.height() < level) || !(level <= beta) || !level.isLimit()) {
      throw std::invalid_argument(
          "extendCondition: site level must be a limit in (height(q), beta]");
    }
    const FamilyKey key{level, row, m};
    std::uint64_t got = 0;
    for (std::uint64_t k = 0; k < params.scanBlocks && got < params.blocksPerSite;
         ++k) {
      const std::uint64_t lo = prep.jAt(key, k);
      const std::uint64_t hi = prep.jAt(key, k + 1);
      std::vector<Ordinal> positions;
      bool usable = true;
      for (std::uint64_t i = lo; i < hi; ++i) {
        Ordinal pos = prep.nuAt(key, i);
        if (!(pos < level)) {
          throw std::invalid_argument("extendCondition: nu member " +
                                      pos.toString() + " not below its level");
        }
        if (pos < q.height() || claimed.count(pos)) {
          usable = false;
          break;
        }
        positions.push_back(std::move(pos));
      }
      if (!usable) continue;
      // Write some f-preimage of the target into the block.
      const std::uint64_t size = hi - lo;
      std::vector<bool> block(size);
      bool found = false;
      for (std::uint64_t pattern = 0; pattern < (std::uint64_t{1} << size);
           ++pattern) {
        for (std::uint64_t p = 0; p < size; ++p) {
          block[p] = (pattern >> (size - 1 - p)) & 1;
        }
        if (prep.fApply(key, k, block) == target) {
          found = true;
          break;
        }
      }
      if (!found) continue;  // f not surjective onto the target here
      for (std::uint64_t p = 0; p < size; ++p) {
        out.seq.set(positions[p], block[p]);
        claimed.insert(positions[p]);
      }
      if (got == 0) out.firstBlock[site] = k;
      ++got;
    }
    if (got == 0) {
      throw PrepConflictError(
          "extendCondition: site (" + level.toString() + "," +
          std::to_string(m) +
          ") could not claim a block within the horizon; nu families "
          "overlap beyond a finite set or the prep is invalid");
    }
  }
  return out;
}

ReconstructionReport reconstruct(const Prep& prep,
                                 std::span<const BitSeq> rows,
                                 const ReconstructParams& params) {
  ReconstructionReport rep;
  if (rows.size() < 2) return rep;
  for (std::uint32_t n = 0; n + 1 < rows.size(); ++n) {
    const BitSeq& source = rows[n + 1];
    for (const Ordinal& level :
         addressableLimits(add(source.height(), Ordinal::nat(1)),
                           params.coefCap)) {
      if (!(level <= source.height())) continue;
      for (std::uint32_t m = 0; m < params.siteCols; ++m) {
        const FamilyKey key{level, n, m};
        RecoveredSite site{level, n, m, false, false, 0};
        std::vector<bool> vals;
        vals.reserve(params.blocks);
        try {
          for (std::uint64_t k = 0; k < params.blocks; ++k) {
            vals.push_back(gEval(prep, key, k, source));
          }
        } catch (const HorizonError&) {
          continue;  // family or source not presented this far
        }
        site.value = vals.back();
        std::uint64_t run = vals.size();
        while (run > 0 && vals[run - 1] == site.value) --run;
        site.runStart = run;
        site.stable = vals.size() >= params.stabilityRuns &&
                      run + params.stabilityRuns <= vals.size();
        if (!site.stable) rep.allStable = false;
        rep.sites.push_back(std::move(site));
      }
    }
  }
  return rep;
}

}  // namespace termsq
