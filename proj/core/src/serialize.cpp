#include "termsq/serialize.hpp"

#include <json.hpp>

namespace termsq {

using nlohmann::json;

namespace {

json termJ(const Term& t) {
  json support = json::array();
  for (VariableId v : t.support()) support.push_back(v.raw);
  return json{{"support", support}, {"table", t.tableString()}};
}

Term termFromJ(const json& j) {
  std::vector<VariableId> support;
  for (const auto& k : j.at("support")) {
    support.emplace_back(k.get<std::uint32_t>());
  }
  return Term::fromTableString(std::move(support),
                               j.at("table").get<std::string>());
}

json ordinalJ(const Ordinal& o) {
  json a = json::array();
  for (const auto& m : o.monomials()) a.push_back(json::array({m.exp, m.coef}));
  return a;
}

Ordinal ordinalFromJ(const json& j) {
  std::vector<Ordinal::Monomial> ms;
  for (const auto& m : j) {
    ms.push_back({m.at(0).get<std::uint32_t>(), m.at(1).get<std::uint64_t>()});
  }
  return Ordinal(std::move(ms));
}

json substJ(const PresentedSubstitution& phi) {
  json table = json::object();
  for (const auto& [raw, t] : phi.entries()) {
    table[std::to_string(raw)] = termJ(t);
  }
  return json{{"N", phi.prefix()},
              {"table", table},
              {"tail", phi.tailMode() == PresentedSubstitution::Tail::Identity
                           ? "identity"
                           : "zero-schedule"}};
}

PresentedSubstitution substFromJ(const json& j) {
  const std::string tail = j.value("tail", "identity");
  PresentedSubstitution phi(tail == "identity"
                                ? PresentedSubstitution::Tail::Identity
                                : PresentedSubstitution::Tail::ZeroSchedule);
  for (const auto& [key, value] : j.at("table").items()) {
    phi.set(VariableId(static_cast<std::uint32_t>(std::stoul(key))),
            termFromJ(value));
  }
  return phi;
}

json matrixJ(const PresentedMatrixPtr& m);

json condJ(const RCondPtr& c) {
  switch (c->tag()) {
    case GenTag::Trivial:
      return json{{"kind", "trivial"}};
    case GenTag::RDelta:
      return json{{"kind", "rdelta"}};
    case GenTag::RMult:
      return json{{"kind", "rmult"}};
    case GenTag::Builder:
      return json{{"kind", "builder"}, {"matrix", matrixJ(c->builderInput())}};
    case GenTag::Stack:
      return json{{"kind", "stack"},
                  {"bottom", condJ(c->stackBottom())},
                  {"top", condJ(c->stackTop())}};
    case GenTag::Override: {
      json cells = json::array();
      for (const auto& [key, t] : *c->overrideCellMap()) {
        cells.push_back(json{{"row", key.row},
                             {"alpha", ordinalJ(key.alpha)},
                             {"term", termJ(t)}});
      }
      return json{{"kind", "override"},
                  {"base", condJ(c->overrideBase())},
                  {"cells", cells}};
    }
    case GenTag::Explicit: {
      json cells = json::array();
      for (const auto& [key, t] : *c->overrideCellMap()) {
        cells.push_back(json{{"row", key.row},
                             {"alpha", ordinalJ(key.alpha)},
                             {"term", termJ(t)}});
      }
      return json{{"kind", "explicit"},
                  {"delta", ordinalJ(c->delta())},
                  {"prep", json::parse(prepToJson(*c->explicitPrep()))},
                  {"cells", cells}};
    }
  }
  throw std::logic_error("conditionToJson: unknown tag");
}

RCondPtr condFromJ(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "trivial") return trivialCondition();
  if (kind == "rdelta") return buildRDelta();
  if (kind == "rmult") return buildRMult();
  if (kind == "builder") {
    auto built = matrixToCondition(matrixFromJson(j.at("matrix").dump()));
    if (auto* err = std::get_if<BuildError>(&built)) {
      throw std::invalid_argument("builder condition rejected: " +
                                  err->hypothesis + ": " + err->detail);
    }
    return std::get<RCondPtr>(built);
  }
  if (kind == "stack") {
    return stackConditions(condFromJ(j.at("bottom")), condFromJ(j.at("top")));
  }
  if (kind == "explicit") {
    std::map<CellKey, Term> cells;
    for (const auto& cell : j.value("cells", json::array())) {
      cells.insert({CellKey{cell.at("row").get<std::uint32_t>(),
                            ordinalFromJ(cell.at("alpha"))},
                    termFromJ(cell.at("term"))});
    }
    return explicitCondition(ordinalFromJ(j.at("delta")), std::move(cells),
                             prepFromJson(j.at("prep").dump()));
  }
  if (kind == "override") {
    std::map<CellKey, Term> cells;
    for (const auto& cell : j.at("cells")) {
      cells.insert({CellKey{cell.at("row").get<std::uint32_t>(),
                            ordinalFromJ(cell.at("alpha"))},
                    termFromJ(cell.at("term"))});
    }
    return overrideCells(condFromJ(j.at("base")), std::move(cells));
  }
  throw std::invalid_argument("condition: unknown kind '" + kind + "'");
}

TermGridPtr gridFromJ(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "subst") {
    return std::make_shared<PresentedSubstitution>(substFromJ(j));
  }
  if (kind == "sigma") {
    return sigma(condFromJ(j.at("cond")));
  }
  throw std::invalid_argument("grid: unknown kind '" + kind + "'");
}

json matrixJ(const PresentedMatrixPtr&) {
  // Matrices round-trip through the recipe files the CLI consumes; a
  // structural dump of an in-memory matrix is not offered.
  throw std::invalid_argument(
      "matrixToJson: matrices are serialized by their build recipe; "
      "compose one in a file instead");
}

PresentedMatrixPtr matrixFromJ(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "schedule") return scheduleMatrix();
  if (kind == "composed") {
    return composedMatrix(matrixFromJ(j.at("base")), gridFromJ(j.at("by")));
  }
  if (kind == "perturbed") {
    std::map<std::pair<std::uint32_t, std::uint32_t>, Term> cells;
    for (const auto& cell : j.at("cells")) {
      cells.insert({{cell.at("n").get<std::uint32_t>(),
                     cell.at("m").get<std::uint32_t>()},
                    termFromJ(cell.at("term"))});
    }
    return perturbedMatrix(matrixFromJ(j.at("base")), std::move(cells));
  }
  throw std::invalid_argument("matrix: unknown kind '" + kind + "'");
}

}  // namespace

std::string termToJson(const Term& t) { return termJ(t).dump(); }
Term termFromJson(const std::string& s) { return termFromJ(json::parse(s)); }

std::string ordinalToJson(const Ordinal& o) { return ordinalJ(o).dump(); }
Ordinal ordinalFromJson(const std::string& s) {
  return ordinalFromJ(json::parse(s));
}

std::string treeToJson(const ClippedTree& t) {
  json leaves = json::array();
  for (TreeNode leaf : t.leaves()) leaves.push_back(nodeString(leaf));
  return json{{"depth", t.depth()}, {"leaves", leaves}}.dump();
}

ClippedTree treeFromJson(const std::string& s) {
  const json j = json::parse(s);
  std::vector<std::string> leaves;
  for (const auto& l : j.at("leaves")) leaves.push_back(l.get<std::string>());
  return ClippedTree::fromLeafStrings(j.at("depth").get<std::uint32_t>(),
                                      leaves);
}

std::string substToJson(const PresentedSubstitution& phi) {
  return substJ(phi).dump();
}

PresentedSubstitution substFromJson(const std::string& s) {
  return substFromJ(json::parse(s));
}

std::string matrixToJson(const PresentedMatrixPtr& m) { return matrixJ(m).dump(); }

PresentedMatrixPtr matrixFromJson(const std::string& s) {
  return matrixFromJ(json::parse(s));
}

std::string prepToJson(const TablePrep& prep) {
  json families = json::array();
  for (const auto& [key, spec] : prep.families()) {
    json nuPrefix = json::array();
    for (const Ordinal& o : spec.nu.prefix) nuPrefix.push_back(ordinalJ(o));
    json tables = json::array();
    for (const auto& table : spec.fTables) {
      std::string bits(table.size(), '0');
      for (std::size_t i = 0; i < table.size(); ++i) {
        if (table[i]) bits[i] = '1';
      }
      tables.push_back(bits);
    }
    families.push_back(
        json{{"level", ordinalJ(key.level)},
             {"row", key.row},
             {"m", key.m},
             {"nu", json{{"prefix", nuPrefix},
                         {"stride", ordinalJ(spec.nu.stride)},
                         {"start", spec.nu.startIndex},
                         {"offset", ordinalJ(spec.nu.offset)}}},
             {"blockSizes", json{{"prefix", spec.blockSizePrefix},
                                 {"tail", spec.blockSizeTail}}},
             {"f", tables}});
  }
  return json{{"delta", ordinalJ(prep.delta())}, {"families", families}}
      .dump();
}

std::shared_ptr<TablePrep> prepFromJson(const std::string& s) {
  const json j = json::parse(s);
  auto prep = std::make_shared<TablePrep>(ordinalFromJ(j.at("delta")));
  for (const auto& fam : j.at("families")) {
    TablePrep::FamilySpec spec;
    const json& nu = fam.at("nu");
    for (const auto& o : nu.value("prefix", json::array())) {
      spec.nu.prefix.push_back(ordinalFromJ(o));
    }
    if (nu.contains("stride")) spec.nu.stride = ordinalFromJ(nu.at("stride"));
    spec.nu.startIndex = nu.value("start", 0);
    if (nu.contains("offset")) spec.nu.offset = ordinalFromJ(nu.at("offset"));
    if (fam.contains("blockSizes")) {
      const json& bs = fam.at("blockSizes");
      for (const auto& b : bs.value("prefix", json::array())) {
        spec.blockSizePrefix.push_back(b.get<std::uint64_t>());
      }
      spec.blockSizeTail = bs.value("tail", 1);
    }
    for (const auto& table : fam.value("f", json::array())) {
      const std::string bits = table.get<std::string>();
      std::vector<bool> t(bits.size());
      for (std::size_t i = 0; i < bits.size(); ++i) t[i] = bits[i] == '1';
      spec.fTables.push_back(std::move(t));
    }
    prep->setFamily({ordinalFromJ(fam.at("level")),
                     fam.at("row").get<std::uint32_t>(),
                     fam.at("m").get<std::uint32_t>()},
                    std::move(spec));
  }
  return prep;
}

std::string bitseqToJson(const BitSeq& seq) {
  json ex = json::array();
  for (const auto& [pos, bit] : seq.exceptions()) {
    ex.push_back(json{{"at", ordinalJ(pos)}, {"bit", bit ? 1 : 0}});
  }
  return json{{"height", ordinalJ(seq.height())},
              {"default", seq.defaultBit() ? 1 : 0},
              {"exceptions", ex}}
      .dump();
}

BitSeq bitseqFromJson(const std::string& s) {
  const json j = json::parse(s);
  BitSeq seq(ordinalFromJ(j.at("height")), j.value("default", 0) != 0);
  for (const auto& e : j.value("exceptions", json::array())) {
    seq.set(ordinalFromJ(e.at("at")), e.at("bit").get<int>() != 0);
  }
  return seq;
}

std::string conditionToJson(const RCondPtr& c) { return condJ(c).dump(); }

RCondPtr conditionFromJson(const std::string& s) {
  return condFromJ(json::parse(s));
}

}  // namespace termsq
