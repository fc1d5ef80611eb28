// termsq: inspect, validate and combine finitely presented conditions,
// term squares and clipped trees.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "termsq/build.hpp"
#include "termsq/dotexport.hpp"
#include "termsq/ordinal.hpp"
#include "termsq/prep.hpp"
#include "termsq/qstar.hpp"
#include "termsq/rcond.hpp"
#include "termsq/serialize.hpp"
#include "termsq/suite.hpp"
#include "termsq/term.hpp"
#include "termsq/tree.hpp"

using nlohmann::json;
using namespace termsq;

namespace {

struct GlobalOpts {
  std::uint32_t windowRows = 6;
  std::uint32_t windowCols = 8;
  std::uint64_t coefCap = 6;
  std::uint32_t depth = 4;
  std::uint64_t seed = 905;
  std::string format = "json";
};

Window makeWindow(const GlobalOpts& g) {
  Window w;
  w.rows = g.windowRows;
  w.cols = g.windowCols;
  w.coefCap = g.coefCap;
  return w;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json parseFile(const std::string& path) {
  const std::string text = slurp(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Map the byte offset to a line and column.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw std::runtime_error(path + ": parse error at line " +
                             std::to_string(line) + ", column " +
                             std::to_string(col) + ": " + e.what());
  }
}

void emit(const GlobalOpts& g, const json& payload) {
  if (g.format == "json") {
    std::cout << payload.dump(2) << "\n";
    return;
  }
  // Plain text: flatten one level.
  for (const auto& [key, value] : payload.items()) {
    std::cout << key << ": "
              << (value.is_string() ? value.get<std::string>() : value.dump())
              << "\n";
  }
}

json violationsJson(const std::vector<RViolation>& vs) {
  json arr = json::array();
  for (const auto& v : vs) {
    arr.push_back(json{{"clause", v.clause},
                       {"row", v.row},
                       {"alpha", v.alpha.toString()},
                       {"detail", v.detail}});
  }
  return arr;
}

json conditionReportJson(const ConditionReport& rep) {
  json viols = json::array();
  for (const auto& v : rep.violations) {
    viols.push_back(json{{"clause", v.clause},
                         {"n", v.n},
                         {"m", v.m},
                         {"detail", v.detail}});
  }
  std::uint64_t determined = 0, soft = 0;
  for (const auto& d : rep.determinations) {
    if (d.status == DetStatus::Determined) ++determined;
    if (d.status == DetStatus::UnconfirmedAtHorizon) ++soft;
  }
  return json{{"valid", rep.hardValid},
              {"violations", viols},
              {"determined", determined},
              {"undetermined", rep.undeterminedHard()},
              {"unconfirmedAtHorizon", soft},
              {"summary", rep.summary()}};
}

RCondPtr loadCondition(const std::string& path) {
  return conditionFromJson(parseFile(path).dump());
}

Ordinal ordinalFromJ_cli(const json& j) { return ordinalFromJson(j.dump()); }

int run(int argc, char** argv) {
  CLI::App app{
      "termsq: boolean-term squares, clipped trees and finitely presented "
      "forcing-style conditions"};
  app.require_subcommand(1);

  GlobalOpts g;
  if (const char* profile = std::getenv("TERMSQ_PROFILE")) {
    const json j = parseFile(profile);
    g.windowRows = j.value("window-rows", g.windowRows);
    g.windowCols = j.value("window-cols", g.windowCols);
    g.coefCap = j.value("coef-cap", g.coefCap);
    g.depth = j.value("depth", g.depth);
    g.seed = j.value("seed", g.seed);
    g.format = j.value("format", g.format);
  }
  app.add_option("--window-rows", g.windowRows, "window rows");
  app.add_option("--window-cols", g.windowCols, "window columns");
  app.add_option("--coef-cap", g.coefCap, "ordinal coefficient cap");
  app.add_option("--depth", g.depth, "tree depth");
  app.add_option("--seed", g.seed, "seed for randomized sweeps");
  app.add_option("--format", g.format, "output format: json|text")
      ->check(CLI::IsMember({"json", "text"}));

  // tau -----------------------------------------------------------------
  auto* tauCmd = app.add_subcommand("tau", "pairing function queries");
  std::uint64_t tn = 0, tm = 0, tk = 0;
  auto* tauPair = tauCmd->add_subcommand("of", "tau(n,m)");
  tauPair->add_option("n", tn)->required();
  tauPair->add_option("m", tm)->required();
  tauPair->callback([&] { emit(g, json{{"tau", tau(tn, tm)}}); });
  auto* tauInvCmd = tauCmd->add_subcommand("inv", "tau^-1(k)");
  tauInvCmd->add_option("k", tk)->required();
  tauInvCmd->callback([&] {
    const auto [a, b] = tauInv(tk);
    emit(g, json{{"n", a}, {"m", b}});
  });

  // ord -----------------------------------------------------------------
  auto* ordCmd = app.add_subcommand("ord", "ordinal arithmetic");
  std::string ordA, ordB;
  std::uint64_t ordCap = 3;
  auto* ordAdd = ordCmd->add_subcommand("add", "CNF sum");
  ordAdd->add_option("a", ordA, "ordinal as [[exp,coef],...]")->required();
  ordAdd->add_option("b", ordB)->required();
  ordAdd->callback([&] {
    const Ordinal r = add(ordinalFromJson(ordA), ordinalFromJson(ordB));
    emit(g, json{{"sum", json::parse(ordinalToJson(r))},
                 {"pretty", r.toString()}});
  });
  auto* ordDec = ordCmd->add_subcommand("decompose", "limit + finite split");
  ordDec->add_option("a", ordA)->required();
  ordDec->callback([&] {
    const auto [lim, fin] = decompose(ordinalFromJson(ordA));
    emit(g, json{{"limitPart", json::parse(ordinalToJson(lim))},
                 {"finitePart", fin}});
  });
  auto* ordEnum = ordCmd->add_subcommand("enumerate",
                                         "addressable ordinals below a bound");
  ordEnum->add_option("bound", ordA)->required();
  ordEnum->add_option("--cap", ordCap, "coefficient cap");
  ordEnum->callback([&] {
    json arr = json::array();
    for (const Ordinal& o : addressable(ordinalFromJson(ordA), ordCap)) {
      arr.push_back(o.toString());
    }
    emit(g, json{{"ordinals", arr}});
  });

  // tree ------------------------------------------------------------------
  auto* treeCmd = app.add_subcommand("tree", "clipped-tree operations");
  std::string treeFile, treeFile2;
  std::uint32_t wantSplits = 1;
  auto* treeValidate = treeCmd->add_subcommand("validate", "check invariants");
  treeValidate->add_option("file", treeFile)->required();
  treeValidate->callback([&] {
    const TreeReport rep = validateTree(treeFromJson(slurp(treeFile)));
    json offenders = json::array();
    for (TreeNode n : rep.offenders) offenders.push_back(nodeString(n));
    emit(g, json{{"valid", rep.valid},
                 {"fullFronts", rep.fullFronts},
                 {"offenders", offenders},
                 {"problems", rep.problems}});
  });
  auto* treeTerms = treeCmd->add_subcommand("terms", "canonical term sequence");
  treeTerms->add_option("file", treeFile)->required();
  treeTerms->callback([&] {
    json arr = json::array();
    for (const Term& t : canonicalTerms(treeFromJson(slurp(treeFile)))) {
      arr.push_back(json::parse(termToJson(t)));
    }
    emit(g, json{{"terms", arr}});
  });
  auto* treeFronts = treeCmd->add_subcommand("fronts", "splitting fronts");
  treeFronts->add_option("file", treeFile)->required();
  treeFronts->callback([&] {
    json arr = json::array();
    for (const Front& f : splittingFronts(treeFromJson(slurp(treeFile)))) {
      json members = json::array();
      for (TreeNode n : f.members) members.push_back(nodeString(n));
      arr.push_back(json{{"index", f.index}, {"members", members}});
    }
    emit(g, json{{"fronts", arr}});
  });
  auto* treeRefine =
      treeCmd->add_subcommand("refine", "refinement substitution");
  treeRefine->add_option("tree", treeFile)->required();
  treeRefine->add_option("subtree", treeFile2)->required();
  treeRefine->callback([&] {
    const RefinementWitness w = refinementSubstitution(
        treeFromJson(slurp(treeFile)), treeFromJson(slurp(treeFile2)));
    json table = json::object();
    for (const auto& [v, t] : w.phi.table()) {
      table[std::to_string(v.raw)] = json::parse(termToJson(t));
    }
    emit(g, json{{"certified", w.certified}, {"phi", table}});
  });
  auto* treeCommon =
      treeCmd->add_subcommand("common", "search a common refinement");
  treeCommon->add_option("tree1", treeFile)->required();
  treeCommon->add_option("tree2", treeFile2)->required();
  treeCommon->add_option("--splits", wantSplits, "required splitting levels");
  treeCommon->callback([&] {
    const auto found =
        searchCommonRefinement(treeFromJson(slurp(treeFile)),
                               treeFromJson(slurp(treeFile2)), wantSplits);
    if (found) {
      emit(g, json{{"found", true},
                   {"tree", json::parse(treeToJson(*found))}});
    } else {
      emit(g, json{{"found", false},
                   {"note", "no common refinement with " +
                                std::to_string(wantSplits) +
                                " splits at this depth"}});
    }
  });

  // qstar -------------------------------------------------------------------
  auto* qstarCmd =
      app.add_subcommand("qstar", "presented-substitution validation");
  std::string qstarFile, qstarMode = "qstar";
  auto* qstarValidate = qstarCmd->add_subcommand("validate", "clause checks");
  qstarValidate->add_option("file", qstarFile)->required();
  qstarValidate->add_option("--mode", qstarMode, "sstar|qstar|qstarstar")
      ->check(CLI::IsMember({"sstar", "qstar", "qstarstar"}));
  qstarValidate->callback([&] {
    const PresentedSubstitution phi = substFromJson(slurp(qstarFile));
    const ConditionMode mode = qstarMode == "qstar"
                                   ? ConditionMode::QStar
                                   : (qstarMode == "sstar"
                                          ? ConditionMode::SStar
                                          : ConditionMode::QStarStar);
    emit(g, conditionReportJson(validateCondition(phi, mode, makeWindow(g))));
  });

  // prep ----------------------------------------------------------------
  auto* prepCmd = app.add_subcommand("prep", "coherence machinery");
  std::uint64_t prepBlocks = 8;
  std::string prepFile, etaFile, levelSpec, targetsSpec;
  std::uint32_t prepRow = 0, prepM = 0;
  std::uint64_t prepK = 0;
  auto* prepEval = prepCmd->add_subcommand("eval", "one block value g");
  prepEval->add_option("prep", prepFile)->required();
  prepEval->add_option("eta", etaFile, "bit sequence file")->required();
  prepEval->add_option("--level", levelSpec)->required();
  prepEval->add_option("--row", prepRow);
  prepEval->add_option("--m", prepM);
  prepEval->add_option("--k", prepK);
  prepEval->callback([&] {
    const auto prep = prepFromJson(slurp(prepFile));
    const BitSeq eta = bitseqFromJson(slurp(etaFile));
    const bool bit = gEval(*prep,
                           {ordinalFromJson(levelSpec), prepRow, prepM},
                           prepK, eta);
    emit(g, json{{"g", bit ? 1 : 0}});
  });
  auto* prepCohere =
      prepCmd->add_subcommand("cohere", "search the least stable block");
  int prepTarget = 1;
  prepCohere->add_option("prep", prepFile)->required();
  prepCohere->add_option("eta", etaFile)->required();
  prepCohere->add_option("--level", levelSpec)->required();
  prepCohere->add_option("--row", prepRow);
  prepCohere->add_option("--m", prepM);
  prepCohere->add_option("--target", prepTarget);
  prepCohere->add_option("--blocks", prepBlocks);
  prepCohere->callback([&] {
    const auto prep = prepFromJson(slurp(prepFile));
    const auto k0 = checkCohereBits(
        *prep, {ordinalFromJson(levelSpec), prepRow, prepM}, prepTarget != 0,
        bitseqFromJson(slurp(etaFile)), prepBlocks);
    if (k0) {
      emit(g, json{{"coheres", true}, {"k0", *k0}});
    } else {
      emit(g, json{{"coheres", false},
                   {"note", "no stable block within the horizon"}});
    }
  });
  auto* prepExtend =
      prepCmd->add_subcommand("extend", "extend a sequence to a height");
  std::string betaSpec;
  prepExtend->add_option("prep", prepFile)->required();
  prepExtend->add_option("base", etaFile)->required();
  prepExtend->add_option("--beta", betaSpec)->required();
  prepExtend->add_option("--row", prepRow);
  prepExtend->add_option("--targets", targetsSpec,
                         "JSON [{\"level\":, \"m\":, \"bit\":}, ...]");
  prepExtend->callback([&] {
    const auto prep = prepFromJson(slurp(prepFile));
    std::map<std::pair<Ordinal, std::uint32_t>, bool> targets;
    if (!targetsSpec.empty()) {
      for (const auto& t : json::parse(targetsSpec)) {
        targets[{ordinalFromJ_cli(t.at("level")),
                 t.at("m").get<std::uint32_t>()}] =
            t.at("bit").get<int>() != 0;
      }
    }
    ExtendParams ep;
    ep.blocksPerSite = prepBlocks;
    const ExtendResult ext =
        extendCondition(*prep, bitseqFromJson(slurp(etaFile)),
                        ordinalFromJson(betaSpec), targets, prepRow, ep);
    emit(g, json::parse(bitseqToJson(ext.seq)));
  });
  auto* prepDemo = prepCmd->add_subcommand(
      "demo", "identity-coded extension and reconstruction round trip");
  prepDemo->add_option("--blocks", prepBlocks, "blocks per site");
  prepDemo->callback([&] {
    TablePrep prep(Ordinal::monomial(1, 3));
    for (std::uint32_t b = 0; b < 3; ++b) {
      for (std::uint32_t m = 0; m < 2; ++m) {
        TablePrep::FamilySpec spec;
        spec.nu.stride = Ordinal::nat(2);
        spec.nu.offset = add(Ordinal::monomial(1, b), Ordinal::nat(m));
        prep.setFamily({Ordinal::monomial(1, b + 1), 0, m}, spec);
      }
    }
    std::map<std::pair<Ordinal, std::uint32_t>, bool> targets;
    targets[{Ordinal::monomial(1, 2), 0}] = true;
    targets[{Ordinal::monomial(1, 3), 1}] = true;
    ExtendParams ep;
    ep.blocksPerSite = prepBlocks;
    const ExtendResult ext = extendCondition(
        prep, BitSeq(Ordinal::omega()), Ordinal::monomial(1, 4), targets, 0,
        ep);
    std::vector<BitSeq> rows{BitSeq(Ordinal::monomial(1, 4)), ext.seq};
    ReconstructParams rp;
    rp.coefCap = 4;
    rp.siteCols = 2;
    const ReconstructionReport rec = reconstruct(prep, rows, rp);
    json sites = json::array();
    for (const RecoveredSite& s : rec.sites) {
      sites.push_back(json{{"level", s.level.toString()},
                           {"m", s.m},
                           {"value", s.value},
                           {"stable", s.stable}});
    }
    emit(g, json{{"written", ext.seq.exceptions().size()},
                 {"recovered", sites},
                 {"allStable", rec.allStable}});
  });

  // cond ------------------------------------------------------------------
  auto* condCmd = app.add_subcommand("cond", "condition operations");
  std::string condFile, condFile2, atLevel;
  std::string assignSpec;
  auto* condValidate = condCmd->add_subcommand("validate", "clause checks");
  condValidate->add_option("file", condFile)->required();
  condValidate->callback([&] {
    const RValidationReport rep =
        validateR(*loadCondition(condFile), makeWindow(g));
    emit(g, json{{"valid", rep.valid},
                 {"violations", violationsJson(rep.violations)},
                 {"beyondHorizon", violationsJson(rep.horizonNotes)},
                 {"summary", rep.summary()}});
    if (!rep.valid) std::exit(1);
  });
  auto* condStack = condCmd->add_subcommand("stack", "stack two conditions");
  condStack->add_option("bottom", condFile)->required();
  condStack->add_option("top", condFile2)->required();
  condStack->callback([&] {
    // Loading validates both; the output file is synthesized textually.
    const RCondPtr bottom = loadCondition(condFile);
    emit(g, json{{"kind", "stack"},
                 {"bottom", json::parse(slurp(condFile))},
                 {"top", json::parse(slurp(condFile2))},
                 {"height", add(bottom->delta(), Ordinal::omega()).toString()}});
  });
  auto* condSplit = condCmd->add_subcommand("split", "split at a level");
  condSplit->add_option("file", condFile)->required();
  condSplit->add_option("at", atLevel, "ordinal as [[exp,coef],...]")
      ->required();
  condSplit->callback([&] {
    auto parts = splitCondition(loadCondition(condFile),
                                ordinalFromJson(atLevel));
    if (const auto* err = std::get_if<SplitError>(&parts)) {
      emit(g, json{{"split", false}, {"reason", err->reason}});
      std::exit(1);
    }
    const auto& [bottom, top] = std::get<SplitParts>(parts);
    emit(g, json{{"split", true},
                 {"bottomHeight", bottom->height().toString()},
                 {"topHeight", top->height().toString()}});
  });
  auto* condSigma = condCmd->add_subcommand("sigma", "finite-column square");
  condSigma->add_option("file", condFile)->required();
  condSigma->callback([&] {
    const TermGridPtr s = sigma(loadCondition(condFile));
    json rows = json::array();
    for (std::uint32_t n = 0; n < g.windowRows; ++n) {
      json row = json::array();
      for (std::uint32_t m = 0; m < g.windowCols; ++m) {
        row.push_back(s->at(n, m).toString());
      }
      rows.push_back(row);
    }
    emit(g, json{{"sigma", rows}});
  });
  auto* condStronger =
      condCmd->add_subcommand("stronger", "term-stronger verdict");
  condStronger->add_option("q", condFile)->required();
  condStronger->add_option("p", condFile2)->required();
  condStronger->callback([&] {
    const StrongerVerdict v = termStronger(
        *loadCondition(condFile), *loadCondition(condFile2), makeWindow(g));
    emit(g, json{{"stronger", v.ok}, {"detail", v.detail}});
    if (!v.ok) std::exit(1);
  });
  auto* condEval = condCmd->add_subcommand("eval", "evaluate cells under a "
                                                   "finite assignment");
  condEval->add_option("file", condFile)->required();
  condEval->add_option("--assign", assignSpec,
                       "JSON map raw-variable-id -> 0|1");
  condEval->callback([&] {
    Assignment a;
    if (!assignSpec.empty()) {
      const json parsed = json::parse(assignSpec);
      for (const auto& [key, value] : parsed.items()) {
        a.set(VariableId(static_cast<std::uint32_t>(std::stoul(key))),
              value.get<int>() != 0);
      }
    }
    json cells = json::array();
    for (const EvaluatedCell& ec :
         evaluateUnder(*loadCondition(condFile), a, makeWindow(g))) {
      json cell{{"row", ec.row}, {"alpha", ec.alpha.toString()}};
      if (ec.value) {
        cell["value"] = *ec.value ? 1 : 0;
      } else {
        cell["symbolic"] = ec.residual.toString();
      }
      cells.push_back(cell);
    }
    emit(g, json{{"cells", cells}});
  });

  // rdelta / rmult ---------------------------------------------------------
  auto* rdeltaCmd = app.add_subcommand("rdelta", "the diagonal condition");
  std::uint32_t entryRow = 0;
  std::string entryOrd;
  auto* rdeltaEntry = rdeltaCmd->add_subcommand("entry", "one matrix entry");
  rdeltaEntry->add_option("n", entryRow)->required();
  rdeltaEntry->add_option("alpha", entryOrd, "ordinal as [[exp,coef],...]")
      ->required();
  rdeltaEntry->callback([&] {
    const Term t =
        buildRDelta()->cell(entryRow, ordinalFromJson(entryOrd));
    emit(g, json{{"term", json::parse(termToJson(t))},
                 {"pretty", t.toString()}});
  });
  auto* rmultCmd = app.add_subcommand("rmult", "the multiplexer condition");
  auto* rmultEntry = rmultCmd->add_subcommand("entry", "one matrix entry");
  rmultEntry->add_option("n", entryRow)->required();
  rmultEntry->add_option("alpha", entryOrd)->required();
  rmultEntry->callback([&] {
    const Term t = buildRMult()->cell(entryRow, ordinalFromJson(entryOrd));
    emit(g, json{{"term", json::parse(termToJson(t))},
                 {"pretty", t.toString()}});
  });

  // builder -----------------------------------------------------------------
  auto* builderCmd = app.add_subcommand("builder", "matrix realization");
  std::string matrixFile;
  auto* builderFrom =
      builderCmd->add_subcommand("from-matrix", "realize a presented matrix");
  builderFrom->add_option("file", matrixFile)->required();
  builderFrom->callback([&] {
    auto built = matrixToCondition(matrixFromJson(slurp(matrixFile)));
    if (const auto* err = std::get_if<BuildError>(&built)) {
      emit(g, json{{"built", false},
                   {"hypothesis", err->hypothesis},
                   {"detail", err->detail}});
      std::exit(1);
    }
    const RCondPtr q = std::get<RCondPtr>(built);
    const RValidationReport rep = validateR(*q, makeWindow(g));
    emit(g, json{{"built", true},
                 {"height", q->height().toString()},
                 {"valid", rep.valid},
                 {"summary", rep.summary()}});
  });

  // pipeline -----------------------------------------------------------------
  auto* pipelineCmd =
      app.add_subcommand("pipeline", "absorb a substitution below a condition");
  std::string pipeCond, pipePhi;
  auto* pipelineRun = pipelineCmd->add_subcommand("run", "full pipeline");
  pipelineRun->add_option("cond", pipeCond)->required();
  pipelineRun->add_option("phi", pipePhi)->required();
  pipelineRun->callback([&] {
    const RCondPtr p = loadCondition(pipeCond);
    const PresentedSubstitution phi = substFromJson(slurp(pipePhi));
    auto result = absorbSubstitution(p, phi, makeWindow(g));
    if (const auto* err = std::get_if<BuildError>(&result)) {
      emit(g, json{{"ok", false},
                   {"hypothesis", err->hypothesis},
                   {"detail", err->detail}});
      std::exit(1);
    }
    const PipelineResult& r = std::get<PipelineResult>(result);
    const json qJson{
        {"kind", "stack"},
        {"bottom",
         json{{"kind", "stack"},
              {"bottom", json::parse(slurp(pipeCond))},
              {"top",
               json{{"kind", "builder"},
                    {"matrix",
                     json{{"kind", "composed"},
                          {"base",
                           json{{"kind", "composed"},
                                {"base", json{{"kind", "schedule"}}},
                                {"by", json{{"kind", "sigma"},
                                            {"cond",
                                             json{{"kind", "rdelta"}}}}}}},
                          {"by", json::parse(substToJson(phi))
                                     .patch(json::parse(
                                         R"([{"op":"add","path":"/kind","value":"subst"}])"))}}}}}}},
        {"top", json{{"kind", "rdelta"}}}};
    const bool ok = r.qStronger && r.sigmaMatches && r.witnessHolds;
    emit(g, json{{"ok", ok},
                 {"qStronger", r.qStronger},
                 {"sigmaMatches", r.sigmaMatches},
                 {"witnessHolds", r.witnessHolds},
                 {"detail", r.detail},
                 {"q", qJson}});
    if (!ok) std::exit(1);
  });

  // verify -----------------------------------------------------------------
  auto* verifyCmd = app.add_subcommand("verify", "run acceptance suites");
  std::vector<int> verifyIds;
  bool verifyQuick = false;
  verifyCmd->add_option("--criteria", verifyIds, "criterion ids (default all)");
  verifyCmd->add_flag("--quick", verifyQuick, "scaled-down sweep");
  verifyCmd->callback([&] {
    VerificationProfile profile;
    profile.seed = g.seed;
    profile.quick = verifyQuick;
    const SuiteReport rep = verifyIds.empty()
                                ? runSuite(profile)
                                : runSuite(profile, verifyIds);
    if (g.format == "json") {
      json results = json::array();
      for (const CriterionResult& r : rep.results) {
        results.push_back(json{{"id", r.id},
                               {"name", r.name},
                               {"pass", r.pass},
                               {"detail", r.detail},
                               {"seconds", r.seconds}});
      }
      std::cout << json{{"seed", rep.seed},
                        {"allPass", rep.allPass()},
                        {"results", results}}
                       .dump(2)
                << "\n";
    } else {
      std::cout << rep.render();
    }
    if (!rep.allPass()) std::exit(1);
  });

  // export -----------------------------------------------------------------
  auto* exportCmd = app.add_subcommand("export", "DOT export");
  std::string exportFile, exportWhat = "tree";
  auto* exportTree = exportCmd->add_subcommand("tree", "tree with fronts");
  exportTree->add_option("file", exportFile)->required();
  exportTree->callback(
      [&] { std::cout << treeToDot(treeFromJson(slurp(exportFile))); });
  auto* exportSigma =
      exportCmd->add_subcommand("sigma", "sigma window of a condition");
  exportSigma->add_option("file", exportFile)->required();
  exportSigma->callback([&] {
    std::cout << gridToDot(*sigma(loadCondition(exportFile)), g.windowRows,
                           g.windowCols);
  });

  // Window flags may trail the subcommand arguments.
  const std::function<void(CLI::App*)> enableFallthrough =
      [&enableFallthrough](CLI::App* cmd) {
        cmd->fallthrough();
        for (CLI::App* sub : cmd->get_subcommands({})) {
          enableFallthrough(sub);
        }
      };
  enableFallthrough(&app);

  CLI11_PARSE(app, argc, argv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
