// Command-line front end: parse, validate, encode, run, project, export-dot.
//
// Exit codes: 0 success, 1 semantic failure (bad input files, sorting
// violations, theorem violations), 2 usage errors.  Diagnostics go to
// standard error, data (terms, TSV, DOT) to standard output.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "biobig/dot.hpp"
#include "biobig/kappa.hpp"
#include "biobig/models.hpp"
#include "biobig/project.hpp"
#include "biobig/sorting.hpp"
#include "biobig/term.hpp"
#include "statements.hpp"

using namespace biobig;

namespace {

int usage(const std::string& msg) {
  std::cerr << "biobig: " << msg << "\n";
  return 2;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::NotFound, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// ---- the kappa model text format ----------------------------------------
//
//   protein NAME ARITY;
//   rule NAME [anti] : LHS -> (x,y) RHS;
//   init : SOLUTION;

struct KappaModel {
  SigPtr sig;
  std::vector<KappaRule> rules;
  KSolution init;
  bool hasInit = false;
};

KappaModel loadKappaModel(const std::string& path) {
  std::string src = slurp(path);
  std::map<std::string, int> arities;
  std::vector<std::tuple<std::string, bool, std::string, std::string>> pendingRules;
  std::string initText, initAt;

  for (const detail::Statement& st : detail::splitStatements(src, path)) {
    std::string at = path + ":" + std::to_string(st.line);
    std::vector<std::string> w = detail::words(st.text);
    if (w.empty()) continue;
    if (w[0] == "protein") {
      if (w.size() != 3) fail(ErrorCode::ParseError, at + ": protein NAME ARITY");
      size_t used = 0;
      int arity = -1;
      try {
        arity = std::stoi(w[2], &used);
      } catch (const std::exception&) {
        used = std::string::npos;
      }
      if (used != w[2].size() || arity < 0) fail(ErrorCode::ParseError, at + ": bad arity '" + w[2] + "'");
      if (!arities.emplace(w[1], arity).second)
        fail(ErrorCode::ParseError, at + ": protein '" + w[1] + "' declared twice");
    } else if (w[0] == "rule") {
      bool anti = w.size() > 2 && w[2] == "anti";
      size_t colonWord = anti ? 3 : 2;
      if (w.size() <= colonWord || w[colonWord] != ":")
        fail(ErrorCode::ParseError, at + ": rule NAME [anti] : LHS -> (x,y) RHS");
      size_t colon = st.text.find(':');
      pendingRules.emplace_back(w[1], anti, st.text.substr(colon + 1), at);
    } else if (w[0] == "init") {
      if (w.size() < 2 || w[1] != ":" || !initAt.empty())
        fail(ErrorCode::ParseError,
             initAt.empty() ? at + ": init : SOLUTION" : at + ": duplicate init");
      initText = st.text.substr(st.text.find(':') + 1);
      initAt = at;
    } else {
      fail(ErrorCode::ParseError, at + ": unknown statement '" + w[0] + "'");
    }
  }

  KappaModel km;
  km.sig = kappaSignature(arities);
  for (const auto& [name, anti, body, at] : pendingRules) {
    KappaRule r = parseKappaRule(km.sig, name, body, anti);
    if (!isWellFormedRule(r))
      fail(ErrorCode::ValidationError, at + ": rule " + name + " is not a growth step");
    km.rules.push_back(std::move(r));
  }
  if (!initAt.empty()) {
    km.init = parseKappa(km.sig, initText);
    km.hasInit = true;
  }
  return km;
}

std::map<std::string, int> parseProteinList(const std::string& spec) {
  std::map<std::string, int> arities;
  std::stringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    size_t colon = item.find(':');
    if (colon == std::string::npos) fail(ErrorCode::ParseError, "--proteins wants NAME:ARITY[,...]");
    std::string name = item.substr(0, colon), num = item.substr(colon + 1);
    size_t first = name.find_first_not_of(" \t");
    size_t last = name.find_last_not_of(" \t");
    if (first == std::string::npos) fail(ErrorCode::ParseError, "--proteins: empty protein name");
    name = name.substr(first, last - first + 1);
    size_t used = 0;
    int arity = -1;
    try {
      arity = std::stoi(num, &used);
    } catch (const std::exception&) {
      used = std::string::npos;
    }
    if (used != num.size() || arity < 0)
      fail(ErrorCode::ParseError, "--proteins: bad arity '" + num + "'");
    arities[name] = arity;
  }
  if (arities.empty()) fail(ErrorCode::ParseError, "--proteins wants NAME:ARITY[,...]");
  return arities;
}

Bigraph encodeChecked(const KSolution& sol, SigPtr sig) {
  if (!isGraphLike(sol))
    fail(ErrorCode::ValidationError,
         "solution is not graph-like: a name occurs more than twice, or a bound "
         "name does not occur exactly twice");
  std::set<std::string> fn = freeNames(sol);
  return encode(sol, {fn.begin(), fn.end()}, sig);
}

void writeFileOrDie(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  if (!out) fail(ErrorCode::NotFound, "cannot write '" + path + "'");
}

int emitViolations(const std::vector<Violation>& bad) {
  for (const Violation& v : bad) std::cerr << showViolation(v) << "\n";
  return bad.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"biological bigraph engine: parse, validate, encode, run, project, export"};
  app.require_subcommand(1);

  std::string file, term, kappaExpr, proteins, strategy = "first", dotDir, view;
  int steps = -1;
  bool asDot = false, checkTheorem = false;

  auto strategyOk = CLI::Validator(
      [](std::string& s) -> std::string {
        if (s == "first") return "";
        for (const std::string& head : {std::string("random:"), std::string("bfs:")}) {
          if (s.rfind(head, 0) != 0) continue;
          std::string num = s.substr(head.size());
          if (!num.empty() && num.find_first_not_of("0123456789") == std::string::npos) return "";
        }
        return "strategy must be first, random:SEED, or bfs:DEPTH";
      },
      "STRATEGY");

  CLI::App* parse = app.add_subcommand("parse", "parse a model file and print its canonical form");
  parse->add_option("file", file, "model file")->required();
  parse->add_option("--term", term, "parse this term over the model's signature instead");

  CLI::App* validate =
      app.add_subcommand("validate", "check the biological discipline; violations on stderr");
  validate->add_option("file", file, "model file")->required();
  validate->add_option("--term", term, "validate this term over the model's signature instead");

  CLI::App* encodeCmd =
      app.add_subcommand("encode", "encode a kappa solution as a protein link graph");
  encodeCmd->add_option("file", file, "kappa model file (protein/rule/init statements)");
  encodeCmd->add_option("--kappa", kappaExpr, "inline solution, e.g. 'A(1),B(1)'");
  encodeCmd->add_option("--proteins", proteins, "inline declarations, e.g. 'A:1,B:2'");
  encodeCmd->add_flag("--dot", asDot, "emit Graphviz instead of a term");

  CLI::App* runCmd = app.add_subcommand("run", "rewrite a model and print its trace");
  runCmd->add_option("file", file, "model file")->required();
  runCmd->add_option("--steps", steps, "maximum number of reactions (default 10)");
  runCmd->add_option("--strategy", strategy, "first | random:SEED | bfs:DEPTH")->check(strategyOk);
  runCmd->add_option("--dot-dir", dotDir, "also write trace.tsv and one DOT file per state here");

  CLI::App* project = app.add_subcommand("project", "protein/mobility views and the trace checker");
  project->add_option("file", file, "model file")->required();
  project->add_option("--view", view, "protein | mobility: print that view of the reached state")
      ->check(CLI::IsMember({"protein", "mobility"}));
  project->add_flag("--check-theorem", checkTheorem,
                    "run, project every step, and print the per-step report as TSV");
  project->add_option("--steps", steps, "reactions before projecting (default 0 for --view, 10 "
                                        "for --check-theorem)");
  project->add_option("--strategy", strategy, "first | random:SEED | bfs:DEPTH")->check(strategyOk);

  CLI::App* exportDot = app.add_subcommand("export-dot", "print a state as Graphviz source");
  exportDot->add_option("file", file, "model file")->required();
  exportDot->add_option("--term", term, "export this term over the model's signature instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (parse->parsed()) {
      Model m = loadModel(file);
      if (term.empty())
        std::cout << showModel(m);
      else
        std::cout << printTerm(parseTerm(m.sig, term)) << "\n";
      return 0;
    }

    if (validate->parsed()) {
      Model m = loadModel(file, /*checkInitial=*/false);
      if (term.empty()) return emitViolations(checkBio(m.initial));
      Bigraph g = parseTerm(m.sig, term);
      return emitViolations(m.sig->hasMembranes() ? checkBio(g) : checkProtSol(g));
    }

    if (encodeCmd->parsed()) {
      SigPtr sig;
      KSolution sol;
      if (!file.empty()) {
        KappaModel km = loadKappaModel(file);
        sig = km.sig;
        if (kappaExpr.empty()) {
          if (!km.hasInit) return usage("the kappa file has no init and no --kappa was given");
          sol = km.init;
        } else {
          sol = parseKappa(sig, kappaExpr);
        }
      } else if (!kappaExpr.empty()) {
        if (proteins.empty()) return usage("--kappa without a file needs --proteins NAME:ARITY[,...]");
        sig = kappaSignature(parseProteinList(proteins));
        sol = parseKappa(sig, kappaExpr);
      } else {
        return usage("encode wants a kappa file or --kappa with --proteins");
      }
      Bigraph enc = encodeChecked(sol, sig);
      if (asDot)
        std::cout << toDot(enc, "encoded");
      else
        std::cout << printTerm(enc) << "\n";
      return 0;
    }

    if (runCmd->parsed()) {
      if (steps < 0) steps = 10;
      Model m = loadModel(file);
      Trace t = run(systemOf(m), m.initial, steps, strategy);
      std::string tsv = toTsv(t);
      std::cout << tsv;
      if (!dotDir.empty()) {
        std::filesystem::create_directories(dotDir);
        writeFileOrDie(dotDir + "/trace.tsv", tsv);
        for (size_t i = 0; i < t.states.size(); ++i) {
          char name[32];
          std::snprintf(name, sizeof name, "state_%04zu.dot", i);
          writeFileOrDie(dotDir + "/" + name, toDot(t.states[i], name));
        }
      }
      return 0;
    }

    if (project->parsed()) {
      if (view.empty() == !checkTheorem)
        return usage("project wants exactly one of --view and --check-theorem");
      Model m = loadModel(file);
      ReactiveSystem rs = systemOf(m);
      if (checkTheorem) {
        if (steps < 0) steps = 10;
        Trace t = run(rs, m.initial, steps, strategy);
        std::cout << toTsv(projectTrace(t, rs), t);
        return 0;
      }
      Bigraph state = m.initial;
      if (steps > 0) state = run(rs, m.initial, steps, strategy).states.back();
      std::cout << printTerm(view == "protein" ? projectProtein(state) : projectMobility(state))
                << "\n";
      return 0;
    }

    if (exportDot->parsed()) {
      Model m = loadModel(file);
      if (term.empty())
        std::cout << toDot(m.initial, m.name);
      else
        std::cout << toDot(parseTerm(m.sig, term), "term");
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "biobig: " << e.what() << "\n";
    return 1;
  }
  return usage("no subcommand handled");
}
