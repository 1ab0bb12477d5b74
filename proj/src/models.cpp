#include "biobig/models.hpp"

#include <fstream>
#include <sstream>

#include "biobig/ops.hpp"
#include "biobig/sorting.hpp"
#include "biobig/term.hpp"
#include "statements.hpp"

namespace biobig {

namespace {

Bigraph T(SigPtr sig, const std::string& src) { return parseTerm(sig, src); }

/** The mobility triple dropped around three regions by an introduction rule:
    content marker over region 0, membrane marker over region 1, destination
    marker beside region 2. */
Bigraph introTriple(SigPtr sig) {
  return T(sig, "/x:h /y:h (p^c_{x:h}[ id ] || p^m_{x:h, y:h}[ id ] || (p^d_{y:h} | id))");
}

}  // namespace

SigPtr vesicleSignature() {
  using A = Activity;
  using P = Polarity;
  using K = ControlKind;
  return biologicalSignature({{"cargo", 1, A::Atomic, P::Polar, K::Plain},
                              {"rec^ext", 2, A::Atomic, P::Polar, K::Plain},
                              {"rec^m", 2, A::Atomic, P::Apolar, K::Plain},
                              {"rec^cys", 2, A::Atomic, P::Polar, K::Plain},
                              {"adpt", 2, A::Atomic, P::Polar, K::Plain},
                              {"clath", 1, A::Atomic, P::Polar, K::Plain}});
}

SigPtr phagoSignature() {
  using A = Activity;
  using P = Polarity;
  using K = ControlKind;
  return biologicalSignature({{"particle", 2, A::Atomic, P::Polar, K::Plain},
                              {"IgG", 2, A::Atomic, P::Polar, K::Plain},
                              {"FcR^ext", 2, A::Atomic, P::Polar, K::Plain},
                              {"FcR^m", 2, A::Atomic, P::Apolar, K::Plain},
                              {"FcR^cys", 3, A::Atomic, P::Polar, K::Plain},
                              {"actin", 1, A::Atomic, P::Polar, K::Plain}});
}

Bigraph buildPCmplx(SigPtr sig, int n) {
  if (n < 0) fail(ErrorCode::BadGraph, "buildPCmplx: negative count");
  Bigraph acc = T(sig, "1 || 1 || 1");
  Bigraph step = T(sig,
                   "/x:b /y:b /z:b /w:b /k:b ((cargo_{x:b} | rec^ext_{x:b, y:b} | id) || "
                   "(rec^m_{y:b, z:b} | id) || "
                   "(rec^cys_{z:b, w:b} | adpt_{w:b, k:b} | clath_{k:b} | id))");
  for (int i = 0; i < n; ++i) acc = compose(step, acc);
  return acc;
}

namespace {

std::string vesicleInit(int n) {
  std::string closures, outside, membrane, cytosol;
  for (int i = 0; i < n; ++i) {
    std::string s = std::to_string(i);
    closures += "/x" + s + ":v /y" + s + ":v /z" + s + ":b /w" + s + ":b /k" + s + ":h /u" + s +
                ":v /t" + s + ":h /s" + s + ":v ";
    outside += "cargo_{x" + s + ":v} | rec^ext_{y" + s + ":v, z" + s + ":b} | ";
    if (i) membrane += " | ";
    membrane += "rec^m_{z" + s + ":b, w" + s + ":b}";
    if (i) cytosol += " | ";
    cytosol += "rec^cys_{w" + s + ":b, k" + s + ":h} | adpt_{u" + s + ":v, t" + s +
               ":h} | clath_{s" + s + ":v}";
  }
  return closures + "(" + outside + "m^ext[ " + membrane + " | m^cys[ " + cytosol + " ] ])";
}

}  // namespace

Model vesicleModel(int n) {
  if (n < 1) fail(ErrorCode::BadRule, "vesicleModel: the budding trigger needs n >= 1");
  SigPtr sig = vesicleSignature();
  Model m;
  m.sig = sig;
  m.name = "vesicle";
  m.description = "clathrin-coated vesicle budding at the plasma membrane";

  // the membrane receptor captures cargo outside and presents its tail inside
  m.rules.push_back(makeMonotoneRule(
      "rec",
      T(sig,
        "/x:v /y:v /z:b /w:b /k:h ((cargo_{x:v} | rec^ext_{y:v, z:b}) || rec^m_{z:b, w:b} || "
        "rec^cys_{w:b, k:h})"),
      T(sig,
        "/b:b /z:b /w:b /k:v ((cargo_{b:b} | rec^ext_{b:b, z:b}) || rec^m_{z:b, w:b} || "
        "rec^cys_{w:b, k:v})")));

  // the presented tail recruits an adaptin and readies it for the coat
  m.rules.push_back(
      makeMonotoneRule("adpt",
                       T(sig, "/k:v /x:v /y:h (rec^cys_{w:b, k:v} | adpt_{x:v, y:h})"),
                       T(sig, "/b:b /y:v (rec^cys_{w:b, b:b} | adpt_{b:b, y:v})")));

  // a receptor-bound adaptin hooks a clathrin cage unit
  m.rules.push_back(makeMonotoneRule("coat",
                                     T(sig, "/y:v /z:v (adpt_{x:b, y:v} | clath_{z:v})"),
                                     T(sig, "/b:b (adpt_{x:b, b:b} | clath_{b:b})")));

  // n assembled complexes trigger the budding markers
  Bigraph complexes = buildPCmplx(sig, n);
  m.rules.push_back(makeIntroductionRule("P-intro", complexes, compose(introTriple(sig), complexes)));

  // after budding the receptor releases the adaptin-clathrin shell
  m.rules.push_back(makeAntimonotoneRule(
      "uncoat",
      T(sig, "/b:b /c:b (rec^cys_{w:b, b:b} | adpt_{b:b, c:b} | clath_{c:b})"),
      T(sig, "/k:v /x:v /c:b (rec^cys_{w:b, k:v} | adpt_{x:v, c:b} | clath_{c:b})")));

  m.initial = T(sig, vesicleInit(n));
  return m;
}

Model phagoModel() {
  SigPtr sig = phagoSignature();
  Model m;
  m.sig = sig;
  m.name = "phago";
  m.description = "antibody-coated particle engulfment into a phagosome";

  // antibodies coat the particle, one per exposed site
  m.rules.push_back(makeMonotoneRule("opson1",
                                     T(sig, "/a:v /b:v (particle_{a:v, w:f} | IgG_{b:v, t:f})"),
                                     T(sig, "/q:b (particle_{q:b, w:f} | IgG_{q:b, t:f})")));
  m.rules.push_back(makeMonotoneRule("opson2",
                                     T(sig, "/a:v /b:v (particle_{w:f, a:v} | IgG_{b:v, t:f})"),
                                     T(sig, "/q:b (particle_{w:f, q:b} | IgG_{q:b, t:f})")));

  // a particle-bound antibody docks onto a membrane-anchored receptor
  m.rules.push_back(makeMonotoneRule("bind",
                                     T(sig, "/a:v /b:v (IgG_{w:b, a:v} | FcR^ext_{b:v, z:b})"),
                                     T(sig, "/q:b (IgG_{w:b, q:b} | FcR^ext_{q:b, z:b})")));

  // occupied receptors cross-link through their cytosolic tails
  m.rules.push_back(
      makeMonotoneRule("xlink",
                       T(sig, "/a:v /b:v (FcR^cys_{u:b, a:v, s:f} | FcR^cys_{v:b, b:v, t:f})"),
                       T(sig, "/q:b (FcR^cys_{u:b, q:b, s:f} | FcR^cys_{v:b, q:b, t:f})")));

  // cross-linked receptors recruit actin
  m.rules.push_back(makeMonotoneRule("actin",
                                     T(sig, "/a:v /b:v (FcR^cys_{u:b, x:b, a:v} | actin_{b:v})"),
                                     T(sig, "/q:b (FcR^cys_{u:b, x:b, q:b} | actin_{q:b})")));

  // the fully engaged patch raises the engulfment markers
  Bigraph patch = T(
      sig,
      "/q1:b /q2:b /r1:b /r2:b /z1:b /z2:b /w1:b /w2:b /x0:b /a1:b /a2:b ("
      "(particle_{q1:b, q2:b} | IgG_{q1:b, r1:b} | IgG_{q2:b, r2:b} | FcR^ext_{r1:b, z1:b} | "
      "FcR^ext_{r2:b, z2:b}) || "
      "(FcR^m_{z1:b, w1:b} | FcR^m_{z2:b, w2:b}) || "
      "(FcR^cys_{w1:b, x0:b, a1:b} | FcR^cys_{w2:b, x0:b, a2:b} | actin_{a1:b} | actin_{a2:b}))");
  m.rules.push_back(makeIntroductionRule("phago-intro", patch, compose(introTriple(sig), patch)));

  m.initial = T(
      sig,
      "/a:v /b:v /c:v /d:v /e:v /f:v /g:v /h:v /i:v /j:v /k:v /l:v /o:v /p:v "
      "/z1:b /z2:b /w1:b /w2:b "
      "(particle_{a:v, b:v} | IgG_{c:v, d:v} | IgG_{e:v, f:v} | FcR^ext_{g:v, z1:b} | "
      "FcR^ext_{h:v, z2:b} | m^ext[ FcR^m_{z1:b, w1:b} | FcR^m_{z2:b, w2:b} | "
      "m^cys[ FcR^cys_{w1:b, i:v, j:v} | FcR^cys_{w2:b, k:v, l:v} | actin_{o:v} | actin_{p:v} ] ])");
  return m;
}

ReactiveSystem systemOf(const Model& m) {
  ReactiveSystem rs;
  rs.sig = m.sig;
  rs.rules = commitmentRules(m.sig);
  rs.rules.insert(rs.rules.end(), m.rules.begin(), m.rules.end());
  rs.profile = Profile::Bio;
  return rs;
}

// ------------------------------------------------------------ text format

namespace {

using detail::Statement;
using detail::splitStatements;
using detail::words;
using detail::stemOf;

std::string kvValue(const std::string& word, const std::string& key, const std::string& at) {
  if (word.size() <= key.size() + 1 || word.compare(0, key.size(), key) != 0 ||
      word[key.size()] != '=')
    fail(ErrorCode::ParseError, at + ": expected " + key + "=..., got '" + word + "'");
  return word.substr(key.size() + 1);
}

Control parseControl(const std::vector<std::string>& w, const std::string& at) {
  if (w.size() != 6)
    fail(ErrorCode::ParseError,
         at + ": control NAME arity=K activity=A polarity=P kind=protein");
  Control c;
  c.name = w[1];
  std::string arity = kvValue(w[2], "arity", at);
  size_t used = 0;
  try {
    c.arity = std::stoi(arity, &used);
  } catch (const std::exception&) {
    used = std::string::npos;
  }
  if (used != arity.size() || c.arity < 0)
    fail(ErrorCode::ParseError, at + ": bad arity in '" + w[2] + "'");
  std::string act = kvValue(w[3], "activity", at);
  if (act == "active")
    c.activity = Activity::Active;
  else if (act == "passive")
    c.activity = Activity::Passive;
  else if (act == "atomic")
    c.activity = Activity::Atomic;
  else
    fail(ErrorCode::ParseError, at + ": unknown activity '" + act + "'");
  std::string pol = kvValue(w[4], "polarity", at);
  if (pol == "polar")
    c.polarity = Polarity::Polar;
  else if (pol == "apolar")
    c.polarity = Polarity::Apolar;
  else
    fail(ErrorCode::ParseError, at + ": unknown polarity '" + pol + "'");
  std::string kind = kvValue(w[5], "kind", at);
  if (kind != "protein")
    fail(ErrorCode::ParseError,
         at + ": only kind=protein may be declared (membrane and mobility controls are built in)");
  c.kind = ControlKind::Plain;
  return c;
}

}  // namespace

Model loadModel(const std::string& path, bool checkInitial) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::NotFound, "loadModel: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  std::string src = buf.str();

  Model m;
  m.name = stemOf(path);
  size_t hash = src.find('#');
  if (hash != std::string::npos && src.find_first_not_of(" \t\r\n") == hash) {
    size_t eol = src.find('\n', hash);
    std::string c = src.substr(hash + 1, eol == std::string::npos ? eol : eol - hash - 1);
    size_t first = c.find_first_not_of(" \t");
    m.description = first == std::string::npos ? "" : c.substr(first);
  }

  std::vector<Control> proteins;
  bool sigBuilt = false;
  bool haveInit = false;
  auto ensureSig = [&] {
    if (!sigBuilt) {
      m.sig = biologicalSignature(proteins);
      sigBuilt = true;
    }
  };

  for (const Statement& st : splitStatements(src, path)) {
    std::string at = path + ":" + std::to_string(st.line);
    std::vector<std::string> w = words(st.text);
    if (w.empty()) continue;
    if (w[0] == "control") {
      if (sigBuilt) fail(ErrorCode::ParseError, at + ": control declarations must precede rules and init");
      proteins.push_back(parseControl(w, at));
    } else if (w[0] == "rule") {
      if (w.size() < 4 || w[3] != ":")
        fail(ErrorCode::ParseError, at + ": rule NAME kind=K : TERM -> TERM");
      std::string name = w[1];
      std::string kind = kvValue(w[2], "kind", at);
      size_t colon = st.text.find(':', st.text.find(w[2]) + w[2].size());
      std::string body = st.text.substr(colon + 1);
      // split on the top-level arrow
      int depth = 0;
      size_t arrow = std::string::npos;
      for (size_t i = 0; i + 1 < body.size(); ++i) {
        char c = body[i];
        if (c == '(' || c == '[' || c == '{') ++depth;
        if (c == ')' || c == ']' || c == '}') --depth;
        if (depth == 0 && c == '-' && body[i + 1] == '>') {
          arrow = i;
          break;
        }
      }
      if (arrow == std::string::npos) fail(ErrorCode::ParseError, at + ": rule is missing '->'");
      ensureSig();
      try {
        Bigraph lhs = parseTerm(m.sig, body.substr(0, arrow));
        Bigraph rhs = parseTerm(m.sig, body.substr(arrow + 2));
        if (kind == "mono")
          m.rules.push_back(makeMonotoneRule(name, std::move(lhs), std::move(rhs)));
        else if (kind == "anti")
          m.rules.push_back(makeAntimonotoneRule(name, std::move(lhs), std::move(rhs)));
        else if (kind == "intro")
          m.rules.push_back(makeIntroductionRule(name, std::move(lhs), std::move(rhs)));
        else
          fail(ErrorCode::ParseError, at + ": unknown rule kind '" + kind + "'");
      } catch (const Error& e) {
        if (e.code == ErrorCode::ParseError) throw;
        fail(ErrorCode::ValidationError, at + ": rule " + name + ": " + e.what());
      }
    } else if (w[0] == "init") {
      if (w.size() < 2 || w[1] != ":" || haveInit)
        fail(ErrorCode::ParseError,
             haveInit ? at + ": duplicate init" : at + ": init : TERM");
      ensureSig();
      m.initial = parseTerm(m.sig, st.text.substr(st.text.find(':') + 1));
      haveInit = true;
    } else {
      fail(ErrorCode::ParseError, at + ": unknown statement '" + w[0] + "'");
    }
  }
  if (!haveInit) fail(ErrorCode::ParseError, path + ": missing init statement");

  std::vector<Violation> bad = checkInitial ? checkBio(m.initial) : std::vector<Violation>{};
  if (!bad.empty()) {
    std::string msg = path + ": initial state fails the biological checks:";
    for (const Violation& v : bad) msg += "\n  " + showViolation(v);
    fail(ErrorCode::ValidationError, msg);
  }
  return m;
}

std::string showModel(const Model& m) {
  std::ostringstream out;
  if (!m.description.empty()) out << "# " << m.description << "\n\n";
  for (const Control& c : m.sig->controls()) {
    if (c.kind != ControlKind::Plain) continue;
    out << "control " << c.name << " arity=" << c.arity << " activity="
        << (c.activity == Activity::Active
                ? "active"
                : c.activity == Activity::Passive ? "passive" : "atomic")
        << " polarity=" << (c.polarity == Polarity::Polar ? "polar" : "apolar")
        << " kind=protein;\n";
  }
  out << "\n";
  for (const Rule& r : m.rules) {
    const char* kind = nullptr;
    switch (r.kind) {
      case RuleKind::Monotone: kind = "mono"; break;
      case RuleKind::Antimonotone: kind = "anti"; break;
      case RuleKind::Introduction: kind = "intro"; break;
      case RuleKind::Commitment:
        fail(ErrorCode::BadRule, "saveModel: commitment rules are implicit and never saved");
    }
    out << "rule " << r.name << " kind=" << kind << " :\n  " << printTerm(r.lhs) << "\n  -> "
        << printTerm(r.rhs) << ";\n\n";
  }
  out << "init :\n  " << printTerm(m.initial) << ";\n";
  return out.str();
}

void saveModel(const Model& m, const std::string& path) {
  std::string text = showModel(m);
  std::ofstream out(path);
  if (!out) fail(ErrorCode::NotFound, "saveModel: cannot open '" + path + "' for writing");
  out << text;
  if (!out) fail(ErrorCode::NotFound, "saveModel: write to '" + path + "' failed");
}

}  // namespace biobig
