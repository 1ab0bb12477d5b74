#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "biobig/kappa.hpp"
#include "biobig/ops.hpp"
#include "biobig/rewrite.hpp"
#include "biobig/signature.hpp"
#include "biobig/sorting.hpp"
#include "biobig/term.hpp"

using namespace biobig;

namespace {

SigPtr ksig() {
  return proteinSignature({{"A", 2, Activity::Atomic, Polarity::Polar, ControlKind::Plain},
                           {"B", 1, Activity::Atomic, Polarity::Polar, ControlKind::Plain},
                           {"C", 1, Activity::Atomic, Polarity::Polar, ControlKind::Plain}});
}

SigPtr traceSig() {  // membranes + arity-0 tracers for each side of a bilayer
  return biologicalSignature({{"T", 0, Activity::Atomic, Polarity::Polar, ControlKind::Plain},
                              {"R", 0, Activity::Atomic, Polarity::Apolar, ControlKind::Plain}});
}

SigPtr cellSig() {  // membranes + two unary proteins
  return biologicalSignature({{"B", 1, Activity::Atomic, Polarity::Polar, ControlKind::Plain},
                              {"C", 1, Activity::Atomic, Polarity::Polar, ControlKind::Plain}});
}

SigPtr vesicleSig() {
  return biologicalSignature(
      {{"cargo", 1, Activity::Atomic, Polarity::Polar, ControlKind::Plain},
       {"rec^ext", 2, Activity::Atomic, Polarity::Polar, ControlKind::Plain},
       {"rec^m", 2, Activity::Atomic, Polarity::Apolar, ControlKind::Plain},
       {"rec^cys", 2, Activity::Atomic, Polarity::Polar, ControlKind::Plain},
       {"adpt", 2, Activity::Atomic, Polarity::Polar, ControlKind::Plain},
       {"clath", 1, Activity::Atomic, Polarity::Polar, ControlKind::Plain}});
}

template <typename F>
ErrorCode codeOf(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code;
  }
  return ErrorCode{255};
}

std::vector<std::string> sortedNames(const std::set<std::string>& s) {
  return {s.begin(), s.end()};
}

Bigraph encodeClosed(SigPtr sig, const std::string& s) {
  KSolution sol = parseKappa(sig, s);
  return encode(sol, sortedNames(freeNames(sol)), sig);
}

// per-type counts of a graph's edges, in h/v/b order
std::array<int, 3> edgeCensus(const Bigraph& g) {
  std::array<int, 3> c{0, 0, 0};
  for (const auto& [e, t] : g.edges) c[(int)t]++;
  return c;
}

// membrane-nesting parity of every plain node, as a control->parities multiset
std::multiset<std::pair<std::string, int>> nestingParities(const Bigraph& g) {
  std::multiset<std::pair<std::string, int>> out;
  for (const Node& n : g.nodes) {
    if (!isPlain(g.controlOf(n))) continue;
    int depth = 0;
    for (Place p = n.parent; !p.isRoot(); p = g.node(p.at).parent)
      if (isMembrane(g.controlOf(g.node(p.at)))) depth++;
    out.insert({n.control, depth % 2});
  }
  return out;
}

bool sameMatchSets(const std::vector<Match>& xs, const std::vector<Match>& ys) {
  if (xs.size() != ys.size()) return false;
  std::vector<bool> taken(ys.size(), false);
  for (const Match& x : xs) {
    bool found = false;
    for (size_t j = 0; j < ys.size() && !found; ++j) {
      if (taken[j]) continue;
      if (supportEquiv(x.context, ys[j].context) && supportEquiv(x.parameter, ys[j].parameter)) {
        taken[j] = true;
        found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

KSolution randomSolution(std::mt19937_64& rng, int maxAtoms) {
  static const std::vector<std::pair<std::string, int>> kinds = {
      {"A", 2}, {"B", 1}, {"C", 1}, {"B", 1}, {"C", 1}};
  int n = 1 + (int)(rng() % maxAtoms);
  std::vector<KSolution> atoms;
  std::vector<std::pair<int, int>> visible;
  for (int i = 0; i < n; ++i) {
    auto [ctrl, arity] = kinds[rng() % kinds.size()];
    KAtom a{ctrl, {}};
    for (int s = 0; s < arity; ++s) {
      bool vis = rng() % 2 == 0;
      a.sites.push_back({vis ? KSite::State::Visible : KSite::State::Hidden, ""});
      if (vis) visible.push_back({i, s});
    }
    atoms.push_back(KSolution::mk(a));
  }
  std::shuffle(visible.begin(), visible.end(), rng);
  int bonds = visible.size() >= 2 ? (int)(rng() % (visible.size() / 2 + 1)) : 0;
  std::vector<std::string> binders;
  for (int b = 0; b < bonds; ++b) {
    std::string w = "q" + std::to_string(b);
    auto [i1, s1] = visible[2 * b];
    auto [i2, s2] = visible[2 * b + 1];
    atoms[i1].atom.sites[s1] = {KSite::State::Bound, w};
    atoms[i2].atom.sites[s2] = {KSite::State::Bound, w};
    binders.push_back(w);
  }
  KSolution body = KSolution::group(std::move(atoms));
  return binders.empty() ? body : KSolution::restrict(binders, body);
}

}  // namespace

TEST_CASE("active contexts") {
  SigPtr sig = traceSig();
  CHECK(isActiveContext(idPlaces(sig, 1)));
  CHECK(isActiveContext(idPlaces(sig, 3)));
  // a hole under the frozen content marker is inactive
  CHECK_FALSE(isActiveContext(ion(sig, PC, {{"x", NameType::Hidden}})));
  // membranes are active: a hole two layers deep stays reachable
  CHECK(isActiveContext(compose(ion(sig, MExt, {}), ion(sig, MCys, {}))));
  CHECK_FALSE(isActiveContext(
      compose(ion(sig, MExt, {}), closeName(ion(sig, FC, {{"x", NameType::Hidden}}), "x", NameType::Hidden))));
}

TEST_CASE("growth between faces") {
  SigPtr sig = ksig();
  Bigraph g = encodeClosed(sig, "A(1,2~), B(1)");
  CHECK(growsLink(g, g));

  // forming a bond between two visible sites
  CHECK(growsLink(encodeClosed(sig, "B(1), C(1)"), encodeClosed(sig, "(x)(B(1^x), C(1^x))")));
  // the reverse shrinks
  CHECK_FALSE(growsLink(encodeClosed(sig, "(x)(B(1^x), C(1^x))"), encodeClosed(sig, "B(1), C(1)")));
  // toggling availability both ways
  CHECK(growsLink(encodeClosed(sig, "B(1~)"), encodeClosed(sig, "B(1)")));
  CHECK(growsLink(encodeClosed(sig, "B(1)"), encodeClosed(sig, "B(1~)")));
  // recruiting a fresh protein wired to an existing visible site
  CHECK(growsLink(encodeClosed(sig, "B(1)"), encodeClosed(sig, "(x)(B(1^x), C(1^x))")));
  // a bond may not steal a hidden site
  CHECK_FALSE(growsLink(encodeClosed(sig, "B(1~), C(1)"), encodeClosed(sig, "(x)(B(1^x), C(1^x))")));
  // interface mismatch is never growth
  KSolution withY = parseKappa(sig, "B(1^y)");
  CHECK_FALSE(growsLink(encodeClosed(sig, "B(1)"), encode(withY, {"y"}, sig)));

  // a bond tying only one port is below the graph-like discipline
  KSolution half = parseKappa(sig, "(x)(B(1^x))");
  CHECK(growsSolution({"x"}, parseKappa(sig, "B(1)"), parseKappa(sig, "B(1^x)")));
  CHECK_FALSE(growsLink(encodeClosed(sig, "B(1)"), encode(half, {}, sig)));
}

TEST_CASE("growth agrees with the solution preorder on small rules") {
  SigPtr sig = kappaSignature({{"A", 1}, {"B", 1}});
  // every 1- and 2-atom side over sites {hidden, visible, bound y, bound x}
  std::vector<std::string> sites = {"1~", "1", "1^y", "1^x"};
  std::vector<std::string> sols;
  for (const std::string& c : {"A", "B"})
    for (const std::string& s : sites) sols.push_back(c + "(" + s + ")");
  for (const std::string& cs : {"A,A", "A,B", "B,B"})
    for (const std::string& s1 : sites)
      for (const std::string& s2 : sites) {
        std::string c1 = cs.substr(0, 1), c2 = cs.substr(2, 1);
        sols.push_back(c1 + "(" + s1 + "), " + c2 + "(" + s2 + ")");
      }

  int agreements = 0;
  for (const std::string& ls : sols)
    for (const std::string& rs : sols)
      for (bool withFresh : {false, true}) {
        KSolution l = parseKappa(sig, ls);
        KSolution r = parseKappa(sig, rs);
        std::vector<std::string> fresh;
        if (withFresh) {
          std::set<std::string> lf = freeNames(l);
          if (lf.count("x")) continue;  // fresh names must avoid the left side
          fresh.push_back("x");
        }
        KSolution rr = fresh.empty() ? r : KSolution::restrict(fresh, r);
        if (!isGraphLike(l) || !isGraphLike(rr)) continue;
        std::set<std::string> rf = freeNames(rr);
        bool kappaSide = growsSolution(fresh, l, r);
        bool graphSide =
            growsLink(encode(l, sortedNames(freeNames(l)), sig), encode(rr, sortedNames(rf), sig));
        CHECK(kappaSide == graphSide);
        agreements++;
      }
  CHECK(agreements > 1000);
}

TEST_CASE("rule constructors") {
  SigPtr sig = ksig();
  Rule pair = fromKappa(parseKappaRule(sig, "pair", "B(1), C(1) -> (x) B(1^x), C(1^x)"), sig);
  CHECK(pair.kind == RuleKind::Monotone);
  CHECK(pair.lhs.outer == pair.rhs.outer);

  Rule unpair = fromKappa(reversed(parseKappaRule(sig, "unpair",
                                                  "B(1), C(1) -> (x) B(1^x), C(1^x)")),
                          sig);
  CHECK(unpair.kind == RuleKind::Antimonotone);

  // a reactum in two separate complexes is rejected
  CHECK(codeOf([&] {
          fromKappa(parseKappaRule(sig, "drift", "B(1), C(1) -> B(1~), C(1~)"), sig);
        }) == ErrorCode::BadRule);
  // losing a bond is no growth
  CHECK(codeOf([&] {
          Bigraph l = encodeClosed(sig, "(x)(B(1^x), C(1^x))");
          Bigraph r = encodeClosed(sig, "B(1), C(1)");
          makeMonotoneRule("shrink", l, r);
        }) == ErrorCode::BadRule);
  // a half-tied bond fails the face discipline
  CHECK(codeOf([&] {
          KSolution rhs = parseKappa(sig, "(x)(B(1^x))");
          makeMonotoneRule("half", encodeClosed(sig, "B(1)"), encode(rhs, {}, sig));
        }) == ErrorCode::BadRule);

  // the receptor-binding rule: one new bond, availability toggles, spectators kept
  SigPtr vs = vesicleSig();
  Bigraph recL = parseTerm(
      vs,
      "/c:v /s:v /g:h (cargo_{c:v} | rec^ext_{s:v, x:b}) || rec^m_{x:b, y:b} || rec^cys_{y:b, g:h}");
  Bigraph recR = parseTerm(
      vs,
      "/t:b /g:v (cargo_{t:b} | rec^ext_{t:b, x:b}) || rec^m_{x:b, y:b} || rec^cys_{y:b, g:v}");
  Rule rec = makeMonotoneRule("rec", recL, recR);
  CHECK(rec.kind == RuleKind::Monotone);
  CHECK(rec.lhs.outer.width == 3);

  Bigraph uncoatL = parseTerm(vs, "/t:b (rec^cys_{w:b, t:b} | adpt_{t:b, u:b})");
  Bigraph uncoatR = parseTerm(vs, "/r:v /s:v (rec^cys_{w:b, r:v} | adpt_{s:v, u:b})");
  Rule uncoat = makeAntimonotoneRule("uncoat", uncoatL, uncoatR);
  CHECK(uncoat.kind == RuleKind::Antimonotone);
  // same faces as a forward rule: rejected
  CHECK(codeOf([&] { makeMonotoneRule("uncoat", uncoatL, uncoatR); }) == ErrorCode::BadRule);
}

TEST_CASE("commitment rule shapes") {
  SigPtr sig = traceSig();
  std::vector<Rule> cr = commitmentRules(sig);
  REQUIRE(cr.size() == 2);
  CHECK(cr[0].name == "pinch");
  CHECK(cr[1].name == "fuse");
  for (const Rule& r : cr) {
    CHECK(r.kind == RuleKind::Commitment);
    CHECK(r.lhs.inner.width == 3);
    CHECK(r.lhs.outer.width == 3);
    CHECK(r.lhs.outer.names.empty());
    CHECK(r.lhs.inner == r.rhs.inner);
    CHECK(r.lhs.outer == r.rhs.outer);
    CHECK_FALSE(supportEquiv(r.lhs, r.rhs));
    // the redex wires its three markers into a chain of two 2-point ties
    std::multiset<int> pts;
    for (const auto& [eid, ty] : r.lhs.edges) {
      CHECK(ty == NameType::Hidden);
      pts.insert(r.lhs.pointCount(Link::toEdge(eid)));
    }
    CHECK(pts == std::multiset<int>{2, 2});
    CHECK(r.rhs.edges.empty());
  }
  // the pinch redex holds the three markers, its reactum the fresh bilayer
  auto controls = [](const Bigraph& g) {
    std::multiset<std::string> out;
    for (const Node& n : g.nodes) out.insert(n.control);
    return out;
  };
  CHECK(controls(cr[0].lhs) == std::multiset<std::string>{PC, PM, PD});
  CHECK(controls(cr[0].rhs) == std::multiset<std::string>{MExt, MCys});
  CHECK(controls(cr[1].lhs) == std::multiset<std::string>{FC, FM, FD, MExt, MCys});
  CHECK(controls(cr[1].rhs).empty());
}

TEST_CASE("matching basics") {
  SigPtr sig = ksig();
  Rule hideB = fromKappa(parseKappaRule(sig, "hideB", "B(1) -> B(1~)"), sig);

  Bigraph one = encodeClosed(sig, "B(1), C(1~)");
  std::vector<Match> ms = findMatches(one, hideB);
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].witness == "n0");
  CHECK(ms[0].rule == &hideB);

  CHECK(findMatches(encodeClosed(sig, "C(1), C(1~)"), hideB).empty());

  // two equivalent occurrences collapse to one decomposition
  CHECK(findMatches(encodeClosed(sig, "B(1), B(1)"), hideB).size() == 1);

  // matching never reaches under a frozen marker
  SigPtr cs = cellSig();
  Rule hideBCell = fromKappa(parseKappaRule(cs, "hideB", "B(1) -> B(1~)"), cs);
  Bigraph frozen = parseTerm(
      cs, "/s:v /x:h /y:h (p^c_{x:h}[ B_{s:v} ] | p^m_{x:h, y:h} | p^d_{y:h})");
  CHECK(findMatches(frozen, hideBCell).empty());
  Bigraph open = parseTerm(cs, "/s:v /x:h /y:h (B_{s:v} | m^ext[ m^cys[ p^d_{y:h} | p^c_{x:h} ] | p^m_{x:h, y:h} ])");
  CHECK(findMatches(open, hideBCell).size() == 1);
}

TEST_CASE("matching agrees with the exhaustive reference") {
  SigPtr sig = ksig();
  std::vector<Rule> rules;
  rules.push_back(fromKappa(parseKappaRule(sig, "pair", "B(1), C(1) -> (x) B(1^x), C(1^x)"), sig));
  rules.push_back(
      fromKappa(reversed(parseKappaRule(sig, "unpair", "B(1), C(1) -> (x) B(1^x), C(1^x)")), sig));
  rules.push_back(fromKappa(parseKappaRule(sig, "reveal", "A(1,2~) -> A(1,2)"), sig));

  std::mt19937_64 rng(42);
  int verified = 0;
  for (int i = 0; i < 60; ++i) {
    Bigraph agent = encode(randomSolution(rng, 5), {}, sig);
    for (const Rule& r : rules) {
      std::vector<Match> fast = findMatches(agent, r);
      std::vector<Match> slow = findMatchesBruteForce(agent, r);
      CHECK(sameMatchSets(fast, slow));
      verified += (int)fast.size();
    }
  }
  CHECK(verified > 10);  // the sample actually exercises matches
}

TEST_CASE("applying matches") {
  SigPtr sig = ksig();

  // a rule that changes nothing returns the agent
  Rule still = fromKappa(parseKappaRule(sig, "still", "A(1,2~) -> A(1,2~)"), sig);
  KSolution sol = parseKappa(sig, "A(1,2~), B(1^y)");
  Bigraph agent = encode(sol, {"y"}, sig);
  std::vector<Match> ms = findMatches(agent, still);
  REQUIRE(ms.size() == 1);
  CHECK(supportEquiv(applyMatch(ms[0]), agent));

  // undoing a bond restores the solution, across random agents
  Rule pair = fromKappa(parseKappaRule(sig, "pair", "B(1), C(1) -> (x) B(1^x), C(1^x)"), sig);
  Rule unpair =
      fromKappa(reversed(parseKappaRule(sig, "unpair", "B(1), C(1) -> (x) B(1^x), C(1^x)")), sig);
  std::mt19937_64 rng(7);
  int roundTrips = 0;
  for (int i = 0; i < 400; ++i) {
    Bigraph g = encode(randomSolution(rng, 5), {}, sig);
    for (const Match& m : findMatches(g, pair)) {
      Bigraph h = applyMatch(m);
      CHECK(checkProtSol(h).empty());
      bool recovered = false;
      for (const Match& back : findMatches(h, unpair))
        if (supportEquiv(applyMatch(back), g)) recovered = true;
      CHECK(recovered);
      roundTrips++;
    }
  }
  CHECK(roundTrips > 20);
}

TEST_CASE("receptor binding inside a cell") {
  SigPtr vs = vesicleSig();
  Bigraph recL = parseTerm(
      vs,
      "/c:v /s:v /g:h (cargo_{c:v} | rec^ext_{s:v, x:b}) || rec^m_{x:b, y:b} || rec^cys_{y:b, g:h}");
  Bigraph recR = parseTerm(
      vs,
      "/t:b /g:v (cargo_{t:b} | rec^ext_{t:b, x:b}) || rec^m_{x:b, y:b} || rec^cys_{y:b, g:v}");
  Rule rec = makeMonotoneRule("rec", recL, recR);

  Bigraph cell = parseTerm(vs,
                           "/a:v /b:v /e:h /x:b /y:b (cargo_{a:v} | rec^ext_{b:v, x:b} | "
                           "m^ext[ rec^m_{x:b, y:b} | m^cys[ rec^cys_{y:b, e:h} ] ])");
  CHECK(checkBio(cell).empty());
  std::vector<Match> ms = findMatches(cell, rec);
  REQUIRE(ms.size() == 1);
  Bigraph next = applyMatch(ms[0]);
  CHECK(checkBio(next).empty());
  // the complexation consumed both visible sites, revealed the tail, added a bond
  CHECK(edgeCensus(cell) == std::array<int, 3>{1, 2, 2});
  CHECK(edgeCensus(next) == std::array<int, 3>{0, 1, 3});
  CHECK(findMatches(next, rec).empty());
  CHECK(nestingParities(cell) == nestingParities(next));
}

TEST_CASE("pinching a marked cell buds a vesicle") {
  SigPtr sig = traceSig();
  std::vector<Rule> cr = commitmentRules(sig);
  const Rule& pinch = cr[0];

  Bigraph state = parseTerm(
      sig,
      "/x:h /y:h (m^ext[ p^m_{x:h, y:h}[ R ] | m^cys[ p^d_{y:h} | T ] ] | p^c_{x:h}[ T ])");
  CHECK(checkBio(state).empty());

  std::vector<Match> ms = findMatches(state, pinch);
  REQUIRE(ms.size() == 1);
  Bigraph out = applyMatch(ms[0]);
  Bigraph expected = parseTerm(sig, "m^ext[ m^cys[ T | m^ext[ m^cys[ T ] | R ] ] ]");
  CHECK(supportEquiv(out, expected));
  CHECK(checkBio(out).empty());
  CHECK(nestingParities(state) == nestingParities(out));
}

TEST_CASE("fusing a marked vesicle releases its content") {
  SigPtr sig = traceSig();
  std::vector<Rule> cr = commitmentRules(sig);
  const Rule& fuse = cr[1];

  Bigraph state = parseTerm(sig,
                            "/x:h /y:h (m^ext[ f^m_{x:h, y:h} | R | m^cys[ f^c_{x:h}[ m^ext[ "
                            "m^cys[ T ] | R ] ] | T ] ] | f^d_{y:h} | T)");
  CHECK(checkBio(state).empty());

  std::vector<Match> ms = findMatches(state, fuse);
  REQUIRE(ms.size() == 1);
  Bigraph out = applyMatch(ms[0]);
  Bigraph expected = parseTerm(sig, "m^ext[ R | R | m^cys[ T ] ] | T | T");
  CHECK(supportEquiv(out, expected));
  CHECK(checkBio(out).empty());
  CHECK(nestingParities(state) == nestingParities(out));
}

TEST_CASE("pinch and fuse undo each other") {
  SigPtr sig = traceSig();
  std::vector<Rule> cr = commitmentRules(sig);

  Bigraph marked = parseTerm(
      sig,
      "/x:h /y:h (m^ext[ p^m_{x:h, y:h}[ R ] | m^cys[ p^d_{y:h} | T ] ] | p^c_{x:h}[ T ])");
  std::vector<Match> pm = findMatches(marked, cr[0]);
  REQUIRE(pm.size() == 1);
  Bigraph pinched = applyMatch(pm[0]);

  // the same motion marked for fusion, from the pinched state back out
  Bigraph remarked = parseTerm(sig,
                               "/x:h /y:h (m^ext[ f^m_{x:h, y:h} | m^cys[ T | f^c_{x:h}[ m^ext[ "
                               "m^cys[ T ] | R ] ] ] ] | f^d_{y:h})");
  std::vector<Match> fm = findMatches(remarked, cr[1]);
  REQUIRE(fm.size() == 1);
  Bigraph fused = applyMatch(fm[0]);

  Bigraph plain = parseTerm(sig, "m^ext[ R | m^cys[ T ] ] | T");
  CHECK(supportEquiv(fused, plain));
  // and the pinched intermediates agree up to the marker controls
  Bigraph vesicle = parseTerm(sig, "m^ext[ m^cys[ T | m^ext[ m^cys[ T ] | R ] ] ]");
  CHECK(supportEquiv(pinched, vesicle));
}

TEST_CASE("introduction rules") {
  SigPtr cs = cellSig();
  Bigraph lhs = parseTerm(cs, "/s:v /u:v /w:v B_{s:v} || C_{u:v} || B_{w:v}");
  Bigraph rhs = parseTerm(cs,
                          "/x:h /y:h /s:v /u:v /w:v p^c_{x:h}[ B_{s:v} ] || p^m_{x:h, y:h}[ "
                          "C_{u:v} ] || (p^d_{y:h} | B_{w:v})");
  Rule intro = makeIntroductionRule("mark", lhs, rhs);
  CHECK(intro.kind == RuleKind::Introduction);

  // an open link dangling from the frozen side is rejected...
  Bigraph lhsOpen = parseTerm(cs, "/u:v /w:v B_{q:b} || C_{u:v} || B_{w:v}");
  Bigraph rhsOpen = parseTerm(cs,
                              "/x:h /y:h /u:v /w:v p^c_{x:h}[ B_{q:b} ] || p^m_{x:h, y:h}[ "
                              "C_{u:v} ] || (p^d_{y:h} | B_{w:v})");
  CHECK(codeOf([&] { makeIntroductionRule("leak", lhsOpen, rhsOpen); }) == ErrorCode::BadRule);
  // ...but fine when anchored on the destination side
  Bigraph lhsDest = parseTerm(cs, "/s:v /u:v B_{s:v} || C_{u:v} || B_{q:b}");
  Bigraph rhsDest = parseTerm(cs,
                              "/x:h /y:h /s:v /u:v p^c_{x:h}[ B_{s:v} ] || p^m_{x:h, y:h}[ "
                              "C_{u:v} ] || (p^d_{y:h} | B_{q:b})");
  CHECK(makeIntroductionRule("deep", lhsDest, rhsDest).kind == RuleKind::Introduction);

  // a pattern already holding a marker is rejected
  Bigraph lhsMarked =
      parseTerm(cs, "/s:v /u:v /w:v /z:h (B_{s:v} | p^d_{z:h}) || C_{u:v} || B_{w:v}");
  Bigraph rhsMarked = parseTerm(cs,
                                "/x:h /y:h /s:v /u:v /w:v /z:h p^c_{x:h}[ B_{s:v} | p^d_{z:h} ] "
                                "|| p^m_{x:h, y:h}[ C_{u:v} ] || (p^d_{y:h} | B_{w:v})");
  CHECK(codeOf([&] { makeIntroductionRule("marked", lhsMarked, rhsMarked); }) ==
        ErrorCode::BadRule);

  // the right side must differ from the left by the triple alone
  Bigraph rhsTweaked = parseTerm(cs,
                                 "/x:h /y:h /s:h /u:v /w:v p^c_{x:h}[ B_{s:h} ] || p^m_{x:h, "
                                 "y:h}[ C_{u:v} ] || (p^d_{y:h} | B_{w:v})");
  CHECK(codeOf([&] { makeIntroductionRule("tweak", lhs, rhsTweaked); }) == ErrorCode::BadRule);

  // applying the rule wraps the complex in place
  Bigraph soup = parseTerm(cs, "/s:v /u:v /w:v (B_{s:v} | C_{u:v} | B_{w:v})");
  std::vector<Match> ms = findMatches(soup, intro);
  REQUIRE(ms.size() >= 1);
  Bigraph out = applyMatch(ms[0]);
  Bigraph expected = parseTerm(cs,
                               "/x:h /y:h /s:v /u:v /w:v (p^c_{x:h}[ B_{s:v} ] | p^m_{x:h, y:h}[ "
                               "C_{u:v} ] | p^d_{y:h} | B_{w:v})");
  CHECK(supportEquiv(out, expected));
}

TEST_CASE("systems, steps and traces") {
  SigPtr sig = ksig();
  ReactiveSystem rs;
  rs.sig = sig;
  rs.profile = Profile::ProteinLinks;
  rs.rules.push_back(
      fromKappa(parseKappaRule(sig, "pair", "B(1), C(1) -> (x) B(1^x), C(1^x)"), sig));
  rs.rules.push_back(
      fromKappa(reversed(parseKappaRule(sig, "unpair", "B(1), C(1) -> (x) B(1^x), C(1^x)")), sig));

  Bigraph agent = encodeClosed(sig, "B(1), C(1), B(1)");

  // two symmetric bindings collapse to one successor
  std::vector<Successor> succ = successors(rs, agent);
  REQUIRE(succ.size() == 1);
  CHECK(succ[0].rule == "pair");
  CHECK(checkProtSol(succ[0].state).empty());

  // quiescent agents produce nothing
  CHECK(successors(rs, encodeClosed(sig, "A(1~,2~)")).empty());
  Trace still = run(rs, encodeClosed(sig, "A(1~,2~)"), 10);
  CHECK(still.states.size() == 1);
  CHECK(still.steps.empty());

  // first-match alternates binding and unbinding until the budget runs out
  Trace t = run(rs, agent, 5);
  REQUIRE(t.steps.size() == 5);
  CHECK(t.states.size() == 6);
  for (size_t i = 0; i < t.steps.size(); ++i)
    CHECK(t.steps[i].rule == (i % 2 == 0 ? "pair" : "unpair"));
  CHECK(supportEquiv(t.states[0], t.states[2]));

  // seeded runs are reproducible
  CHECK(toTsv(run(rs, agent, 5, "random:77")) == toTsv(run(rs, agent, 5, "random:77")));
  CHECK(codeOf([&] { run(rs, agent, 5, "random:"); }) == ErrorCode::ParseError);
  CHECK(codeOf([&] { run(rs, agent, 5, "sideways"); }) == ErrorCode::ParseError);

  // breadth-first stops once every unseen state is exhausted
  Trace bfs = run(rs, agent, 10, "bfs:4");
  CHECK(bfs.steps.size() == 1);
  CHECK(bfs.steps[0].rule == "pair");

  std::string tsv = toTsv(t);
  CHECK(tsv.substr(0, 18) == "step\trule\twitness\n");
  CHECK(tsv.find("1\tpair\t") != std::string::npos);

  // a rule smuggled past validation is caught when it breaks the discipline
  KSolution badRhs = parseKappa(sig, "B(1^w), C(1^w), B(1^w)");
  KSolution okLhs = parseKappa(sig, "B(1), C(1), B(1)");
  Rule bad{"threeway", RuleKind::Monotone, encode(okLhs, {"w"}, sig), encode(badRhs, {"w"}, sig)};
  ReactiveSystem broken{sig, {bad}, Profile::ProteinLinks};
  Bigraph target = encode(okLhs, {"w"}, sig);
  std::vector<Match> bm = findMatches(target, bad);
  REQUIRE(!bm.empty());
  CHECK(codeOf([&] { step(broken, bm[0]); }) == ErrorCode::SortingBroken);
}

TEST_CASE("one-step reactions agree with the solution calculus") {
  SigPtr sig = ksig();
  std::vector<KappaRule> krs;
  krs.push_back(parseKappaRule(sig, "pair", "B(1), C(1) -> (x) B(1^x), C(1^x)"));
  krs.push_back(reversed(parseKappaRule(sig, "unpair", "B(1), C(1) -> (x) B(1^x), C(1^x)")));
  krs.push_back(parseKappaRule(sig, "reveal", "A(1,2~) -> A(1,2)"));

  std::vector<std::string> fixtures = {
      "B(1), C(1)",
      "B(1), C(1), B(1)",
      "(z)(B(1^z), C(1^z)), B(1^y)",
      "B(1~), C(1)",
      "A(1,2~), B(1), C(1)",
      "(z)(B(1^z), C(1^z)), (w)(B(1^w), C(1^w))",
      "A(1,2~), A(1~,2~)",
  };

  for (const std::string& fx : fixtures) {
    KSolution s = parseKappa(sig, fx);
    std::vector<std::string> ctx = sortedNames(freeNames(s));
    Bigraph agent = encode(s, ctx, sig);
    for (const KappaRule& kr : krs) {
      std::vector<KSolution> kappaNext = kappaStep(s, kr);
      Rule gr = fromKappa(kr, sig);
      std::vector<KSolution> graphNext;
      for (const Match& m : findMatches(agent, gr)) {
        Bigraph h = applyMatch(m);
        CHECK(checkProtSol(h).empty());
        graphNext.push_back(decode(h).solution);
      }
      // same reachable set, up to structural equivalence
      auto covered = [](const std::vector<KSolution>& xs, const std::vector<KSolution>& ys) {
        for (const KSolution& x : xs) {
          bool hit = false;
          for (const KSolution& y : ys)
            if (structEquiv(x, y)) hit = true;
          if (!hit) return false;
        }
        return true;
      };
      CHECK(covered(kappaNext, graphNext));
      CHECK(covered(graphNext, kappaNext));
    }
  }
}
