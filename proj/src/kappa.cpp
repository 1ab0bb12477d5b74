#include "biobig/kappa.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>

#include "biobig/ops.hpp"
#include "biobig/sorting.hpp"

namespace biobig {

// ------------------------------------------------------------ structure

KSolution KSolution::mk(KAtom a) {
  KSolution s;
  s.kind = Kind::Atom;
  s.atom = std::move(a);
  return s;
}

KSolution KSolution::group(std::vector<KSolution> parts) {
  KSolution s;
  s.kind = Kind::Group;
  s.parts = std::move(parts);
  return s;
}

KSolution KSolution::restrict(std::vector<std::string> binders, KSolution body) {
  KSolution s;
  s.kind = Kind::Restrict;
  s.binders = std::move(binders);
  s.parts.push_back(std::move(body));
  return s;
}

namespace {

void collectNames(const KAtom& a, std::set<std::string>& out) {
  for (const KSite& s : a.sites)
    if (s.state == KSite::State::Bound) out.insert(s.bond);
}

std::set<std::string> atomNames(const std::vector<KAtom>& atoms) {
  std::set<std::string> out;
  for (const KAtom& a : atoms) collectNames(a, out);
  return out;
}

}  // namespace

KNormal normalize(const KSolution& s) {
  KNormal n;
  int counter = 0;
  // scoped renaming of bound names to canonical fresh ones
  std::function<void(const KSolution&, std::map<std::string, std::string>)> walk =
      [&](const KSolution& sol, std::map<std::string, std::string> ren) {
        switch (sol.kind) {
          case KSolution::Kind::Zero:
            return;
          case KSolution::Kind::Atom: {
            KAtom a = sol.atom;
            for (KSite& st : a.sites)
              if (st.state == KSite::State::Bound) {
                auto it = ren.find(st.bond);
                if (it != ren.end()) st.bond = it->second;
              }
            n.atoms.push_back(std::move(a));
            return;
          }
          case KSolution::Kind::Group:
            for (const KSolution& p : sol.parts) walk(p, ren);
            return;
          case KSolution::Kind::Restrict: {
            for (const std::string& b : sol.binders) {
              std::string fresh = "_b" + std::to_string(counter++);
              ren[b] = fresh;
              n.binders.push_back(fresh);
            }
            walk(sol.parts[0], ren);
            return;
          }
        }
      };
  walk(s, {});
  // drop binders that bind nothing
  std::set<std::string> used = atomNames(n.atoms);
  std::erase_if(n.binders, [&](const std::string& b) { return !used.count(b); });
  // order binders by first occurrence for a stable presentation
  std::map<std::string, int> firstUse;
  int idx = 0;
  for (const KAtom& a : n.atoms)
    for (const KSite& st : a.sites) {
      if (st.state == KSite::State::Bound && !firstUse.count(st.bond)) firstUse[st.bond] = idx;
      ++idx;
    }
  std::sort(n.binders.begin(), n.binders.end(),
            [&](const std::string& a, const std::string& b) { return firstUse[a] < firstUse[b]; });
  return n;
}

std::set<std::string> freeNames(const KNormal& n) {
  std::set<std::string> out = atomNames(n.atoms);
  for (const std::string& b : n.binders) out.erase(b);
  return out;
}

std::set<std::string> freeNames(const KSolution& s) { return freeNames(normalize(s)); }

bool hasRestriction(const KSolution& s) {
  if (s.kind == KSolution::Kind::Restrict) return true;
  for (const KSolution& p : s.parts)
    if (hasRestriction(p)) return true;
  return false;
}

// ------------------------------------------------------------ equivalence

namespace {

struct EquivState {
  const KNormal& a;
  const KNormal& b;
  std::set<std::string> bindA, bindB;
  std::map<std::string, std::string> sigma;  // a-binder -> b-binder
  std::map<std::string, std::string> sigmaInv;
  std::vector<bool> usedB;

  bool namesMatch(const std::string& x, const std::string& y) {
    bool xb = bindA.count(x), yb = bindB.count(y);
    if (xb != yb) return false;
    if (!xb) return x == y;
    auto it = sigma.find(x);
    if (it != sigma.end()) return it->second == y;
    if (sigmaInv.count(y)) return false;
    sigma[x] = y;
    sigmaInv[y] = x;
    return true;
  }

  bool atomsMatch(const KAtom& x, const KAtom& y, std::map<std::string, std::string>& savedS,
                  std::map<std::string, std::string>& savedI) {
    savedS = sigma;
    savedI = sigmaInv;
    if (x.name != y.name || x.sites.size() != y.sites.size()) return false;
    for (size_t i = 0; i < x.sites.size(); ++i) {
      const KSite& sx = x.sites[i];
      const KSite& sy = y.sites[i];
      if (sx.state != sy.state) return false;
      if (sx.state == KSite::State::Bound && !namesMatch(sx.bond, sy.bond)) return false;
    }
    return true;
  }

  bool search(size_t i) {
    if (i == a.atoms.size()) return true;
    for (size_t j = 0; j < b.atoms.size(); ++j) {
      if (usedB[j]) continue;
      std::map<std::string, std::string> savedS, savedI;
      if (atomsMatch(a.atoms[i], b.atoms[j], savedS, savedI)) {
        usedB[j] = true;
        if (search(i + 1)) return true;
        usedB[j] = false;
      }
      sigma = savedS;
      sigmaInv = savedI;
    }
    return false;
  }
};

}  // namespace

bool structEquiv(const KSolution& sa, const KSolution& sb) {
  KNormal na = normalize(sa), nb = normalize(sb);
  if (na.atoms.size() != nb.atoms.size() || na.binders.size() != nb.binders.size()) return false;
  if (freeNames(na) != freeNames(nb)) return false;
  EquivState st{na, nb};
  st.bindA = {na.binders.begin(), na.binders.end()};
  st.bindB = {nb.binders.begin(), nb.binders.end()};
  st.usedB.assign(nb.atoms.size(), false);
  return st.search(0);
}

bool isGraphLike(const KSolution& s) {
  KNormal n = normalize(s);
  std::map<std::string, int> occ;
  for (const KAtom& a : n.atoms)
    for (const KSite& st : a.sites)
      if (st.state == KSite::State::Bound) ++occ[st.bond];
  for (const auto& [name, count] : occ)
    if (count > 2) return false;
  for (const std::string& b : n.binders)
    if (occ[b] != 2) return false;
  return true;
}

bool isConnected(const KSolution& s) {
  KNormal n = normalize(s);
  if (n.atoms.empty()) return false;
  std::vector<int> parent(n.atoms.size());
  for (size_t i = 0; i < parent.size(); ++i) parent[i] = (int)i;
  std::function<int(int)> find = [&](int x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  std::map<std::string, int> owner;
  for (size_t i = 0; i < n.atoms.size(); ++i)
    for (const KSite& st : n.atoms[i].sites) {
      if (st.state != KSite::State::Bound) continue;
      auto [it, fresh] = owner.emplace(st.bond, (int)i);
      if (!fresh) parent[find((int)i)] = find(it->second);
    }
  int root = find(0);
  for (size_t i = 1; i < n.atoms.size(); ++i)
    if (find((int)i) != root) return false;
  return true;
}

// ------------------------------------------------------------ growth

namespace {

bool siteGrows(const KSite& from, const KSite& to, const std::set<std::string>& fresh) {
  using St = KSite::State;
  switch (from.state) {
    case St::Hidden:
      return to.state == St::Hidden || to.state == St::Visible;
    case St::Visible:
      return to.state == St::Visible || to.state == St::Hidden ||
             (to.state == St::Bound && fresh.count(to.bond));
    case St::Bound:
      return to.state == St::Bound && to.bond == from.bond;
  }
  return false;
}

bool growInjection(const std::vector<KAtom>& from, const std::vector<KAtom>& to,
                   const std::set<std::string>& fresh, size_t i, std::vector<bool>& used) {
  if (i == from.size()) {
    // atoms of `to` not hit by the injection are newly introduced: they may
    // only mention fresh names
    for (size_t j = 0; j < to.size(); ++j) {
      if (used[j]) continue;
      for (const KSite& s : to[j].sites)
        if (s.state == KSite::State::Bound && !fresh.count(s.bond)) return false;
    }
    return true;
  }
  for (size_t j = 0; j < to.size(); ++j) {
    if (used[j]) continue;
    const KAtom& x = from[i];
    const KAtom& y = to[j];
    if (x.name != y.name || x.sites.size() != y.sites.size()) continue;
    bool ok = true;
    for (size_t k = 0; ok && k < x.sites.size(); ++k) ok = siteGrows(x.sites[k], y.sites[k], fresh);
    if (!ok) continue;
    used[j] = true;
    if (growInjection(from, to, fresh, i + 1, used)) return true;
    used[j] = false;
  }
  return false;
}

}  // namespace

bool growsSolution(const std::vector<std::string>& fresh, const KSolution& s, const KSolution& t) {
  if (hasRestriction(s) || hasRestriction(t))
    fail(ErrorCode::BadRule, "growth is defined on restriction-free solutions");
  KNormal ns = normalize(s), nt = normalize(t);
  std::set<std::string> freshSet(fresh.begin(), fresh.end());
  std::set<std::string> namesS = atomNames(ns.atoms);
  for (const std::string& f : freshSet)
    if (namesS.count(f)) return false;  // fresh names must be new
  for (const std::string& n : atomNames(nt.atoms))
    if (!namesS.count(n) && !freshSet.count(n)) return false;
  if (ns.atoms.size() > nt.atoms.size()) return false;
  std::vector<bool> used(nt.atoms.size(), false);
  return growInjection(ns.atoms, nt.atoms, freshSet, 0, used);
}

KappaRule reversed(const KappaRule& r) {
  KappaRule out = r;
  std::swap(out.lhs, out.rhs);
  out.antimonotone = !r.antimonotone;
  return out;
}

bool isWellFormedRule(const KappaRule& r) {
  if (r.antimonotone) return isWellFormedRule(reversed(r));
  std::set<std::string> fl = freeNames(r.lhs);
  for (const std::string& f : r.fresh)
    if (fl.count(f)) return false;
  if (!growsSolution(r.fresh, r.lhs, r.rhs)) return false;
  if (!isGraphLike(r.lhs)) return false;
  if (!isGraphLike(KSolution::restrict(r.fresh, r.rhs))) return false;
  return isConnected(r.rhs);
}

// ------------------------------------------------------------ stepping

namespace {

struct StepSearch {
  const KNormal& agent;
  const std::vector<KAtom>& redex;
  std::map<std::string, std::string> psi;  // rule name -> agent name
  std::vector<bool> used;
  std::vector<int> match;  // redex atom -> agent atom
  std::vector<std::vector<int>>& out;

  // rule names are pattern variables over the agent's bonds: each maps to
  // one agent name (open or bound), chosen consistently across its uses
  bool mapName(const std::string& a, const std::string& n) {
    auto [it, fresh] = psi.emplace(a, n);
    return fresh || it->second == n;
  }

  void search(size_t i) {
    if (i == redex.size()) {
      out.push_back(match);
      return;
    }
    for (size_t j = 0; j < agent.atoms.size(); ++j) {
      if (used[j]) continue;
      const KAtom& x = redex[i];
      const KAtom& y = agent.atoms[j];
      if (x.name != y.name || x.sites.size() != y.sites.size()) continue;
      auto savedPsi = psi;
      bool ok = true;
      for (size_t k = 0; ok && k < x.sites.size(); ++k) {
        const KSite& sx = x.sites[k];
        const KSite& sy = y.sites[k];
        if (sx.state != sy.state) {
          ok = false;
        } else if (sx.state == KSite::State::Bound) {
          ok = mapName(sx.bond, sy.bond);
        }
      }
      if (ok) {
        used[j] = true;
        match[i] = (int)j;
        search(i + 1);
        used[j] = false;
      }
      psi = std::move(savedPsi);
    }
  }
};

}  // namespace

std::vector<KSolution> kappaStep(const KSolution& s, const KappaRule& rule) {
  KNormal agent = normalize(s);
  if (hasRestriction(rule.lhs) || hasRestriction(rule.rhs))
    fail(ErrorCode::BadRule, "rule sides must be restriction-free");
  KNormal red = normalize(rule.lhs);
  KNormal rhs = normalize(rule.rhs);

  std::vector<std::vector<int>> matches;
  StepSearch ss{agent, red.atoms, {}, {}, {}, matches};
  ss.used.assign(agent.atoms.size(), false);
  ss.match.assign(red.atoms.size(), -1);
  ss.search(0);

  std::set<std::string> agentAll = atomNames(agent.atoms);
  for (const std::string& b : agent.binders) agentAll.insert(b);

  std::vector<KSolution> results;
  for (const std::vector<int>& m : matches) {
    // rebuild psi for this match
    std::map<std::string, std::string> psi;
    for (size_t i = 0; i < red.atoms.size(); ++i)
      for (size_t k = 0; k < red.atoms[i].sites.size(); ++k)
        if (red.atoms[i].sites[k].state == KSite::State::Bound)
          psi[red.atoms[i].sites[k].bond] = agent.atoms[m[i]].sites[k].bond;

    std::set<std::string> taken = agentAll;
    for (const auto& [a, n] : psi) taken.insert(n);
    std::map<std::string, std::string> freshMap;
    int counter = 0;
    std::vector<std::string> binders = agent.binders;
    for (const std::string& f : rule.fresh) {
      std::string nm;
      do {
        nm = "_f" + std::to_string(counter++);
      } while (taken.count(nm));
      taken.insert(nm);
      freshMap[f] = nm;
      binders.push_back(nm);
    }

    std::vector<KAtom> atoms;
    std::set<int> dropped(m.begin(), m.end());
    for (size_t j = 0; j < agent.atoms.size(); ++j)
      if (!dropped.count((int)j)) atoms.push_back(agent.atoms[j]);
    for (KAtom a : rhs.atoms) {
      for (KSite& st : a.sites) {
        if (st.state != KSite::State::Bound) continue;
        if (auto it = freshMap.find(st.bond); it != freshMap.end())
          st.bond = it->second;
        else if (auto it2 = psi.find(st.bond); it2 != psi.end())
          st.bond = it2->second;
      }
      atoms.push_back(std::move(a));
    }

    std::vector<KSolution> parts;
    for (KAtom& a : atoms) parts.push_back(KSolution::mk(std::move(a)));
    KSolution body = parts.empty() ? KSolution::zero() : KSolution::group(std::move(parts));
    KSolution result = binders.empty() ? std::move(body)
                                       : KSolution::restrict(std::move(binders), std::move(body));
    bool dup = false;
    for (const KSolution& r : results)
      if (structEquiv(r, result)) {
        dup = true;
        break;
      }
    if (!dup) results.push_back(std::move(result));
  }
  return results;
}

// ------------------------------------------------------------ syntax

namespace {

struct KLexer {
  const std::string& src;
  size_t pos = 0;

  explicit KLexer(const std::string& s) : src(s) { skip(); }

  void skip() {
    while (pos < src.size()) {
      if (std::isspace((unsigned char)src[pos])) {
        ++pos;
      } else if (src[pos] == '#') {
        while (pos < src.size() && src[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
  }

  [[noreturn]] void die(const std::string& msg) {
    fail(ErrorCode::ParseError, msg + " at offset " + std::to_string(pos));
  }

  bool atEnd() { return pos >= src.size(); }
  char peek() { return pos < src.size() ? src[pos] : '\0'; }

  bool eat(char c) {
    if (peek() == c) {
      ++pos;
      skip();
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) die(std::string("expected '") + c + "'");
  }

  bool eatArrow() {
    if (pos + 1 < src.size() && src[pos] == '-' && src[pos + 1] == '>') {
      pos += 2;
      skip();
      return true;
    }
    return false;
  }

  std::string name() {
    if (!std::isalpha((unsigned char)peek())) die("expected a name");
    size_t s = pos;
    while (pos < src.size() &&
           (std::isalnum((unsigned char)src[pos]) || src[pos] == '\'' || src[pos] == '^'))
      ++pos;
    // '^' inside an atom head would swallow the bond marker; names here are
    // plain identifiers, so stop before '^'
    std::string n = src.substr(s, pos - s);
    size_t caret = n.find('^');
    if (caret != std::string::npos) {
      pos = s + caret;
      n = n.substr(0, caret);
    }
    skip();
    return n;
  }

  int integer() {
    if (!std::isdigit((unsigned char)peek())) die("expected a number");
    size_t s = pos;
    while (pos < src.size() && std::isdigit((unsigned char)src[pos])) ++pos;
    int v = std::stoi(src.substr(s, pos - s));
    skip();
    return v;
  }
};

struct KParser {
  SigPtr sig;
  KLexer lx;

  KParser(SigPtr s, const std::string& src) : sig(std::move(s)), lx(src) {}

  KAtom parseAtom(const std::string& head) {
    const Control* c = sig->find(head);
    if (!c) fail(ErrorCode::ParseError, "unknown protein '" + head + "'");
    KAtom a;
    a.name = head;
    if (lx.eat('(')) {
      if (!lx.eat(')')) {
        int expect = 1;
        for (;;) {
          int idx = lx.integer();
          if (idx != expect)
            fail(ErrorCode::ParseError,
                 "sites of '" + head + "' must be listed in order 1..n, got " +
                     std::to_string(idx));
          ++expect;
          KSite st;
          if (lx.eat('~')) {
            st.state = KSite::State::Hidden;
          } else if (lx.eat('^')) {
            st.state = KSite::State::Bound;
            st.bond = lx.name();
          } else {
            st.state = KSite::State::Visible;
          }
          a.sites.push_back(std::move(st));
          if (lx.eat(',')) continue;
          lx.expect(')');
          break;
        }
      }
    }
    if ((int)a.sites.size() != c->arity)
      fail(ErrorCode::ParseError, "protein '" + head + "' has arity " +
                                      std::to_string(c->arity) + ", got " +
                                      std::to_string(a.sites.size()) + " sites");
    return a;
  }

  // at '(' — binder list iff NAME(,NAME)* ')' then another '('
  bool looksLikeBinders() {
    size_t saved = lx.pos;
    bool yes = false;
    if (lx.eat('(') && std::isalpha((unsigned char)lx.peek())) {
      lx.name();
      while (lx.eat(',')) {
        if (!std::isalpha((unsigned char)lx.peek())) break;
        lx.name();
      }
      yes = lx.eat(')') && lx.peek() == '(';
    }
    lx.pos = saved;
    return yes;
  }

  KSolution parsePart() {
    if (lx.peek() == '0') {
      lx.expect('0');
      lx.skip();
      return KSolution::zero();
    }
    if (lx.peek() == '(') {
      if (looksLikeBinders()) {
        lx.expect('(');
        std::vector<std::string> binders;
        binders.push_back(lx.name());
        while (lx.eat(',')) binders.push_back(lx.name());
        lx.expect(')');
        lx.expect('(');
        KSolution body = parseSolution();
        lx.expect(')');
        return KSolution::restrict(std::move(binders), std::move(body));
      }
      lx.expect('(');
      KSolution inner = parseSolution();
      lx.expect(')');
      return inner;
    }
    return KSolution::mk(parseAtom(lx.name()));
  }

  KSolution parseSolution() {
    std::vector<KSolution> parts;
    parts.push_back(parsePart());
    while (lx.eat(',')) parts.push_back(parsePart());
    if (parts.size() == 1) return std::move(parts[0]);
    return KSolution::group(std::move(parts));
  }
};

}  // namespace

KSolution parseKappa(SigPtr sig, const std::string& src) {
  KParser p(std::move(sig), src);
  KSolution s = p.parseSolution();
  if (!p.lx.atEnd()) p.lx.die("trailing input");
  return s;
}

KappaRule parseKappaRule(SigPtr sig, const std::string& name, const std::string& src,
                         bool antimonotone) {
  KParser p(sig, src);
  KappaRule r;
  r.name = name;
  r.antimonotone = antimonotone;
  r.lhs = p.parseSolution();
  if (!p.lx.eatArrow()) p.lx.die("expected '->'");
  if (p.lx.peek() == '(' && !p.looksLikeBinders()) {
    // distinguish a fresh-name list "(x, y) S" from a leading group: after
    // the list the solution continues without a further '('
    size_t saved = p.lx.pos;
    p.lx.expect('(');
    std::vector<std::string> names;
    bool isList = std::isalpha((unsigned char)p.lx.peek());
    if (isList) {
      names.push_back(p.lx.name());
      while (p.lx.eat(',')) {
        if (!std::isalpha((unsigned char)p.lx.peek())) {
          isList = false;
          break;
        }
        names.push_back(p.lx.name());
      }
      // a real atom head would now show '(' for its sites
      if (isList && (!p.lx.eat(')') || p.lx.peek() == '(')) isList = false;
    }
    if (isList && !p.lx.atEnd()) {
      r.fresh = std::move(names);
    } else {
      p.lx.pos = saved;
    }
  }
  r.rhs = p.parseSolution();
  if (!p.lx.atEnd()) p.lx.die("trailing input");
  if (hasRestriction(r.lhs) || hasRestriction(r.rhs))
    fail(ErrorCode::BadRule, "rule '" + name + "': sides must be restriction-free");
  return r;
}

namespace {

std::string printAtom(const KAtom& a) {
  std::string out = a.name;
  if (a.sites.empty()) return out;
  out += "(";
  for (size_t i = 0; i < a.sites.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(i + 1);
    if (a.sites[i].state == KSite::State::Hidden) out += "~";
    if (a.sites[i].state == KSite::State::Bound) out += "^" + a.sites[i].bond;
  }
  out += ")";
  return out;
}

std::string printPart(const KSolution& s, bool top);

std::string printGroup(const std::vector<KSolution>& parts, bool top) {
  std::string out;
  if (!top) out += "(";
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ", ";
    out += printPart(parts[i], false);
  }
  if (!top) out += ")";
  return out;
}

std::string printPart(const KSolution& s, bool top) {
  switch (s.kind) {
    case KSolution::Kind::Zero:
      return "0";
    case KSolution::Kind::Atom:
      return printAtom(s.atom);
    case KSolution::Kind::Group:
      return printGroup(s.parts, top);
    case KSolution::Kind::Restrict: {
      std::string out = "(";
      for (size_t i = 0; i < s.binders.size(); ++i) {
        if (i) out += ",";
        out += s.binders[i];
      }
      out += ")(";
      out += printPart(s.parts[0], true);
      out += ")";
      return out;
    }
  }
  return "0";
}

}  // namespace

std::string printKappa(const KSolution& s) { return printPart(s, true); }

// ------------------------------------------------------------ encoding

namespace {

std::vector<TypedName> bondNames(const std::vector<std::string>& names) {
  std::vector<TypedName> out;
  for (const std::string& n : names) out.push_back({n, NameType::Bond});
  return out;
}

Bigraph encodeAtom(const KAtom& a, const std::vector<TypedName>& context, SigPtr sig) {
  std::vector<TypedName> portNames;
  for (size_t i = 0; i < a.sites.size(); ++i)
    portNames.push_back({"\x01p" + std::to_string(i), NameType::Free});
  Bigraph node = ion(sig, a.name, portNames);
  std::vector<Bigraph> wirings;
  for (size_t i = 0; i < a.sites.size(); ++i) {
    const KSite& st = a.sites[i];
    switch (st.state) {
      case KSite::State::Hidden:
        wirings.push_back(closure(sig, portNames[i], NameType::Hidden));
        break;
      case KSite::State::Visible:
        wirings.push_back(closure(sig, portNames[i], NameType::Visible));
        break;
      case KSite::State::Bound:
        wirings.push_back(substitution(sig, {st.bond, NameType::Bond}, {portNames[i]}));
        break;
    }
  }
  Bigraph wired = compose(tensor(idPlaces(sig, 1), parallelAll(sig, wirings)), node);
  return parallel(wired, nameIntro(sig, context));
}

Bigraph encodeIn(const KSolution& s, const std::vector<TypedName>& context, SigPtr sig,
                 int& freshCounter) {
  switch (s.kind) {
    case KSolution::Kind::Zero:
      return parallel(nameIntro(sig, context), unitRoot(sig));
    case KSolution::Kind::Atom:
      return encodeAtom(s.atom, context, sig);
    case KSolution::Kind::Group: {
      std::vector<Bigraph> parts;
      for (const KSolution& p : s.parts) parts.push_back(encodeIn(p, context, sig, freshCounter));
      return parallel(primeAll(sig, parts), nameIntro(sig, context));
    }
    case KSolution::Kind::Restrict: {
      // rename the binders apart from everything, then close them
      std::set<std::string> avoid;
      for (const TypedName& tn : context) avoid.insert(tn.name);
      for (const std::string& n : freeNames(s.parts[0])) avoid.insert(n);
      std::map<std::string, std::string> ren;
      std::vector<TypedName> extended = context;
      std::vector<std::string> renamed;
      for (const std::string& b : s.binders) {
        std::string nm;
        do {
          nm = "\x01r" + std::to_string(freshCounter++);
        } while (avoid.count(nm));
        ren[b] = nm;
        renamed.push_back(nm);
        extended.push_back({nm, NameType::Bond});
      }
      std::function<KSolution(const KSolution&, std::map<std::string, std::string>)> subst =
          [&](const KSolution& sol, std::map<std::string, std::string> m) -> KSolution {
        KSolution out = sol;
        switch (sol.kind) {
          case KSolution::Kind::Atom:
            for (KSite& st : out.atom.sites)
              if (st.state == KSite::State::Bound) {
                auto it = m.find(st.bond);
                if (it != m.end()) st.bond = it->second;
              }
            return out;
          case KSolution::Kind::Group:
          case KSolution::Kind::Restrict: {
            if (sol.kind == KSolution::Kind::Restrict)
              for (const std::string& b : sol.binders) m.erase(b);
            out.parts.clear();
            for (const KSolution& p : sol.parts) out.parts.push_back(subst(p, m));
            return out;
          }
          default:
            return out;
        }
      };
      Bigraph body = encodeIn(subst(s.parts[0], ren), extended, sig, freshCounter);
      for (const std::string& nm : renamed) body = closeName(body, nm, NameType::Bond);
      return body;
    }
  }
  fail(ErrorCode::BadGraph, "unreachable");
}

}  // namespace

Bigraph encode(const KSolution& s, const std::vector<std::string>& context, SigPtr sig) {
  std::set<std::string> fn = freeNames(s);
  std::set<std::string> ctx(context.begin(), context.end());
  for (const std::string& n : fn)
    if (!ctx.count(n))
      fail(ErrorCode::NameClash, "free name '" + n + "' is not in the encoding context");
  int freshCounter = 0;
  Bigraph g = encodeIn(s, bondNames(context), sig, freshCounter);
  g.validate();
  return g;
}

DecodeResult decode(const Bigraph& g) {
  if (!g.isGround() || g.outer.width != 1)
    fail(ErrorCode::BadGraph, "decode expects a ground single-region graph");
  for (const TypedName& tn : g.outer.names)
    if (tn.type != NameType::Bond)
      fail(ErrorCode::BadGraph, "decode expects bond-typed outer names");
  for (const Node& n : g.nodes) {
    const Control& c = g.controlOf(n);
    if (!isPlain(c) || c.activity != Activity::Atomic || !n.parent.isRoot())
      fail(ErrorCode::BadGraph, "decode expects a flat soup of atomic proteins");
  }
  if (!checkProtSol(g).empty())
    fail(ErrorCode::BadGraph, "decode expects the protein link discipline");

  std::set<std::string> taken;
  for (const TypedName& tn : g.outer.names) taken.insert(tn.name);
  std::map<EdgeId, std::string> binderOf;
  std::vector<std::string> binders;
  int counter = 0;
  for (const auto& [e, t] : g.edges) {
    if (t != NameType::Bond) continue;
    std::string nm;
    do {
      nm = "b" + std::to_string(counter++);
    } while (taken.count(nm));
    taken.insert(nm);
    binderOf[e] = nm;
    binders.push_back(nm);
  }

  std::vector<KSolution> parts;
  for (const Node& n : g.nodes) {
    KAtom a;
    a.name = n.control;
    for (const Link& l : n.ports) {
      KSite st;
      if (!l.isEdge()) {
        st.state = KSite::State::Bound;
        st.bond = l.outer;
      } else {
        switch (g.edges.at(l.edge)) {
          case NameType::Hidden:
            st.state = KSite::State::Hidden;
            break;
          case NameType::Visible:
            st.state = KSite::State::Visible;
            break;
          default:
            st.state = KSite::State::Bound;
            st.bond = binderOf.at(l.edge);
        }
      }
      a.sites.push_back(std::move(st));
    }
    parts.push_back(KSolution::mk(std::move(a)));
  }

  KSolution body = parts.empty()    ? KSolution::zero()
                   : parts.size() == 1 ? std::move(parts[0])
                                       : KSolution::group(std::move(parts));
  DecodeResult out;
  out.solution =
      binders.empty() ? std::move(body) : KSolution::restrict(std::move(binders), std::move(body));
  for (const TypedName& tn : g.outer.names) out.context.push_back(tn.name);
  return out;
}

std::pair<Bigraph, Bigraph> encodeRule(const KappaRule& r, SigPtr sig) {
  std::set<std::string> names = freeNames(r.lhs);
  for (const std::string& n : freeNames(r.rhs)) names.insert(n);
  for (const std::string& f : r.fresh) names.erase(f);
  std::vector<std::string> context(names.begin(), names.end());
  if (r.antimonotone) {
    // dissolved bonds stay visible at the interface on both sides
    std::vector<std::string> full = context;
    for (const std::string& f : r.fresh) full.push_back(f);
    std::sort(full.begin(), full.end());
    return {encode(r.lhs, full, sig), encode(r.rhs, full, sig)};
  }
  return {encode(r.lhs, context, sig),
          encode(KSolution::restrict(r.fresh, r.rhs), context, sig)};
}

}  // namespace biobig
