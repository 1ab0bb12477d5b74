#include "biobig/term.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <variant>

namespace biobig {

namespace {

// ---------------------------------------------------------------- lexer

enum class Tok {
  Name, Int, Slash, Colon, Comma, Under, LBrace, RBrace, LBrack, RBrack,
  LParen, RParen, Tilde, Bar, BarBar, Semi, End,
};

struct Lexer {
  const std::string& src;
  size_t pos = 0;
  Tok tok = Tok::End;
  std::string text;

  explicit Lexer(const std::string& s) : src(s) { next(); }

  [[noreturn]] void die(const std::string& msg) {
    fail(ErrorCode::ParseError, msg + " at offset " + std::to_string(pos));
  }

  void next() {
    while (pos < src.size()) {
      char c = src[pos];
      if (std::isspace((unsigned char)c)) { ++pos; continue; }
      if (c == '#') {
        while (pos < src.size() && src[pos] != '\n') ++pos;
        continue;
      }
      break;
    }
    text.clear();
    if (pos >= src.size()) { tok = Tok::End; return; }
    char c = src[pos];
    if (std::isalpha((unsigned char)c)) {
      size_t s = pos;
      while (pos < src.size() &&
             (std::isalnum((unsigned char)src[pos]) || src[pos] == '^' || src[pos] == '\''))
        ++pos;
      text = src.substr(s, pos - s);
      tok = Tok::Name;
      return;
    }
    if (std::isdigit((unsigned char)c)) {
      size_t s = pos;
      while (pos < src.size() && std::isdigit((unsigned char)src[pos])) ++pos;
      text = src.substr(s, pos - s);
      tok = Tok::Int;
      return;
    }
    ++pos;
    switch (c) {
      case '/': tok = Tok::Slash; return;
      case ':': tok = Tok::Colon; return;
      case ',': tok = Tok::Comma; return;
      case '_': tok = Tok::Under; return;
      case '{': tok = Tok::LBrace; return;
      case '}': tok = Tok::RBrace; return;
      case '[': tok = Tok::LBrack; return;
      case ']': tok = Tok::RBrack; return;
      case '(': tok = Tok::LParen; return;
      case ')': tok = Tok::RParen; return;
      case '~': tok = Tok::Tilde; return;
      case ';': tok = Tok::Semi; return;
      case '|':
        if (pos < src.size() && src[pos] == '|') { ++pos; tok = Tok::BarBar; } else tok = Tok::Bar;
        return;
    }
    die(std::string("unexpected character '") + c + "'");
  }

  void expect(Tok t, const char* what) {
    if (tok != t) die(std::string("expected ") + what);
    next();
  }
};

// ------------------------------------------------------------ parse tree

struct PNode;
struct PSite {
  int declared = -1;
};
using Part = std::variant<PNode, PSite>;
struct PNode {
  std::string control;
  std::vector<std::string> ports;
  std::vector<Part> children;
};
struct Region {
  std::vector<Part> parts;
};

struct Parser {
  SigPtr sig;
  Lexer lx;
  std::map<std::string, NameType> nameTypes;
  std::vector<TypedName> closures;  // order fixes edge ids
  std::vector<std::pair<std::string, std::string>> aliases;  // outer
  std::set<std::string> idles;
  int scopeCounter = 0;

  Parser(SigPtr s, const std::string& src) : sig(std::move(s)), lx(src) {}

  void registerName(const std::string& n, NameType t, bool annotated) {
    auto it = nameTypes.find(n);
    if (it == nameTypes.end()) {
      if (annotated) nameTypes[n] = t;
      return;
    }
    if (annotated && it->second != t)
      fail(ErrorCode::TypeClash, "name '" + n + "' annotated at two types");
  }

  NameType parseType() {
    if (lx.tok != Tok::Name || lx.text.size() != 1) lx.die("expected a type letter");
    NameType t = nameTypeOf(lx.text[0]);
    lx.next();
    return t;
  }

  std::string parseNameRef() {  // NAME [':' TYPE], registers the annotation
    if (lx.tok != Tok::Name) lx.die("expected a name");
    std::string n = lx.text;
    lx.next();
    if (lx.tok == Tok::Colon) {
      lx.next();
      registerName(n, parseType(), true);
    } else {
      registerName(n, NameType::Bond, false);
    }
    return n;
  }

  // '/' NAME (',' NAME)* ':' TYPE — returned, not yet appended to closures.
  std::vector<TypedName> parseClosure() {
    lx.expect(Tok::Slash, "'/'");
    std::vector<std::string> names;
    for (;;) {
      if (lx.tok != Tok::Name) lx.die("expected a name in closure");
      names.push_back(lx.text);
      lx.next();
      if (lx.tok != Tok::Comma) break;
      lx.next();
    }
    lx.expect(Tok::Colon, "':' and a type after closure names");
    NameType t = parseType();
    std::vector<TypedName> out;
    for (std::string& n : names) {
      registerName(n, t, true);
      out.push_back({std::move(n), t});
    }
    return out;
  }

  struct ElemResult {
    std::vector<Region> regions;  // multi-root splice
    std::vector<Part> parts;      // width-1 content
    bool placeful = false;        // contributes a root even when parts empty
    bool multi = false;           // regions is authoritative
  };

  ElemResult parseElement() {
    ElemResult r;
    switch (lx.tok) {
      case Tok::Int: {
        if (lx.text == "1") { r.placeful = true; lx.next(); return r; }
        if (lx.text == "0") { lx.next(); return r; }
        lx.die("expected an element");
      }
      case Tok::Tilde: {
        lx.next();
        lx.expect(Tok::LBrace, "'{' after '~'");
        while (lx.tok != Tok::RBrace) {
          if (lx.tok != Tok::Name) lx.die("expected a name in '~{...}'");
          std::string n = lx.text;
          lx.next();
          lx.expect(Tok::Colon, "':' and a type in '~{...}'");
          registerName(n, parseType(), true);
          idles.insert(n);
          if (lx.tok == Tok::Comma) lx.next();
        }
        lx.next();
        return r;
      }
      case Tok::LParen: {
        lx.next();
        size_t aliasMark = aliases.size();
        std::vector<std::string> idleMark(idles.begin(), idles.end());
        auto [regions, scoped] = parseGraphBody();
        lx.expect(Tok::RParen, "')'");
        if (!scoped.empty()) {
          // closures written inside parentheses scope to them
          std::map<std::string, std::string> ren;
          for (TypedName& tn : scoped) {
            std::string fresh = "\x01s" + std::to_string(scopeCounter++);
            nameTypes[fresh] = tn.type;
            ren[tn.name] = fresh;
            tn.name = fresh;
          }
          for (Region& reg : regions) renameParts(reg.parts, ren);
          for (size_t i = aliasMark; i < aliases.size(); ++i) {
            auto it = ren.find(aliases[i].first);
            if (it != ren.end()) aliases[i].first = it->second;
          }
          std::set<std::string> keep(idleMark.begin(), idleMark.end());
          std::set<std::string> newIdles;
          for (const std::string& n : idles) {
            auto it = ren.find(n);
            newIdles.insert(it != ren.end() && !keep.count(n) ? it->second : n);
          }
          idles = std::move(newIdles);
          for (TypedName& tn : scoped) closures.push_back(std::move(tn));
        }
        if (regions.size() > 1) {
          r.regions = std::move(regions);
          r.multi = true;
        } else if (regions.size() == 1) {
          r.parts = std::move(regions[0].parts);
          r.placeful = true;
        }
        return r;
      }
      case Tok::Name: break;
      default: lx.die("expected an element");
    }

    std::string head = lx.text;
    lx.next();

    if (head == "id" && lx.tok != Tok::Slash && lx.tok != Tok::Under) {
      PSite s;
      if (lx.tok == Tok::LParen) {
        lx.next();
        if (lx.tok != Tok::Int) lx.die("expected a site index in 'id(...)'");
        s.declared = std::stoi(lx.text);
        lx.next();
        lx.expect(Tok::RParen, "')'");
      }
      r.parts.push_back(s);
      r.placeful = true;
      return r;
    }

    if (lx.tok == Tok::Slash) {  // alias: OUTER '/' INNER [':' TYPE]
      lx.next();
      if (lx.tok != Tok::Name) lx.die("expected an inner name after '/'");
      std::string innerName = lx.text;
      lx.next();
      NameType t = NameType::Bond;
      bool annotated = false;
      if (lx.tok == Tok::Colon) {
        lx.next();
        t = parseType();
        annotated = true;
      }
      registerName(head, t, annotated);
      registerName(innerName, t, annotated);
      aliases.emplace_back(head, innerName);
      return r;
    }

    // node
    PNode n;
    n.control = head;
    const Control* c = sig->find(head);
    if (!c) fail(ErrorCode::ParseError, "unknown control '" + head + "'");
    if (lx.tok == Tok::Under) {
      lx.next();
      lx.expect(Tok::LBrace, "'{' after '_'");
      while (lx.tok != Tok::RBrace) {
        n.ports.push_back(parseNameRef());
        if (lx.tok == Tok::Comma) lx.next();
      }
      lx.next();
    }
    if ((int)n.ports.size() != c->arity)
      fail(ErrorCode::ParseError, "control '" + head + "' has arity " + std::to_string(c->arity) +
                                      ", got " + std::to_string(n.ports.size()) + " port names");
    if (lx.tok == Tok::LBrack) {
      lx.next();
      while (lx.tok != Tok::RBrack) {
        ElemResult e = parseElement();
        if (e.multi) fail(ErrorCode::ParseError, "a multi-root graph cannot sit inside a node");
        for (Part& p : e.parts) n.children.push_back(std::move(p));
        if (lx.tok == Tok::Bar) lx.next(); else break;
      }
      lx.expect(Tok::RBrack, "']'");
    }
    r.parts.push_back(std::move(n));
    r.placeful = true;
    return r;
  }

  static void renameParts(std::vector<Part>& parts, const std::map<std::string, std::string>& ren) {
    for (Part& p : parts) {
      if (PNode* n = std::get_if<PNode>(&p)) {
        for (std::string& port : n->ports) {
          auto it = ren.find(port);
          if (it != ren.end()) port = it->second;
        }
        renameParts(n->children, ren);
      }
    }
  }

  // item := prime ('|' prime)*
  std::vector<Region> parseItem() {
    std::vector<Region> regions;
    Region acc;
    bool placeful = false;
    bool first = true;
    for (;;) {
      ElemResult e = parseElement();
      if (e.multi) {
        if (!first || lx.tok == Tok::Bar)
          fail(ErrorCode::ParseError, "a multi-root graph must stand alone between '||'");
        return std::move(e.regions);
      }
      placeful = placeful || e.placeful;
      for (Part& p : e.parts) acc.parts.push_back(std::move(p));
      first = false;
      if (lx.tok == Tok::Bar) { lx.next(); continue; }
      break;
    }
    if (placeful) regions.push_back(std::move(acc));
    return regions;
  }

  // graph := closure* item (('||' | ';') item)*
  std::pair<std::vector<Region>, std::vector<TypedName>> parseGraphBody() {
    std::vector<TypedName> local;
    while (lx.tok == Tok::Slash) {
      auto cl = parseClosure();
      for (TypedName& tn : cl) local.push_back(std::move(tn));
    }
    std::vector<Region> regions;
    for (;;) {
      auto rs = parseItem();
      for (Region& r : rs) regions.push_back(std::move(r));
      if (lx.tok == Tok::BarBar || lx.tok == Tok::Semi) { lx.next(); continue; }
      break;
    }
    return {std::move(regions), std::move(local)};
  }

  Bigraph build() {
    auto [regions, topClosures] = parseGraphBody();
    if (lx.tok != Tok::End) lx.die("trailing input");
    for (TypedName& tn : topClosures) closures.push_back(std::move(tn));

    std::map<std::string, EdgeId> closedAt;
    Bigraph g;
    g.sig = sig;
    for (size_t i = 0; i < closures.size(); ++i) {
      if (closedAt.count(closures[i].name))
        fail(ErrorCode::NameClash, "name '" + closures[i].name + "' closed twice");
      closedAt[closures[i].name] = (EdgeId)i;
      g.edges[(EdgeId)i] = closures[i].type;
    }

    auto typeOfName = [&](const std::string& n) {
      auto it = nameTypes.find(n);
      return it == nameTypes.end() ? NameType::Bond : it->second;
    };

    std::set<std::string> outerNames;
    auto resolve = [&](const std::string& n) {
      auto it = closedAt.find(n);
      if (it != closedAt.end()) return Link::toEdge(it->second);
      outerNames.insert(n);
      return Link::toOuter(n);
    };

    std::vector<std::pair<int, Place>> siteDecls;  // (declared index, place)
    NodeId nextId = 0;
    auto flatten = [&](auto&& self, const std::vector<Part>& parts, Place parent) -> void {
      for (const Part& p : parts) {
        if (const PSite* s = std::get_if<PSite>(&p)) {
          siteDecls.emplace_back(s->declared, parent);
          continue;
        }
        const PNode& pn = std::get<PNode>(p);
        Node n;
        n.id = nextId++;
        n.control = pn.control;
        n.parent = parent;
        for (const std::string& port : pn.ports) n.ports.push_back(resolve(port));
        g.nodes.push_back(std::move(n));
        Place here = Place::node(g.nodes.back().id);
        self(self, pn.children, here);
      }
    };
    for (size_t r = 0; r < regions.size(); ++r) flatten(flatten, regions[r].parts, Place::root((int)r));

    // sites: all-anonymous (occurrence order) or all-explicit (a permutation)
    int m = (int)siteDecls.size();
    g.sites.assign(m, Place::root(0));
    bool anyDecl = false, allDecl = true;
    for (auto& [idx, pl] : siteDecls) (idx >= 0 ? anyDecl : allDecl) = idx >= 0 ? true : false;
    for (auto& [idx, pl] : siteDecls) {
      if (idx >= 0) anyDecl = true;
      else allDecl = false;
    }
    if (anyDecl && !allDecl)
      fail(ErrorCode::ParseError, "mix of indexed and anonymous sites");
    std::set<int> seen;
    for (int i = 0; i < m; ++i) {
      int idx = allDecl && anyDecl ? siteDecls[i].first : i;
      if (idx < 0 || idx >= m || !seen.insert(idx).second)
        fail(ErrorCode::ParseError, "site indexes must form a permutation of 0.." + std::to_string(m - 1));
      g.sites[idx] = siteDecls[i].second;
    }

    std::vector<TypedName> innerNames;
    for (const auto& [outerName, innerName] : aliases) {
      innerNames.push_back({innerName, typeOfName(innerName)});
      g.innerLinks[innerName] = resolve(outerName);
    }
    for (const std::string& n : idles) outerNames.insert(n);

    std::vector<TypedName> outs;
    for (const std::string& n : outerNames) outs.push_back({n, typeOfName(n)});
    g.outer = iface((int)regions.size(), std::move(outs));
    g.inner = iface(m, std::move(innerNames));
    g.validate();
    return g;
  }
};

}  // namespace

Bigraph parseTerm(SigPtr sig, const std::string& src) {
  Parser p(std::move(sig), src);
  return p.build();
}

// ------------------------------------------------------------- printer

namespace {

struct EdgeNames {
  std::map<EdgeId, std::string> name;
  std::vector<EdgeId> order;
};

EdgeNames canonicalEdgeNames(const Bigraph& g) {
  // order edges by their first point (ports in node/port order, then inner
  // names, then idle edges by id); name them e0, e1, ... skipping taken names
  std::set<std::string> taken;
  for (const TypedName& tn : g.outer.names) taken.insert(tn.name);
  for (const TypedName& tn : g.inner.names) taken.insert(tn.name);

  using Key = std::tuple<int, NodeId, int, std::string>;
  std::map<EdgeId, Key> key;
  for (const auto& [e, t] : g.edges) {
    (void)t;
    key[e] = Key{2, e, 0, ""};
  }
  for (const auto& [x, l] : g.innerLinks)
    if (l.isEdge()) {
      Key k{1, 0, 0, x};
      if (k < key[l.edge]) key[l.edge] = k;
    }
  for (const Node& n : g.nodes)
    for (int i = 0; i < (int)n.ports.size(); ++i)
      if (n.ports[i].isEdge()) {
        Key k{0, n.id, i, ""};
        if (k < key[n.ports[i].edge]) key[n.ports[i].edge] = k;
      }

  EdgeNames en;
  for (const auto& [e, t] : g.edges) en.order.push_back(e);
  std::sort(en.order.begin(), en.order.end(),
            [&](EdgeId a, EdgeId b) { return key[a] < key[b]; });
  int k = 0;
  for (EdgeId e : en.order) {
    std::string nm;
    do {
      nm = "e" + std::to_string(k++);
    } while (taken.count(nm));
    en.name[e] = nm;
  }
  return en;
}

std::string linkName(const Bigraph& g, const EdgeNames& en, const Link& l) {
  if (l.isEdge()) return en.name.at(l.edge) + ":" + letterOf(g.edges.at(l.edge));
  return l.outer + ":" + letterOf(g.outer.find(l.outer)->type);
}

void printPlace(const Bigraph& g, const EdgeNames& en, Place p, std::string& out);

void printNode(const Bigraph& g, const EdgeNames& en, const Node& n, std::string& out) {
  out += n.control;
  if (!n.ports.empty()) {
    out += "_{";
    for (size_t i = 0; i < n.ports.size(); ++i) {
      if (i) out += ", ";
      out += linkName(g, en, n.ports[i]);
    }
    out += "}";
  }
  Place here = Place::node(n.id);
  if (!g.childrenOf(here).empty() || !g.sitesOf(here).empty()) {
    out += "[";
    std::string body;
    printPlace(g, en, here, body);
    out += body;
    out += "]";
  }
}

void printPlace(const Bigraph& g, const EdgeNames& en, Place p, std::string& out) {
  std::vector<std::string> parts;
  for (NodeId c : g.childrenOf(p)) {
    std::string s;
    printNode(g, en, g.node(c), s);
    parts.push_back(std::move(s));
  }
  for (int s : g.sitesOf(p)) parts.push_back("id(" + std::to_string(s) + ")");
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += " | ";
    out += parts[i];
  }
}

}  // namespace

std::string printTerm(const Bigraph& g) {
  EdgeNames en = canonicalEdgeNames(g);
  std::string out;

  // closures, grouping runs of equal type in edge order
  for (size_t i = 0; i < en.order.size();) {
    NameType t = g.edges.at(en.order[i]);
    out += "/" + en.name.at(en.order[i]);
    size_t j = i + 1;
    while (j < en.order.size() && g.edges.at(en.order[j]) == t) {
      out += "," + en.name.at(en.order[j]);
      ++j;
    }
    out += ":";
    out += letterOf(t);
    out += " ";
    i = j;
  }

  std::vector<std::string> items;
  for (const TypedName& tn : g.inner.names) {
    const Link& l = g.innerLinks.at(tn.name);
    std::string target = l.isEdge() ? en.name.at(l.edge) : l.outer;
    items.push_back(target + "/" + tn.name + ":" + letterOf(tn.type));
  }
  std::vector<std::string> idle;
  for (const TypedName& tn : g.outer.names)
    if (g.pointCount(Link::toOuter(tn.name)) == 0) idle.push_back(show(tn));
  if (!idle.empty()) {
    std::string s = "~{";
    for (size_t i = 0; i < idle.size(); ++i) {
      if (i) s += ", ";
      s += idle[i];
    }
    items.push_back(s + "}");
  }
  for (int r = 0; r < g.outer.width; ++r) {
    std::string s;
    printPlace(g, en, Place::root(r), s);
    items.push_back(s.empty() ? "1" : s);
  }
  if (items.empty()) items.push_back("0");
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) out += " || ";
    out += items[i];
  }
  return out;
}

}  // namespace biobig
