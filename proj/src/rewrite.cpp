#include "biobig/rewrite.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <random>

#include "biobig/ops.hpp"
#include "biobig/sorting.hpp"

namespace biobig {

// ------------------------------------------------------------ predicates

bool linkConnected(const Bigraph& g) {
  if (g.nodes.empty()) return false;
  std::map<NodeId, NodeId> parent;
  for (const Node& n : g.nodes) parent[n.id] = n.id;
  std::function<NodeId(NodeId)> find = [&](NodeId x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  std::map<Link, NodeId> owner;
  for (const Node& n : g.nodes)
    for (const Link& l : n.ports) {
      auto [it, fresh] = owner.emplace(l, n.id);
      if (!fresh) parent[find(n.id)] = find(it->second);
    }
  NodeId root = find(g.nodes.front().id);
  for (const Node& n : g.nodes)
    if (find(n.id) != root) return false;
  return true;
}

namespace {

bool isOnePointEdge(const Bigraph& g, const Link& l) {
  return l.isEdge() && g.pointCount(l) == 1;
}

struct GrowSearch {
  const Bigraph& a;
  const Bigraph& b;
  std::map<NodeId, NodeId> phi;
  std::set<NodeId> used;
  std::map<EdgeId, EdgeId> edgeImage;
  std::set<EdgeId> claimed;

  bool portOk(const Bigraph& ga, const Link& la, const Link& lb) {
    if (!la.isEdge()) {
      // names at the interface are kept verbatim
      return !lb.isEdge() && lb.outer == la.outer;
    }
    NameType ta = ga.edges.at(la.edge);
    if (ta == NameType::Bond) {
      if (!lb.isEdge() || b.edges.at(lb.edge) != NameType::Bond) return false;
      auto it = edgeImage.find(la.edge);
      if (it != edgeImage.end()) return it->second == lb.edge;
      if (claimed.count(lb.edge)) return false;
      edgeImage[la.edge] = lb.edge;
      claimed.insert(lb.edge);
      return true;
    }
    if (ta == NameType::Hidden) {
      // a folded site may only stay folded or become available
      if (!lb.isEdge()) return false;
      NameType tb = b.edges.at(lb.edge);
      return tb == NameType::Hidden || tb == NameType::Visible;
    }
    // visible: may stay, fold away, or be drawn into a new bond
    if (lb.isEdge()) {
      NameType tb = b.edges.at(lb.edge);
      return tb == NameType::Hidden || tb == NameType::Visible || tb == NameType::Bond;
    }
    const TypedName* tn = b.outer.find(lb.outer);
    return tn && tn->type == NameType::Bond && a.pointCount(Link::toOuter(lb.outer)) == 0;
  }

  bool nodeOk(const Node& na, const Node& nb) {
    if (na.control != nb.control) return false;
    if (na.parent.isRoot()) {
      if (!(nb.parent.isRoot() && nb.parent.at == na.parent.at)) return false;
    } else {
      auto it = phi.find(na.parent.at);
      if (it == phi.end() || !(nb.parent == Place::node(it->second))) return false;
    }
    for (size_t i = 0; i < na.ports.size(); ++i)
      if (!portOk(a, na.ports[i], nb.ports[i])) return false;
    return true;
  }

  bool finalize() {
    for (const auto& [ea, eb] : edgeImage)
      if (a.pointCount(Link::toEdge(ea)) != b.pointCount(Link::toEdge(eb))) return false;

    // which b-ports are images of formerly-visible a-ports?
    std::set<std::pair<NodeId, int>> fromVisible;
    for (const Node& na : a.nodes)
      for (size_t i = 0; i < na.ports.size(); ++i)
        if (na.ports[i].isEdge() && a.edges.at(na.ports[i].edge) == NameType::Visible)
          fromVisible.insert({phi.at(na.id), (int)i});
    std::set<NodeId> image;
    for (const auto& [x, y] : phi) image.insert(y);

    // a new bond joins exactly two ports, each a formerly-visible image or
    // (on closed bonds only) a port of a recruited node
    auto newBondOk = [&](const Link& l, bool allowNewNodes) {
      std::vector<PortRef> pts = b.portsOf(l);
      if (pts.size() != 2) return false;
      for (const PortRef& p : pts) {
        if (!image.count(p.node)) {
          if (!allowNewNodes) return false;
          continue;
        }
        if (!fromVisible.count({p.node, p.port})) return false;
      }
      return true;
    };

    for (const auto& [e, t] : b.edges)
      if (t == NameType::Bond && !claimed.count(e) && !newBondOk(Link::toEdge(e), true))
        return false;

    for (const TypedName& tn : b.outer.names) {
      Link l = Link::toOuter(tn.name);
      int pa = a.pointCount(l);
      int pb = b.pointCount(l);
      if (pa > 0) {
        // a spectator link: kept exactly
        if (pa != pb) return false;
      } else if (pb > 0) {
        if (tn.type != NameType::Bond) return false;
        if (!newBondOk(l, false)) return false;
      }
    }

    // ports of recruited nodes never reach the interface
    for (const Node& nb : b.nodes) {
      if (image.count(nb.id)) continue;
      for (const Link& l : nb.ports) {
        if (!l.isEdge()) return false;
        NameType t = b.edges.at(l.edge);
        if (t != NameType::Hidden && t != NameType::Visible && t != NameType::Bond) return false;
      }
    }
    return true;
  }

  bool search(size_t i) {
    if (i == a.nodes.size()) return finalize();
    const Node& na = a.nodes[i];
    for (const Node& nb : b.nodes) {
      if (used.count(nb.id)) continue;
      auto savedPhi = phi;
      auto savedImg = edgeImage;
      auto savedClaim = claimed;
      phi[na.id] = nb.id;
      if (nodeOk(na, nb)) {
        used.insert(nb.id);
        if (search(i + 1)) return true;
        used.erase(nb.id);
      }
      phi = std::move(savedPhi);
      edgeImage = std::move(savedImg);
      claimed = std::move(savedClaim);
    }
    return false;
  }
};

}  // namespace

bool isActiveContext(const Bigraph& g) {
  for (const Place& s : g.sites) {
    Place p = s;
    while (!p.isRoot()) {
      const Node& n = g.node(p.at);
      if (g.controlOf(n).activity != Activity::Active) return false;
      p = n.parent;
    }
  }
  return true;
}

bool growsLink(const Bigraph& from, const Bigraph& to) {
  if (from.sig != to.sig) fail(ErrorCode::BadGraph, "growsLink: different signatures");
  if (!from.isGround() || !to.isGround())
    fail(ErrorCode::BadGraph, "growsLink: faces must be ground");
  if (from.outer != to.outer) return false;
  Bigraph a = lean(from), b = lean(to);
  for (const Bigraph* g : {&a, &b}) {
    for (const auto& [e, t] : g->edges)
      if ((t == NameType::Hidden || t == NameType::Visible) &&
          g->pointCount(Link::toEdge(e)) != 1)
        fail(ErrorCode::BadGraph, "growsLink: a hidden/visible link must have one point");
    for (const TypedName& tn : g->outer.names)
      if ((tn.type == NameType::Hidden || tn.type == NameType::Visible) &&
          g->pointCount(Link::toOuter(tn.name)) > 1)
        fail(ErrorCode::BadGraph, "growsLink: a hidden/visible name carries several points");
  }
  if (a.nodes.size() > b.nodes.size()) return false;
  GrowSearch gs{a, b};
  return gs.search(0);
}

// ------------------------------------------------------------ rule shape

namespace {

void checkRuleShape(const std::string& name, const Bigraph& l, const Bigraph& r) {
  if (l.sig != r.sig) fail(ErrorCode::BadRule, name + ": faces over different signatures");
  if (!(l.inner == r.inner) || !(l.outer == r.outer))
    fail(ErrorCode::BadRule, name + ": faces must share both interfaces");
  if (!l.inner.names.empty()) fail(ErrorCode::BadRule, name + ": rules take no inner names");
  for (int k = 0; k < l.outer.width; ++k)
    if (l.childrenOf(Place::root(k)).empty())
      fail(ErrorCode::BadRule, name + ": left root " + std::to_string(k) + " has no node");
  for (const Bigraph* g : {&l, &r}) {
    std::set<Place> seen;
    for (const Place& s : g->sites)
      if (!seen.insert(s).second)
        fail(ErrorCode::BadRule, name + ": a place holds more than one site");
  }
}

void checkProteinFaces(const std::string& name, const Bigraph& l, const Bigraph& r) {
  for (const Bigraph* g : {&l, &r}) {
    if (!g->isGround()) fail(ErrorCode::BadRule, name + ": protein rule faces must be ground");
    for (const Node& n : g->nodes)
      if (!isPlain(g->controlOf(n)))
        fail(ErrorCode::BadRule, name + ": protein rules use protein nodes only");
    if (!checkProtSol(*g).empty())
      fail(ErrorCode::BadRule, name + ": faces must satisfy the protein link discipline");
    for (const auto& [e, t] : g->edges)
      if (t == NameType::Bond && g->pointCount(Link::toEdge(e)) != 2)
        fail(ErrorCode::BadRule, name + ": a closed bond must join exactly two ports");
  }
}

}  // namespace

Rule makeMonotoneRule(std::string name, Bigraph lhs, Bigraph rhs) {
  checkRuleShape(name, lhs, rhs);
  checkProteinFaces(name, lhs, rhs);
  if (!growsLink(lhs, rhs))
    fail(ErrorCode::BadRule, name + ": the right face does not grow from the left");
  if (!linkConnected(rhs))
    fail(ErrorCode::BadRule, name + ": the right face must be one connected complex");
  return Rule{std::move(name), RuleKind::Monotone, std::move(lhs), std::move(rhs)};
}

Rule makeAntimonotoneRule(std::string name, Bigraph lhs, Bigraph rhs) {
  checkRuleShape(name, lhs, rhs);
  checkProteinFaces(name, lhs, rhs);
  if (!growsLink(rhs, lhs))
    fail(ErrorCode::BadRule, name + ": the left face does not grow from the right");
  if (!linkConnected(lhs))
    fail(ErrorCode::BadRule, name + ": the left face must be one connected complex");
  return Rule{std::move(name), RuleKind::Antimonotone, std::move(lhs), std::move(rhs)};
}

Rule fromKappa(const KappaRule& kr, SigPtr sig) {
  auto [lhs, rhs] = encodeRule(kr, sig);
  return kr.antimonotone ? makeAntimonotoneRule(kr.name, std::move(lhs), std::move(rhs))
                         : makeMonotoneRule(kr.name, std::move(lhs), std::move(rhs));
}

namespace {

NodeId soleChildWithControl(const Bigraph& g, Place p, const std::string& control,
                            const std::string& err) {
  std::vector<NodeId> kids = g.childrenOf(p);
  if (kids.size() != 1 || g.node(kids[0]).control != control)
    fail(ErrorCode::BadRule, err);
  return kids[0];
}

bool isClosedPair(const Bigraph& g, const Link& x, const Link& y, NameType t) {
  return x.isEdge() && x == y && g.edges.at(x.edge) == t && g.pointCount(x) == 2;
}

}  // namespace

Rule makeIntroductionRule(std::string name, Bigraph lhs, Bigraph rhs) {
  checkRuleShape(name, lhs, rhs);
  if (!lhs.isGround() || lhs.outer.width != 3)
    fail(ErrorCode::BadRule, name + ": the pattern must be ground with three regions");
  for (const Node& n : lhs.nodes)
    if (!isPlain(lhs.controlOf(n)))
      fail(ErrorCode::BadRule, name + ": the pattern side is proteins only");

  // the right face is the pattern plus one freshly wired pinch triple
  NodeId pc = soleChildWithControl(rhs, Place::root(0), PC,
                                   name + ": region 0 must hold exactly the content marker");
  NodeId pm = soleChildWithControl(rhs, Place::root(1), PM,
                                   name + ": region 1 must hold exactly the membrane marker");
  NodeId pd = -1;
  for (NodeId k : rhs.childrenOf(Place::root(2)))
    if (rhs.node(k).control == PD) {
      if (pd != -1) fail(ErrorCode::BadRule, name + ": two destination markers");
      pd = k;
    }
  if (pd == -1) fail(ErrorCode::BadRule, name + ": region 2 must hold the destination marker");
  for (const Node& n : rhs.nodes)
    if (!isPlain(rhs.controlOf(n)) && n.id != pc && n.id != pm && n.id != pd)
      fail(ErrorCode::BadRule, name + ": unexpected non-protein node on the right");

  const Node& npc = rhs.node(pc);
  const Node& npm = rhs.node(pm);
  const Node& npd = rhs.node(pd);
  if (!isClosedPair(rhs, npc.ports[0], npm.ports[0], NameType::Hidden) ||
      !isClosedPair(rhs, npm.ports[1], npd.ports[0], NameType::Hidden))
    fail(ErrorCode::BadRule, name + ": the triple must be wired by two fresh hidden links");

  // peeling the triple off the right face must give back the left face
  Bigraph peeled = rhs;
  EdgeId ex = npc.ports[0].edge, ey = npm.ports[1].edge;
  peeled.edges.erase(ex);
  peeled.edges.erase(ey);
  std::erase_if(peeled.nodes, [&](const Node& n) { return n.id == pc || n.id == pm || n.id == pd; });
  for (Node& n : peeled.nodes) {
    if (n.parent == Place::node(pc)) n.parent = Place::root(0);
    if (n.parent == Place::node(pm)) n.parent = Place::root(1);
  }
  peeled.validate();
  if (!supportEquiv(peeled, lhs))
    fail(ErrorCode::BadRule, name + ": the faces differ by more than the triple");

  // open names must not leak half a complex across the future membrane:
  // idle, fully used by the pattern, or anchored in the destination region
  for (const TypedName& tn : lhs.outer.names) {
    Link l = Link::toOuter(tn.name);
    int points = lhs.pointCount(l);
    if (points == 0 || points == 2) continue;
    bool anchored = false;
    for (const PortRef& p : lhs.portsOf(l))
      if (lhs.rootOf(lhs.node(p.node).parent) == 2) anchored = true;
    if (!anchored)
      fail(ErrorCode::BadRule,
           name + ": open name '" + tn.name + "' is neither complete nor anchored in region 2");
  }
  return Rule{std::move(name), RuleKind::Introduction, std::move(lhs), std::move(rhs)};
}

std::vector<Rule> commitmentRules(SigPtr sig) {
  TypedName x{"x", NameType::Hidden}, y{"y", NameType::Hidden};

  // pinch: p^c[0] | p^m[1] | (p^d | 2)  →  1 | 1 | (m^ext[m^cys[0] | 1] | 2)
  Bigraph pinchL = parallel(
      parallel(ion(sig, PC, {x}), ion(sig, PM, {x, y})),
      primeProduct(ion(sig, PD, {y}), idPlaces(sig, 1)));
  pinchL = closeName(closeName(pinchL, "x", NameType::Hidden), "y", NameType::Hidden);
  Bigraph vesicle = primeProduct(
      compose(ion(sig, MExt, {}), primeProduct(ion(sig, MCys, {}), idPlaces(sig, 1))),
      idPlaces(sig, 1));
  Bigraph pinchR = parallel(parallel(unitRoot(sig), unitRoot(sig)), vesicle);

  // fuse: f^c[m^ext[m^cys[0] | 1]] | (f^m | 2) | f^d  →  1 | (1 | 2) | 0
  Bigraph carrier = compose(
      ion(sig, FC, {x}),
      compose(ion(sig, MExt, {}), primeProduct(ion(sig, MCys, {}), idPlaces(sig, 1))));
  Bigraph fuseL = parallel(parallel(carrier, primeProduct(ion(sig, FM, {x, y}), idPlaces(sig, 1))),
                           ion(sig, FD, {y}));
  fuseL = closeName(closeName(fuseL, "x", NameType::Hidden), "y", NameType::Hidden);
  Bigraph fuseR = compose(
      parallel(parallel(unitRoot(sig), primeProduct(idPlaces(sig, 1), idPlaces(sig, 1))),
               idPlaces(sig, 1)),
      permutation(sig, {2, 0, 1}));

  return {Rule{"pinch", RuleKind::Commitment, std::move(pinchL), std::move(pinchR)},
          Rule{"fuse", RuleKind::Commitment, std::move(fuseL), std::move(fuseR)}};
}

// ------------------------------------------------------------ matching

namespace {

struct MatchSearch {
  const Bigraph& agent;
  const Rule& rule;
  const Bigraph& L;
  bool brute = false;

  std::map<Place, std::vector<NodeId>> agentKids;
  std::vector<const Node*> order;  // L's nodes, parents before children

  std::map<NodeId, NodeId> phi;
  std::set<NodeId> used;
  std::map<int, Place> rootImage;
  std::map<EdgeId, EdgeId> edgeImage;
  std::set<EdgeId> claimed;
  std::map<std::string, Link> nameImage;

  std::vector<std::pair<std::vector<NodeId>, Match>> out;  // keyed by matched ids

  MatchSearch(const Bigraph& a, const Rule& r, bool bruteForce)
      : agent(a), rule(r), L(r.lhs), brute(bruteForce) {
    agentKids = childMap(agent);
    std::deque<Place> q;
    for (int k = 0; k < L.outer.width; ++k) q.push_back(Place::root(k));
    std::map<Place, std::vector<NodeId>> lKids = childMap(L);
    while (!q.empty()) {
      Place p = q.front();
      q.pop_front();
      for (NodeId k : lKids[p]) {
        order.push_back(&L.node(k));
        q.push_back(Place::node(k));
      }
    }
  }

  bool linkOk(const Link& ll, const Link& al) {
    if (ll.isEdge()) {
      if (!al.isEdge()) return false;
      if (agent.edges.at(al.edge) != L.edges.at(ll.edge)) return false;
      auto it = edgeImage.find(ll.edge);
      if (it != edgeImage.end()) return it->second == al.edge;
      if (claimed.count(al.edge)) return false;
      edgeImage[ll.edge] = al.edge;
      claimed.insert(al.edge);
      return true;
    }
    auto it = nameImage.find(ll.outer);
    if (it != nameImage.end()) return it->second == al;
    NameType want = L.outer.find(ll.outer)->type;
    if (!subtype(want, agent.typeOf(al))) return false;
    nameImage[ll.outer] = al;
    return true;
  }

  bool placeOk(const Node& ln, const Node& an) {
    if (ln.parent.isRoot()) {
      auto [it, fresh] = rootImage.emplace(ln.parent.at, an.parent);
      return fresh || it->second == an.parent;
    }
    return an.parent == Place::node(phi.at(ln.parent.at));
  }

  bool assign(const Node& ln, const Node& an) {
    if (ln.control != an.control) return false;
    if (brute) return true;  // places and links re-derived in finalize
    if (!placeOk(ln, an)) return false;
    for (size_t i = 0; i < ln.ports.size(); ++i)
      if (!linkOk(ln.ports[i], an.ports[i])) return false;
    return true;
  }

  bool deriveForBrute() {
    rootImage.clear();
    edgeImage.clear();
    claimed.clear();
    nameImage.clear();
    for (const Node* ln : order) {
      const Node& an = agent.node(phi.at(ln->id));
      if (!placeOk(*ln, an)) return false;
      for (size_t i = 0; i < ln->ports.size(); ++i)
        if (!linkOk(ln->ports[i], an.ports[i])) return false;
    }
    return true;
  }

  void finalize() {
    if (brute && !deriveForBrute()) return;

    for (const auto& [le, ae] : edgeImage)
      if (L.pointCount(Link::toEdge(le)) != agent.pointCount(Link::toEdge(ae))) return;

    // two regions may share an image place only when no site is involved
    // (an ambiguous parameter split otherwise)
    {
      std::set<int> siteRoots;
      for (const Place& s : L.sites)
        if (s.isRoot()) siteRoots.insert(s.at);
      std::map<Place, std::vector<int>> byPlace;
      for (const auto& [r, p] : rootImage) byPlace[p].push_back(r);
      for (const auto& [p, regions] : byPlace)
        if (regions.size() > 1)
          for (int r : regions)
            if (siteRoots.count(r)) return;
    }

    // the occurrence must sit inside an active context
    for (const auto& [r, place] : rootImage) {
      Place p = place;
      while (!p.isRoot()) {
        const Node& n = agent.node(p.at);
        if (agent.controlOf(n).activity != Activity::Active) return;
        p = n.parent;
      }
    }

    // route unmatched children: under a matched node they must go to that
    // node's site (or the match fails); under a root image they go to the
    // first site there, or stay with the context
    std::map<Place, int> siteAt;  // agent place -> parameter root (site index)
    for (size_t j = 0; j < L.sites.size(); ++j) {
      Place lp = L.sites[j];
      Place ap = lp.isRoot() ? rootImage.at(lp.at) : Place::node(phi.at(lp.at));
      siteAt.emplace(ap, (int)j);
    }
    std::map<NodeId, int> topOf;  // parameter subtree tops
    for (const auto& [lid, aid] : phi) {
      for (NodeId kid : agentKids[Place::node(aid)]) {
        if (used.count(kid)) continue;
        auto it = siteAt.find(Place::node(aid));
        if (it == siteAt.end()) return;  // strict: nothing may dangle here
        topOf[kid] = it->second;
      }
    }
    // a sibling subtree that hosts another region's image must stay with the
    // context (the context's site for that region lives inside it)
    std::set<NodeId> regionTops;
    for (const auto& [r, place] : rootImage)
      if (!place.isRoot()) regionTops.insert(place.at);
    auto hostsRegion = [&](NodeId top) {
      std::deque<NodeId> bfs{top};
      while (!bfs.empty()) {
        NodeId n = bfs.front();
        bfs.pop_front();
        if (regionTops.count(n)) return true;
        for (NodeId kid : agentKids[Place::node(n)]) bfs.push_back(kid);
      }
      return false;
    };
    for (const auto& [ap, j] : siteAt) {
      if (!ap.isRoot() && used.count(ap.at)) continue;  // handled above
      for (NodeId kid : agentKids[ap])
        if (!used.count(kid) && !hostsRegion(kid)) topOf[kid] = j;
    }

    std::set<NodeId> paramNodes;
    std::deque<NodeId> q;
    for (const auto& [n, j] : topOf) q.push_back(n);
    while (!q.empty()) {
      NodeId n = q.front();
      q.pop_front();
      if (!paramNodes.insert(n).second) continue;
      for (NodeId kid : agentKids[Place::node(n)]) q.push_back(kid);
    }

    // region images must survive into the context
    for (const auto& [r, place] : rootImage)
      if (!place.isRoot() && (used.count(place.at) || paramNodes.count(place.at))) return;

    if (rule.kind == RuleKind::Commitment && !commitmentPlacement()) return;

    materialize(topOf, paramNodes);
  }

  // the triple must straddle a membrane: its content- and destination-side
  // markers sit on the two sides {outside M, inside M's inner layer}
  bool commitmentPlacement() {
    NodeId c = -1, m = -1, d = -1;
    for (const Node* ln : order) {
      if (ln->control == PC || ln->control == FC) c = phi.at(ln->id);
      if (ln->control == PM || ln->control == FM) m = phi.at(ln->id);
      if (ln->control == PD || ln->control == FD) d = phi.at(ln->id);
    }
    if (c < 0 || m < 0 || d < 0) return false;
    Place cur = agent.node(m).parent;
    while (!cur.isRoot() && agent.node(cur.at).control != MExt) cur = agent.node(cur.at).parent;
    if (cur.isRoot()) return false;
    NodeId M = cur.at;
    NodeId cy = -1;
    for (NodeId kid : agentKids[Place::node(M)])
      if (agent.node(kid).control == MCys) {
        if (cy != -1) return false;
        cy = kid;
      }
    if (cy == -1) return false;
    Place sideA = agent.node(c).parent;
    Place sideB = agent.node(d).parent;
    Place outside = agent.node(M).parent;
    Place inside = Place::node(cy);
    return (sideA == outside && sideB == inside) || (sideA == inside && sideB == outside);
  }

  void materialize(const std::map<NodeId, int>& topOf, const std::set<NodeId>& paramNodes) {
    // internal edges: all their points live in the parameter
    std::set<EdgeId> internal;
    for (const auto& [e, t] : agent.edges) {
      std::vector<PortRef> pts = agent.portsOf(Link::toEdge(e));
      if (pts.empty()) continue;
      bool allIn = true;
      for (const PortRef& p : pts) allIn &= paramNodes.count(p.node) > 0;
      if (allIn) internal.insert(e);
    }

    // bypass names, one per external link touched by the parameter
    std::vector<Link> external;
    std::map<Link, std::string> zOf;
    for (const Node& n : agent.nodes) {
      if (!paramNodes.count(n.id)) continue;
      for (const Link& l : n.ports) {
        if (l.isEdge() && internal.count(l.edge)) continue;
        if (zOf.count(l)) continue;
        zOf[l] = "_z" + std::to_string(external.size());
        external.push_back(l);
      }
    }
    std::vector<TypedName> bypass;
    for (const Link& l : external) bypass.push_back({zOf[l], NameType::Free});

    Bigraph d;
    d.sig = agent.sig;
    d.outer = iface((int)L.sites.size(), bypass);
    for (const Node& n : agent.nodes) {
      if (!paramNodes.count(n.id)) continue;
      Node nn = n;
      if (auto it = topOf.find(n.id); it != topOf.end()) nn.parent = Place::root(it->second);
      for (Link& l : nn.ports)
        if (!(l.isEdge() && internal.count(l.edge))) l = Link::toOuter(zOf.at(l));
      d.nodes.push_back(std::move(nn));
    }
    for (EdgeId e : internal) d.edges[e] = agent.edges.at(e);
    d.validate();

    Bigraph C;
    C.sig = agent.sig;
    C.outer = agent.outer;
    std::vector<TypedName> innerNames = L.outer.names;
    for (const TypedName& z : bypass) innerNames.push_back(z);
    C.inner = iface(L.outer.width, innerNames);
    for (const Node& n : agent.nodes)
      if (!used.count(n.id) && !paramNodes.count(n.id)) C.nodes.push_back(n);
    for (const auto& [e, t] : agent.edges)
      if (!internal.count(e) && !claimed.count(e)) C.edges[e] = t;
    for (int k = 0; k < L.outer.width; ++k) C.sites.push_back(rootImage.at(k));
    EdgeId nextEdge = agent.maxEdgeId() + 1;
    for (const TypedName& tn : L.outer.names) {
      auto it = nameImage.find(tn.name);
      if (it != nameImage.end()) {
        C.innerLinks[tn.name] = it->second;
      } else {
        // an idle rule name: wire it to a private link of its own type
        C.edges[nextEdge] = tn.type == NameType::Free ? NameType::Bond : tn.type;
        C.innerLinks[tn.name] = Link::toEdge(nextEdge++);
      }
    }
    for (const Link& l : external) C.innerLinks[zOf.at(l)] = l;
    C.validate();

    std::string witness;
    for (NodeId n : used) witness += (witness.empty() ? "n" : "+n") + std::to_string(n);

    out.emplace_back(
        std::vector<NodeId>(used.begin(), used.end()),
        Match{&rule, std::move(witness), std::move(C), std::move(d), std::move(bypass)});
  }

  void search(size_t i) {
    if (i == order.size()) {
      finalize();
      return;
    }
    const Node& ln = *order[i];
    for (const Node& an : agent.nodes) {
      if (used.count(an.id)) continue;
      auto savedRoot = rootImage;
      auto savedImg = edgeImage;
      auto savedClaim = claimed;
      auto savedName = nameImage;
      phi[ln.id] = an.id;
      if (assign(ln, an)) {
        used.insert(an.id);
        search(i + 1);
        used.erase(an.id);
      }
      phi.erase(ln.id);
      rootImage = std::move(savedRoot);
      edgeImage = std::move(savedImg);
      claimed = std::move(savedClaim);
      nameImage = std::move(savedName);
    }
  }

  std::vector<Match> run() {
    search(0);
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Match> dedup;
    for (auto& [key, m] : out) {
      bool dup = false;
      for (const Match& prev : dedup)
        if (supportEquiv(prev.context, m.context) && supportEquiv(prev.parameter, m.parameter)) {
          dup = true;
          break;
        }
      if (!dup) dedup.push_back(std::move(m));
    }
    return dedup;
  }
};

Bigraph recompose(const Match& m, const Bigraph& face) {
  Bigraph inner = compose(tensor(face, idWiring(face.sig, m.bypass)), m.parameter);
  return compose(m.context, inner);
}

}  // namespace

std::vector<Match> findMatches(const Bigraph& agent, const Rule& rule) {
  if (!agent.isGround()) fail(ErrorCode::BadGraph, "matching expects a ground agent");
  return MatchSearch(agent, rule, false).run();
}

std::vector<Match> findMatchesBruteForce(const Bigraph& agent, const Rule& rule) {
  if (!agent.isGround()) fail(ErrorCode::BadGraph, "matching expects a ground agent");
  std::vector<Match> all = MatchSearch(agent, rule, true).run();
  std::vector<Match> valid;
  for (Match& m : all) {
    if (supportEquiv(recompose(m, rule.lhs), agent)) valid.push_back(std::move(m));
  }
  return valid;
}

Bigraph applyMatch(const Match& m) { return lean(recompose(m, m.rule->rhs)); }

// ------------------------------------------------------------ systems

std::vector<Match> enumerateSteps(const ReactiveSystem& rs, const Bigraph& agent) {
  std::vector<Match> all;
  for (const Rule& r : rs.rules) {
    std::vector<Match> ms = findMatches(agent, r);
    for (Match& m : ms) all.push_back(std::move(m));
  }
  return all;
}

Bigraph step(const ReactiveSystem& rs, const Match& m) {
  Bigraph g = applyMatch(m);
  std::vector<Violation> vs;
  if (rs.profile == Profile::ProteinLinks) vs = checkProtSol(g);
  if (rs.profile == Profile::Bio) vs = checkBio(g);
  if (!vs.empty())
    fail(ErrorCode::SortingBroken,
         "rule '" + m.rule->name + "' broke the discipline: " + showViolation(vs.front()));
  return g;
}

std::vector<Successor> successors(const ReactiveSystem& rs, const Bigraph& agent) {
  std::vector<Successor> out;
  for (const Match& m : enumerateSteps(rs, agent)) {
    Bigraph next = step(rs, m);
    bool seen = false;
    for (const Successor& s : out)
      if (supportEquiv(s.state, next)) {
        seen = true;
        break;
      }
    if (!seen) out.push_back({std::move(next), m.rule->name, m.witness});
  }
  return out;
}

namespace {

Trace runBfs(const ReactiveSystem& rs, const Bigraph& init, int depth) {
  struct NodeRec {
    Bigraph state;
    int parent;
    TraceStep step;
    int depth;
    bool quiescent;
  };
  std::vector<NodeRec> tree;
  tree.push_back({init, -1, {}, 0, false});
  std::deque<int> frontier{0};
  int found = -1, deepest = 0;
  while (!frontier.empty() && found < 0) {
    int cur = frontier.front();
    frontier.pop_front();
    if (tree[cur].depth > tree[deepest].depth) deepest = cur;
    if (tree[cur].depth >= depth) continue;
    std::vector<Match> ms = enumerateSteps(rs, tree[cur].state);
    if (ms.empty()) {
      tree[cur].quiescent = true;
      found = cur;
      break;
    }
    for (const Match& m : ms) {
      Bigraph next = step(rs, m);
      bool seen = false;
      for (const NodeRec& rec : tree)
        if (supportEquiv(rec.state, next)) {
          seen = true;
          break;
        }
      if (seen) continue;
      tree.push_back({std::move(next), cur, {m.rule->name, m.witness}, tree[cur].depth + 1, false});
      frontier.push_back((int)tree.size() - 1);
    }
  }
  int target = found >= 0 ? found : deepest;
  Trace t;
  std::vector<int> path;
  for (int i = target; i >= 0; i = tree[i].parent) path.push_back(i);
  std::reverse(path.begin(), path.end());
  for (size_t i = 0; i < path.size(); ++i) {
    t.states.push_back(tree[path[i]].state);
    if (i > 0) t.steps.push_back(tree[path[i]].step);
  }
  return t;
}

}  // namespace

namespace {

unsigned long long strategyArg(const std::string& strategy, size_t at) {
  try {
    size_t used = 0;
    unsigned long long v = std::stoull(strategy.substr(at), &used);
    if (at + used != strategy.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::ParseError, "unknown strategy '" + strategy + "'");
  }
}

}  // namespace

Trace run(const ReactiveSystem& rs, const Bigraph& init, int maxSteps,
          const std::string& strategy) {
  if (strategy.rfind("bfs:", 0) == 0) {
    int depth = (int)strategyArg(strategy, 4);
    return runBfs(rs, init, std::min(depth, maxSteps));
  }
  bool randomPick = false;
  std::mt19937_64 rng;
  if (strategy.rfind("random:", 0) == 0) {
    randomPick = true;
    rng.seed(strategyArg(strategy, 7));
  } else if (strategy != "first") {
    fail(ErrorCode::ParseError, "unknown strategy '" + strategy + "'");
  }

  Trace t;
  t.states.push_back(init);
  for (int i = 0; i < maxSteps; ++i) {
    std::vector<Match> ms = enumerateSteps(rs, t.states.back());
    if (ms.empty()) break;
    const Match& m = ms[randomPick ? rng() % ms.size() : 0];
    Bigraph next = step(rs, m);
    t.steps.push_back({m.rule->name, m.witness});
    t.states.push_back(std::move(next));
  }
  return t;
}

std::string toTsv(const Trace& t) {
  std::string out = "step\trule\twitness\n";
  for (size_t i = 0; i < t.steps.size(); ++i)
    out += std::to_string(i + 1) + "\t" + t.steps[i].rule + "\t" + t.steps[i].witness + "\n";
  return out;
}

}  // namespace biobig
