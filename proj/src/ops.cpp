#include "biobig/ops.hpp"

#include <algorithm>
#include <set>

namespace biobig {

static void sameSig(const Bigraph& g, const Bigraph& h, const char* op) {
  if (g.sig != h.sig) fail(ErrorCode::BadGraph, std::string(op) + ": different signatures");
}

Bigraph empty(SigPtr sig) {
  Bigraph g;
  g.sig = std::move(sig);
  return g;
}

Bigraph unitRoot(SigPtr sig) {
  Bigraph g = empty(std::move(sig));
  g.outer = iface(1, {});
  return g;
}

Bigraph idPlaces(SigPtr sig, int n) {
  Bigraph g = empty(std::move(sig));
  g.inner = iface(n, {});
  g.outer = iface(n, {});
  for (int i = 0; i < n; ++i) g.sites.push_back(Place::root(i));
  return g;
}

Bigraph idWiring(SigPtr sig, const std::vector<TypedName>& names) {
  Bigraph g = empty(std::move(sig));
  g.inner = iface(0, names);
  g.outer = g.inner;
  for (const TypedName& tn : g.inner.names) g.innerLinks[tn.name] = Link::toOuter(tn.name);
  return g;
}

Bigraph identity(SigPtr sig, const Interface& f) {
  return tensor(idPlaces(sig, f.width), idWiring(sig, f.names));
}

Bigraph nameIntro(SigPtr sig, const std::vector<TypedName>& names) {
  Bigraph g = empty(std::move(sig));
  g.outer = iface(0, names);
  return g;
}

Bigraph closure(SigPtr sig, const TypedName& inner, NameType edgeType) {
  if (!subtype(inner.type, edgeType))
    fail(ErrorCode::TypeClash,
         "closure: cannot close " + show(inner) + " at type " + letterOf(edgeType));
  Bigraph g = empty(std::move(sig));
  g.inner = iface(0, {inner});
  g.edges[0] = edgeType;
  g.innerLinks[inner.name] = Link::toEdge(0);
  return g;
}

Bigraph closure(SigPtr sig, const TypedName& inner) { return closure(std::move(sig), inner, inner.type); }

Bigraph substitution(SigPtr sig, const TypedName& outer, const std::vector<TypedName>& inners) {
  Bigraph g = empty(std::move(sig));
  g.inner = iface(0, inners);
  g.outer = iface(0, {outer});
  for (const TypedName& tn : g.inner.names) {
    if (!subtype(tn.type, outer.type))
      fail(ErrorCode::TypeClash, "substitution: " + show(tn) + " under " + show(outer));
    g.innerLinks[tn.name] = Link::toOuter(outer.name);
  }
  return g;
}

Bigraph mergePlaces(SigPtr sig, int n) {
  Bigraph g = empty(std::move(sig));
  g.inner = iface(n, {});
  g.outer = iface(1, {});
  for (int i = 0; i < n; ++i) g.sites.push_back(Place::root(0));
  return g;
}

Bigraph permutation(SigPtr sig, const std::vector<int>& siteToRoot) {
  Bigraph g = empty(std::move(sig));
  int n = (int)siteToRoot.size();
  g.inner = iface(n, {});
  g.outer = iface(n, {});
  std::set<int> seen;
  for (int r : siteToRoot) {
    if (r < 0 || r >= n) fail(ErrorCode::WidthMismatch, "permutation: root index out of range");
    if (!seen.insert(r).second) fail(ErrorCode::BadGraph, "permutation: repeated root index");
    g.sites.push_back(Place::root(r));
  }
  return g;
}

Bigraph ion(SigPtr sig, const std::string& control, const std::vector<TypedName>& names) {
  const Control& c = sig->control(control);
  if ((int)names.size() != c.arity)
    fail(ErrorCode::BadGraph, "ion: control '" + control + "' has arity " +
                                  std::to_string(c.arity) + ", got " +
                                  std::to_string(names.size()) + " names");
  // repeats allowed, but a repeated name must keep one type
  std::vector<TypedName> outer;
  for (const TypedName& tn : names) {
    bool seen = false;
    for (const TypedName& o : outer) {
      if (o.name != tn.name) continue;
      if (o.type != tn.type)
        fail(ErrorCode::TypeClash, "ion: name '" + tn.name + "' used at two types");
      seen = true;
    }
    if (!seen) outer.push_back(tn);
  }
  Bigraph g = empty(sig);
  g.outer = iface(1, outer);
  Node n;
  n.id = 0;
  n.control = control;
  n.parent = Place::root(0);
  for (const TypedName& tn : names) n.ports.push_back(Link::toOuter(tn.name));
  g.nodes.push_back(std::move(n));
  if (c.activity != Activity::Atomic) {
    g.inner = iface(1, {});
    g.sites.push_back(Place::node(0));
  }
  return g;
}

Bigraph renumbered(const Bigraph& g, NodeId nodeBase, EdgeId edgeBase) {
  std::map<NodeId, NodeId> nm;
  std::map<EdgeId, EdgeId> em;
  for (const Node& n : g.nodes) {
    NodeId fresh = nodeBase + (NodeId)nm.size();
    nm[n.id] = fresh;
  }
  for (const auto& [e, t] : g.edges) {
    (void)t;
    EdgeId fresh = edgeBase + (EdgeId)em.size();
    em[e] = fresh;
  }
  auto mapPlace = [&](Place p) { return p.isRoot() ? p : Place::node(nm.at(p.at)); };
  auto mapLink = [&](Link l) { return l.isEdge() ? Link::toEdge(em.at(l.edge)) : l; };

  Bigraph r;
  r.sig = g.sig;
  r.inner = g.inner;
  r.outer = g.outer;
  for (const Node& n : g.nodes) {
    Node m = n;
    m.id = nm.at(n.id);
    m.parent = mapPlace(n.parent);
    for (Link& l : m.ports) l = mapLink(l);
    r.nodes.push_back(std::move(m));
  }
  std::sort(r.nodes.begin(), r.nodes.end(), [](const Node& a, const Node& b) { return a.id < b.id; });
  for (const Place& s : g.sites) r.sites.push_back(mapPlace(s));
  for (const auto& [e, t] : g.edges) r.edges[em.at(e)] = t;
  for (const auto& [x, l] : g.innerLinks) r.innerLinks[x] = mapLink(l);
  return r;
}

Bigraph compose(const Bigraph& g, const Bigraph& h) {
  sameSig(g, h, "compose");
  if (g.inner != h.outer) {
    ErrorCode c = g.inner.width != h.outer.width ? ErrorCode::WidthMismatch : ErrorCode::NameClash;
    fail(c, "compose: inner face " + show(g.inner) + " does not match outer face " + show(h.outer));
  }
  Bigraph hh = renumbered(h, g.maxNodeId() + 1, g.maxEdgeId() + 1);

  Bigraph r;
  r.sig = g.sig;
  r.outer = g.outer;
  r.inner = hh.inner;
  r.nodes = g.nodes;
  r.edges = g.edges;
  for (const auto& [e, t] : hh.edges) r.edges[e] = t;

  auto resolvePlace = [&](const Place& p) { return p.isRoot() ? g.sites[p.at] : p; };
  auto resolveLink = [&](const Link& l) { return l.isEdge() ? l : g.innerLinks.at(l.outer); };

  for (const Node& n : hh.nodes) {
    Node m = n;
    m.parent = resolvePlace(n.parent);
    for (Link& l : m.ports) l = resolveLink(l);
    r.nodes.push_back(std::move(m));
  }
  for (const Place& s : hh.sites) r.sites.push_back(resolvePlace(s));
  for (const auto& [x, l] : hh.innerLinks) r.innerLinks[x] = resolveLink(l);
  r.validate();
  return r;
}

// shared body of tensor and parallel
static Bigraph juxtapose(const Bigraph& g, const Bigraph& h, bool mergeOuter, const char* op) {
  sameSig(g, h, op);
  for (const TypedName& tn : h.inner.names)
    if (g.inner.has(tn.name))
      fail(ErrorCode::NameClash, std::string(op) + ": shared inner name '" + tn.name + "'");
  std::vector<TypedName> outerNames = g.outer.names;
  for (const TypedName& tn : h.outer.names) {
    const TypedName* have = g.outer.find(tn.name);
    if (have) {
      if (!mergeOuter)
        fail(ErrorCode::NameClash, std::string(op) + ": shared outer name '" + tn.name + "'");
      if (have->type != tn.type)
        fail(ErrorCode::TypeClash, std::string(op) + ": name '" + tn.name + "' at two types");
    } else {
      outerNames.push_back(tn);
    }
  }
  std::vector<TypedName> innerNames = g.inner.names;
  innerNames.insert(innerNames.end(), h.inner.names.begin(), h.inner.names.end());

  Bigraph hh = renumbered(h, g.maxNodeId() + 1, g.maxEdgeId() + 1);
  int rootShift = g.outer.width;
  auto shiftPlace = [&](Place p) { return p.isRoot() ? Place::root(p.at + rootShift) : p; };

  Bigraph r;
  r.sig = g.sig;
  r.outer = iface(g.outer.width + h.outer.width, std::move(outerNames));
  r.inner = iface(g.inner.width + h.inner.width, std::move(innerNames));
  r.nodes = g.nodes;
  for (const Node& n : hh.nodes) {
    Node m = n;
    m.parent = shiftPlace(n.parent);
    r.nodes.push_back(std::move(m));
  }
  r.sites = g.sites;
  for (const Place& s : hh.sites) r.sites.push_back(shiftPlace(s));
  r.edges = g.edges;
  for (const auto& [e, t] : hh.edges) r.edges[e] = t;
  r.innerLinks = g.innerLinks;
  for (const auto& [x, l] : hh.innerLinks) r.innerLinks[x] = l;
  r.validate();
  return r;
}

Bigraph tensor(const Bigraph& g, const Bigraph& h) { return juxtapose(g, h, false, "tensor"); }
Bigraph parallel(const Bigraph& g, const Bigraph& h) { return juxtapose(g, h, true, "parallel"); }

Bigraph primeProduct(const Bigraph& g, const Bigraph& h) {
  Bigraph p = parallel(g, h);
  Bigraph m = tensor(mergePlaces(p.sig, p.outer.width), idWiring(p.sig, p.outer.names));
  return compose(m, p);
}

Bigraph parallelAll(SigPtr sig, const std::vector<Bigraph>& gs) {
  Bigraph acc = empty(std::move(sig));
  for (const Bigraph& g : gs) acc = parallel(acc, g);
  return acc;
}

Bigraph primeAll(SigPtr sig, const std::vector<Bigraph>& gs) {
  Bigraph p = parallelAll(sig, gs);
  Bigraph m = tensor(mergePlaces(p.sig, p.outer.width), idWiring(p.sig, p.outer.names));
  return compose(m, p);
}

Bigraph closeName(const Bigraph& g, const std::string& name, NameType edgeType) {
  const TypedName* tn = g.outer.find(name);
  if (!tn) fail(ErrorCode::NotFound, "closeName: no outer name '" + name + "'");
  std::vector<TypedName> rest;
  for (const TypedName& o : g.outer.names)
    if (o.name != name) rest.push_back(o);
  Bigraph cl = closure(g.sig, *tn, edgeType);
  Bigraph keep = tensor(idPlaces(g.sig, g.outer.width), idWiring(g.sig, rest));
  return compose(tensor(cl, keep), g);
}

Bigraph closeName(const Bigraph& g, const std::string& name) {
  const TypedName* tn = g.outer.find(name);
  if (!tn) fail(ErrorCode::NotFound, "closeName: no outer name '" + name + "'");
  return closeName(g, name, tn->type);
}

Bigraph renameOuter(const Bigraph& g, const std::string& from, const TypedName& to) {
  const TypedName* tn = g.outer.find(from);
  if (!tn) fail(ErrorCode::NotFound, "renameOuter: no outer name '" + from + "'");
  std::vector<TypedName> rest;
  for (const TypedName& o : g.outer.names)
    if (o.name != from) rest.push_back(o);
  Bigraph sub = substitution(g.sig, to, {*tn});
  Bigraph keep = tensor(idPlaces(g.sig, g.outer.width), idWiring(g.sig, rest));
  return compose(tensor(sub, keep), g);
}

Bigraph lean(const Bigraph& g) {
  Bigraph r = g;
  std::set<EdgeId> used;
  for (const Node& n : r.nodes)
    for (const Link& l : n.ports)
      if (l.isEdge()) used.insert(l.edge);
  for (const auto& [x, l] : r.innerLinks) {
    (void)x;
    if (l.isEdge()) used.insert(l.edge);
  }
  for (auto it = r.edges.begin(); it != r.edges.end();)
    it = used.count(it->first) ? std::next(it) : r.edges.erase(it);
  return r;
}

}  // namespace biobig
