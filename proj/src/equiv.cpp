#include <algorithm>
#include <map>
#include <set>

#include "biobig/ops.hpp"

namespace biobig {

namespace {

// Backtracking search for a support bijection between two leaned graphs
// with equal interfaces.
struct EquivSearch {
  const Bigraph& a;
  const Bigraph& b;
  std::map<Place, std::vector<NodeId>> bKids;
  std::vector<NodeId> order;  // a-nodes, parents before children
  std::map<NodeId, NodeId> nmap;
  std::set<NodeId> nused;
  std::map<EdgeId, EdgeId> emap;
  std::set<EdgeId> eused;

  EquivSearch(const Bigraph& a_, const Bigraph& b_) : a(a_), b(b_) {
    bKids = childMap(b);
    auto aKids = childMap(a);
    std::vector<Place> queue;
    for (int r = 0; r < a.outer.width; ++r) queue.push_back(Place::root(r));
    for (size_t i = 0; i < queue.size(); ++i) {
      auto it = aKids.find(queue[i]);
      if (it == aKids.end()) continue;
      for (NodeId v : it->second) {
        order.push_back(v);
        queue.push_back(Place::node(v));
      }
    }
  }

  bool portsCompatible(const Node& av, const Node& bv, std::vector<EdgeId>& claimed) {
    for (size_t i = 0; i < av.ports.size(); ++i) {
      const Link& la = av.ports[i];
      const Link& lb = bv.ports[i];
      if (la.isEdge() != lb.isEdge()) return false;
      if (!la.isEdge()) {
        if (la.outer != lb.outer) return false;
        continue;
      }
      auto it = emap.find(la.edge);
      if (it != emap.end()) {
        if (it->second != lb.edge) return false;
      } else {
        if (eused.count(lb.edge)) return false;
        if (a.edges.at(la.edge) != b.edges.at(lb.edge)) return false;
        emap[la.edge] = lb.edge;
        eused.insert(lb.edge);
        claimed.push_back(la.edge);
      }
    }
    return true;
  }

  void unclaim(const std::vector<EdgeId>& claimed) {
    for (EdgeId e : claimed) {
      eused.erase(emap.at(e));
      emap.erase(e);
    }
  }

  bool finish() {
    // sites must sit at corresponding places
    for (size_t i = 0; i < a.sites.size(); ++i) {
      const Place& pa = a.sites[i];
      const Place& pb = b.sites[i];
      if (pa.isRoot() != pb.isRoot()) return false;
      if (pa.isRoot() ? pa.at != pb.at : nmap.at(pa.at) != pb.at) return false;
    }
    // inner names must reach corresponding links
    std::vector<EdgeId> claimed;
    bool ok = true;
    for (const auto& [x, la] : a.innerLinks) {
      const Link& lb = b.innerLinks.at(x);
      if (la.isEdge() != lb.isEdge()) { ok = false; break; }
      if (!la.isEdge()) {
        if (la.outer != lb.outer) { ok = false; break; }
        continue;
      }
      auto it = emap.find(la.edge);
      if (it != emap.end()) {
        if (it->second != lb.edge) { ok = false; break; }
      } else {
        if (eused.count(lb.edge) || a.edges.at(la.edge) != b.edges.at(lb.edge)) { ok = false; break; }
        emap[la.edge] = lb.edge;
        eused.insert(lb.edge);
        claimed.push_back(la.edge);
      }
    }
    // every edge mapped, with matching point counts
    if (ok && emap.size() != a.edges.size()) ok = false;
    if (ok) {
      for (const auto& [ea, eb] : emap)
        if (a.pointCount(Link::toEdge(ea)) != b.pointCount(Link::toEdge(eb))) { ok = false; break; }
    }
    unclaim(claimed);
    return ok;
  }

  bool search(size_t k) {
    if (k == order.size()) return finish();
    const Node& av = a.node(order[k]);
    Place want = av.parent.isRoot() ? av.parent : Place::node(nmap.at(av.parent.at));
    auto it = bKids.find(want);
    if (it == bKids.end()) return false;
    for (NodeId cand : it->second) {
      if (nused.count(cand)) continue;
      const Node& bv = b.node(cand);
      if (bv.control != av.control) continue;
      std::vector<EdgeId> claimed;
      if (!portsCompatible(av, bv, claimed)) {
        unclaim(claimed);
        continue;
      }
      nmap[av.id] = cand;
      nused.insert(cand);
      if (search(k + 1)) return true;
      nused.erase(cand);
      nmap.erase(av.id);
      unclaim(claimed);
    }
    return false;
  }
};

}  // namespace

bool supportEquiv(const Bigraph& A, const Bigraph& B) {
  Bigraph a = lean(A), b = lean(B);
  if (a.inner != b.inner || a.outer != b.outer) return false;
  if (a.nodes.size() != b.nodes.size() || a.edges.size() != b.edges.size()) return false;
  auto controlBag = [](const Bigraph& g) {
    std::multiset<std::string> m;
    for (const Node& n : g.nodes) m.insert(n.control);
    return m;
  };
  if (controlBag(a) != controlBag(b)) return false;
  auto edgeBag = [](const Bigraph& g) {
    std::multiset<NameType> m;
    for (const auto& [e, t] : g.edges) {
      (void)e;
      m.insert(t);
    }
    return m;
  };
  if (edgeBag(a) != edgeBag(b)) return false;
  EquivSearch s(a, b);
  if (s.order.size() != a.nodes.size()) return false;  // unreachable nodes (can't happen on valid graphs)
  return s.search(0);
}

DiscreteDecomposition discreteDecompose(const Bigraph& s) {
  std::set<std::string> taken;
  for (const TypedName& tn : s.outer.names) taken.insert(tn.name);
  for (const TypedName& tn : s.inner.names) taken.insert(tn.name);
  int k = 0;
  auto fresh = [&]() {
    std::string z;
    do {
      z = "z" + std::to_string(k++);
    } while (taken.count(z));
    return z;
  };

  Bigraph d = s;
  d.edges.clear();
  std::vector<TypedName> zNames;
  std::map<std::string, Link> wire;  // fresh name -> original link

  for (Node& n : d.nodes) {
    for (size_t i = 0; i < n.ports.size(); ++i) {
      std::string z = fresh();
      wire[z] = n.ports[i];
      n.ports[i] = Link::toOuter(z);
      zNames.push_back({z, NameType::Free});
    }
  }
  // inner names pass through on their own fresh names; they keep their type
  // so the passthrough stays well-typed.
  for (const TypedName& tn : s.inner.names) {
    std::string z = fresh();
    wire[z] = s.innerLinks.at(tn.name);
    d.innerLinks[tn.name] = Link::toOuter(z);
    zNames.push_back({z, tn.type});
  }
  d.outer = iface(s.outer.width, zNames);
  d.validate();

  Bigraph w;
  w.sig = s.sig;
  w.outer = s.outer;
  w.inner = d.outer;
  for (int i = 0; i < s.outer.width; ++i) w.sites.push_back(Place::root(i));
  w.edges = s.edges;
  w.innerLinks = std::move(wire);
  w.validate();
  return {std::move(w), std::move(d)};
}

}  // namespace biobig
