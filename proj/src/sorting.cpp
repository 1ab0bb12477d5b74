#include "biobig/sorting.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace biobig {

namespace {

std::string nodeW(NodeId n) { return "n" + std::to_string(n); }

std::string linkW(const Bigraph& g, const Link& l) {
  (void)g;
  return l.isEdge() ? "e" + std::to_string(l.edge) : l.outer;
}

struct Checker {
  const Bigraph& g;
  std::vector<Violation> out;

  void add(std::string pred, std::vector<std::string> wit, std::string msg) {
    std::sort(wit.begin(), wit.end());
    out.push_back({std::move(pred), std::move(wit), std::move(msg)});
  }

  std::vector<Link> allLinks() const {
    std::vector<Link> ls;
    for (const auto& [e, t] : g.edges) (void)t, ls.push_back(Link::toEdge(e));
    for (const TypedName& tn : g.outer.names) ls.push_back(Link::toOuter(tn.name));
    return ls;
  }

  bool touchesMobility(const Link& l) const {
    for (const PortRef& p : g.portsOf(l))
      if (isMobility(g.controlOf(g.node(p.node)))) return true;
    return false;
  }

  void cardinality(const Link& l) {
    NameType t = g.typeOf(l);
    int pts = g.pointCount(l);
    bool bondLike = t == NameType::Bond || t == NameType::Free;
    if (l.isEdge()) {
      if (bondLike ? (pts < 1 || pts > 2) : (pts != 1))
        add("link-cardinality", {linkW(g, l)},
            std::string("a closed ") + letterOf(t) + "-typed link carries " +
                std::to_string(pts) + " points");
    } else {
      if (bondLike ? (pts > 2) : (pts > 1))
        add("link-cardinality", {linkW(g, l)},
            std::string("the ") + letterOf(t) + "-typed name '" + l.outer + "' carries " +
                std::to_string(pts) + " points");
    }
  }

  // membrane layers crossed walking from a node up to (excluding) a place
  int crossings(NodeId from, Place stop) const {
    int count = 0;
    Place p = g.node(from).parent;
    while (!p.isRoot() && p != stop) {
      if (isMembrane(g.controlOf(g.node(p.at)))) ++count;
      p = g.node(p.at).parent;
    }
    return count;
  }

  void impermeability(const Link& l) {
    std::vector<PortRef> ports = g.portsOf(l);
    for (size_t i = 0; i < ports.size(); ++i)
      for (size_t j = i + 1; j < ports.size(); ++j) {
        NodeId a = ports[i].node, b = ports[j].node;
        if (a == b) continue;  // two ports of one node cross nothing
        if (g.rootOf(Place::node(a)) != g.rootOf(Place::node(b))) continue;
        // meet: deepest common ancestor place
        std::vector<NodeId> upA = g.ancestorsOf(a);
        std::set<NodeId> setA(upA.begin(), upA.end());
        setA.insert(a);
        Place meet = Place::root(g.rootOf(Place::node(a)));
        for (Place p = Place::node(b); !p.isRoot(); p = g.node(p.at).parent)
          if (setA.count(p.at)) {
            meet = p;
            break;
          }
        int ca = meet == Place::node(a) ? 0 : crossings(a, meet);
        int cb = meet == Place::node(b) ? 0 : crossings(b, meet);
        if (meet == Place::node(a) || meet == Place::node(b)) {
          // one endpoint inside the other: count layers on the inner path only
          NodeId inner = meet == Place::node(a) ? b : a;
          ca = crossings(inner, meet);
          if (isMembrane(g.controlOf(g.node(meet.at)))) ++ca;
          cb = 0;
        }
        if (!(ca + cb <= 1 || (ca == 1 && cb == 1)))
          add("impermeability", {linkW(g, l), nodeW(a), nodeW(b)},
              "link crosses " + std::to_string(ca) + "+" + std::to_string(cb) +
                  " membrane layers");
      }
  }

  void polarity() {
    for (const Node& n : g.nodes) {
      Polarity parentPol = Polarity::Apolar;
      if (!n.parent.isRoot()) {
        const Control& pc = g.controlOf(g.node(n.parent.at));
        if (isMobility(pc)) continue;  // frozen content
        parentPol = pc.polarity;
      }
      if (g.controlOf(n).polarity == parentPol)
        add("polarity", {nodeW(n.id)},
            std::string("'") + n.control + "' sits under a parent of the same polarity");
    }
  }

  void bilayer() {
    for (const Node& n : g.nodes) {
      const Control& c = g.controlOf(n);
      if (!isMembrane(c)) continue;
      if (c.polarity == Polarity::Polar) {  // outward layer
        int cys = 0;
        for (NodeId k : g.childrenOf(Place::node(n.id)))
          if (g.node(k).control == MCys) ++cys;
        if (cys != 1)
          add("bilayer", {nodeW(n.id)},
              "outward membrane layer holds " + std::to_string(cys) +
                  " cytosol-facing layers");
      } else {
        if (n.parent.isRoot() || g.node(n.parent.at).control != MExt)
          add("bilayer", {nodeW(n.id)},
              "cytosol-facing layer does not sit in an outward layer");
      }
    }
  }

  // designated port pairs for mobility links
  static bool allowedPair(const std::string& ca, int pa, const std::string& cb, int pb) {
    auto is = [&](const std::string& c1, int p1, const std::string& c2, int p2) {
      return (ca == c1 && pa == p1 && cb == c2 && pb == p2) ||
             (ca == c2 && pa == p2 && cb == c1 && pb == p1);
    };
    return is(PC, 0, PM, 0) || is(PM, 1, PD, 0) || is(FC, 0, FM, 0) || is(FM, 1, FD, 0);
  }

  void mobilityLinks() {
    for (const Link& l : allLinks()) {
      if (!touchesMobility(l)) continue;
      std::vector<PortRef> ports = g.portsOf(l);
      if (!l.isEdge()) {
        add("mobility-links", {linkW(g, l)}, "mobility link is not closed");
        continue;
      }
      if (g.typeOf(l) != NameType::Hidden) {
        add("mobility-links", {linkW(g, l)},
            std::string("mobility link is typed ") + letterOf(g.typeOf(l)) +
                ", expected h");
        continue;
      }
      if (!g.innerNamesOf(l).empty()) {
        add("mobility-links", {linkW(g, l)}, "mobility link reaches the inner face");
        continue;
      }
      bool foreign = false;
      for (const PortRef& p : ports)
        if (!isMobility(g.controlOf(g.node(p.node)))) foreign = true;
      if (foreign) {
        add("mobility-links", {linkW(g, l)},
            "mobility link shared with a non-mobility control");
        continue;
      }
      if (ports.size() != 2) {
        add("mobility-links", {linkW(g, l)},
            "mobility link carries " + std::to_string(ports.size()) + " points, expected 2");
        continue;
      }
      const Node& a = g.node(ports[0].node);
      const Node& b = g.node(ports[1].node);
      if (!allowedPair(a.control, ports[0].port, b.control, ports[1].port))
        add("mobility-links", {linkW(g, l), nodeW(a.id), nodeW(b.id)},
            "mobility link joins '" + a.control + "'." + std::to_string(ports[0].port) +
                " with '" + b.control + "'." + std::to_string(ports[1].port));
    }
  }

  // the node at the far end of a well-formed mobility link, if any
  const Node* peerOf(const Node& n, int port) const {
    const Link& l = n.ports[port];
    if (!l.isEdge()) return nullptr;
    std::vector<PortRef> ports = g.portsOf(l);
    if (ports.size() != 2 || !g.innerNamesOf(l).empty()) return nullptr;
    for (const PortRef& p : ports)
      if (p.node != n.id || p.port != port) return &g.node(p.node);
    return nullptr;  // self-link
  }

  void mobilityDirection() {
    for (const Node& n : g.nodes) {
      if (n.control != PM && n.control != FM) continue;
      const Node* mext = nullptr;
      for (NodeId a : g.ancestorsOf(n.id))
        if (g.node(a).control == MExt) {
          mext = &g.node(a);
          break;
        }
      if (!mext) {
        add("mobility-direction", {nodeW(n.id)},
            "'" + n.control + "' is not inside an outward membrane layer");
        continue;
      }
      NodeId cys = -1;
      int cysCount = 0;
      for (NodeId k : g.childrenOf(Place::node(mext->id)))
        if (g.node(k).control == MCys) cys = k, ++cysCount;
      if (cysCount != 1) continue;  // bilayer already reports this
      const Node* c = peerOf(n, 0);
      const Node* d = peerOf(n, 1);
      if (!c || !d) continue;  // mobility-links already reports this
      std::set<Place> got{c->parent, d->parent};
      std::set<Place> want{mext->parent, Place::node(cys)};
      if (got != want)
        add("mobility-direction", {nodeW(n.id), nodeW(c->id), nodeW(d->id)},
            "'" + n.control + "' partners do not sit on the two sides of its membrane");
    }
  }

  void mobilityNesting() {
    for (const Node& n : g.nodes) {
      if (!isMobility(g.controlOf(n))) continue;
      for (NodeId a : g.ancestorsOf(n.id))
        if (isMobility(g.controlOf(g.node(a))))
          add("mobility-nesting", {nodeW(n.id), nodeW(a)},
              "'" + n.control + "' nests inside '" + g.node(a).control + "'");
    }
  }

  void fuseShape() {
    for (const Node& n : g.nodes) {
      if (n.control != FC) continue;
      auto kids = g.childrenOf(Place::node(n.id));
      bool ok = kids.size() == 1 && g.node(kids[0]).control == MExt &&
                g.sitesOf(Place::node(n.id)).empty();
      if (!ok)
        add("fuse-shape", {nodeW(n.id)},
            "fuse carrier must hold exactly one outward membrane layer");
    }
  }
};

void sortViolations(std::vector<Violation>& v) {
  std::sort(v.begin(), v.end(), [](const Violation& a, const Violation& b) {
    return std::tie(a.predicate, a.witnesses, a.message) <
           std::tie(b.predicate, b.witnesses, b.message);
  });
}

}  // namespace

std::string showViolation(const Violation& v) {
  std::ostringstream os;
  os << v.predicate << '\t';
  for (size_t i = 0; i < v.witnesses.size(); ++i) {
    if (i) os << ',';
    os << v.witnesses[i];
  }
  os << '\t' << v.message;
  return os.str();
}

std::vector<Violation> checkProtSol(const Bigraph& g) {
  Checker c{g};
  for (const Link& l : c.allLinks()) c.cardinality(l);
  sortViolations(c.out);
  return c.out;
}

std::vector<Violation> checkBio(const Bigraph& g) {
  Checker c{g};
  for (const Link& l : c.allLinks()) {
    if (!c.touchesMobility(l)) c.cardinality(l);
    c.impermeability(l);
  }
  c.polarity();
  c.mobilityLinks();
  c.mobilityNesting();
  if (g.sites.empty()) {
    c.bilayer();
    c.mobilityDirection();
    c.fuseShape();
  }
  sortViolations(c.out);
  return c.out;
}

}  // namespace biobig
