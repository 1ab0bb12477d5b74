#include "biobig/bigraph.hpp"

#include <algorithm>
#include <set>

namespace biobig {

const Node* Bigraph::findNode(NodeId id) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), id,
                             [](const Node& n, NodeId i) { return n.id < i; });
  if (it != nodes.end() && it->id == id) return &*it;
  return nullptr;
}

const Node& Bigraph::node(NodeId id) const {
  const Node* n = findNode(id);
  if (!n) fail(ErrorCode::NotFound, "no node n" + std::to_string(id));
  return *n;
}

NodeId Bigraph::maxNodeId() const { return nodes.empty() ? -1 : nodes.back().id; }

EdgeId Bigraph::maxEdgeId() const { return edges.empty() ? -1 : edges.rbegin()->first; }

std::vector<PortRef> Bigraph::portsOf(const Link& l) const {
  std::vector<PortRef> out;
  for (const Node& n : nodes)
    for (int i = 0; i < (int)n.ports.size(); ++i)
      if (n.ports[i] == l) out.push_back({n.id, i});
  return out;
}

std::vector<std::string> Bigraph::innerNamesOf(const Link& l) const {
  std::vector<std::string> out;
  for (const auto& [x, t] : innerLinks)
    if (t == l) out.push_back(x);
  return out;
}

int Bigraph::pointCount(const Link& l) const {
  return (int)portsOf(l).size() + (int)innerNamesOf(l).size();
}

NameType Bigraph::typeOf(const Link& l) const {
  if (l.isEdge()) {
    auto it = edges.find(l.edge);
    if (it == edges.end()) fail(ErrorCode::NotFound, "no edge e" + std::to_string(l.edge));
    return it->second;
  }
  const TypedName* tn = outer.find(l.outer);
  if (!tn) fail(ErrorCode::NotFound, "no outer name '" + l.outer + "'");
  return tn->type;
}

std::vector<NodeId> Bigraph::childrenOf(Place p) const {
  std::vector<NodeId> out;
  for (const Node& n : nodes)
    if (n.parent == p) out.push_back(n.id);
  return out;
}

std::vector<int> Bigraph::sitesOf(Place p) const {
  std::vector<int> out;
  for (int i = 0; i < (int)sites.size(); ++i)
    if (sites[i] == p) out.push_back(i);
  return out;
}

int Bigraph::depthOf(Place p) const {
  int d = 0;
  while (!p.isRoot()) {
    p = node(p.at).parent;
    ++d;
  }
  return d;
}

std::vector<NodeId> Bigraph::ancestorsOf(NodeId id) const {
  std::vector<NodeId> out;
  Place p = node(id).parent;
  while (!p.isRoot()) {
    out.push_back(p.at);
    p = node(p.at).parent;
  }
  return out;
}

int Bigraph::rootOf(Place p) const {
  while (!p.isRoot()) p = node(p.at).parent;
  return p.at;
}

std::map<Place, std::vector<NodeId>> childMap(const Bigraph& g) {
  std::map<Place, std::vector<NodeId>> m;
  for (const Node& n : g.nodes) m[n.parent].push_back(n.id);
  return m;
}

void Bigraph::validate() const {
  if (!sig) fail(ErrorCode::BadGraph, "bigraph without signature");
  if (inner.width != (int)sites.size())
    fail(ErrorCode::WidthMismatch, "inner width " + std::to_string(inner.width) + " but " +
                                       std::to_string(sites.size()) + " sites");
  for (size_t i = 1; i < nodes.size(); ++i)
    if (nodes[i].id <= nodes[i - 1].id) fail(ErrorCode::BadGraph, "node ids not strictly sorted");

  auto checkPlace = [&](const Place& p, const char* what) {
    if (p.isRoot()) {
      if (p.at < 0 || p.at >= outer.width)
        fail(ErrorCode::BadGraph, std::string(what) + ": root index out of range");
    } else if (!findNode(p.at)) {
      fail(ErrorCode::BadGraph, std::string(what) + ": no parent node n" + std::to_string(p.at));
    }
  };
  auto checkLinkTarget = [&](const Link& l, NameType pointType, const char* what) {
    if (l.isEdge()) {
      auto it = edges.find(l.edge);
      if (it == edges.end())
        fail(ErrorCode::BadGraph, std::string(what) + ": no edge e" + std::to_string(l.edge));
      if (!subtype(pointType, it->second))
        fail(ErrorCode::TypeClash, std::string(what) + ": point of type " +
                                       std::string(1, letterOf(pointType)) +
                                       " on edge of type " + letterOf(it->second));
    } else {
      const TypedName* tn = outer.find(l.outer);
      if (!tn) fail(ErrorCode::BadGraph, std::string(what) + ": no outer name '" + l.outer + "'");
      if (!subtype(pointType, tn->type))
        fail(ErrorCode::TypeClash, std::string(what) + ": point of type " +
                                       std::string(1, letterOf(pointType)) + " on name '" +
                                       l.outer + ":" + letterOf(tn->type) + "'");
    }
  };

  for (const auto& [e, t] : edges) {
    (void)e;
    if (t == NameType::Free) fail(ErrorCode::TypeClash, "edge typed f is not allowed");
  }

  for (const Node& n : nodes) {
    const Control& c = sig->control(n.control);  // throws NotFound when unknown
    if ((int)n.ports.size() != c.arity)
      fail(ErrorCode::BadGraph, "node n" + std::to_string(n.id) + " has " +
                                    std::to_string(n.ports.size()) + " ports, control '" + c.name +
                                    "' has arity " + std::to_string(c.arity));
    checkPlace(n.parent, "node parent");
    for (const Link& l : n.ports) checkLinkTarget(l, NameType::Free, "port");
  }

  // acyclicity of the parent map
  for (const Node& n : nodes) {
    std::set<NodeId> seen;
    Place p = n.parent;
    while (!p.isRoot()) {
      if (!seen.insert(p.at).second)
        fail(ErrorCode::BadGraph, "parent cycle at n" + std::to_string(p.at));
      p = node(p.at).parent;
    }
  }

  for (const Place& s : sites) checkPlace(s, "site parent");

  // atomic controls hold nothing
  for (const Node& n : nodes) {
    if (controlOf(n).activity != Activity::Atomic) continue;
    Place here = Place::node(n.id);
    if (!childrenOf(here).empty() || !sitesOf(here).empty())
      fail(ErrorCode::BadGraph,
           "atomic node n" + std::to_string(n.id) + " ('" + n.control + "') has contents");
  }

  // inner names: exactly one entry each, well-typed targets
  if (innerLinks.size() != inner.names.size())
    fail(ErrorCode::BadGraph, "inner link map does not cover the inner names");
  for (const TypedName& tn : inner.names) {
    auto it = innerLinks.find(tn.name);
    if (it == innerLinks.end())
      fail(ErrorCode::BadGraph, "inner name '" + tn.name + "' has no link");
    checkLinkTarget(it->second, tn.type, ("inner name '" + tn.name + "'").c_str());
  }
}

}  // namespace biobig
