#pragma once

#include <map>
#include <optional>

#include "biobig/signature.hpp"

namespace biobig {

using NodeId = std::int32_t;
using EdgeId = std::int32_t;

/** A place: a root (by ordinal) or a node (by id). */
struct Place {
  enum class Kind : std::uint8_t { Root, Node };
  Kind kind = Kind::Root;
  std::int32_t at = 0;
  static Place root(int r) { return Place{Kind::Root, r}; }
  static Place node(NodeId n) { return Place{Kind::Node, n}; }
  bool isRoot() const { return kind == Kind::Root; }
  auto operator<=>(const Place&) const = default;
};

/** A link: a closed edge (by id) or an outer name. */
struct Link {
  enum class Kind : std::uint8_t { Edge, Outer };
  Kind kind = Kind::Edge;
  EdgeId edge = -1;
  std::string outer;
  static Link toEdge(EdgeId e) {
    Link l;
    l.kind = Kind::Edge;
    l.edge = e;
    return l;
  }
  static Link toOuter(std::string n) {
    Link l;
    l.kind = Kind::Outer;
    l.outer = std::move(n);
    return l;
  }
  bool isEdge() const { return kind == Kind::Edge; }
  auto operator<=>(const Link&) const = default;
};

struct Node {
  NodeId id = -1;
  std::string control;
  Place parent;
  std::vector<Link> ports;  // size == arity of the control
};

struct PortRef {
  NodeId node = -1;
  int port = 0;
  auto operator<=>(const PortRef&) const = default;
};

/** A concrete bigraph over a shared signature: a forest of places (roots,
    nodes, sites) and a link structure (edges, outer names, inner names)
    with typed names.  Values are built by the constructors in ops.hpp or
    the term parser and treated as immutable afterwards. */
struct Bigraph {
  SigPtr sig;
  Interface inner, outer;
  std::vector<Node> nodes;                 // sorted by id
  std::vector<Place> sites;                // size == inner.width
  std::map<EdgeId, NameType> edges;
  std::map<std::string, Link> innerLinks;  // one entry per inner name

  const Node* findNode(NodeId id) const;
  const Node& node(NodeId id) const;  // throws NotFound
  const Control& controlOf(const Node& n) const { return sig->control(n.control); }
  NodeId maxNodeId() const;
  EdgeId maxEdgeId() const;
  bool isGround() const { return inner.width == 0 && inner.names.empty(); }

  std::vector<PortRef> portsOf(const Link&) const;
  std::vector<std::string> innerNamesOf(const Link&) const;
  int pointCount(const Link&) const;
  NameType typeOf(const Link&) const;  // edge type or outer name type

  std::vector<NodeId> childrenOf(Place) const;
  std::vector<int> sitesOf(Place) const;
  int depthOf(Place) const;                       // number of node ancestors
  std::vector<NodeId> ancestorsOf(NodeId) const;  // nearest first
  int rootOf(Place) const;                        // index of the root above

  void validate() const;  // throws Error when malformed
};

std::map<Place, std::vector<NodeId>> childMap(const Bigraph&);

}  // namespace biobig
