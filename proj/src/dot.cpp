#include "biobig/dot.hpp"

#include <map>
#include <sstream>
#include <vector>

namespace biobig {

namespace {

std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

struct DotWriter {
  const Bigraph& g;
  std::ostringstream os;

  // the graphviz id that an edge should attach to for a given node
  std::string anchorOf(NodeId id) const {
    bool cluster = !g.childrenOf(Place::node(id)).empty() || !g.sitesOf(Place::node(id)).empty();
    return (cluster ? "a" : "n") + std::to_string(id);
  }

  void emitPlace(Place p, int indent) {
    std::string pad(indent, ' ');
    for (NodeId c : g.childrenOf(p)) {
      const Node& n = g.node(c);
      bool cluster = !g.childrenOf(Place::node(c)).empty() || !g.sitesOf(Place::node(c)).empty();
      if (cluster) {
        os << pad << "subgraph cluster_n" << c << " {\n";
        os << pad << "  label=\"" << esc(n.control) << "\";\n";
        os << pad << "  a" << c << " [shape=point, style=invis];\n";
        emitPlace(Place::node(c), indent + 2);
        os << pad << "}\n";
      } else {
        os << pad << "n" << c << " [shape=box, label=\"" << esc(n.control) << "\"];\n";
      }
    }
    for (int s : g.sitesOf(p))
      os << pad << "s" << s << " [shape=box, style=dotted, label=\"s" << s << "\"];\n";
  }

  std::string run(const std::string& name) {
    os << "graph \"" << esc(name) << "\" {\n";
    os << "  compound=true;\n";
    for (int r = 0; r < g.outer.width; ++r) {
      os << "  subgraph cluster_r" << r << " {\n";
      os << "    label=\"root " << r << "\";\n";
      os << "    style=dashed;\n";
      emitPlace(Place::root(r), 4);
      os << "  }\n";
    }
    for (const TypedName& tn : g.outer.names)
      os << "  x_" << esc(tn.name) << " [shape=plaintext, label=\"" << esc(show(tn)) << "\"];\n";

    // gather points per link
    std::map<Link, std::vector<std::string>> points;
    for (const Node& n : g.nodes)
      for (const Link& l : n.ports) points[l].push_back(anchorOf(n.id));
    for (const auto& [x, l] : g.innerLinks) {
      os << "  i_" << esc(x) << " [shape=plaintext, label=\"" << esc(x) << "\"];\n";
      points[l].push_back("i_" + x);
    }
    for (const auto& [e, t] : g.edges) (void)t, points[Link::toEdge(e)];
    for (const TypedName& tn : g.outer.names) points[Link::toOuter(tn.name)];

    for (const auto& [l, pts] : points) {
      std::string label = l.isEdge() ? std::string(1, letterOf(g.edges.at(l.edge)))
                                     : std::string(1, letterOf(g.outer.find(l.outer)->type));
      if (!l.isEdge()) {
        for (const std::string& p : pts)
          os << "  " << p << " -- x_" << esc(l.outer) << " [style=dashed];\n";
        continue;
      }
      if (pts.size() == 2) {
        os << "  " << pts[0] << " -- " << pts[1] << " [label=\"" << label << "\"];\n";
        continue;
      }
      std::string hub = "e" + std::to_string(l.edge);
      os << "  " << hub << " [shape=point, label=\"\", xlabel=\"" << label << "\"];\n";
      for (const std::string& p : pts) os << "  " << p << " -- " << hub << ";\n";
    }
    os << "}\n";
    return os.str();
  }
};

}  // namespace

std::string toDot(const Bigraph& g, const std::string& name) {
  DotWriter w{g};
  return w.run(name);
}

}  // namespace biobig
