#pragma once

#include <string>

#include "biobig/bigraph.hpp"

namespace biobig {

/// Renders a bigraph as Graphviz source (an undirected `graph`).
///
/// - every root is a dashed cluster; every node with children is a cluster
///   holding an anchor node, leaf nodes are ordinary boxes;
/// - sites are dotted boxes labelled `s0`, `s1`, ...;
/// - a 2-point link is drawn as a direct edge labelled with its type letter,
///   any other link gets a small junction point;
/// - outer names appear as plaintext nodes.
///
/// The output is deterministic for a given bigraph.
std::string toDot(const Bigraph& g, const std::string& name = "G");

}  // namespace biobig
