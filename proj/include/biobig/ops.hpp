#pragma once

#include "biobig/bigraph.hpp"

namespace biobig {

// ---- elementary bigraphs ----------------------------------------------

Bigraph empty(SigPtr);     // ⟨0,∅⟩ → ⟨0,∅⟩
Bigraph unitRoot(SigPtr);  // one empty root (the term "1")
Bigraph idPlaces(SigPtr, int n);
Bigraph idWiring(SigPtr, const std::vector<TypedName>&);
Bigraph identity(SigPtr, const Interface&);
Bigraph nameIntro(SigPtr, const std::vector<TypedName>&);  // idle outer names

// Close an inner name into a fresh edge of the given type (inner.type must
// be attachable to edgeType).
Bigraph closure(SigPtr, const TypedName& inner, NameType edgeType);
Bigraph closure(SigPtr, const TypedName& inner);

// All inner names routed to one outer name.
Bigraph substitution(SigPtr, const TypedName& outer, const std::vector<TypedName>& inners);

Bigraph mergePlaces(SigPtr, int n);  // ⟨n,∅⟩ → ⟨1,∅⟩
// ⟨n,∅⟩ → ⟨n,∅⟩ with site i placed under root siteToRoot[i].
Bigraph permutation(SigPtr, const std::vector<int>& siteToRoot);

// A single node at a fresh root, ports attached to the given outer names in
// order (repeats allowed).  Non-atomic controls get one site inside.
Bigraph ion(SigPtr, const std::string& control, const std::vector<TypedName>& names);

// ---- categorical operations -------------------------------------------

Bigraph compose(const Bigraph& g, const Bigraph& h);  // g ∘ h
Bigraph tensor(const Bigraph& g, const Bigraph& h);
// Like tensor but shared outer names are merged (same type required).
Bigraph parallel(const Bigraph& g, const Bigraph& h);
// parallel, then all roots merged into one.
Bigraph primeProduct(const Bigraph& g, const Bigraph& h);
Bigraph parallelAll(SigPtr, const std::vector<Bigraph>&);
Bigraph primeAll(SigPtr, const std::vector<Bigraph>&);

// Conveniences built from the operations above.
Bigraph closeName(const Bigraph&, const std::string& name, NameType edgeType);
Bigraph closeName(const Bigraph&, const std::string& name);
Bigraph renameOuter(const Bigraph&, const std::string& from, const TypedName& to);

// Support translation: node and edge ids shifted to the given bases.
Bigraph renumbered(const Bigraph&, NodeId nodeBase, EdgeId edgeBase);

// ---- equivalence and decomposition ------------------------------------

Bigraph lean(const Bigraph&);  // drop edges with no points

// Support equivalence after leaning: identical interfaces, a
// control/parent/link-preserving bijection of nodes and edges.
bool supportEquiv(const Bigraph&, const Bigraph&);

/** wiring ∘ discrete ≅ the original graph; discrete has every port on its
    own fresh outer name (Free-typed, z0, z1, … in node/port order). */
struct DiscreteDecomposition {
  Bigraph wiring, discrete;
};
DiscreteDecomposition discreteDecompose(const Bigraph&);

}  // namespace biobig
