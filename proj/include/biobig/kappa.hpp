#pragma once

#include <set>

#include "biobig/bigraph.hpp"

namespace biobig {

/** One interaction site of a protein: hidden (folded away), visible
    (available), or bound to a named bond. */
struct KSite {
  enum class State : std::uint8_t { Hidden, Visible, Bound };
  State state = State::Visible;
  std::string bond;  // set iff state == Bound
  bool operator==(const KSite&) const = default;
};

struct KAtom {
  std::string name;          // control
  std::vector<KSite> sites;  // size == arity
  bool operator==(const KAtom&) const = default;
};

/** A solution term: the inert solution, a single protein, a grouping, or a
    solution under bond binders. */
struct KSolution {
  enum class Kind : std::uint8_t { Zero, Atom, Group, Restrict };
  Kind kind = Kind::Zero;
  KAtom atom;                   // Atom
  std::vector<KSolution> parts; // Group, Restrict (Restrict holds one part)
  std::vector<std::string> binders;  // Restrict

  static KSolution zero() { return {}; }
  static KSolution mk(KAtom a);
  static KSolution group(std::vector<KSolution>);
  static KSolution restrict(std::vector<std::string> binders, KSolution body);
};

/** Flattened form: binders (each actually used, canonically renamed when
    produced by normalize) over a multiset of atoms. */
struct KNormal {
  std::vector<std::string> binders;
  std::vector<KAtom> atoms;
};

/// Flattens groups, hoists binders (renaming them apart) and drops binders
/// that bind nothing, so (x)S collapses to S whenever x is unused.
KNormal normalize(const KSolution&);

std::set<std::string> freeNames(const KSolution&);
std::set<std::string> freeNames(const KNormal&);
bool hasRestriction(const KSolution&);

/// Structural equivalence: equal up to grouping, atom order, binder order,
/// renaming of bound names, and unused binders.
bool structEquiv(const KSolution&, const KSolution&);

/// Every name occurs at most twice and every bound name exactly twice.
bool isGraphLike(const KSolution&);

/// At least one protein, and the proteins form one connected complex
/// through shared names.
bool isConnected(const KSolution&);

/** The growth preorder on solutions: T extends S when S's proteins embed
    injectively into T's with each site either kept, a hidden site possibly
    revealed, a visible site possibly hidden or newly bound to a name from
    `fresh`, and every extra protein or name of T drawn from `fresh`.
    Solutions must be restriction-free. */
bool growsSolution(const std::vector<std::string>& fresh, const KSolution& s,
                   const KSolution& t);

/** A reaction over solutions.  For a forward (complexing) rule the
    right-hand side extends the left under the fresh bond names; an
    antimonotone (decomplexing) rule is the exact reverse.  lhs and rhs are
    restriction-free; `fresh` names the bonds created (forward) or dissolved
    (reverse). */
struct KappaRule {
  std::string name;
  bool antimonotone = false;
  KSolution lhs;
  std::vector<std::string> fresh;
  KSolution rhs;
};

KappaRule reversed(const KappaRule&);  // swaps the orientation

/** Checks the well-formedness of a forward rule: the right-hand side grows
    from the left, both sides are graph-like (the right under its fresh
    binders), the right-hand side is connected, and the fresh names avoid
    the left.  For an antimonotone rule the same conditions hold of its
    reverse. */
bool isWellFormedRule(const KappaRule&);

/** All solutions reachable from s in one application of the rule, up to
    structural equivalence. */
std::vector<KSolution> kappaStep(const KSolution& s, const KappaRule& rule);

// ---- concrete syntax ----------------------------------------------------
//
//   solution := '0' | part (',' part)*
//   part     := NAME '(' site (',' site)* ')'          a protein
//             | '(' NAME (',' NAME)* ')' '(' solution ')'   binders
//             | '(' solution ')'                       grouping
//   site     := INT            visible
//             | INT '~'        hidden
//             | INT '^' NAME   bound
//   Sites are numbered 1..arity in ascending order with none missing.
//
//   rule     := solution '->' [ '(' NAME (',' NAME)* ')' ] solution
//
// '#' starts a comment.  Protein arities must match the signature.
KSolution parseKappa(SigPtr, const std::string&);
KappaRule parseKappaRule(SigPtr, const std::string& name, const std::string& src,
                         bool antimonotone = false);
std::string printKappa(const KSolution&);

// ---- the protein-graph encoding -----------------------------------------

/** Encodes a solution as a ground, width-1 graph over `sig` whose outer
    names are exactly `context` (bond-typed; must cover the solution's free
    names).  Hidden and visible sites become closed one-point links of the
    matching type, bonds become shared bond links, bound names are closed. */
Bigraph encode(const KSolution&, const std::vector<std::string>& context, SigPtr sig);

/** Inverse direction: reads a ground width-1 graph of atomic plain nodes
    back as a solution (context = the graph's outer names).  The graph must
    satisfy the protein link discipline and carry only bond-typed names. */
struct DecodeResult {
  KSolution solution;
  std::vector<std::string> context;
};
DecodeResult decode(const Bigraph&);

/** Both sides of a rule encoded over the free names of the rule, the grown
    side under its fresh binders: first = lhs, second = rhs. */
std::pair<Bigraph, Bigraph> encodeRule(const KappaRule&, SigPtr);

}  // namespace biobig
