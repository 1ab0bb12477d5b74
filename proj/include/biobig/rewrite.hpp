#pragma once

#include "biobig/bigraph.hpp"
#include "biobig/kappa.hpp"

namespace biobig {

/** The four rule families: forward protein rules grow the link structure,
    antimonotone ones are their exact reverses, introduction rules plant a
    pinch triple around a protein complex, and the two built-in commitment
    rules turn a committed triple into membrane motion (pinch) or merge
    membranes (fuse). */
enum class RuleKind : std::uint8_t { Monotone, Antimonotone, Introduction, Commitment };

struct Rule {
  std::string name;
  RuleKind kind = RuleKind::Monotone;
  Bigraph lhs, rhs;
};

/// At least one node, all connected through shared links (edges or names).
bool linkConnected(const Bigraph&);

/// True iff every hole sits under active controls only (roots are active).
bool isActiveContext(const Bigraph&);

/** The growth preorder on ground, site-free faces with equal interfaces:
    `to` extends `from` when the nodes of `from` embed into `to` preserving
    controls and placing, ports on outer names keep them, bond edges map
    exactly, one-point hidden links may reveal, one-point visible links may
    hide or join a bond that is new in `to`, and every extra node or new
    bond of `to` is wired only from such points. */
bool growsLink(const Bigraph& from, const Bigraph& to);

// Validated constructors.  Both faces must share interfaces, have at least
// one node per left-hand root, at most one site per place, and no inner
// names; the family-specific shape is checked on top of that.
Rule makeMonotoneRule(std::string name, Bigraph lhs, Bigraph rhs);
Rule makeAntimonotoneRule(std::string name, Bigraph lhs, Bigraph rhs);

/** An introduction rule plants a pinch triple: the left face is a ground,
    membrane-free protein pattern over three regions; the right face is the
    same pattern with the content region wrapped in p^c, the membrane region
    in p^m, and p^d added to the third, the triple freshly wired together.
    Any open name of the left face must be idle, fully used by the pattern,
    or anchored in the third region. */
Rule makeIntroductionRule(std::string name, Bigraph lhs, Bigraph rhs);

/// The built-in commitment rules, in order: pinch, then fuse.
std::vector<Rule> commitmentRules(SigPtr);

/// Encodes a solution-calculus rule and wraps it as a graph rule.
Rule fromKappa(const KappaRule&, SigPtr);

/** One occurrence of a rule in an agent, already split into the enclosing
    context, the parameter filling the rule's sites, and the bypass names
    that route parameter links around the rule. */
struct Match {
  const Rule* rule = nullptr;
  std::string witness;  // matched agent nodes, e.g. "n3+n5"
  Bigraph context;
  Bigraph parameter;
  std::vector<TypedName> bypass;
};

/** All occurrences of the rule in the ground agent, deduplicated up to
    equivalence of the decomposition.  Matching embeds the left face into
    the agent node-injectively, preserving controls, placing and link
    structure: rule edges map injectively onto agent edges carrying exactly
    the matched ports, rule names map to arbitrary agent links, matched
    places sit under active ancestors, and commitment rules additionally
    require the triple to straddle a membrane in the committed position. */
std::vector<Match> findMatches(const Bigraph& agent, const Rule&);

/** Reference matcher: enumerates every control-preserving node injection
    and keeps those whose canonical decomposition recomposes to the agent.
    Slow; used to cross-check findMatches. */
std::vector<Match> findMatchesBruteForce(const Bigraph& agent, const Rule&);

/// context ∘ (rhs ⊗ bypass wiring) ∘ parameter, leaned.
Bigraph applyMatch(const Match&);

/** Which well-formedness discipline each new state must satisfy: none, the
    protein link discipline, or the full biological one. */
enum class Profile : std::uint8_t { None, ProteinLinks, Bio };

struct ReactiveSystem {
  SigPtr sig;
  std::vector<Rule> rules;
  Profile profile = Profile::None;
};

/// Matches of every rule against the agent, in rule order.
std::vector<Match> enumerateSteps(const ReactiveSystem&, const Bigraph& agent);

/// Applies the match and enforces the system's discipline on the result.
Bigraph step(const ReactiveSystem&, const Match&);

struct Successor {
  Bigraph state;
  std::string rule;
  std::string witness;
};

/// All one-step successor states, deduplicated up to supportEquiv.
std::vector<Successor> successors(const ReactiveSystem&, const Bigraph& agent);

struct TraceStep {
  std::string rule;
  std::string witness;
};

struct Trace {
  std::vector<Bigraph> states;  // states.size() == steps.size() + 1
  std::vector<TraceStep> steps;
};

/** Runs up to maxSteps reactions from init.  Strategies: "first" takes the
    first match in rule order; "random:SEED" draws uniformly among all
    matches; "bfs:DEPTH" explores breadth-first up to DEPTH and returns the
    path to the nearest quiescent state (or a deepest path).  Stops early
    at quiescence. */
Trace run(const ReactiveSystem&, const Bigraph& init, int maxSteps,
          const std::string& strategy = "first");

/** A "step<TAB>rule<TAB>witness" header line, then one line per reaction,
    steps numbered from 1. */
std::string toTsv(const Trace&);

}  // namespace biobig
