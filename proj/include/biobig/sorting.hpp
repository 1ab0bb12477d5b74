#pragma once

#include "biobig/bigraph.hpp"

namespace biobig {

/** One well-formedness defect: which predicate failed, on which entities
    ("n3" for node 3, "e2" for edge 2, an outer name verbatim), and a short
    explanation. */
struct Violation {
  std::string predicate;
  std::vector<std::string> witnesses;
  std::string message;
  bool operator==(const Violation&) const = default;
};

std::string showViolation(const Violation&);

/** Link cardinality discipline for protein worlds: bond-typed (and free)
    links carry one or two points (outer names may also be idle); hidden and
    visible links are interaction sites, so an edge carries exactly one point
    and an outer name at most one.  Applied to every link. */
std::vector<Violation> checkProtSol(const Bigraph&);

/** Biological well-formedness.  Runs, in order:
      - "link-cardinality": the protein discipline above, on links that do
        not touch a mobility-control port;
      - "impermeability": a link may connect two ports only if the membrane
        layers crossed on the way to their meet satisfy a+b<=1 or a=b=1
        (ports under different roots are not constrained);
      - "polarity": polar controls sit under apolar parents and vice versa;
        roots count as apolar, content frozen inside a mobility node is
        exempt;
      - "bilayer": every outward membrane layer holds exactly one
        cytosol-facing layer, and every cytosol-facing layer sits in an
        outward one;
      - "mobility-links": links touching mobility ports are closed
        hidden-typed two-point edges joining the designated port pairs, and
        never shared with other controls;
      - "mobility-direction": a membrane-side mobility node sits inside an
        outward layer, with its two partners on the two sides of that
        membrane;
      - "mobility-nesting": mobility nodes never nest inside one another;
      - "fuse-shape": a fuse carrier holds exactly one child, an outward
        membrane layer.
    Predicates that need the place structure to be complete (bilayer,
    mobility-direction, fuse-shape) are skipped when the graph has sites. */
std::vector<Violation> checkBio(const Bigraph&);

}  // namespace biobig
