#pragma once

#include "biobig/rewrite.hpp"

namespace biobig {

/** The protein view: membrane and mobility nodes vanish together with every
    edge one of their ports touched, and the place structure is forgotten —
    the result is a flat link graph (widths collapse to at most one, every
    surviving node sits at the single root, all names survive).  A surviving
    point whose edge vanished is re-closed onto one fresh edge of the same
    type per vanished edge, which keeps the view total; on well-sorted agents
    protein and non-protein ports never share an edge, so no mending occurs. */
Bigraph projectProtein(const Bigraph&);

/** The membrane/mobility view: protein nodes vanish together with every edge
    one of their ports touched (mended the same way); interfaces and the
    whole place structure survive unchanged.  Proteins are atomic, so no
    surviving node or site can lose its parent. */
Bigraph projectMobility(const Bigraph&);

/** Both rule sets of a system under the two views, materialized once: the
    protein system carries every non-commitment rule with both faces
    flattened to the protein view; the mobility system carries every rule
    under the membrane view (commitment rules survive verbatim, introduction
    rules reduce to planting a bare triple, protein rules to identities). */
struct ProjectedSystems {
  ReactiveSystem protein;
  ReactiveSystem mobility;
};
ProjectedSystems projectSystem(const ReactiveSystem&);

struct StepReport {
  bool proteinChanged = false;
  bool mobilityChanged = false;
  bool proteinStepValid = true;
  bool mobilityStepValid = true;
};

struct ProjectionReport {
  std::vector<StepReport> perStep;  // one record per trace step
};

/** Checks a trace against both views: every step must change at least one
    view, a changed protein view must be reproducible by one application of a
    projected non-commitment rule, and a changed mobility view by a projected
    commitment rule or by planting one fresh triple (the shape of a projected
    introduction step).  Returns the per-step evidence; throws
    ErrorCode::TheoremViolation naming the offending step when any check
    fails — which indicates a bug in the engine, not in the model. */
ProjectionReport projectTrace(const Trace&, const ReactiveSystem&);

/** One header line, then per step: number, rule, and the four flags as 0/1,
    tab-separated. */
std::string toTsv(const ProjectionReport&, const Trace&);

}  // namespace biobig
