#include "biobig/project.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "biobig/ops.hpp"

namespace biobig {

namespace {

/** Keeps exactly the plain (keepPlain) or non-plain (!keepPlain) nodes,
    drops every edge touched by a deleted port, and re-closes the surviving
    points of each dropped edge onto one fresh edge of the original type. */
Bigraph dropNodes(const Bigraph& g, bool keepPlain) {
  std::set<NodeId> kept;
  for (const Node& n : g.nodes)
    if (isPlain(g.controlOf(n)) == keepPlain) kept.insert(n.id);

  std::set<EdgeId> dead;
  for (const Node& n : g.nodes) {
    if (kept.count(n.id)) continue;
    for (const Link& l : n.ports)
      if (l.isEdge()) dead.insert(l.edge);
  }

  Bigraph out;
  out.sig = g.sig;
  out.inner = g.inner;
  out.outer = g.outer;
  out.sites = g.sites;
  for (const Node& n : g.nodes)
    if (kept.count(n.id)) out.nodes.push_back(n);
  for (const auto& [e, ty] : g.edges)
    if (!dead.count(e)) out.edges.emplace(e, ty);
  out.innerLinks = g.innerLinks;

  EdgeId next = g.maxEdgeId() + 1;
  std::map<EdgeId, EdgeId> mendedAs;
  auto mend = [&](Link& l) {
    if (!l.isEdge() || !dead.count(l.edge)) return;
    auto [it, added] = mendedAs.try_emplace(l.edge, next);
    if (added) {
      out.edges.emplace(it->second, g.edges.at(l.edge));
      ++next;
    }
    l = Link::toEdge(it->second);
  };
  for (Node& n : out.nodes)
    for (Link& l : n.ports) mend(l);
  for (auto& [name, l] : out.innerLinks) mend(l);
  return out;
}

}  // namespace

Bigraph projectProtein(const Bigraph& g) {
  Bigraph out = dropNodes(g, true);
  out.inner = iface(std::min(g.inner.width, 1), g.inner.names);
  out.outer = iface(std::min(g.outer.width, 1), g.outer.names);
  out.sites.assign(out.inner.width, Place::root(0));
  for (Node& n : out.nodes) n.parent = Place::root(0);
  out.validate();
  return out;
}

Bigraph projectMobility(const Bigraph& g) {
  Bigraph out = dropNodes(g, false);
  out.validate();
  return out;
}

ProjectedSystems projectSystem(const ReactiveSystem& rs) {
  ProjectedSystems out;
  out.protein = ReactiveSystem{rs.sig, {}, Profile::ProteinLinks};
  out.mobility = ReactiveSystem{rs.sig, {}, Profile::Bio};
  for (const Rule& r : rs.rules) {
    if (r.kind != RuleKind::Commitment)
      out.protein.rules.push_back(
          Rule{r.name, r.kind, projectProtein(r.lhs), projectProtein(r.rhs)});
    out.mobility.rules.push_back(
        Rule{r.name, r.kind, projectMobility(r.lhs), projectMobility(r.rhs)});
  }
  return out;
}

namespace {

bool closedPairOf(const Bigraph& g, const Link& a, const Link& b, NameType ty) {
  return a.isEdge() && a == b && g.edges.count(a.edge) && g.edges.at(a.edge) == ty &&
         g.pointCount(a) == 2;
}

/** True when `state` is `before` with one extra freshly wired pinch triple:
    removing some p^c/p^m/p^d trio and its two hidden ties, hoisting their
    content, gives back `before`.  This is what a projected introduction step
    looks like in the mobility view, where redex matching is degenerate (the
    projected pattern is empty). */
bool undoesOneTriple(const Bigraph& before, const Bigraph& state) {
  for (const Node& pc : state.nodes) {
    if (pc.control != PC) continue;
    for (const Node& pm : state.nodes) {
      if (pm.control != PM) continue;
      if (!closedPairOf(state, pc.ports[0], pm.ports[0], NameType::Hidden)) continue;
      for (const Node& pd : state.nodes) {
        if (pd.control != PD) continue;
        if (!closedPairOf(state, pm.ports[1], pd.ports[0], NameType::Hidden)) continue;
        Bigraph undone = state;
        undone.edges.erase(pc.ports[0].edge);
        undone.edges.erase(pm.ports[1].edge);
        for (Node& n : undone.nodes) {
          if (n.parent == Place::node(pc.id)) n.parent = pc.parent;
          if (n.parent == Place::node(pm.id)) n.parent = pm.parent;
        }
        for (Place& s : undone.sites) {
          if (s == Place::node(pc.id)) s = pc.parent;
          if (s == Place::node(pm.id)) s = pm.parent;
        }
        std::erase_if(undone.nodes, [&](const Node& n) {
          return n.id == pc.id || n.id == pm.id || n.id == pd.id;
        });
        try {
          undone.validate();
          if (supportEquiv(undone, before)) return true;
        } catch (const Error&) {
          // a nested candidate trio; not the inserted triple
        }
      }
    }
  }
  return false;
}

bool reachesByRule(const Bigraph& from, const Rule& rule, const Bigraph& to) {
  for (const Match& m : findMatches(from, rule))
    if (supportEquiv(applyMatch(m), to)) return true;
  return false;
}

bool justifiedProtein(const ReactiveSystem& sys, const Bigraph& from, const Bigraph& to,
                      const std::string& preferred) {
  for (const Rule& r : sys.rules)
    if (r.name == preferred && reachesByRule(from, r, to)) return true;
  for (const Rule& r : sys.rules)
    if (r.name != preferred && reachesByRule(from, r, to)) return true;
  return false;
}

bool justifiedMobility(const ReactiveSystem& sys, const Bigraph& from, const Bigraph& to,
                       const std::string& preferred) {
  auto viaRule = [&](const Rule& r) {
    if (r.kind == RuleKind::Introduction) return undoesOneTriple(from, to);
    if (r.kind == RuleKind::Commitment) return reachesByRule(from, r, to);
    return false;  // protein rules are identities in this view
  };
  for (const Rule& r : sys.rules)
    if (r.name == preferred && viaRule(r)) return true;
  for (const Rule& r : sys.rules)
    if (r.name != preferred && viaRule(r)) return true;
  return false;
}

}  // namespace

ProjectionReport projectTrace(const Trace& t, const ReactiveSystem& rs) {
  ProjectionReport rep;
  if (t.steps.empty()) return rep;
  if (t.states.size() != t.steps.size() + 1)
    fail(ErrorCode::BadGraph, "trace must hold one more state than steps");

  ProjectedSystems ps = projectSystem(rs);  // one materialization per call

  std::vector<Bigraph> fp, fm;
  fp.reserve(t.states.size());
  fm.reserve(t.states.size());
  for (const Bigraph& s : t.states) {
    fp.push_back(projectProtein(s));
    fm.push_back(projectMobility(s));
  }

  auto violation = [&](size_t i, const std::string& what) {
    fail(ErrorCode::TheoremViolation,
         "step " + std::to_string(i + 1) + " (" + t.steps[i].rule + "): " + what);
  };

  for (size_t i = 0; i < t.steps.size(); ++i) {
    StepReport sr;
    sr.proteinChanged = !supportEquiv(fp[i], fp[i + 1]);
    sr.mobilityChanged = !supportEquiv(fm[i], fm[i + 1]);
    if (!sr.proteinChanged && !sr.mobilityChanged) violation(i, "neither view changed");

    const std::string& name = t.steps[i].rule;
    if (sr.proteinChanged) {
      sr.proteinStepValid = justifiedProtein(ps.protein, fp[i], fp[i + 1], name);
      if (!sr.proteinStepValid)
        violation(i, "no projected protein rule reproduces the new protein view");
    }
    if (sr.mobilityChanged) {
      sr.mobilityStepValid = justifiedMobility(ps.mobility, fm[i], fm[i + 1], name);
      if (!sr.mobilityStepValid)
        violation(i, "no projected mobility rule reproduces the new mobility view");
    }
    rep.perStep.push_back(sr);
  }
  return rep;
}

std::string toTsv(const ProjectionReport& rep, const Trace& t) {
  if (rep.perStep.size() != t.steps.size())
    fail(ErrorCode::BadGraph, "report and trace disagree on the step count");
  std::string out =
      "step\trule\tproteinChanged\tmobilityChanged\tproteinStepValid\tmobilityStepValid\n";
  for (size_t i = 0; i < rep.perStep.size(); ++i) {
    const StepReport& s = rep.perStep[i];
    out += std::to_string(i + 1) + "\t" + t.steps[i].rule + "\t" +
           std::to_string(int(s.proteinChanged)) + "\t" + std::to_string(int(s.mobilityChanged)) +
           "\t" + std::to_string(int(s.proteinStepValid)) + "\t" +
           std::to_string(int(s.mobilityStepValid)) + "\n";
  }
  return out;
}

}  // namespace biobig
