#include "biobig/signature.hpp"

#include <algorithm>

namespace biobig {

Signature::Signature(std::vector<Control> controls) : ctrls_(std::move(controls)) {
  std::sort(ctrls_.begin(), ctrls_.end(),
            [](const Control& a, const Control& b) { return a.name < b.name; });
  for (size_t i = 1; i < ctrls_.size(); ++i)
    if (ctrls_[i].name == ctrls_[i - 1].name)
      fail(ErrorCode::NameClash, "duplicate control '" + ctrls_[i].name + "'");
  for (const Control& c : ctrls_) {
    if (c.arity < 0) fail(ErrorCode::BadGraph, "negative arity on '" + c.name + "'");
    if (c.kind == ControlKind::Membrane) membranes_ = true;
  }
}

const Control* Signature::find(const std::string& name) const {
  auto it = std::lower_bound(ctrls_.begin(), ctrls_.end(), name,
                             [](const Control& c, const std::string& s) { return c.name < s; });
  if (it != ctrls_.end() && it->name == name) return &*it;
  return nullptr;
}

const Control& Signature::control(const std::string& name) const {
  const Control* c = find(name);
  if (!c) fail(ErrorCode::NotFound, "unknown control '" + name + "'");
  return *c;
}

bool isMembrane(const Control& c) { return c.kind == ControlKind::Membrane; }
bool isMobility(const Control& c) { return c.kind == ControlKind::Mobility; }
bool isPlain(const Control& c) { return c.kind == ControlKind::Plain; }

static std::vector<Control> builtinControls() {
  using A = Activity;
  using P = Polarity;
  using K = ControlKind;
  return {
      {MExt, 0, A::Active, P::Polar, K::Membrane},
      {MCys, 0, A::Active, P::Apolar, K::Membrane},
      {PC, 1, A::Passive, P::Polar, K::Mobility},
      {PM, 2, A::Passive, P::Apolar, K::Mobility},
      {PD, 1, A::Atomic, P::Polar, K::Mobility},
      {FC, 1, A::Passive, P::Polar, K::Mobility},
      {FM, 2, A::Atomic, P::Apolar, K::Mobility},
      {FD, 1, A::Atomic, P::Polar, K::Mobility},
  };
}

SigPtr biologicalSignature(std::vector<Control> proteins) {
  std::vector<Control> all = builtinControls();
  for (Control& p : proteins) {
    if (p.activity != Activity::Atomic)
      fail(ErrorCode::BadGraph, "protein control '" + p.name + "' must be atomic");
    p.kind = ControlKind::Plain;
    all.push_back(std::move(p));
  }
  return std::make_shared<Signature>(std::move(all));
}

SigPtr proteinSignature(std::vector<Control> proteins) {
  for (Control& p : proteins) {
    if (p.activity != Activity::Atomic)
      fail(ErrorCode::BadGraph, "protein control '" + p.name + "' must be atomic");
    p.kind = ControlKind::Plain;
  }
  return std::make_shared<Signature>(std::move(proteins));
}

SigPtr kappaSignature(const std::map<std::string, int>& arities) {
  std::vector<Control> cs;
  for (const auto& [name, ar] : arities)
    cs.push_back({name, ar, Activity::Atomic, Polarity::Polar, ControlKind::Plain});
  return std::make_shared<Signature>(std::move(cs));
}

}  // namespace biobig
