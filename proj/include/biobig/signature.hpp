#pragma once

#include <map>
#include <memory>

#include "biobig/base.hpp"

namespace biobig {

enum class Activity : std::uint8_t { Active, Passive, Atomic };
enum class Polarity : std::uint8_t { Polar, Apolar };

/** Plain controls are protein-level; Membrane and Mobility controls drive
    the biological well-formedness checks and the commitment rules. */
enum class ControlKind : std::uint8_t { Plain, Membrane, Mobility };

struct Control {
  std::string name;
  int arity = 0;
  Activity activity = Activity::Atomic;
  Polarity polarity = Polarity::Polar;
  ControlKind kind = ControlKind::Plain;
};

class Signature {
public:
  explicit Signature(std::vector<Control> controls);
  const Control* find(const std::string& name) const;
  const Control& control(const std::string& name) const;  // throws NotFound
  const std::vector<Control>& controls() const { return ctrls_; }
  bool hasMembranes() const { return membranes_; }

private:
  std::vector<Control> ctrls_;  // sorted by name
  bool membranes_ = false;
};

using SigPtr = std::shared_ptr<const Signature>;

bool isMembrane(const Control&);
bool isMobility(const Control&);
bool isPlain(const Control&);

// Canonical control names for the built-in membrane/mobility machinery.
inline const std::string MExt = "m^ext";  // outward-facing membrane layer
inline const std::string MCys = "m^cys";  // cytosol-facing membrane layer
inline const std::string PC = "p^c";      // pinch: content side
inline const std::string PM = "p^m";      // pinch: membrane side
inline const std::string PD = "p^d";      // pinch: destination side
inline const std::string FC = "f^c";      // fuse: carrier side
inline const std::string FM = "f^m";      // fuse: membrane side
inline const std::string FD = "f^d";      // fuse: destination side

/** The membrane pair plus both mobility triples, with the given protein
    controls (kind Plain, must be atomic) alongside. */
SigPtr biologicalSignature(std::vector<Control> proteins);

/** Protein controls only (no membranes): link-graph worlds. */
SigPtr proteinSignature(std::vector<Control> proteins);

/** Atomic polar controls with the given arities, one per protein name. */
SigPtr kappaSignature(const std::map<std::string, int>& arities);

}  // namespace biobig
