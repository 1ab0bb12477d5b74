#pragma once

#include <string>
#include <vector>

#include "biobig/rewrite.hpp"

namespace biobig {

/** A packaged reactive model: a biological signature, named rules, and a
    sorted initial state. Immutable after construction; safe to share. */
struct Model {
  SigPtr sig;
  std::vector<Rule> rules;  // mono/anti/intro only; commitment rules are implicit
  Bigraph initial;
  std::string name;
  std::string description;
};

/** Signature of the endocytosis model: cargo, the three-part receptor
    (exterior/membrane/cytosol), adaptin and clathrin. */
SigPtr vesicleSignature();

/** Signature of the phagocytosis model: particle, antibody, the three-part
    Fc receptor, and actin. */
SigPtr phagoSignature();

/** n stacked cargo-receptor-coat complexes across three regions (outside,
    membrane, cytosol): 6n nodes threaded by 5n closed bonds. */
Bigraph buildPCmplx(SigPtr, int n);

/** Clathrin-coated vesicle budding at the plasma membrane. The budding
    trigger is n assembled complexes (n >= 1). */
Model vesicleModel(int n = 1);

/** Antibody-coated particle engulfment into a phagosome. */
Model phagoModel();

/** The executable system for a model: the two membrane-commitment rules
    followed by the model's own rules, stepped under the full biological
    well-formedness discipline. */
ReactiveSystem systemOf(const Model&);

/** Load a model from the line-oriented text format:
      control NAME arity=K activity=A polarity=P kind=protein;
      rule NAME kind={mono|anti|intro} : TERM -> TERM;
      init : TERM;
    '#' starts a comment. Controls must precede rules; membrane and mobility
    controls are built in. Throws ParseError on malformed input and
    ValidationError when the initial state or a rule fails its checks; with
    checkInitial = false the initial state is loaded without the biological
    checks so a caller can report the violations itself. */
Model loadModel(const std::string& path, bool checkInitial = true);

/** The model rendered in the format loadModel reads; round-trips up to
    support equivalence of every rule face and the initial state. */
std::string showModel(const Model&);

/// showModel written to a file.
void saveModel(const Model&, const std::string& path);

}  // namespace biobig
