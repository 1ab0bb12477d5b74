#pragma once

#include <string>

#include "biobig/bigraph.hpp"

namespace biobig {

/** Parse the term syntax:
      graph    := closure* item (('||' | ';') item)*
      closure  := '/' NAME (',' NAME)* ':' TYPE
      item     := prime ('|' prime)*
      prime    := '1' | '0' | 'id' ['(' INT ')'] | '~' '{' names '}'
                | NAME '/' NAME [':' TYPE]            (outer/inner alias)
                | NAME ['_{' ports '}'] ['[' prime ('|' prime)* ']']
                | '(' graph ')'                       (closures scope to the parens)
      ports    := NAME [':' TYPE] (',' ...)*          (TYPE defaults to b)
    Roots are the items that carry place content, in order; 'id' sites are
    numbered by occurrence unless every one carries an explicit index. */
Bigraph parseTerm(SigPtr, const std::string& src);

/** Canonical printer; parseTerm(printTerm(g)) is support-equivalent to g. */
std::string printTerm(const Bigraph&);

}  // namespace biobig
