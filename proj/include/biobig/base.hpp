#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace biobig {

enum class ErrorCode {
  WidthMismatch,
  NameClash,
  TypeClash,
  BadGraph,
  BadRule,
  SortingBroken,
  ParseError,
  NotFound,
  ValidationError,
  TheoremViolation,
};

class Error : public std::runtime_error {
public:
  ErrorCode code;
  Error(ErrorCode c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

[[noreturn]] void fail(ErrorCode c, const std::string& msg);

/** Link typing.  Hidden/Visible/Bond classify edges and names by what they
    stand for (a hidden interaction site, a visible one, a formed bond);
    Free is the wildcard carried by constructor ports, below every other
    type, so a Free-typed point may attach to a link of any type. */
enum class NameType : std::uint8_t { Hidden, Visible, Bond, Free };

char letterOf(NameType t);        // 'h' 'v' 'b' 'f'
NameType nameTypeOf(char c);      // inverse, throws ParseError
bool subtype(NameType a, NameType b);  // a may attach to b

struct TypedName {
  std::string name;
  NameType type = NameType::Bond;
  auto operator<=>(const TypedName&) const = default;
};

/** Interface ⟨width, names⟩.  Names are kept sorted and unique. */
struct Interface {
  int width = 0;
  std::vector<TypedName> names;
  bool operator==(const Interface&) const = default;
  const TypedName* find(const std::string& n) const;
  bool has(const std::string& n) const { return find(n) != nullptr; }
};

// Sorts the names and rejects duplicates.
Interface iface(int width, std::vector<TypedName> names);

std::string show(const Interface&);
std::string show(const TypedName&);

}  // namespace biobig
