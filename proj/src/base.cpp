#include "biobig/base.hpp"

#include <algorithm>

namespace biobig {

void fail(ErrorCode c, const std::string& msg) { throw Error(c, msg); }

char letterOf(NameType t) {
  switch (t) {
    case NameType::Hidden: return 'h';
    case NameType::Visible: return 'v';
    case NameType::Bond: return 'b';
    case NameType::Free: return 'f';
  }
  return '?';
}

NameType nameTypeOf(char c) {
  switch (c) {
    case 'h': return NameType::Hidden;
    case 'v': return NameType::Visible;
    case 'b': return NameType::Bond;
    case 'f': return NameType::Free;
  }
  fail(ErrorCode::ParseError, std::string("unknown name type '") + c + "'");
}

bool subtype(NameType a, NameType b) { return a == b || a == NameType::Free; }

const TypedName* Interface::find(const std::string& n) const {
  auto it = std::lower_bound(names.begin(), names.end(), n,
                             [](const TypedName& tn, const std::string& s) { return tn.name < s; });
  if (it != names.end() && it->name == n) return &*it;
  return nullptr;
}

Interface iface(int width, std::vector<TypedName> names) {
  if (width < 0) fail(ErrorCode::WidthMismatch, "negative width");
  std::sort(names.begin(), names.end(),
            [](const TypedName& a, const TypedName& b) { return a.name < b.name; });
  for (size_t i = 1; i < names.size(); ++i)
    if (names[i].name == names[i - 1].name)
      fail(ErrorCode::NameClash, "duplicate name '" + names[i].name + "' in interface");
  Interface f;
  f.width = width;
  f.names = std::move(names);
  return f;
}

std::string show(const TypedName& tn) { return tn.name + ":" + letterOf(tn.type); }

std::string show(const Interface& f) {
  std::string s = "<" + std::to_string(f.width) + ", {";
  for (size_t i = 0; i < f.names.size(); ++i) {
    if (i) s += ", ";
    s += show(f.names[i]);
  }
  return s + "}>";
}

}  // namespace biobig
