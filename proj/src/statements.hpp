#pragma once

// Private helpers shared by the model loader and the command-line front end:
// line-oriented ';'-statement splitting with '#' comments, word splitting,
// and path stems.

#include <cctype>
#include <sstream>
#include <string>
#include <vector>

#include "biobig/base.hpp"

namespace biobig::detail {

struct Statement {
  std::string text;
  int line = 1;
};

/** Split source into ';'-terminated statements, skipping '#' comments; the
    separator is only recognized outside parentheses/brackets/braces. */
inline std::vector<Statement> splitStatements(const std::string& src, const std::string& where) {
  std::vector<Statement> out;
  std::string cur;
  int line = 1, startLine = 1, depth = 0;
  for (size_t i = 0; i < src.size(); ++i) {
    char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      --i;
      continue;
    }
    if (c == '\n') ++line;
    if (c == '(' || c == '[' || c == '{') ++depth;
    if (c == ')' || c == ']' || c == '}') --depth;
    if (c == ';' && depth == 0) {
      out.push_back({cur, startLine});
      cur.clear();
      startLine = line;
      continue;
    }
    if (cur.empty() && std::isspace(static_cast<unsigned char>(c))) {
      startLine = line;
      continue;
    }
    cur += c;
  }
  if (cur.find_first_not_of(" \t\r\n") != std::string::npos)
    fail(ErrorCode::ParseError,
         where + ":" + std::to_string(startLine) + ": statement not terminated by ';'");
  return out;
}

inline std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

inline std::string stemOf(const std::string& path) {
  size_t slash = path.find_last_of('/');
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  size_t dot = base.find_last_of('.');
  return dot == std::string::npos || dot == 0 ? base : base.substr(0, dot);
}

}  // namespace biobig::detail
