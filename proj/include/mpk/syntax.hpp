#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mpk/store.hpp"

namespace mpk {

struct Span {
  int line = 1;
  int col = 1;
};

struct Token {
  enum class Kind { AtName, Name, Symbol, Keyword, End };
  Kind kind = Kind::End;
  std::string lexeme;
  Span span;
};

// Lexes .mpk text. Whitespace and // comments are skipped; keywords are
// metaclass, metapackage, extends, isabstract, end, entity; symbols are
// ( ) [ ] : ; * =. Unknown characters raise LexError with their span.
std::vector<Token> tokenize(const std::string& text);

// Parses a @Package definition into the store and returns the new package.
ElementId parsePackageDef(Store& store, const std::string& text);

// Parses a @BeanContainer definition; desugars to exactly what the
// equivalent @Package form produces, plus persistAs/isId slots.
ElementId parseBeanContainer(Store& store, const std::string& text);

// Maps top-level form names (the text after '@') to parse functions.
class SyntaxRegistry {
public:
  using ParseFn = std::function<ElementId(Store&, const std::string&)>;

  static SyntaxRegistry standard();
  void add(const std::string& formName, ParseFn fn);
  bool knows(const std::string& formName) const;
  ElementId parse(Store& store, const std::string& text) const;

private:
  std::map<std::string, ParseFn> forms_;
};

// Canonical @Package emission; reparses to an isomorphic store. Persist
// clauses and the '*' id marker keep bean slots through the round-trip.
std::string prettyPrint(const Store& store, ElementId pkg);

}  // namespace mpk
