#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace mpk {

// Domain failures carry a stable kind tag so callers can branch without
// parsing messages. Kinds in use: NotAClass, NotAPackage, UnknownElement,
// UnknownSlot, UnknownDaemon, TypeMismatch, CyclicInheritance,
// ReentrantMutation, UnboundVar, TypeError, LexError, ParseError,
// UnknownMetaclass, UnknownType, UnknownForm, DuplicateEntity,
// DuplicateAttribute, UnmappableType, EmptyName, IoError, UnknownButton,
// UnknownNode, UnknownEdge, UnknownName, TagError, TypeNotOnDiagram,
// BadSnapshot.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

  const std::string& kind() const { return kind_; }

private:
  std::string kind_;
};

[[noreturn]] inline void fail(const std::string& kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace mpk
