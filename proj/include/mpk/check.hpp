#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "mpk/store.hpp"

namespace mpk {

struct ConstraintResult {
  std::string name;
  bool passed = false;
  std::string message;  // failure message, empty when passed
};

// Well-formedness report tree: one node per element, container members as
// children. A node passes iff all of its own results and all children pass.
struct CheckReport {
  ElementId subject = kNoElement;
  std::string name;
  std::vector<ConstraintResult> constraints;
  std::vector<CheckReport> children;

  bool passed() const;
  const ConstraintResult* find(const std::string& constraintName) const;
  const CheckReport* child(const std::string& childName) const;
  nlohmann::ordered_json toJson() const;
  void printText(std::ostream& out, int indent = 0) const;
};

// Evaluates every constraint on of(e) and its ancestors; an evaluation error
// becomes a failed result carrying the error text rather than aborting.
CheckReport checkElement(const Store& store, ElementId e);
CheckReport checkContainer(const Store& store, ElementId p);

}  // namespace mpk
