#include "mpk/check.hpp"

#include <ostream>

#include "mpk/errors.hpp"
#include "mpk/eval.hpp"

namespace mpk {

bool CheckReport::passed() const {
  for (const ConstraintResult& r : constraints)
    if (!r.passed) return false;
  for (const CheckReport& c : children)
    if (!c.passed()) return false;
  return true;
}

const ConstraintResult* CheckReport::find(const std::string& constraintName) const {
  for (const ConstraintResult& r : constraints)
    if (r.name == constraintName) return &r;
  return nullptr;
}

const CheckReport* CheckReport::child(const std::string& childName) const {
  for (const CheckReport& c : children)
    if (c.name == childName) return &c;
  return nullptr;
}

nlohmann::ordered_json CheckReport::toJson() const {
  nlohmann::ordered_json out;
  out["subject"] = subject;
  out["name"] = name;
  out["passed"] = passed();
  auto cs = nlohmann::ordered_json::array();
  for (const ConstraintResult& r : constraints) {
    nlohmann::ordered_json c{{"name", r.name}, {"passed", r.passed}};
    if (!r.passed) c["message"] = r.message;
    cs.push_back(std::move(c));
  }
  out["constraints"] = std::move(cs);
  auto ch = nlohmann::ordered_json::array();
  for (const CheckReport& c : children) ch.push_back(c.toJson());
  out["children"] = std::move(ch);
  return out;
}

void CheckReport::printText(std::ostream& out, int indent) const {
  std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  out << pad << (passed() ? "✓ " : "✗ ")
      << (name.empty() ? "(unnamed element " + std::to_string(subject) + ")" : name) << "\n";
  for (const ConstraintResult& r : constraints) {
    out << pad << "  " << (r.passed ? "✓ " : "✗ ") << r.name;
    if (!r.passed) out << ": " << r.message;
    out << "\n";
  }
  for (const CheckReport& c : children) c.printText(out, indent + 1);
}

CheckReport checkElement(const Store& store, ElementId e) {
  CheckReport report;
  report.subject = e;
  report.name = store.name(e);

  Env env = builtinEnv(store);
  const Value self = Value::ref(e);
  for (ElementId cls : store.allParents(store.of(e))) {
    if (!store.hasSlot(cls, "constraints")) continue;
    for (ElementId c : store.members(cls, "constraints")) {
      ConstraintResult result;
      result.name = store.name(c);
      try {
        ExprPtr body = parseExpr(store.getSlot(c, "body").asStr());
        Value v = evalExpr(store, body, env, self);
        if (!v.isBool()) {
          result.passed = false;
          result.message = "non-boolean constraint result";
        } else if (v.asBool()) {
          result.passed = true;
        } else {
          result.passed = false;
          result.message = store.getSlot(c, "failMsg").asStr();
        }
      } catch (const Error& err) {
        result.passed = false;
        result.message = err.what();
      }
      report.constraints.push_back(std::move(result));
    }
  }

  if (store.isKindOf(e, builtin::Package))
    for (ElementId member : store.packageElements(e))
      report.children.push_back(checkElement(store, member));
  return report;
}

CheckReport checkContainer(const Store& store, ElementId p) {
  if (!store.isKindOf(p, builtin::Package))
    fail("NotAPackage", store.name(p) + " is not a kind of Package");
  return checkElement(store, p);
}

}  // namespace mpk
