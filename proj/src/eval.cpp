#include "mpk/eval.hpp"

#include <algorithm>
#include <optional>

#include "mpk/errors.hpp"

namespace mpk {

namespace {

[[noreturn]] void evalFail(const std::string& kind, const std::string& msg, const ExprPtr& at) {
  fail(kind, msg + " in " + printExpr(at));
}

Value navigate(const Store& store, const Value& target, const std::string& slot,
               const ExprPtr& at) {
  if (target.isNull()) return Value();
  if (target.isRef()) {
    ElementId id = target.asRef();
    if (!store.exists(id)) evalFail("UnknownElement", "dangling ref " + target.describe(), at);
    if (slot == "of") return Value::ref(store.of(id));
    if (!store.hasSlot(id, slot))
      evalFail("UnknownSlot", store.name(id) + " has no slot '" + slot + "'", at);
    return store.getSlot(id, slot);
  }
  if (target.isCollection()) {
    // Collect-and-flatten: one level of nesting is spliced.
    std::vector<Value> out;
    for (const Value& item : target.items()) {
      Value v = navigate(store, item, slot, at);
      if (v.isCollection())
        for (const Value& x : v.items()) out.push_back(x);
      else if (!v.isNull())
        out.push_back(v);
    }
    return target.isSet() ? Value::set(std::move(out)) : Value::seq(std::move(out));
  }
  evalFail("TypeError", "cannot navigate '" + slot + "' on " + target.describe(), at);
}

Value refSetOf(const std::vector<ElementId>& ids) {
  std::vector<Value> items;
  for (ElementId id : ids) items.push_back(Value::ref(id));
  return Value::set(std::move(items));
}

ElementId wantRef(const Store& store, const Value& v, const ExprPtr& at) {
  if (!v.isRef()) evalFail("TypeError", "expected an element, got " + v.describe(), at);
  if (!store.exists(v.asRef()))
    evalFail("UnknownElement", "dangling ref " + v.describe(), at);
  return v.asRef();
}

bool wantBool(const Value& v, const ExprPtr& at) {
  if (!v.isBool()) evalFail("TypeError", "expected a boolean, got " + v.describe(), at);
  return v.asBool();
}

const std::vector<Value>& wantCollection(const Value& v, const ExprPtr& at) {
  if (!v.isCollection())
    evalFail("TypeError", "expected a collection, got " + v.describe(), at);
  return v.items();
}

Value eval(const Store& store, const ExprPtr& e, Env& env, const Value& self);

// Restores any shadowed binding on scope exit.
struct ScopedBind {
  Env& env;
  std::string name;
  std::optional<Value> saved;
  ScopedBind(Env& env, const std::string& name, Value v) : env(env), name(name) {
    if (auto it = env.find(name); it != env.end()) saved = it->second;
    env[name] = std::move(v);
  }
  ~ScopedBind() {
    if (saved) env[name] = *saved;
    else env.erase(name);
  }
};

// Enumerates the k-fold Cartesian product of the collection, binding each
// tuple into env; returns true when the visitor asks to stop.
bool productScan(const Store& store, const ExprPtr& e, Env& env, const Value& self,
                 const std::vector<Value>& items, std::size_t binderIx, bool stopOn) {
  if (binderIx == e->binders.size())
    return wantBool(eval(store, e->args[0], env, self), e) == stopOn;
  for (const Value& item : items) {
    ScopedBind bind(env, e->binders[binderIx], item);
    if (productScan(store, e, env, self, items, binderIx + 1, stopOn)) return true;
  }
  return false;
}

Value evalCall(const Store& store, const ExprPtr& e, Env& env, const Value& self) {
  const std::string& op = e->nameOrOp;
  Value target = eval(store, e->target, env, self);

  if (op == "size") return Value::integer(static_cast<std::int64_t>(wantCollection(target, e).size()));
  if (op == "includes") {
    wantCollection(target, e);
    return Value::boolean(target.contains(eval(store, e->args.at(0), env, self)));
  }
  if (op == "subSet") {
    const auto& xs = wantCollection(target, e);
    Value other = eval(store, e->args.at(0), env, self);
    wantCollection(other, e);
    for (const Value& x : xs)
      if (!other.contains(x)) return Value::boolean(false);
    return Value::boolean(true);
  }
  if (op == "forAll" || op == "exists") {
    const auto& xs = wantCollection(target, e);
    bool stopOn = op == "exists";  // exists stops on true, forAll on false
    bool stopped = productScan(store, e, env, self, xs, 0, stopOn);
    return Value::boolean(op == "exists" ? stopped : !stopped);
  }
  if (op == "select") {
    const auto& xs = wantCollection(target, e);
    std::vector<Value> out;
    for (const Value& x : xs) {
      ScopedBind bind(env, e->binders[0], x);
      if (wantBool(eval(store, e->args[0], env, self), e)) out.push_back(x);
    }
    return target.isSet() ? Value::set(std::move(out)) : Value::seq(std::move(out));
  }
  if (op == "iterate") {
    const auto& xs = wantCollection(target, e);
    Value acc = eval(store, e->args[0], env, self);
    for (const Value& x : xs) {
      ScopedBind bindElem(env, e->binders[0], x);
      ScopedBind bindAcc(env, e->binders[1], acc);
      acc = eval(store, e->args[1], env, self);
    }
    return acc;
  }
  if (op == "isKindOf") {
    ElementId el = wantRef(store, target, e);
    ElementId cls = wantRef(store, eval(store, e->args.at(0), env, self), e);
    return Value::boolean(store.isKindOf(el, cls));
  }
  if (op == "of") return Value::ref(store.of(wantRef(store, target, e)));
  if (op == "name") return Value::str(store.name(wantRef(store, target, e)));
  if (op == "tag") {
    ElementId el = wantRef(store, target, e);
    ElementId expected = wantRef(store, eval(store, e->args.at(0), env, self), e);
    return Value::str(store.tag(el, expected));
  }
  if (op == "allParents") return refSetOf(store.allParents(wantRef(store, target, e)));
  if (op == "modellingElements")
    return refSetOf(store.modellingElements(wantRef(store, target, e)));
  if (op == "classes") return refSetOf(store.modellingElements(wantRef(store, target, e)));
  if (op == "attributes") return navigate(store, target, "attributes", e);
  if (op == "nodes")
    evalFail("TypeError", "nodes is only defined for tool diagrams, not store values", e);
  evalFail("TypeError", "unknown operation '" + op + "'", e);
}

Value eval(const Store& store, const ExprPtr& e, Env& env, const Value& self) {
  switch (e->kind) {
    case Expr::Kind::SelfRef:
      return self;
    case Expr::Kind::Var: {
      auto it = env.find(e->nameOrOp);
      if (it == env.end()) evalFail("UnboundVar", "unbound variable '" + e->nameOrOp + "'", e);
      return it->second;
    }
    case Expr::Kind::Lit:
      return e->literal;
    case Expr::Kind::Nav:
      return navigate(store, eval(store, e->target, env, self), e->nameOrOp, e);
    case Expr::Kind::Not:
      return Value::boolean(!wantBool(eval(store, e->target, env, self), e));
    case Expr::Kind::Bin: {
      const std::string& op = e->nameOrOp;
      Value lhs = eval(store, e->target, env, self);
      if (op == "and") {
        if (!wantBool(lhs, e)) return Value::boolean(false);
        return Value::boolean(wantBool(eval(store, e->rhs, env, self), e));
      }
      if (op == "or") {
        if (wantBool(lhs, e)) return Value::boolean(true);
        return Value::boolean(wantBool(eval(store, e->rhs, env, self), e));
      }
      if (op == "implies") {
        if (!wantBool(lhs, e)) return Value::boolean(true);
        return Value::boolean(wantBool(eval(store, e->rhs, env, self), e));
      }
      Value rhs = eval(store, e->rhs, env, self);
      if (op == "=") return Value::boolean(lhs == rhs);
      if (op == "<>") return Value::boolean(lhs != rhs);
      if (op == "+") {
        if (lhs.isSet() && rhs.isSet()) {
          std::vector<Value> items = lhs.items();
          for (const Value& x : rhs.items()) items.push_back(x);
          return Value::set(std::move(items));
        }
        if (lhs.isInt() && rhs.isInt()) return Value::integer(lhs.asInt() + rhs.asInt());
        if (lhs.isStr() && rhs.isStr()) return Value::str(lhs.asStr() + rhs.asStr());
        evalFail("TypeError", "+ expects two sets, integers or strings", e);
      }
      evalFail("TypeError", "unknown operator '" + op + "'", e);
    }
    case Expr::Kind::Call:
      return evalCall(store, e, env, self);
  }
  evalFail("TypeError", "malformed expression", e);
}

}  // namespace

Env builtinEnv(const Store& store) {
  Env env;
  const std::pair<const char*, ElementId> names[] = {
      {"Element", builtin::Element},   {"Class", builtin::Class},
      {"Package", builtin::Package},   {"Attribute", builtin::Attribute},
      {"Constraint", builtin::Constraint}, {"Enum", builtin::Enum},
      {"String", builtin::String},     {"Integer", builtin::Integer},
      {"Boolean", builtin::Boolean},   {"XCore", builtin::XCore},
      {"Beans", builtin::Beans},       {"BeanContainer", builtin::BeanContainer},
      {"Persistent", builtin::Persistent}, {"EntityBean", builtin::EntityBean},
      {"BeanAttribute", builtin::BeanAttribute},
  };
  for (const auto& [name, id] : names)
    if (store.exists(id)) env[name] = Value::ref(id);
  return env;
}

Value evalExpr(const Store& store, const ExprPtr& expr, const Env& env, const Value& self) {
  Env scratch = env;
  return eval(store, expr, scratch, self);
}

}  // namespace mpk
