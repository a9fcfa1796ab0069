#pragma once

#include <map>
#include <string>

#include "mpk/expr.hpp"
#include "mpk/store.hpp"

namespace mpk {

using Env = std::map<std::string, Value>;

// The default constraint environment: every named builtin by name.
Env builtinEnv(const Store& store);

// Strict evaluation over the store; never mutates it. Navigation over a
// collection maps the slot over the members and flattens one level;
// navigation over null yields null.
Value evalExpr(const Store& store, const ExprPtr& expr, const Env& env, const Value& self);

}  // namespace mpk
