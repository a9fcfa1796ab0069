#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mpk/value.hpp"

namespace mpk {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// AST of the constraint and navigation language. Text form is parenthesized
// prefix notation, e.g. (forAll (e) (nav self elements) (= (nav e of) self)).
struct Expr {
  enum class Kind { SelfRef, Var, Nav, Call, Bin, Not, Lit };

  Kind kind = Kind::SelfRef;
  std::string nameOrOp;               // Var name, Nav slot, Call op, Bin op
  std::vector<std::string> binders;   // forAll/exists/select/iterate only
  ExprPtr target;                     // Nav/Call target, Bin lhs, Not operand
  ExprPtr rhs;                        // Bin rhs
  std::vector<ExprPtr> args;          // Call extra arguments
  Value literal;

  static ExprPtr self();
  static ExprPtr var(std::string name);
  static ExprPtr lit(Value v);
  static ExprPtr nav(ExprPtr target, std::string slot);
  static ExprPtr call(std::string op, ExprPtr target,
                      std::vector<std::string> binders = {},
                      std::vector<ExprPtr> args = {});
  static ExprPtr bin(std::string op, ExprPtr lhs, ExprPtr rhs);
  static ExprPtr negate(ExprPtr e);
};

std::string printExpr(const ExprPtr& e);
ExprPtr parseExpr(const std::string& text);

}  // namespace mpk
