#include <doctest.h>

#include <functional>
#include <random>

#include "mpk/check.hpp"
#include "mpk/errors.hpp"
#include "mpk/eval.hpp"
#include "mpk/snapshot.hpp"

using namespace mpk;

namespace {

// Every evaluation in this suite goes through here, so purity (the engine
// never mutates the store) is checked on all of them.
Value evalPure(const Store& s, const std::string& text, const Env& env, const Value& self) {
  auto before = storeToJson(s);
  Value v = evalExpr(s, parseExpr(text), env, self);
  REQUIRE(storeToJson(s) == before);
  return v;
}

}  // namespace

TEST_CASE("expression parse/print round trip") {
  for (const char* text : {
           "(forAll (e) (nav self elements) (= (of e) self))",
           "(implies (= (of (of self)) Enum) (includes (nav (of self) elements) self))",
           "(<> (nav self persistAs) \"\")",
           "(not (exists (a1 a2) (nav self attributes) (and (<> a1 a2) (and (nav a1 isId) (nav "
           "a2 isId)))))",
       }) {
    ExprPtr e = parseExpr(text);
    CHECK(printExpr(parseExpr(printExpr(e))) == printExpr(e));
  }
  CHECK_THROWS_WITH_AS(parseExpr("(forAll (e) missing)"), doctest::Contains("ParseError"), Error);
  CHECK_THROWS_WITH_AS(parseExpr("(select (a b) xs a)"), doctest::Contains("ParseError"), Error);
}

TEST_CASE("evaluation basics") {
  Store s = Store::bootstrap();
  Env env = builtinEnv(s);
  Value self = Value::ref(builtin::EntityBean);

  CHECK(evalPure(s, "(= (nav self name) \"EntityBean\")", env, self) == Value::boolean(true));
  CHECK(evalPure(s, "(of self)", env, self) == Value::ref(builtin::Class));
  CHECK(evalPure(s, "(isKindOf self Class)", env, self) == Value::boolean(true));
  CHECK(evalPure(s, "(isKindOf self Enum)", env, self) == Value::boolean(false));
  CHECK(evalPure(s, "(includes (allParents self) Class)", env, self) == Value::boolean(true));
  CHECK(evalPure(s, "(+ 2 3)", env, self) == Value::integer(5));
  CHECK(evalPure(s, "(+ \"a\" \"b\")", env, self) == Value::str("ab"));
  CHECK(evalPure(s, "(subSet (modellingElements Beans) (nav Beans elements))", env, self) ==
        Value::boolean(true));
  // Navigation over a collection maps and flattens; over null it is null.
  CHECK(evalPure(s, "(size (nav (nav XCore elements) name))", env, self) == Value::integer(9));
  CHECK(evalPure(s, "(= (nav null x) null)", env, self) == Value::boolean(true));
}

TEST_CASE("and/or/implies short-circuit, everything else is strict") {
  Store s = Store::bootstrap();
  Env env = builtinEnv(s);
  Value self = Value::ref(builtin::Class);
  CHECK(evalPure(s, "(and false (nav self noSuchSlot))", env, self) == Value::boolean(false));
  CHECK(evalPure(s, "(or true (nav self noSuchSlot))", env, self) == Value::boolean(true));
  CHECK(evalPure(s, "(implies false (nav self noSuchSlot))", env, self) == Value::boolean(true));
  CHECK_THROWS_AS(evalExpr(s, parseExpr("(or false (nav self noSuchSlot))"), env, self), Error);
  CHECK_THROWS_WITH_AS(evalExpr(s, parseExpr("(+ 1 \"x\")"), env, self),
                       doctest::Contains("TypeError"), Error);
  CHECK_THROWS_WITH_AS(evalExpr(s, parseExpr("(nodes XCore)"), env, self),
                       doctest::Contains("TypeError"), Error);
  CHECK_THROWS_WITH_AS(evalExpr(s, parseExpr("unboundName"), env, self),
                       doctest::Contains("UnboundVar"), Error);
}

TEST_CASE("select and iterate") {
  Store s = Store::bootstrap();
  Env env = builtinEnv(s);
  Value self = Value::ref(builtin::XCore);
  CHECK(evalPure(s, "(size (select (e) (nav self elements) (isKindOf e Class)))", env, self) ==
        Value::integer(9));
  CHECK(evalPure(s, "(iterate (e acc) (nav self elements) 0 (+ acc 1))", env, self) ==
        Value::integer(9));
}

TEST_CASE("multi-binder exists matches the Cartesian brute force") {
  Store s = Store::bootstrap();
  std::mt19937_64 rng(7);
  for (int round = 0; round < 300; ++round) {
    std::vector<Value> items;
    const int n = static_cast<int>(rng() % 6);  // collections of size <= 5
    for (int i = 0; i < n; ++i) items.push_back(Value::integer(static_cast<int>(rng() % 7)));
    Value set = Value::set(items);
    const int target = static_cast<int>(rng() % 14);

    Env env = builtinEnv(s);
    env["S"] = set;
    env["t"] = Value::integer(target);
    Value got = evalPure(s, "(exists (a b) S (= (+ a b) t))", env, Value());

    bool expected = false;
    for (const Value& a : set.items())
      for (const Value& b : set.items())
        if (a.asInt() + b.asInt() == target) expected = true;
    CHECK(got == Value::boolean(expected));

    Value all = evalPure(s, "(forAll (a b) S (<> (+ a b) t))", env, Value());
    CHECK(all == Value::boolean(!expected));
  }
}

TEST_CASE("De Morgan holds on random expressions") {
  Store s = Store::bootstrap();
  std::mt19937_64 rng(11);

  // Random boolean expression over variables x, y, z.
  std::function<ExprPtr(int)> gen = [&](int depth) -> ExprPtr {
    if (depth == 0 || rng() % 3 == 0) {
      switch (rng() % 4) {
        case 0: return Expr::lit(Value::boolean(rng() % 2 == 0));
        case 1: return Expr::var("x");
        case 2: return Expr::var("y");
        default: return Expr::var("z");
      }
    }
    switch (rng() % 4) {
      case 0: return Expr::bin("and", gen(depth - 1), gen(depth - 1));
      case 1: return Expr::bin("or", gen(depth - 1), gen(depth - 1));
      case 2: return Expr::bin("implies", gen(depth - 1), gen(depth - 1));
      default: return Expr::negate(gen(depth - 1));
    }
  };

  for (int round = 0; round < 200; ++round) {
    Env env;
    env["x"] = Value::boolean(rng() % 2 == 0);
    env["y"] = Value::boolean(rng() % 2 == 0);
    env["z"] = Value::boolean(rng() % 2 == 0);
    ExprPtr a = gen(3), b = gen(3);
    Value lhs = evalExpr(s, Expr::negate(Expr::bin("and", a, b)), env, Value());
    Value rhs = evalExpr(s, Expr::bin("or", Expr::negate(a), Expr::negate(b)), env, Value());
    CHECK(lhs == rhs);
    Value lhs2 = evalExpr(s, Expr::negate(Expr::bin("or", a, b)), env, Value());
    Value rhs2 = evalExpr(s, Expr::bin("and", Expr::negate(a), Expr::negate(b)), env, Value());
    CHECK(lhs2 == rhs2);
  }
}

TEST_CASE("enum constraints police membership both ways") {
  Store s = Store::bootstrap();
  ElementId colour = s.newInstance(builtin::Enum);
  s.setSlot(colour, "name", Value::str("Colour"));
  ElementId red = s.newInstance(colour);
  ElementId stray = s.newInstance(builtin::Class);

  s.setSlot(colour, "elements", Value::set({Value::ref(red)}));
  CHECK(checkElement(s, colour).passed());
  CHECK(checkElement(s, red).passed());

  // A foreign element inside the enum breaks the EnumMembers constraint.
  s.setSlot(colour, "elements", Value::set({Value::ref(red), Value::ref(stray)}));
  auto report = checkElement(s, colour);
  CHECK_FALSE(report.passed());
  REQUIRE(report.find("EnumMembers") != nullptr);
  CHECK_FALSE(report.find("EnumMembers")->passed);
  CHECK(report.find("EnumMembers")->message ==
        "All members of an enum must be instances of it.");

  // A member the enum disowns breaks EnumMembership on the member.
  s.setSlot(colour, "elements", Value::emptySet());
  CHECK_FALSE(checkElement(s, red).passed());
}

TEST_CASE("evaluation errors become failed constraint results") {
  Store s = Store::bootstrap();
  ElementId cls = s.newInstance(builtin::Class);
  ElementId broken = s.newInstance(builtin::Constraint);
  s.setSlot(broken, "name", Value::str("Broken"));
  s.setSlot(broken, "body", Value::str("(nav self noSuchSlot)"));
  s.setSlot(cls, "constraints", Value::set({Value::ref(broken)}));
  ElementId inst = s.newInstance(cls);
  auto report = checkElement(s, inst);
  REQUIRE(report.find("Broken") != nullptr);
  CHECK_FALSE(report.find("Broken")->passed);
  CHECK(report.find("Broken")->message.find("UnknownSlot") != std::string::npos);

  ElementId weird = s.newInstance(builtin::Constraint);
  s.setSlot(weird, "name", Value::str("NonBool"));
  s.setSlot(weird, "body", Value::str("(+ 1 1)"));
  s.setSlot(cls, "constraints", Value::set({Value::ref(broken), Value::ref(weird)}));
  report = checkElement(s, inst);
  CHECK(report.find("NonBool")->message.find("non-boolean") != std::string::npos);
}
