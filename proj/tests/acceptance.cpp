// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit when any
// criterion fails. Tolerances are pinned inline; randomized suites honor
// MPK_SEED for reproduction.

#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mpk/check.hpp"
#include "mpk/codegen.hpp"
#include "mpk/errors.hpp"
#include "mpk/eval.hpp"
#include "mpk/snapshot.hpp"
#include "mpk/syntax.hpp"
#include "mpk/tool.hpp"
#include "support/gen.hpp"
#include "support/iso.hpp"

using namespace mpk;

namespace {

int failures = 0;

void verdict(const char* name, bool ok, const std::string& detail = "") {
  std::printf("%s %s%s%s\n", ok ? "PASS" : "FAIL", name, detail.empty() ? "" : " — ",
              detail.c_str());
  if (!ok) ++failures;
}

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(MPK_TEST_DATA_DIR) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 1. The bootstrapped kernel describes itself and the Enum constraints bite.
void criterion1() {
  try {
    Store s = Store::bootstrap();
    bool ok = s.of(builtin::Class) == builtin::Class;
    for (const auto& [id, e] : s.elements()) {
      ElementId c = id;
      for (int hops = 0; c != builtin::Class; ++hops) {
        if (hops > 8) {
          ok = false;
          break;
        }
        c = s.of(c);
      }
    }
    ok = ok && s.allParents(builtin::Beans) ==
                   std::vector<ElementId>{builtin::XCore, builtin::Beans};
    for (const auto& [id, e] : s.elements())
      ok = ok && checkElement(s, id).passed();

    // Negative variant: a foreign element inside an enum must fail.
    ElementId en = s.newInstance(builtin::Enum);
    s.setSlot(en, "name", Value::str("E"));
    ElementId member = s.newInstance(en);
    ElementId foreign = s.newInstance(builtin::Class);
    s.setSlot(en, "elements", Value::set({Value::ref(member), Value::ref(foreign)}));
    ok = ok && !checkElement(s, en).passed();
    verdict("1 bootstrap self-description", ok);
  } catch (const Error& e) {
    verdict("1 bootstrap self-description", false, e.what());
  }
}

// 2. Checking the bean listing reproduces the published report exactly.
void criterion2() {
  try {
    Store s = Store::bootstrap();
    ElementId p = parseBeanContainer(s, slurp("order_processing.bean.mpk"));
    CheckReport report = checkContainer(s, p);
    const std::string msg = "Must specify a persistent name.";

    auto result = [&](const char* cls, const char* constraint) -> const ConstraintResult* {
      const CheckReport* child = report.child(cls);
      return child ? child->find(constraint) : nullptr;
    };
    auto passes = [&](const char* cls, const char* constraint) {
      const ConstraintResult* r = result(cls, constraint);
      return r && r->passed;
    };
    auto failsWithMsg = [&](const char* cls, const char* constraint) {
      const ConstraintResult* r = result(cls, constraint);
      return r && !r->passed && r->message == msg;
    };

    bool ok = passes("Order", "HasName") && passes("Order", "OneId") &&
              failsWithMsg("Customer", "HasName") && passes("Customer", "OneId") &&
              failsWithMsg("Product", "HasName") && passes("Product", "OneId") &&
              failsWithMsg("NamedElement", "HasName") && passes("NamedElement", "OneId") &&
              !report.passed();
    verdict("2 published check report reproduced", ok);
  } catch (const Error& e) {
    verdict("2 published check report reproduced", false, e.what());
  }
}

// 3. Generated Order.java equals the golden listing after normalization.
void criterion3() {
  try {
    Store s = Store::bootstrap();
    ElementId p = parseBeanContainer(s, slurp("order.bean.mpk"));
    ElementId order = s.modellingElements(p).at(0);
    OutputSink sink;
    codeEntityBean(s, order, sink);
    const bool ok = normalizeJava(sink.str()) == normalizeJava(slurp("Order.java.golden"));
    verdict("3 golden codegen", ok);
  } catch (const Error& e) {
    verdict("3 golden codegen", false, e.what());
  }
}

// 4. The bean form and its package-form spelling build isomorphic stores.
void criterion4() {
  try {
    Store a = Store::bootstrap();
    ElementId pa = parseBeanContainer(a, slurp("order_processing.bean.mpk"));
    Store b = Store::bootstrap();
    ElementId pb = parsePackageDef(b, slurp("order_processing_equiv.pkg.mpk"));
    bool ok = mpktest::reachable(a, pa).size() <= 50;
    auto iso = mpktest::isomorphic(a, pa, b, pb);
    ok = ok && iso.ok;
    verdict("4 desugaring isomorphism", ok, iso.detail);
  } catch (const Error& e) {
    verdict("4 desugaring isomorphism", false, e.what());
  }
}

// 5. The palette derives from the meta-package chain and collapses with it.
void criterion5() {
  try {
    Store s = Store::bootstrap();
    ElementId p = parseBeanContainer(s, slurp("order_processing.bean.mpk"));
    bool ok = true;
    {
      tool::Tool t(s, p);
      ok = t.palette().size() == 2 && t.palette()[0].name == "XCore" &&
           t.palette()[1].name == "Beans";
      std::vector<std::string> expected;
      for (ElementId c : s.wideModellingElements(builtin::Beans)) expected.push_back(s.name(c));
      std::vector<std::string> got;
      for (const auto& b : t.palette()[1].buttons) got.push_back(b.name);
      ok = ok && got == expected;
    }
    s.setSlot(p, "metaPackage", Value::ref(builtin::XCore));
    {
      tool::Tool t(s, p);
      ok = ok && t.palette().size() == 1 && t.palette()[0].name == "XCore";
    }
    verdict("5 palette derivation", ok);
  } catch (const Error& e) {
    verdict("5 palette derivation", false, e.what());
  }
}

// 6. Synchronization property suite.
void criterion6() {
  try {
    const std::uint64_t seed = mpktest::seedFromEnv(20260824);
    std::mt19937_64 meta(seed);
    bool ok = true;
    std::string detail;

    for (int seq = 0; seq < 1000 && ok; ++seq) {
      Store s = Store::bootstrap();
      ElementId p = parseBeanContainer(s, slurp("order_processing.bean.mpk"));
      tool::Tool t(s, p);
      mpktest::EventGen gen(s, t, meta());
      const int len = static_cast<int>(meta() % 51);
      for (int i = 0; i < len && ok; ++i) {
        gen.step();
        auto vs = t.syncCheck();
        if (!vs.empty()) {
          ok = false;
          detail = "sequence " + std::to_string(seq) + " event " + std::to_string(i) + ": " +
                   vs[0].constraintName + " (" + vs[0].detail + ") [seed " +
                   std::to_string(seed) + "]";
        }
      }
    }

    // Every single-maplet corruption must trip a named constraint.
    if (ok) {
      Store s = Store::bootstrap();
      ElementId p = parseBeanContainer(s, slurp("order_processing.bean.mpk"));
      const std::size_t classCount = 4;
      for (std::size_t i = 0; i < classCount && ok; ++i) {
        for (int mode = 0; mode < 3 && ok; ++mode) {
          tool::Tool t(s, p);
          auto& maplets = t.mutableMapping().classBoxXClasses;
          if (mode == 0) maplets[i].cls = builtin::Element;      // retargeted
          if (mode == 1) maplets[i].node = 999;                  // dangling
          if (mode == 2) maplets.erase(maplets.begin() + static_cast<long>(i));
          auto vs = t.syncCheck();
          ok = !vs.empty() && !vs[0].constraintName.empty();
          if (!ok) detail = "corruption of class maplet " + std::to_string(i) + " went unnoticed";
        }
      }
      for (int mode = 0; mode < 2 && ok; ++mode) {
        tool::Tool t(s, p);
        auto& m = t.mutableMapping().classBoxXClasses[1];  // Order: four att boxes
        if (mode == 0) m.attBoxes[0].attribute = builtin::Element;
        if (mode == 1) m.attBoxes.pop_back();
        auto vs = t.syncCheck();
        ok = !vs.empty() && !vs[0].constraintName.empty();
        if (!ok) detail = "att box corruption went unnoticed";
      }
    }

    // OneToOne against a brute-force pairwise scan on sets of size <= 10.
    if (ok) {
      std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
      for (int round = 0; round < 500 && ok; ++round) {
        std::vector<std::pair<long long, long long>> maplets;
        const int n = static_cast<int>(rng() % 11);
        for (int i = 0; i < n; ++i)
          maplets.push_back({static_cast<long long>(rng() % 6), static_cast<long long>(rng() % 6)});
        bool brute = true;
        for (std::size_t i = 0; i < maplets.size(); ++i)
          for (std::size_t j = i + 1; j < maplets.size(); ++j)
            if (maplets[i].first == maplets[j].first || maplets[i].second == maplets[j].second)
              brute = false;
        const bool checked = tool::checkOneToOne("F", maplets).empty();
        ok = checked == brute;
        if (!ok) detail = "OneToOne disagrees with the pairwise oracle";
      }
    }
    verdict("6 synchronization properties", ok, detail);
  } catch (const Error& e) {
    verdict("6 synchronization properties", false, e.what());
  }
}

// 7. Constraint-engine oracles: exists brute force, De Morgan, purity.
void criterion7() {
  try {
    Store s = Store::bootstrap();
    const auto pristine = storeToJson(s);
    const std::uint64_t seed = mpktest::seedFromEnv(7);
    std::mt19937_64 rng(seed);
    bool ok = true;
    std::string detail;

    for (int round = 0; round < 300 && ok; ++round) {
      std::vector<Value> items;
      const int n = static_cast<int>(rng() % 6);
      for (int i = 0; i < n; ++i) items.push_back(Value::integer(static_cast<int>(rng() % 5)));
      Value set = Value::set(items);
      const int target = static_cast<int>(rng() % 10);
      Env env = builtinEnv(s);
      env["S"] = set;
      env["t"] = Value::integer(target);
      Value got = evalExpr(s, parseExpr("(exists (a b) S (= (+ a b) t))"), env, Value());
      bool brute = false;
      for (const Value& a : set.items())
        for (const Value& b : set.items())
          if (a.asInt() + b.asInt() == target) brute = true;
      ok = got == Value::boolean(brute);
      if (!ok) detail = "exists oracle mismatch [seed " + std::to_string(seed) + "]";
    }

    std::function<ExprPtr(int)> gen = [&](int depth) -> ExprPtr {
      if (depth == 0 || rng() % 3 == 0) {
        switch (rng() % 3) {
          case 0: return Expr::lit(Value::boolean(rng() % 2 == 0));
          case 1: return Expr::var("x");
          default: return Expr::var("y");
        }
      }
      switch (rng() % 4) {
        case 0: return Expr::bin("and", gen(depth - 1), gen(depth - 1));
        case 1: return Expr::bin("or", gen(depth - 1), gen(depth - 1));
        case 2: return Expr::bin("implies", gen(depth - 1), gen(depth - 1));
        default: return Expr::negate(gen(depth - 1));
      }
    };
    for (int round = 0; round < 200 && ok; ++round) {
      Env env;
      env["x"] = Value::boolean(rng() % 2 == 0);
      env["y"] = Value::boolean(rng() % 2 == 0);
      ExprPtr a = gen(3), b = gen(3);
      Value lhs = evalExpr(s, Expr::negate(Expr::bin("and", a, b)), env, Value());
      Value rhs = evalExpr(s, Expr::bin("or", Expr::negate(a), Expr::negate(b)), env, Value());
      ok = lhs == rhs;
      if (!ok) detail = "De Morgan violated [seed " + std::to_string(seed) + "]";
    }

    ok = ok && storeToJson(s) == pristine;  // purity over every eval above
    if (detail.empty() && !ok) detail = "evaluation mutated the store";
    verdict("7 constraint-engine oracles", ok, detail);
  } catch (const Error& e) {
    verdict("7 constraint-engine oracles", false, e.what());
  }
}

// 8. tag is "" exactly on direct instances, the meta-class name otherwise.
void criterion8() {
  try {
    Store s = Store::bootstrap();
    ElementId p = parseBeanContainer(s, slurp("order_processing.bean.mpk"));
    bool ok = true;
    for (ElementId e : mpktest::reachable(s, p)) {
      for (ElementId base : {builtin::Class, builtin::Package, builtin::Attribute}) {
        const std::string expected = s.of(e) == base ? "" : s.name(s.of(e));
        ok = ok && s.tag(e, base) == expected;
      }
    }
    // The described diagram labels: entities carry the EntityBean meta-tag.
    ElementId order = s.modellingElements(p).at(1);
    ok = ok && s.tag(order, builtin::Class) == "EntityBean" &&
         s.tag(order, builtin::EntityBean) == "";
    verdict("8 meta-tag derivation", ok);
  } catch (const Error& e) {
    verdict("8 meta-tag derivation", false, e.what());
  }
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  else std::printf("all 8 criteria passed\n");
  return failures == 0 ? 0 : 1;
}
