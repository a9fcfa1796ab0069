#include <doctest.h>

#include <fstream>
#include <sstream>

#include "mpk/codegen.hpp"
#include "mpk/errors.hpp"
#include "mpk/syntax.hpp"

using namespace mpk;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(MPK_TEST_DATA_DIR) + "/" + name);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("output sink applies margins lazily") {
  OutputSink sink;
  sink.write("a\n");
  sink.pushMargin(4);
  sink.write("b\n\nc\n");
  sink.popMargin();
  sink.write("d\n");
  // The blank line stays empty: no trailing spaces under the margin.
  CHECK(sink.str() == "a\n    b\n\n    c\nd\n");
}

TEST_CASE("margins nest and restore") {
  OutputSink sink;
  sink.pushMargin(2);
  sink.write("x\n");
  sink.pushMargin(6);
  sink.write("y\n");
  sink.popMargin();
  sink.write("z\n");
  CHECK(sink.str() == "  x\n      y\n  z\n");
  CHECK(sink.margin() == 2);
}

TEST_CASE("java type mapping") {
  Store s = Store::bootstrap();
  ElementId p = parseBeanContainer(s, slurp("order_processing.bean.mpk"));
  auto classes = s.modellingElements(p);
  ElementId order = classes[1];
  auto atts = s.members(order, "attributes");
  CHECK(javaTypeName(s, atts[0]) == "int");     // identifier : Integer
  CHECK(javaTypeName(s, atts[1]) == "String");  // address : String
  CHECK(javaTypeName(s, atts[2]) == "Customer");
  CHECK(javaTypeName(s, atts[3]) == "Product");

  ElementId a = s.newInstance(builtin::BeanAttribute);
  s.setSlot(a, "name", Value::str("bad"));
  s.setSlot(a, "type", Value::ref(builtin::Constraint));
  CHECK_THROWS_WITH_AS(javaTypeName(s, a), doctest::Contains("UnmappableType"), Error);
}

TEST_CASE("modifiers gate the accessors") {
  Store s = Store::bootstrap();
  ElementId a = s.newInstance(builtin::BeanAttribute);
  CHECK(canGet(s, a));
  CHECK(canSet(s, a));
  s.setSlot(a, "modifiers", Value::set({Value::str("?")}));
  CHECK(canGet(s, a));
  CHECK_FALSE(canSet(s, a));
  s.setSlot(a, "modifiers", Value::set({Value::str("!")}));
  CHECK_FALSE(canGet(s, a));
  CHECK(canSet(s, a));
  CHECK(upperCaseInitialLetter("address") == "Address");
  CHECK_THROWS_WITH_AS(upperCaseInitialLetter(""), doctest::Contains("EmptyName"), Error);
}

TEST_CASE("golden: the order entity bean") {
  Store s = Store::bootstrap();
  ElementId p = parseBeanContainer(s, slurp("order.bean.mpk"));
  ElementId order = s.modellingElements(p)[0];
  OutputSink sink;
  codeEntityBean(s, order, sink);
  CHECK(normalizeJava(sink.str()) == normalizeJava(slurp("Order.java.golden")));
}

TEST_CASE("generation is deterministic and brace-balanced") {
  Store s = Store::bootstrap();
  ElementId p = parseBeanContainer(s, slurp("order_processing.bean.mpk"));
  for (ElementId cls : s.modellingElements(p)) {
    OutputSink one, two;
    codeEntityBean(s, cls, one);
    codeEntityBean(s, cls, two);
    CHECK(one.str() == two.str());
    int depth = 0;
    for (char c : one.str()) {
      if (c == '{') ++depth;
      if (c == '}') --depth;
      CHECK(depth >= 0);
    }
    CHECK(depth == 0);
    // No trailing whitespace anywhere in the emitted text.
    std::istringstream lines(one.str());
    std::string line;
    while (std::getline(lines, line))
      CHECK((line.empty() || (line.back() != ' ' && line.back() != '\t')));
  }
}

TEST_CASE("a one-sided modifier drops the other accessor") {
  Store s = Store::bootstrap();
  ElementId p = parseBeanContainer(s, slurp("order.bean.mpk"));
  ElementId order = s.modellingElements(p)[0];
  auto atts = s.members(order, "attributes");
  s.setSlot(atts[1], "modifiers", Value::set({Value::str("?")}));  // address: getter only
  OutputSink sink;
  codeEntityBean(s, order, sink);
  CHECK(sink.str().find("getAddress") != std::string::npos);
  CHECK(sink.str().find("setAddress") == std::string::npos);
}

TEST_CASE("non-bean attributes are skipped, non-beans refused") {
  Store s = Store::bootstrap();
  ElementId p = parseBeanContainer(s, slurp("order.bean.mpk"));
  ElementId order = s.modellingElements(p)[0];
  ElementId plain = s.newInstance(builtin::Attribute);
  s.setSlot(plain, "name", Value::str("transientNote"));
  s.setSlot(plain, "type", Value::ref(builtin::String));
  s.setSlot(order, "attributes",
            s.getSlot(order, "attributes").withAdded(Value::ref(plain)));
  OutputSink sink;
  codeEntityBean(s, order, sink);
  CHECK(sink.str().find("transientNote") == std::string::npos);
  CHECK_THROWS_WITH_AS(codeEntityBean(s, s.newInstance(builtin::Class), sink),
                       doctest::Contains("TypeError"), Error);
}

TEST_CASE("normalizeJava strips indentation and blank lines only") {
  CHECK(normalizeJava("  a {\n\n    b;\n  }\n") == "a {\nb;\n}\n");
  CHECK(normalizeJava("a\r\n") == "a\n");
}
