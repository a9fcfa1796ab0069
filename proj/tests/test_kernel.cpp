#include <doctest.h>

#include "mpk/errors.hpp"
#include "mpk/snapshot.hpp"
#include "mpk/store.hpp"

using namespace mpk;

TEST_CASE("bootstrap is meta-circular") {
  Store s = Store::bootstrap();
  CHECK(s.of(builtin::Class) == builtin::Class);
  CHECK(s.of(builtin::Element) == builtin::Class);
  CHECK(s.of(builtin::XCore) == builtin::Package);
  CHECK(s.isKindOf(builtin::Package, builtin::Class));
  CHECK(s.isKindOf(builtin::EntityBean, builtin::Class));
  // Subclassing is the allParents relation, distinct from instance-of.
  auto beanParents = s.allParents(builtin::EntityBean);
  CHECK(std::binary_search(beanParents.begin(), beanParents.end(), builtin::Persistent));
  auto attParents = s.allParents(builtin::BeanAttribute);
  CHECK(std::binary_search(attParents.begin(), attParents.end(), builtin::Attribute));
  // Every of-chain lands on Class in finitely many steps.
  for (const auto& [id, e] : s.elements()) {
    ElementId c = id;
    int hops = 0;
    while (c != builtin::Class && hops < 10) {
      c = s.of(c);
      ++hops;
    }
    CHECK(c == builtin::Class);
  }
}

TEST_CASE("beans inherits the xcore language") {
  Store s = Store::bootstrap();
  auto parents = s.allParents(builtin::Beans);
  CHECK(parents == std::vector<ElementId>{builtin::XCore, builtin::Beans});
  CHECK(s.isMetaPackage(builtin::Beans));
  CHECK(s.isMetaPackage(builtin::XCore));
}

TEST_CASE("allParents is reflexive, transitive and sorted") {
  Store s = Store::bootstrap();
  CHECK(s.allParents(builtin::EntityBean) ==
        std::vector<ElementId>{builtin::Element, builtin::Class, builtin::Persistent,
                               builtin::EntityBean});
  CHECK(s.allParents(builtin::Element) == std::vector<ElementId>{builtin::Element});
}

TEST_CASE("cyclic inheritance is detected") {
  Store s = Store::bootstrap();
  ElementId a = s.newInstance(builtin::Class);
  ElementId b = s.newInstance(builtin::Class);
  s.setSlot(a, "parents", Value::set({Value::ref(b)}));
  s.setSlot(b, "parents", Value::set({Value::ref(a)}));
  CHECK_THROWS_WITH_AS(s.allParents(a), doctest::Contains("CyclicInheritance"), Error);
}

TEST_CASE("newInstance fills the declared slots with defaults") {
  Store s = Store::bootstrap();
  ElementId c = s.newInstance(builtin::Class);
  CHECK(s.getSlot(c, "name") == Value::str(""));
  // New classes inherit the universal Element root.
  CHECK(s.getSlot(c, "parents") == Value::set({Value::ref(builtin::Element)}));
  CHECK(s.getSlot(c, "isAbstract") == Value::boolean(false));

  ElementId bean = s.newInstance(builtin::EntityBean);
  CHECK(s.element(bean).slots.count("persistAs") == 1);
  CHECK(s.getSlot(bean, "persistAs") == Value::str(""));

  ElementId p = s.newInstance(builtin::Package);
  CHECK(s.getSlot(p, "metaPackage") == Value::ref(builtin::XCore));

  CHECK_THROWS_WITH_AS(s.newInstance(s.newInstance(builtin::Attribute)),
                       doctest::Contains("NotAClass"), Error);
}

TEST_CASE("setSlot enforces the declared slot schema") {
  Store s = Store::bootstrap();
  ElementId c = s.newInstance(builtin::Class);
  CHECK_THROWS_WITH_AS(s.setSlot(c, "nope", Value::integer(1)), doctest::Contains("UnknownSlot"),
                       Error);
  CHECK_THROWS_WITH_AS(s.setSlot(c, "name", Value::integer(1)), doctest::Contains("TypeMismatch"),
                       Error);
  CHECK_THROWS_WITH_AS(s.setSlot(c, "parents", Value::ref(builtin::Class)),
                       doctest::Contains("TypeMismatch"), Error);
  // Attribute.type is Class-typed: an arbitrary non-class ref is rejected.
  ElementId a = s.newInstance(builtin::Attribute);
  CHECK_THROWS_WITH_AS(s.setSlot(a, "type", Value::ref(a)), doctest::Contains("TypeMismatch"),
                       Error);
  s.setSlot(a, "type", Value::ref(builtin::String));
  CHECK(s.getSlot(a, "type") == Value::ref(builtin::String));
}

TEST_CASE("removeElement strips dangling references") {
  Store s = Store::bootstrap();
  ElementId c = s.newInstance(builtin::Class);
  ElementId a = s.newInstance(builtin::Attribute);
  s.setSlot(a, "name", Value::str("x"));
  s.setSlot(c, "attributes", Value::set({Value::ref(a)}));
  ElementId p = s.newInstance(builtin::Package);
  s.setSlot(p, "elements", Value::set({Value::ref(c)}));

  s.removeElement(a);
  CHECK(s.getSlot(c, "attributes") == Value::emptySet());
  s.removeElement(c);
  CHECK(s.getSlot(p, "elements") == Value::emptySet());
  CHECK_FALSE(s.exists(c));
}

TEST_CASE("daemons observe changes and may not mutate re-entrantly") {
  Store s = Store::bootstrap();
  int fired = 0;
  int id = s.addDaemon([&fired](Store&, const ChangeEvent& ev) {
    if (ev.kind == ChangeEvent::Kind::SlotChanged) ++fired;
  });
  ElementId c = s.newInstance(builtin::Class);
  s.setSlot(c, "name", Value::str("A"));
  CHECK(fired == 1);
  s.removeDaemon(id);
  s.setSlot(c, "name", Value::str("B"));
  CHECK(fired == 1);
  CHECK_THROWS_WITH_AS(s.removeDaemon(id), doctest::Contains("UnknownDaemon"), Error);

  s.addDaemon([](Store& store, const ChangeEvent&) {
    store.setSlot(builtin::Beans, "name", Value::str("oops"));
  });
  CHECK_THROWS_WITH_AS(s.setSlot(c, "name", Value::str("C")),
                       doctest::Contains("ReentrantMutation"), Error);
}

TEST_CASE("modelling elements: narrow and wide readings") {
  Store s = Store::bootstrap();
  CHECK(s.modellingElements(builtin::Beans) ==
        std::vector<ElementId>{builtin::BeanContainer, builtin::Persistent, builtin::EntityBean,
                               builtin::BeanAttribute});
  CHECK(s.wideModellingElements(builtin::XCore) ==
        std::vector<ElementId>{builtin::Class, builtin::Package, builtin::Attribute,
                               builtin::Enum});
}

TEST_CASE("tag is empty exactly for direct instances") {
  Store s = Store::bootstrap();
  ElementId plain = s.newInstance(builtin::Class);
  ElementId bean = s.newInstance(builtin::EntityBean);
  CHECK(s.tag(plain, builtin::Class) == "");
  CHECK(s.tag(bean, builtin::Class) == "EntityBean");
  CHECK(s.tag(bean, builtin::EntityBean) == "");
}

TEST_CASE("snapshots round-trip losslessly") {
  Store s = Store::bootstrap();
  ElementId c = s.newInstance(builtin::EntityBean);
  s.setSlot(c, "name", Value::str("Thing"));
  s.setSlot(c, "persistAs", Value::str("THING"));
  auto j = storeToJson(s);
  Store r = storeFromJson(j);
  CHECK(storeToJson(r) == j);
  CHECK(r.name(c) == "Thing");
  CHECK(r.nextId() == s.nextId());
}
