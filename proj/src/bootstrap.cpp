#include <vector>

#include "mpk/store.hpp"

namespace mpk {

namespace {

Value refSet(std::initializer_list<ElementId> ids) {
  std::vector<Value> items;
  for (ElementId id : ids) items.push_back(Value::ref(id));
  return Value::set(std::move(items));
}

// Assembles a raw element with the full Class slot schema.
Element classElement(ElementId id, const std::string& name, Value parents) {
  Element e;
  e.id = id;
  e.of = builtin::Class;
  e.slots["name"] = Value::str(name);
  e.slots["parents"] = std::move(parents);
  e.slots["attributes"] = Value::emptySet();
  e.slots["constraints"] = Value::emptySet();
  e.slots["isAbstract"] = Value::boolean(false);
  return e;
}

Element packageElement(ElementId id, const std::string& name, Value parents) {
  Element e = classElement(id, name, std::move(parents));
  e.of = builtin::Package;
  e.slots["elements"] = Value::emptySet();
  e.slots["metaPackage"] = Value::ref(builtin::XCore);
  return e;
}

struct Builder {
  Store& store;
  ElementId next = builtin::FirstFree;

  ElementId attribute(const std::string& name, ElementId type, bool many = false) {
    Element e;
    e.id = next++;
    e.of = builtin::Attribute;
    e.slots["name"] = Value::str(name);
    e.slots["type"] = type == kNoElement ? Value() : Value::ref(type);
    e.slots["modifiers"] = Value::emptySet();
    e.slots["many"] = Value::boolean(many);
    return store.insertRaw(std::move(e));
  }

  ElementId constraint(const std::string& name, const std::string& body,
                       const std::string& failMsg) {
    Element e;
    e.id = next++;
    e.of = builtin::Constraint;
    e.slots["name"] = Value::str(name);
    e.slots["body"] = Value::str(body);
    e.slots["failMsg"] = Value::str(failMsg);
    return store.insertRaw(std::move(e));
  }

  void attach(ElementId cls, const std::string& slot, ElementId member) {
    Element e = store.element(cls);
    e.slots[slot] = e.slots[slot].withAdded(Value::ref(member));
    store.insertRaw(std::move(e));
  }
};

}  // namespace

Store Store::bootstrap() {
  Store s;

  // The XCore classes. Class classifies itself: the meta-circular fixpoint.
  s.insertRaw(classElement(builtin::Element, "Element", Value::emptySet()));
  s.insertRaw(classElement(builtin::Class, "Class", refSet({builtin::Element})));
  s.insertRaw(classElement(builtin::Package, "Package", refSet({builtin::Class})));
  s.insertRaw(classElement(builtin::Attribute, "Attribute", refSet({builtin::Element})));
  s.insertRaw(classElement(builtin::Constraint, "Constraint", refSet({builtin::Element})));
  s.insertRaw(classElement(builtin::Enum, "Enum", refSet({builtin::Class})));
  s.insertRaw(classElement(builtin::String, "String", refSet({builtin::Element})));
  s.insertRaw(classElement(builtin::Integer, "Integer", refSet({builtin::Element})));
  s.insertRaw(classElement(builtin::Boolean, "Boolean", refSet({builtin::Element})));

  {
    Element xcore = packageElement(builtin::XCore, "XCore", Value::emptySet());
    xcore.slots["elements"] =
        refSet({builtin::Element, builtin::Class, builtin::Package, builtin::Attribute,
                builtin::Constraint, builtin::Enum, builtin::String, builtin::Integer,
                builtin::Boolean});
    s.insertRaw(std::move(xcore));
  }

  // Beans inherits from XCore, which is what makes it a meta-package.
  {
    Element beans = packageElement(builtin::Beans, "Beans", refSet({builtin::XCore}));
    beans.slots["elements"] = refSet({builtin::BeanContainer, builtin::Persistent,
                                      builtin::EntityBean, builtin::BeanAttribute});
    s.insertRaw(std::move(beans));
  }

  s.insertRaw(classElement(builtin::BeanContainer, "BeanContainer", refSet({builtin::Package})));
  {
    Element persistent = classElement(builtin::Persistent, "Persistent", refSet({builtin::Class}));
    persistent.slots["isAbstract"] = Value::boolean(true);
    s.insertRaw(std::move(persistent));
  }
  s.insertRaw(classElement(builtin::EntityBean, "EntityBean",
                           refSet({builtin::Class, builtin::Persistent})));
  s.insertRaw(classElement(builtin::BeanAttribute, "BeanAttribute",
                           refSet({builtin::Attribute, builtin::Persistent})));

  Builder b{s};

  // Slot schemas.
  b.attach(builtin::Class, "attributes", b.attribute("name", builtin::String));
  b.attach(builtin::Class, "attributes", b.attribute("parents", builtin::Class, true));
  b.attach(builtin::Class, "attributes", b.attribute("attributes", builtin::Attribute, true));
  b.attach(builtin::Class, "attributes", b.attribute("constraints", builtin::Constraint, true));
  b.attach(builtin::Class, "attributes", b.attribute("isAbstract", builtin::Boolean));

  b.attach(builtin::Package, "attributes", b.attribute("elements", builtin::Element, true));
  b.attach(builtin::Package, "attributes", b.attribute("metaPackage", builtin::Package));

  b.attach(builtin::Attribute, "attributes", b.attribute("name", builtin::String));
  b.attach(builtin::Attribute, "attributes", b.attribute("type", builtin::Class));
  b.attach(builtin::Attribute, "attributes", b.attribute("modifiers", builtin::String, true));
  b.attach(builtin::Attribute, "attributes", b.attribute("many", builtin::Boolean));

  b.attach(builtin::Constraint, "attributes", b.attribute("name", builtin::String));
  b.attach(builtin::Constraint, "attributes", b.attribute("body", builtin::String));
  b.attach(builtin::Constraint, "attributes", b.attribute("failMsg", builtin::String));

  b.attach(builtin::Enum, "attributes", b.attribute("elements", builtin::Element, true));

  b.attach(builtin::Persistent, "attributes", b.attribute("persistAs", builtin::String));
  b.attach(builtin::BeanAttribute, "attributes", b.attribute("isId", builtin::Boolean));

  // XCore's enum discipline.
  b.attach(builtin::Enum, "constraints",
           b.constraint("EnumMembers",
                        "(forAll (e) (nav self elements) (= (of e) self))",
                        "All members of an enum must be instances of it."));
  b.attach(builtin::Element, "constraints",
           b.constraint("EnumMembership",
                        "(implies (= (of (of self)) Enum) (includes (nav (of self) elements) self))",
                        "An instance of an enum must be one of its members."));

  // The Beans well-formedness rules.
  b.attach(builtin::Persistent, "constraints",
           b.constraint("HasName", "(<> (nav self persistAs) \"\")",
                        "Must specify a persistent name."));
  b.attach(builtin::EntityBean, "constraints",
           b.constraint("OneId",
                        "(not (exists (a1 a2) (nav self attributes) "
                        "(and (<> a1 a2) (and (nav a1 isId) (nav a2 isId)))))",
                        "Cannot have multiple ids."));

  s.setNextId(b.next);
  return s;
}

}  // namespace mpk
