#include "mpk/store.hpp"

#include <algorithm>

#include "mpk/errors.hpp"

namespace mpk {

namespace {

struct DaemonGuard {
  bool& flag;
  explicit DaemonGuard(bool& f) : flag(f) { flag = true; }
  ~DaemonGuard() { flag = false; }
};

}  // namespace

const Element& Store::element(ElementId id) const {
  auto it = elements_.find(id);
  if (it == elements_.end()) fail("UnknownElement", "no element with id " + std::to_string(id));
  return it->second;
}

void Store::requireExists(ElementId id) const { (void)element(id); }

void Store::requireMutable() const {
  if (inDaemon_) fail("ReentrantMutation", "daemons must not mutate the store");
}

std::string Store::name(ElementId e) const {
  const Element& el = element(e);
  auto it = el.slots.find("name");
  if (it == el.slots.end() || !it->second.isStr()) return "";
  return it->second.asStr();
}

ElementId Store::insertRaw(Element e) {
  ElementId id = e.id;
  elements_[id] = std::move(e);
  if (id >= nextId_) nextId_ = id + 1;
  return id;
}

void Store::allParentsInto(ElementId c, std::vector<ElementId>& out,
                           std::vector<ElementId>& stack) const {
  if (std::find(stack.begin(), stack.end(), c) != stack.end())
    fail("CyclicInheritance", "parents cycle through " + name(c) + " (id " + std::to_string(c) + ")");
  if (std::find(out.begin(), out.end(), c) != out.end()) return;
  out.push_back(c);
  stack.push_back(c);
  for (ElementId p : members(c, "parents")) allParentsInto(p, out, stack);
  stack.pop_back();
}

std::vector<ElementId> Store::allParents(ElementId c) const {
  requireExists(c);
  if (!isKindOf(c, builtin::Class)) fail("NotAClass", name(c) + " is not a kind of Class");
  std::vector<ElementId> out, stack;
  allParentsInto(c, out, stack);
  std::sort(out.begin(), out.end());
  return out;
}

bool Store::isKindOf(ElementId e, ElementId c) const {
  requireExists(e);
  requireExists(c);
  // Walk the parents closure of of(e) without the kind checks of
  // allParents, which itself needs isKindOf.
  std::vector<ElementId> out, stack;
  allParentsInto(of(e), out, stack);
  return std::find(out.begin(), out.end(), c) != out.end();
}

std::vector<ElementId> Store::members(ElementId e, const std::string& slot) const {
  const Value& v = getSlot(e, slot);
  std::vector<ElementId> out;
  for (const Value& item : v.items())
    if (item.isRef()) out.push_back(item.asRef());
  return out;
}

ElementId Store::metaPackage(ElementId p) const {
  const Value& v = getSlot(p, "metaPackage");
  return v.isRef() ? v.asRef() : kNoElement;
}

std::vector<ElementId> Store::packageElements(ElementId p) const {
  if (!isKindOf(p, builtin::Package)) fail("NotAPackage", name(p) + " is not a kind of Package");
  return members(p, "elements");
}

std::vector<ElementId> Store::modellingElements(ElementId p) const {
  std::vector<ElementId> out;
  for (ElementId e : packageElements(p))
    if (isKindOf(e, builtin::Class)) out.push_back(e);
  return out;
}

std::vector<ElementId> Store::wideModellingElements(ElementId p) const {
  std::vector<ElementId> out;
  for (ElementId e : packageElements(p)) {
    if (!isKindOf(e, builtin::Class)) continue;
    auto ps = allParents(e);
    auto has = [&](ElementId c) {
      return std::binary_search(ps.begin(), ps.end(), c);
    };
    if (has(builtin::Package) || has(builtin::Class) || has(builtin::Attribute))
      out.push_back(e);
  }
  return out;
}

std::string Store::tag(ElementId e, ElementId expected) const {
  requireExists(e);
  if (!isKindOf(expected, builtin::Class))
    fail("NotAClass", "tag expects a class, got " + name(expected));
  ElementId cls = of(e);
  return cls == expected ? "" : name(cls);
}

bool Store::isMetaPackage(ElementId p) const {
  if (!isKindOf(p, builtin::Package)) fail("NotAPackage", name(p) + " is not a kind of Package");
  auto ps = allParents(p);
  return std::binary_search(ps.begin(), ps.end(), builtin::XCore);
}

std::vector<ElementId> Store::attributesOf(ElementId classId) const {
  std::vector<ElementId> out;
  for (ElementId c : allParents(classId))
    for (ElementId a : members(c, "attributes")) out.push_back(a);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ElementId Store::findAttribute(ElementId classId, const std::string& slotName) const {
  for (ElementId a : attributesOf(classId))
    if (name(a) == slotName) return a;
  return kNoElement;
}

ElementId Store::ownerOf(ElementId attr) const {
  for (const auto& [id, el] : elements_) {
    auto it = el.slots.find("attributes");
    if (it == el.slots.end() || !it->second.isCollection()) continue;
    if (it->second.contains(Value::ref(attr))) return id;
  }
  return kNoElement;
}

ElementId Store::newInstance(ElementId classId) {
  requireMutable();
  requireExists(classId);
  if (!isKindOf(classId, builtin::Class))
    fail("NotAClass", name(classId) + " (id " + std::to_string(classId) + ") is not a kind of Class");

  Element el;
  el.id = nextId_++;
  el.of = classId;
  for (ElementId a : attributesOf(classId)) {
    const std::string slotName = name(a);
    if (getSlot(a, "many").asBool()) {
      el.slots[slotName] = Value::emptySet();
      continue;
    }
    const Value& type = getSlot(a, "type");
    ElementId t = type.isRef() ? type.asRef() : kNoElement;
    if (t == builtin::String) el.slots[slotName] = Value::str("");
    else if (t == builtin::Integer) el.slots[slotName] = Value::integer(0);
    else if (t == builtin::Boolean) el.slots[slotName] = Value::boolean(false);
    else el.slots[slotName] = Value();
  }
  // New classes inherit Element implicitly, and every package speaks XCore
  // unless told otherwise.
  if (el.slots.count("parents")) el.slots["parents"] = Value::set({Value::ref(builtin::Element)});
  {
    auto ps = allParents(classId);
    if (std::binary_search(ps.begin(), ps.end(), builtin::Package))
      el.slots["metaPackage"] = Value::ref(builtin::XCore);
  }
  ElementId id = el.id;
  elements_[id] = std::move(el);
  fire({ChangeEvent::Kind::ElementAdded, id, "", Value(), Value()});
  return id;
}

void Store::checkSlotValue(ElementId attr, const std::string& slot, const Value& v) const {
  const bool many = getSlot(attr, "many").asBool();
  const Value& type = getSlot(attr, "type");
  ElementId t = type.isRef() ? type.asRef() : kNoElement;

  auto checkScalar = [&](const Value& x) {
    if (t == kNoElement) return;  // untyped attribute accepts anything scalar
    if (t == builtin::String) {
      if (!x.isStr()) fail("TypeMismatch", slot + " expects a string, got " + x.describe());
    } else if (t == builtin::Integer) {
      if (!x.isInt()) fail("TypeMismatch", slot + " expects an integer, got " + x.describe());
    } else if (t == builtin::Boolean) {
      if (!x.isBool()) fail("TypeMismatch", slot + " expects a boolean, got " + x.describe());
    } else {
      if (x.isNull()) return;
      if (!x.isRef()) fail("TypeMismatch", slot + " expects a reference, got " + x.describe());
      // Everything is an element, so the Element type admits any ref.
      if (t != builtin::Element && !isKindOf(x.asRef(), t))
        fail("TypeMismatch", slot + " expects a kind of " + name(t) + ", got " + name(x.asRef()));
    }
  };

  if (many) {
    if (!v.isSet()) fail("TypeMismatch", slot + " expects a set, got " + v.describe());
    for (const Value& item : v.items()) checkScalar(item);
  } else {
    checkScalar(v);
  }
}

void Store::setSlotInternal(ElementId e, const std::string& slot, const Value& v) {
  Element& el = elements_.at(e);
  Value old = el.slots.at(slot);
  el.slots[slot] = v;
  fire({ChangeEvent::Kind::SlotChanged, e, slot, std::move(old), v});
}

void Store::setSlot(ElementId e, const std::string& slot, const Value& v) {
  requireMutable();
  const Element& el = element(e);
  if (!el.slots.count(slot))
    fail("UnknownSlot", name(e) + " (id " + std::to_string(e) + ") has no slot '" + slot + "'");
  ElementId attr = findAttribute(el.of, slot);
  if (attr != kNoElement) checkSlotValue(attr, slot, v);
  setSlotInternal(e, slot, v);
}

const Value& Store::getSlot(ElementId e, const std::string& slot) const {
  const Element& el = element(e);
  auto it = el.slots.find(slot);
  if (it == el.slots.end())
    fail("UnknownSlot", name(e) + " (id " + std::to_string(e) + ") has no slot '" + slot + "'");
  return it->second;
}

bool Store::hasSlot(ElementId e, const std::string& slot) const {
  return element(e).slots.count(slot) != 0;
}

void Store::removeElement(ElementId e) {
  requireMutable();
  requireExists(e);
  elements_.erase(e);
  fire({ChangeEvent::Kind::ElementRemoved, e, "", Value(), Value()});

  // Cascade: strip the dead ref from collections, nullify scalar refs.
  const Value dead = Value::ref(e);
  std::vector<std::pair<ElementId, std::string>> touched;
  for (const auto& [id, el] : elements_)
    for (const auto& [slot, v] : el.slots) {
      if (v.isRef() && v.asRef() == e) touched.emplace_back(id, slot);
      else if (v.isCollection() && v.contains(dead)) touched.emplace_back(id, slot);
    }
  for (const auto& [id, slot] : touched) {
    const Value& v = elements_.at(id).slots.at(slot);
    setSlotInternal(id, slot, v.isCollection() ? v.withRemoved(dead) : Value());
  }
}

int Store::addDaemon(Daemon hook) {
  int id = nextDaemonId_++;
  daemons_.emplace_back(id, std::move(hook));
  return id;
}

void Store::removeDaemon(int id) {
  auto it = std::find_if(daemons_.begin(), daemons_.end(),
                         [&](const auto& d) { return d.first == id; });
  if (it == daemons_.end()) fail("UnknownDaemon", "no daemon with id " + std::to_string(id));
  daemons_.erase(it);
}

void Store::fire(const ChangeEvent& ev) {
  if (daemons_.empty()) return;
  DaemonGuard guard(inDaemon_);
  auto snapshot = daemons_;  // registration order, stable against removal
  for (auto& [id, hook] : snapshot) hook(*this, ev);
}

}  // namespace mpk
