#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mpk/value.hpp"

namespace mpk {

// Universal object record: everything in the store is one of these.
struct Element {
  ElementId id = kNoElement;
  ElementId of = kNoElement;  // the classifying class
  std::map<std::string, Value> slots;
};

struct ChangeEvent {
  enum class Kind { ElementAdded, ElementRemoved, SlotChanged };
  Kind kind;
  ElementId subject = kNoElement;
  std::string slot;  // SlotChanged only
  Value oldValue;
  Value newValue;
};

// Stable ids for the bootstrapped builtins. Ids up to 32 are reserved;
// everything created after bootstrap starts at 33.
namespace builtin {
constexpr ElementId Element = 1;
constexpr ElementId Class = 2;
constexpr ElementId Package = 3;
constexpr ElementId Attribute = 4;
constexpr ElementId Constraint = 5;
constexpr ElementId Enum = 6;
constexpr ElementId String = 7;
constexpr ElementId Integer = 8;
constexpr ElementId Boolean = 9;
constexpr ElementId XCore = 10;
constexpr ElementId Beans = 11;
constexpr ElementId BeanContainer = 12;
constexpr ElementId Persistent = 13;
constexpr ElementId EntityBean = 14;
constexpr ElementId BeanAttribute = 15;
constexpr ElementId FirstFree = 33;
}  // namespace builtin

// The meta-circular object store. Single-writer: confine an instance to one
// thread of control at a time. Daemons run synchronously on the mutating
// thread and must not mutate the store re-entrantly.
class Store {
public:
  using Daemon = std::function<void(Store&, const ChangeEvent&)>;

  static Store bootstrap();

  bool exists(ElementId id) const { return elements_.count(id) != 0; }
  const Element& element(ElementId id) const;
  const std::map<ElementId, Element>& elements() const { return elements_; }
  ElementId nextId() const { return nextId_; }

  ElementId of(ElementId e) const { return element(e).of; }
  std::string name(ElementId e) const;  // "" when the element has no name slot

  ElementId newInstance(ElementId classId);
  void setSlot(ElementId e, const std::string& slot, const Value& v);
  const Value& getSlot(ElementId e, const std::string& slot) const;
  bool hasSlot(ElementId e, const std::string& slot) const;
  // Removes the element, strips it from every containing collection and
  // nullifies dangling scalar refs.
  void removeElement(ElementId e);

  bool isKindOf(ElementId e, ElementId c) const;
  // Reflexive transitive closure of the parents relation, ascending id.
  std::vector<ElementId> allParents(ElementId c) const;
  // Package members that are kinds of Class.
  std::vector<ElementId> modellingElements(ElementId p) const;
  // Package members that are sub-classes of Package, Class or Attribute;
  // this is the reading the palette uses.
  std::vector<ElementId> wideModellingElements(ElementId p) const;
  std::string tag(ElementId e, ElementId expected) const;
  bool isMetaPackage(ElementId p) const;

  int addDaemon(Daemon hook);
  void removeDaemon(int id);
  std::size_t daemonCount() const { return daemons_.size(); }

  // Convenience over the slot schema.
  std::vector<ElementId> members(ElementId e, const std::string& slot) const;
  ElementId metaPackage(ElementId p) const;
  std::vector<ElementId> packageElements(ElementId p) const;
  // Attribute elements declared on classId or any ancestor, ascending id.
  std::vector<ElementId> attributesOf(ElementId classId) const;
  // The attribute element declaring slotName for instances of classId.
  ElementId findAttribute(ElementId classId, const std::string& slotName) const;
  // The class whose attributes slot contains attr (store scan).
  ElementId ownerOf(ElementId attr) const;

  // Raw insertion used by bootstrap and snapshot loading; skips checks and
  // fires no events.
  ElementId insertRaw(Element e);
  void setNextId(ElementId next) { nextId_ = next; }

private:
  void requireExists(ElementId id) const;
  void requireMutable() const;
  void checkSlotValue(ElementId attr, const std::string& slot, const Value& v) const;
  void fire(const ChangeEvent& ev);
  void setSlotInternal(ElementId e, const std::string& slot, const Value& v);
  void allParentsInto(ElementId c, std::vector<ElementId>& out,
                      std::vector<ElementId>& stack) const;

  std::map<ElementId, Element> elements_;
  ElementId nextId_ = 1;
  std::vector<std::pair<int, Daemon>> daemons_;
  int nextDaemonId_ = 1;
  bool inDaemon_ = false;
};

}  // namespace mpk
