#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mpk {

using ElementId = std::int64_t;
constexpr ElementId kNoElement = 0;

// Slot carrier. Sets keep their members sorted under the structural total
// order and hold no duplicates, so iteration is deterministic everywhere
// (refs come out in ascending ElementId order).
class Value {
public:
  enum class Kind { Null, Str, Int, Bool, Ref, Set, Seq };

  Value() = default;

  static Value str(std::string s);
  static Value integer(std::int64_t i);
  static Value boolean(bool b);
  static Value ref(ElementId id);
  static Value set(std::vector<Value> items);
  static Value seq(std::vector<Value> items);
  static Value emptySet() { return set({}); }

  Kind kind() const { return kind_; }
  bool isNull() const { return kind_ == Kind::Null; }
  bool isStr() const { return kind_ == Kind::Str; }
  bool isInt() const { return kind_ == Kind::Int; }
  bool isBool() const { return kind_ == Kind::Bool; }
  bool isRef() const { return kind_ == Kind::Ref; }
  bool isSet() const { return kind_ == Kind::Set; }
  bool isSeq() const { return kind_ == Kind::Seq; }
  bool isCollection() const { return isSet() || isSeq(); }

  const std::string& asStr() const;
  std::int64_t asInt() const;
  bool asBool() const;
  ElementId asRef() const;
  const std::vector<Value>& items() const;

  bool contains(const Value& v) const;
  // Set editing; both return the modified set by value.
  Value withAdded(const Value& v) const;
  Value withRemoved(const Value& v) const;

  // Structural total order: kinds rank first, then content.
  static int compare(const Value& a, const Value& b);

  friend bool operator==(const Value& a, const Value& b) { return compare(a, b) == 0; }
  friend bool operator!=(const Value& a, const Value& b) { return compare(a, b) != 0; }
  friend bool operator<(const Value& a, const Value& b) { return compare(a, b) < 0; }

  std::string describe() const;

private:
  Kind kind_ = Kind::Null;
  std::int64_t num_ = 0;  // Int, Bool, Ref
  std::string str_;
  std::vector<Value> items_;
};

}  // namespace mpk
