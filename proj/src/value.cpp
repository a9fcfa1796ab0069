#include "mpk/value.hpp"

#include <algorithm>
#include <sstream>

#include "mpk/errors.hpp"

namespace mpk {

Value Value::str(std::string s) {
  Value v;
  v.kind_ = Kind::Str;
  v.str_ = std::move(s);
  return v;
}

Value Value::integer(std::int64_t i) {
  Value v;
  v.kind_ = Kind::Int;
  v.num_ = i;
  return v;
}

Value Value::boolean(bool b) {
  Value v;
  v.kind_ = Kind::Bool;
  v.num_ = b ? 1 : 0;
  return v;
}

Value Value::ref(ElementId id) {
  Value v;
  v.kind_ = Kind::Ref;
  v.num_ = id;
  return v;
}

Value Value::set(std::vector<Value> items) {
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  Value v;
  v.kind_ = Kind::Set;
  v.items_ = std::move(items);
  return v;
}

Value Value::seq(std::vector<Value> items) {
  Value v;
  v.kind_ = Kind::Seq;
  v.items_ = std::move(items);
  return v;
}

const std::string& Value::asStr() const {
  if (!isStr()) fail("TypeError", "expected a string, got " + describe());
  return str_;
}

std::int64_t Value::asInt() const {
  if (!isInt()) fail("TypeError", "expected an integer, got " + describe());
  return num_;
}

bool Value::asBool() const {
  if (!isBool()) fail("TypeError", "expected a boolean, got " + describe());
  return num_ != 0;
}

ElementId Value::asRef() const {
  if (!isRef()) fail("TypeError", "expected a reference, got " + describe());
  return num_;
}

const std::vector<Value>& Value::items() const {
  if (!isCollection()) fail("TypeError", "expected a collection, got " + describe());
  return items_;
}

bool Value::contains(const Value& v) const {
  if (isSet()) return std::binary_search(items_.begin(), items_.end(), v);
  const auto& xs = items();
  return std::find(xs.begin(), xs.end(), v) != xs.end();
}

Value Value::withAdded(const Value& v) const {
  auto xs = items();
  xs.push_back(v);
  return isSeq() ? seq(std::move(xs)) : set(std::move(xs));
}

Value Value::withRemoved(const Value& v) const {
  auto xs = items();
  xs.erase(std::remove(xs.begin(), xs.end(), v), xs.end());
  return isSeq() ? seq(std::move(xs)) : set(std::move(xs));
}

int Value::compare(const Value& a, const Value& b) {
  if (a.kind_ != b.kind_) return a.kind_ < b.kind_ ? -1 : 1;
  switch (a.kind_) {
    case Kind::Null:
      return 0;
    case Kind::Str:
      return a.str_.compare(b.str_);
    case Kind::Int:
    case Kind::Bool:
    case Kind::Ref:
      return a.num_ < b.num_ ? -1 : a.num_ > b.num_ ? 1 : 0;
    case Kind::Set:
    case Kind::Seq: {
      const std::size_t n = std::min(a.items_.size(), b.items_.size());
      for (std::size_t i = 0; i < n; ++i) {
        if (int c = compare(a.items_[i], b.items_[i]); c != 0) return c;
      }
      if (a.items_.size() != b.items_.size())
        return a.items_.size() < b.items_.size() ? -1 : 1;
      return 0;
    }
  }
  return 0;
}

std::string Value::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::Null: out << "null"; break;
    case Kind::Str: out << '"' << str_ << '"'; break;
    case Kind::Int: out << num_; break;
    case Kind::Bool: out << (num_ ? "true" : "false"); break;
    case Kind::Ref: out << "@" << num_; break;
    case Kind::Set:
    case Kind::Seq: {
      out << (kind_ == Kind::Set ? "Set{" : "Seq{");
      for (std::size_t i = 0; i < items_.size(); ++i) {
        if (i) out << ",";
        out << items_[i].describe();
      }
      out << "}";
      break;
    }
  }
  return out.str();
}

}  // namespace mpk
