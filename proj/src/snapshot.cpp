#include "mpk/snapshot.hpp"

#include "mpk/errors.hpp"

namespace mpk {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json valueToJson(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Null: return nullptr;
    case Value::Kind::Str: return ordered_json{{"s", v.asStr()}};
    case Value::Kind::Int: return ordered_json{{"i", v.asInt()}};
    case Value::Kind::Bool: return ordered_json{{"b", v.asBool()}};
    case Value::Kind::Ref: return ordered_json{{"r", v.asRef()}};
    case Value::Kind::Set:
    case Value::Kind::Seq: {
      ordered_json items = ordered_json::array();
      for (const Value& item : v.items()) items.push_back(valueToJson(item));
      return ordered_json{{v.isSet() ? "set" : "seq", std::move(items)}};
    }
  }
  return nullptr;
}

Value valueFromJson(const json& j) {
  if (j.is_null()) return Value();
  if (!j.is_object() || j.size() != 1) fail("BadSnapshot", "malformed value: " + j.dump());
  if (j.contains("s")) return Value::str(j["s"].get<std::string>());
  if (j.contains("i")) return Value::integer(j["i"].get<std::int64_t>());
  if (j.contains("b")) return Value::boolean(j["b"].get<bool>());
  if (j.contains("r")) return Value::ref(j["r"].get<ElementId>());
  auto items = [&](const json& arr) {
    std::vector<Value> out;
    for (const json& item : arr) out.push_back(valueFromJson(item));
    return out;
  };
  if (j.contains("set")) return Value::set(items(j["set"]));
  if (j.contains("seq")) return Value::seq(items(j["seq"]));
  fail("BadSnapshot", "malformed value: " + j.dump());
}

ordered_json storeToJson(const Store& s) {
  ordered_json out;
  out["nextId"] = s.nextId();
  ordered_json elements = ordered_json::array();
  for (const auto& [id, el] : s.elements()) {
    ordered_json slots = ordered_json::object();
    for (const auto& [name, v] : el.slots) slots[name] = valueToJson(v);
    elements.push_back(ordered_json{{"id", id}, {"of", el.of}, {"slots", std::move(slots)}});
  }
  out["elements"] = std::move(elements);
  return out;
}

Store storeFromJson(const json& j) {
  Store s;
  if (!j.contains("elements") || !j.contains("nextId"))
    fail("BadSnapshot", "missing nextId or elements");
  for (const json& ej : j["elements"]) {
    Element el;
    el.id = ej.at("id").get<ElementId>();
    el.of = ej.at("of").get<ElementId>();
    for (const auto& [name, vj] : ej.at("slots").items()) el.slots[name] = valueFromJson(vj);
    s.insertRaw(std::move(el));
  }
  s.setNextId(j["nextId"].get<ElementId>());
  return s;
}

}  // namespace mpk
