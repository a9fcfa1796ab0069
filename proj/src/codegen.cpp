#include "mpk/codegen.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "mpk/errors.hpp"

namespace mpk {

namespace {

ExprPtr navSelf(const std::string& slot) { return Expr::nav(Expr::self(), slot); }

Value attrOf(const Env& env, const std::string& binder) { return env.at(binder); }

}  // namespace

std::string javaTypeName(const Store& store, ElementId attr) {
  const Value& type = store.getSlot(attr, "type");
  if (!type.isRef())
    fail("UnmappableType", "attribute '" + store.name(attr) + "' has no type");
  ElementId t = type.asRef();
  if (t == builtin::Integer) return "int";
  if (t == builtin::String) return "String";
  if (t == builtin::Boolean) return "boolean";
  if (store.isKindOf(t, builtin::EntityBean)) return store.name(t);
  fail("UnmappableType", "no Java mapping for type '" + store.name(t) + "' of attribute '" +
                             store.name(attr) + "'");
}

bool canGet(const Store& store, ElementId attr) {
  const Value& mods = store.getSlot(attr, "modifiers");
  return mods.items().empty() || mods.contains(Value::str("?"));
}

bool canSet(const Store& store, ElementId attr) {
  const Value& mods = store.getSlot(attr, "modifiers");
  return mods.items().empty() || mods.contains(Value::str("!"));
}

std::string upperCaseInitialLetter(const std::string& name) {
  if (name.empty()) fail("EmptyName", "cannot derive an accessor name from an empty name");
  std::string out = name;
  out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

void codeBeanAttribute(const Store& store, ElementId a, OutputSink& sink) {
  if (!store.isKindOf(a, builtin::BeanAttribute))
    fail("TypeError", store.name(a) + " is not a kind of BeanAttribute");
  const std::string name = store.name(a);
  const std::string Name = upperCaseInitialLetter(name);
  const std::string tn = javaTypeName(store, a);

  auto getCode = makeTemplate(sink.margin(), {
      TemplatePart::text("public " + tn + " get" + Name + "() {\n    return "),
      TemplatePart::hole(navSelf("name")),
      TemplatePart::text(";\n}\n"),
  });
  auto setCode = makeTemplate(sink.margin(), {
      TemplatePart::text("public void set" + Name + "(" + tn + " " + name + ") {\n    this."),
      TemplatePart::hole(navSelf("name")),
      TemplatePart::text(" = "),
      TemplatePart::hole(navSelf("name")),
      TemplatePart::text(";\n}\n"),
  });

  std::vector<TemplatePart> parts;
  parts.push_back(TemplatePart::when(navSelf("isId"),
                                     makeTemplate(sink.margin(), {TemplatePart::text("@Id\n")})));
  parts.push_back(TemplatePart::text("@Column(name=\""));
  parts.push_back(TemplatePart::hole(navSelf("persistAs")));
  parts.push_back(TemplatePart::text("\")\n"));
  // Modifier gate: an empty modifier set means both accessors.
  auto modGate = [](const char* flag) {
    return Expr::bin("or",
                     Expr::bin("=", Expr::call("size", Expr::nav(Expr::self(), "modifiers")),
                               Expr::lit(Value::integer(0))),
                     Expr::call("includes", Expr::nav(Expr::self(), "modifiers"),
                                {}, {Expr::lit(Value::str(flag))}));
  };
  parts.push_back(TemplatePart::when(modGate("?"), getCode));
  parts.push_back(TemplatePart::when(modGate("!"), setCode));

  render(store, *makeTemplate(sink.margin(), std::move(parts)), builtinEnv(store), Value::ref(a),
         sink);
}

void codeEntityBean(const Store& store, ElementId e, OutputSink& sink) {
  if (!store.isKindOf(e, builtin::EntityBean))
    fail("TypeError", store.name(e) + " is not a kind of EntityBean");

  ExprPtr beanGuard = Expr::call("isKindOf", Expr::var("a"), {}, {Expr::var("BeanAttribute")});

  auto fieldLine = makeTemplate(4, {
      TemplatePart::text("private "),
      TemplatePart::emitter([](const Store& s, const Env& env, const Value&, OutputSink& out) {
        out.write(javaTypeName(s, attrOf(env, "a").asRef()));
      }),
      TemplatePart::text(" "),
      TemplatePart::hole(Expr::nav(Expr::var("a"), "name")),
      TemplatePart::text(";\n"),
  });

  auto accessorBlock = makeTemplate(4, {
      TemplatePart::emitter([](const Store& s, const Env& env, const Value&, OutputSink& out) {
        codeBeanAttribute(s, attrOf(env, "a").asRef(), out);
      }),
      TemplatePart::text("\n"),
  });

  Template t;
  t.margin = 0;
  t.parts = {
      TemplatePart::text("@Entity\n@Table(name=\""),
      TemplatePart::hole(navSelf("persistAs")),
      TemplatePart::text("\")\npublic class "),
      TemplatePart::hole(navSelf("name")),
      TemplatePart::text(" {\n\n"),
      TemplatePart::loop("a", navSelf("attributes"), beanGuard, fieldLine),
      TemplatePart::text("\n"),
      TemplatePart::loop("a", navSelf("attributes"), beanGuard, accessorBlock),
      TemplatePart::text("}\n"),
  };
  render(store, t, builtinEnv(store), Value::ref(e), sink);
}

std::string normalizeJava(const std::string& text) {
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;  // blank line
    std::size_t end = line.find_last_not_of(" \t\r");
    out << line.substr(start, end - start + 1) << "\n";
  }
  return out.str();
}

nlohmann::ordered_json generatePackage(const Store& store, ElementId pkg,
                                       const std::string& outDir) {
  nlohmann::ordered_json manifest = nlohmann::ordered_json::array();
  for (ElementId e : store.packageElements(pkg)) {
    if (!store.isKindOf(e, builtin::EntityBean)) continue;
    OutputSink sink;
    codeEntityBean(store, e, sink);
    const std::string file = outDir + "/" + store.name(e) + ".java";
    std::ofstream out(file);
    if (!out) fail("IoError", "cannot write " + file);
    out << sink.str();
    manifest.push_back(nlohmann::ordered_json{{"class", store.name(e)},
                                              {"file", file},
                                              {"table", store.getSlot(e, "persistAs").asStr()}});
  }
  return manifest;
}

}  // namespace mpk
