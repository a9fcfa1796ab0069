#include "mpk/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>

#include "mpk/errors.hpp"

namespace mpk {

namespace {

const char* kKeywords[] = {"metaclass", "metapackage", "extends", "isabstract", "end", "entity"};
const char kSymbols[] = "()[]:;*=";

std::string at(Span s) { return std::to_string(s.line) + ":" + std::to_string(s.col); }

[[noreturn]] void parseFail(Span s, const std::string& msg) {
  fail("ParseError", at(s) + ": " + msg);
}

}  // namespace

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](char c) {
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(c);
    } else if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') advance(text[i]);
    } else if (c == '@') {
      Span span{line, col};
      advance(c);
      std::string name;
      while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
        name += text[i];
        advance(text[i]);
      }
      if (name.empty()) fail("LexError", at(span) + ": '@' must be followed by a name");
      out.push_back({Token::Kind::AtName, name, span});
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      Span span{line, col};
      std::string name;
      while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
        name += text[i];
        advance(text[i]);
      }
      bool kw = false;
      for (const char* k : kKeywords) kw = kw || name == k;
      out.push_back({kw ? Token::Kind::Keyword : Token::Kind::Name, name, span});
    } else if (std::string_view(kSymbols).find(c) != std::string_view::npos) {
      out.push_back({Token::Kind::Symbol, std::string(1, c), {line, col}});
      advance(c);
    } else {
      fail("LexError", at({line, col}) + ": unexpected character '" + std::string(1, c) + "'");
    }
  }
  out.push_back({Token::Kind::End, "", {line, col}});
  return out;
}

namespace {

// ---------------------------------------------------------------------------
// ASTs (two-pass construction so forward type references resolve)

struct AttDef {
  std::string name;
  Span span;
  bool isId = false;
  std::optional<std::string> persist;
  std::optional<std::string> metaclass;
  std::optional<std::string> typeName;
};

struct ClassDef {
  std::string name;
  Span span;
  std::optional<std::string> persist;
  std::optional<std::string> metaclass;
  bool isAbstract = false;
  std::vector<std::string> extends;
  std::vector<AttDef> atts;
};

struct PackageDef {
  std::string name;
  Span span;
  std::optional<std::string> metaclass;
  std::optional<std::string> metapackage;
  std::vector<ClassDef> classes;
};

struct Cursor {
  const std::vector<Token>& toks;
  std::size_t pos = 0;

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t ix = pos + ahead;
    return ix < toks.size() ? toks[ix] : toks.back();
  }
  Token next() {
    Token t = peek();
    if (t.kind != Token::Kind::End) ++pos;
    return t;
  }
  bool atSymbol(const std::string& s) const {
    return peek().kind == Token::Kind::Symbol && peek().lexeme == s;
  }
  bool atKeyword(const std::string& s) const {
    return peek().kind == Token::Kind::Keyword && peek().lexeme == s;
  }
  bool eat(Token::Kind k, const std::string& lexeme) {
    if (peek().kind == k && peek().lexeme == lexeme) {
      ++pos;
      return true;
    }
    return false;
  }
  std::string expectName(const std::string& what) {
    if (peek().kind != Token::Kind::Name)
      parseFail(peek().span, "expected " + what + ", got '" + peek().lexeme + "'");
    return next().lexeme;
  }
  void expectKeyword(const std::string& kw) {
    if (!eat(Token::Kind::Keyword, kw))
      parseFail(peek().span, "expected '" + kw + "', got '" + peek().lexeme + "'");
  }
  void expectAtName(const std::string& name) {
    if (peek().kind != Token::Kind::AtName || peek().lexeme != name)
      parseFail(peek().span, "expected '@" + name + "'");
    ++pos;
  }
  std::optional<std::string> persistClause() {
    if (!atSymbol("(")) return std::nullopt;
    ++pos;
    std::string n = expectName("a persist name");
    if (!eat(Token::Kind::Symbol, ")")) parseFail(peek().span, "expected ')'");
    return n;
  }
};

AttDef parseAttDef(Cursor& c) {
  AttDef att;
  att.span = c.peek().span;
  if (c.eat(Token::Kind::Symbol, "*")) att.isId = true;
  att.name = c.expectName("an attribute name");
  att.persist = c.persistClause();
  if (c.eat(Token::Kind::Keyword, "metaclass")) att.metaclass = c.expectName("a metaclass name");
  if (c.eat(Token::Kind::Symbol, ":")) att.typeName = c.expectName("a type name");
  c.expectKeyword("end");
  return att;
}

ClassDef parseClassDef(Cursor& c) {
  ClassDef cls;
  cls.span = c.peek().span;
  cls.name = c.expectName("a class name");
  cls.persist = c.persistClause();
  for (;;) {
    if (c.eat(Token::Kind::Keyword, "metaclass")) cls.metaclass = c.expectName("a metaclass name");
    else if (c.eat(Token::Kind::Keyword, "isabstract")) cls.isAbstract = true;
    else if (c.eat(Token::Kind::Keyword, "extends")) cls.extends.push_back(c.expectName("a superclass name"));
    else break;
  }
  while (c.peek().kind == Token::Kind::AtName && c.peek().lexeme == "Attribute") {
    ++c.pos;
    cls.atts.push_back(parseAttDef(c));
  }
  c.expectKeyword("end");
  return cls;
}

PackageDef parsePackageText(const std::string& text) {
  auto toks = tokenize(text);
  Cursor c{toks};
  c.expectAtName("Package");
  PackageDef pkg;
  pkg.span = c.peek().span;
  pkg.name = c.expectName("a package name");
  for (;;) {
    if (c.eat(Token::Kind::Keyword, "metaclass")) pkg.metaclass = c.expectName("a metaclass name");
    else if (c.eat(Token::Kind::Keyword, "metapackage")) pkg.metapackage = c.expectName("a metapackage name");
    else break;
  }
  while (c.peek().kind == Token::Kind::AtName && c.peek().lexeme == "Class") {
    ++c.pos;
    pkg.classes.push_back(parseClassDef(c));
  }
  c.expectKeyword("end");
  if (c.peek().kind != Token::Kind::End)
    parseFail(c.peek().span, "unexpected '" + c.peek().lexeme + "' after package definition");
  return pkg;
}

PackageDef parseBeanText(const std::string& text) {
  auto toks = tokenize(text);
  Cursor c{toks};
  c.expectAtName("BeanContainer");
  PackageDef pkg;
  pkg.span = c.peek().span;
  pkg.name = c.expectName("a container name");
  pkg.metaclass = "BeanContainer";
  pkg.metapackage = "Beans";
  while (c.eat(Token::Kind::Keyword, "entity")) {
    ClassDef cls;
    cls.span = c.peek().span;
    cls.name = c.expectName("an entity name");
    cls.metaclass = "EntityBean";
    cls.persist = c.persistClause();
    if (c.eat(Token::Kind::Symbol, "[")) {
      cls.extends.push_back(c.expectName("a superclass name"));
      if (!c.eat(Token::Kind::Symbol, "]")) parseFail(c.peek().span, "expected ']'");
    } else if (c.eat(Token::Kind::Keyword, "extends")) {
      cls.extends.push_back(c.expectName("a superclass name"));
    }
    // Att ::= ['*'] Name ['(' Name ')'] ':' Type
    while (c.atSymbol("*") || c.peek().kind == Token::Kind::Name) {
      AttDef att;
      att.span = c.peek().span;
      if (c.eat(Token::Kind::Symbol, "*")) att.isId = true;
      att.name = c.expectName("an attribute name");
      att.metaclass = "BeanAttribute";
      att.persist = c.persistClause();
      if (!c.eat(Token::Kind::Symbol, ":")) parseFail(c.peek().span, "expected ':'");
      att.typeName = c.expectName("a type name");
      cls.atts.push_back(std::move(att));
    }
    // Entities with an attribute block close with 'end'; a bare entity may
    // omit it (the next 'entity' or the container's 'end' follows).
    c.eat(Token::Kind::Keyword, "end");
    pkg.classes.push_back(std::move(cls));
  }
  c.expectKeyword("end");
  if (c.peek().kind != Token::Kind::End)
    parseFail(c.peek().span, "unexpected '" + c.peek().lexeme + "' after container definition");

  for (std::size_t i = 0; i < pkg.classes.size(); ++i) {
    for (std::size_t j = i + 1; j < pkg.classes.size(); ++j)
      if (pkg.classes[i].name == pkg.classes[j].name)
        fail("DuplicateEntity", at(pkg.classes[j].span) + ": duplicate entity '" + pkg.classes[j].name + "'");
    const auto& atts = pkg.classes[i].atts;
    for (std::size_t a = 0; a < atts.size(); ++a)
      for (std::size_t b = a + 1; b < atts.size(); ++b)
        if (atts[a].name == atts[b].name)
          fail("DuplicateAttribute", at(atts[b].span) + ": duplicate attribute '" + atts[b].name + "'");
  }
  return pkg;
}

// ---------------------------------------------------------------------------
// Name resolution and store construction

ElementId findPackageByName(const Store& store, const std::string& name) {
  for (const auto& [id, el] : store.elements())
    if (store.isKindOf(id, builtin::Package) && store.name(id) == name) return id;
  return kNoElement;
}

ElementId findInPackage(const Store& store, ElementId pkg, const std::string& name) {
  for (ElementId e : store.packageElements(pkg))
    if (store.name(e) == name) return e;
  return kNoElement;
}

// Searches the meta-package's ancestry, then XCore.
ElementId resolveMeta(const Store& store, ElementId metaPkg, const std::string& name) {
  for (ElementId p : store.allParents(metaPkg)) {
    if (!store.isKindOf(p, builtin::Package)) continue;
    if (ElementId found = findInPackage(store, p, name); found != kNoElement) return found;
  }
  return findInPackage(store, builtin::XCore, name);
}

struct Builder {
  Store& store;
  const PackageDef& def;
  ElementId metaPkg = kNoElement;
  ElementId pkg = kNoElement;
  std::map<std::string, ElementId> classByName;

  ElementId resolveMetaclass(const std::string& name, ElementId requiredKind, Span span) {
    ElementId cls = resolveMeta(store, metaPkg, name);
    if (cls == kNoElement || !store.isKindOf(cls, builtin::Class))
      fail("UnknownMetaclass", at(span) + ": unknown metaclass '" + name + "'");
    auto ps = store.allParents(cls);
    if (!std::binary_search(ps.begin(), ps.end(), requiredKind))
      fail("UnknownMetaclass", at(span) + ": '" + name + "' is not a sub-class of " +
                                   store.name(requiredKind));
    return cls;
  }

  ElementId resolveType(const std::string& name, Span span) {
    if (auto it = classByName.find(name); it != classByName.end()) return it->second;
    if (ElementId t = resolveMeta(store, metaPkg, name); t != kNoElement) return t;
    fail("UnknownType", at(span) + ": unknown type '" + name + "'");
  }

  ElementId build() {
    metaPkg = def.metapackage ? findPackageByName(store, *def.metapackage) : builtin::XCore;
    if (metaPkg == kNoElement)
      fail("UnknownMetaclass", at(def.span) + ": unknown metapackage '" + *def.metapackage + "'");
    ElementId pkgClass = def.metaclass ? resolveMetaclass(*def.metaclass, builtin::Package, def.span)
                                       : builtin::Package;
    pkg = store.newInstance(pkgClass);
    store.setSlot(pkg, "name", Value::str(def.name));
    store.setSlot(pkg, "metaPackage", Value::ref(metaPkg));

    // Pass 1: create the classes so supertypes and attribute types resolve
    // regardless of textual order.
    for (const ClassDef& cd : def.classes) {
      ElementId meta = cd.metaclass ? resolveMetaclass(*cd.metaclass, builtin::Class, cd.span)
                                    : builtin::Class;
      ElementId cls = store.newInstance(meta);
      store.setSlot(cls, "name", Value::str(cd.name));
      if (cd.isAbstract) store.setSlot(cls, "isAbstract", Value::boolean(true));
      if (cd.persist) store.setSlot(cls, "persistAs", Value::str(*cd.persist));
      store.setSlot(pkg, "elements", store.getSlot(pkg, "elements").withAdded(Value::ref(cls)));
      classByName[cd.name] = cls;
    }

    // Pass 2: wire parents and attributes.
    for (const ClassDef& cd : def.classes) {
      ElementId cls = classByName.at(cd.name);
      for (const std::string& super : cd.extends) {
        ElementId parent = resolveType(super, cd.span);
        store.setSlot(cls, "parents", store.getSlot(cls, "parents").withAdded(Value::ref(parent)));
      }
      for (const AttDef& ad : cd.atts) {
        ElementId meta = ad.metaclass ? resolveMetaclass(*ad.metaclass, builtin::Attribute, ad.span)
                                      : builtin::Attribute;
        ElementId attr = store.newInstance(meta);
        store.setSlot(attr, "name", Value::str(ad.name));
        if (ad.typeName) store.setSlot(attr, "type", Value::ref(resolveType(*ad.typeName, ad.span)));
        if (ad.persist) store.setSlot(attr, "persistAs", Value::str(*ad.persist));
        if (ad.isId) store.setSlot(attr, "isId", Value::boolean(true));
        store.setSlot(cls, "attributes",
                      store.getSlot(cls, "attributes").withAdded(Value::ref(attr)));
      }
    }
    return pkg;
  }
};

}  // namespace

ElementId parsePackageDef(Store& store, const std::string& text) {
  PackageDef def = parsePackageText(text);
  Builder b{store, def};
  return b.build();
}

ElementId parseBeanContainer(Store& store, const std::string& text) {
  PackageDef def = parseBeanText(text);
  Builder b{store, def};
  return b.build();
}

SyntaxRegistry SyntaxRegistry::standard() {
  SyntaxRegistry r;
  r.add("Package", parsePackageDef);
  r.add("BeanContainer", parseBeanContainer);
  return r;
}

void SyntaxRegistry::add(const std::string& formName, ParseFn fn) {
  forms_[formName] = std::move(fn);
}

bool SyntaxRegistry::knows(const std::string& formName) const {
  return forms_.count(formName) != 0;
}

ElementId SyntaxRegistry::parse(Store& store, const std::string& text) const {
  auto toks = tokenize(text);
  if (toks.empty() || toks[0].kind != Token::Kind::AtName)
    parseFail(toks.empty() ? Span{} : toks[0].span, "expected a top-level @-form");
  auto it = forms_.find(toks[0].lexeme);
  if (it == forms_.end()) fail("UnknownForm", "no parser registered for '@" + toks[0].lexeme + "'");
  return it->second(store, text);
}

std::string prettyPrint(const Store& store, ElementId pkg) {
  if (!store.isKindOf(pkg, builtin::Package))
    fail("NotAPackage", store.name(pkg) + " is not a kind of Package");
  std::ostringstream out;

  auto persistOf = [&](ElementId e) -> std::string {
    if (store.hasSlot(e, "persistAs")) {
      const Value& v = store.getSlot(e, "persistAs");
      if (v.isStr() && !v.asStr().empty()) return v.asStr();
    }
    return "";
  };

  out << "@Package " << store.name(pkg);
  if (store.of(pkg) != builtin::Package) out << " metaclass " << store.name(store.of(pkg));
  if (store.metaPackage(pkg) != builtin::XCore)
    out << " metapackage " << store.name(store.metaPackage(pkg));
  out << "\n";
  for (ElementId cls : store.packageElements(pkg)) {
    out << "  @Class " << store.name(cls);
    if (auto p = persistOf(cls); !p.empty()) out << " (" << p << ")";
    if (store.of(cls) != builtin::Class) out << " metaclass " << store.name(store.of(cls));
    if (store.hasSlot(cls, "isAbstract") && store.getSlot(cls, "isAbstract").asBool())
      out << " isabstract";
    for (ElementId parent : store.members(cls, "parents"))
      if (parent != builtin::Element) out << " extends " << store.name(parent);
    out << "\n";
    for (ElementId attr : store.members(cls, "attributes")) {
      out << "    @Attribute ";
      if (store.hasSlot(attr, "isId") && store.getSlot(attr, "isId").asBool()) out << "*";
      out << store.name(attr);
      if (auto p = persistOf(attr); !p.empty()) out << " (" << p << ")";
      if (store.of(attr) != builtin::Attribute) out << " metaclass " << store.name(store.of(attr));
      const Value& type = store.getSlot(attr, "type");
      if (type.isRef()) out << " : " << store.name(type.asRef());
      out << " end\n";
    }
    out << "  end\n";
  }
  out << "end\n";
  return out.str();
}

}  // namespace mpk
