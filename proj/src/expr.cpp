#include "mpk/expr.hpp"

#include <cctype>
#include <sstream>

#include "mpk/errors.hpp"

namespace mpk {

namespace {

const char* kBinOps[] = {"=", "<>", "and", "or", "implies", "+"};
const char* kBinderOps[] = {"forAll", "exists", "select", "iterate"};
const char* kPlainOps[] = {"size", "includes", "subSet", "isKindOf", "of",   "name",
                           "tag",  "allParents", "modellingElements", "classes",
                           "attributes", "nodes"};

bool isIn(const std::string& s, const auto& table) {
  for (const char* t : table)
    if (s == t) return true;
  return false;
}

}  // namespace

ExprPtr Expr::self() {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::SelfRef;
  return e;
}

ExprPtr Expr::var(std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Var;
  e->nameOrOp = std::move(name);
  return e;
}

ExprPtr Expr::lit(Value v) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Lit;
  e->literal = std::move(v);
  return e;
}

ExprPtr Expr::nav(ExprPtr target, std::string slot) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Nav;
  e->target = std::move(target);
  e->nameOrOp = std::move(slot);
  return e;
}

ExprPtr Expr::call(std::string op, ExprPtr target, std::vector<std::string> binders,
                   std::vector<ExprPtr> args) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Call;
  e->nameOrOp = std::move(op);
  e->target = std::move(target);
  e->binders = std::move(binders);
  e->args = std::move(args);
  return e;
}

ExprPtr Expr::bin(std::string op, ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Bin;
  e->nameOrOp = std::move(op);
  e->target = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

ExprPtr Expr::negate(ExprPtr inner) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Not;
  e->target = std::move(inner);
  return e;
}

namespace {

void printInto(const ExprPtr& e, std::ostream& out) {
  switch (e->kind) {
    case Expr::Kind::SelfRef:
      out << "self";
      break;
    case Expr::Kind::Var:
      out << e->nameOrOp;
      break;
    case Expr::Kind::Lit: {
      const Value& v = e->literal;
      if (v.isStr()) {
        out << '"';
        for (char c : v.asStr()) {
          if (c == '"' || c == '\\') out << '\\';
          out << c;
        }
        out << '"';
      } else if (v.isInt()) {
        out << v.asInt();
      } else if (v.isBool()) {
        out << (v.asBool() ? "true" : "false");
      } else if (v.isNull()) {
        out << "null";
      } else {
        fail("TypeError", "unprintable literal " + v.describe());
      }
      break;
    }
    case Expr::Kind::Nav:
      out << "(nav ";
      printInto(e->target, out);
      out << ' ' << e->nameOrOp << ')';
      break;
    case Expr::Kind::Not:
      out << "(not ";
      printInto(e->target, out);
      out << ')';
      break;
    case Expr::Kind::Bin:
      out << '(' << e->nameOrOp << ' ';
      printInto(e->target, out);
      out << ' ';
      printInto(e->rhs, out);
      out << ')';
      break;
    case Expr::Kind::Call: {
      out << '(' << e->nameOrOp;
      if (!e->binders.empty()) {
        out << " (";
        for (std::size_t i = 0; i < e->binders.size(); ++i) {
          if (i) out << ' ';
          out << e->binders[i];
        }
        out << ')';
      }
      out << ' ';
      printInto(e->target, out);
      for (const ExprPtr& a : e->args) {
        out << ' ';
        printInto(a, out);
      }
      out << ')';
      break;
    }
  }
}

struct SexprToken {
  enum class Kind { LParen, RParen, Atom, Str } kind;
  std::string text;
};

std::vector<SexprToken> lexSexpr(const std::string& text) {
  std::vector<SexprToken> out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '(') {
      out.push_back({SexprToken::Kind::LParen, "("});
      ++i;
    } else if (c == ')') {
      out.push_back({SexprToken::Kind::RParen, ")"});
      ++i;
    } else if (c == '"') {
      std::string s;
      ++i;
      while (i < text.size() && text[i] != '"') {
        if (text[i] == '\\' && i + 1 < text.size()) ++i;
        s += text[i++];
      }
      if (i >= text.size()) fail("ParseError", "unterminated string literal in expression");
      ++i;
      out.push_back({SexprToken::Kind::Str, std::move(s)});
    } else {
      std::string atom;
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
             text[i] != '(' && text[i] != ')' && text[i] != '"')
        atom += text[i++];
      out.push_back({SexprToken::Kind::Atom, std::move(atom)});
    }
  }
  return out;
}

struct SexprParser {
  const std::vector<SexprToken>& toks;
  std::size_t pos = 0;

  const SexprToken& peek() const {
    if (pos >= toks.size()) fail("ParseError", "unexpected end of expression");
    return toks[pos];
  }
  SexprToken next() {
    const SexprToken& t = peek();
    ++pos;
    return t;
  }
  void expect(SexprToken::Kind k, const std::string& what) {
    if (next().kind != k) fail("ParseError", "expected " + what + " in expression");
  }

  std::vector<std::string> binderList() {
    expect(SexprToken::Kind::LParen, "binder list");
    std::vector<std::string> out;
    while (peek().kind == SexprToken::Kind::Atom) out.push_back(next().text);
    expect(SexprToken::Kind::RParen, "')' after binders");
    if (out.empty()) fail("ParseError", "empty binder list");
    return out;
  }

  ExprPtr atom(const std::string& a) {
    if (a == "self") return Expr::self();
    if (a == "true") return Expr::lit(Value::boolean(true));
    if (a == "false") return Expr::lit(Value::boolean(false));
    if (a == "null") return Expr::lit(Value());
    if (!a.empty() && (std::isdigit(static_cast<unsigned char>(a[0])) ||
                       (a[0] == '-' && a.size() > 1)))
      return Expr::lit(Value::integer(std::stoll(a)));
    return Expr::var(a);
  }

  ExprPtr parse() {
    SexprToken t = next();
    if (t.kind == SexprToken::Kind::Str) return Expr::lit(Value::str(t.text));
    if (t.kind == SexprToken::Kind::Atom) return atom(t.text);
    if (t.kind != SexprToken::Kind::LParen) fail("ParseError", "unexpected ')'");

    if (peek().kind != SexprToken::Kind::Atom)
      fail("ParseError", "expected an operator after '('");
    std::string op = next().text;
    ExprPtr result;
    if (op == "nav") {
      ExprPtr target = parse();
      if (peek().kind != SexprToken::Kind::Atom) fail("ParseError", "expected slot name in nav");
      result = Expr::nav(std::move(target), next().text);
    } else if (op == "not") {
      result = Expr::negate(parse());
    } else if (isIn(op, kBinOps)) {
      ExprPtr lhs = parse();
      ExprPtr rhs = parse();
      result = Expr::bin(op, std::move(lhs), std::move(rhs));
    } else if (isIn(op, kBinderOps)) {
      auto binders = binderList();
      ExprPtr target = parse();
      std::vector<ExprPtr> args;
      while (peek().kind != SexprToken::Kind::RParen) args.push_back(parse());
      if (op == "iterate") {
        if (binders.size() != 2 || args.size() != 2)
          fail("ParseError", "iterate takes (elem acc) binders, an init and a body");
      } else if (args.size() != 1) {
        fail("ParseError", op + " takes exactly one body expression");
      } else if (op == "select" && binders.size() != 1) {
        fail("ParseError", "select takes exactly one binder");
      }
      result = Expr::call(op, std::move(target), std::move(binders), std::move(args));
    } else if (isIn(op, kPlainOps)) {
      ExprPtr target = parse();
      std::vector<ExprPtr> args;
      while (peek().kind != SexprToken::Kind::RParen) args.push_back(parse());
      result = Expr::call(op, std::move(target), {}, std::move(args));
    } else {
      fail("ParseError", "unknown operator '" + op + "'");
    }
    expect(SexprToken::Kind::RParen, "')'");
    return result;
  }
};

}  // namespace

std::string printExpr(const ExprPtr& e) {
  std::ostringstream out;
  printInto(e, out);
  return out.str();
}

ExprPtr parseExpr(const std::string& text) {
  auto toks = lexSexpr(text);
  SexprParser p{toks};
  ExprPtr e = p.parse();
  if (p.pos != toks.size()) fail("ParseError", "trailing tokens after expression");
  return e;
}

}  // namespace mpk
