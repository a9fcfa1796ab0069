#include "mpk/templates.hpp"

#include "mpk/errors.hpp"

namespace mpk {

void OutputSink::write(const std::string& s) {
  for (char c : s) {
    if (c == '\n') {
      text_ += '\n';
      atLineStart_ = true;
      continue;
    }
    if (atLineStart_) {
      text_.append(static_cast<std::size_t>(margins_.back()), ' ');
      atLineStart_ = false;
    }
    text_ += c;
  }
}

void OutputSink::pushMargin(int margin) { margins_.push_back(margin); }

void OutputSink::popMargin() {
  if (margins_.size() > 1) margins_.pop_back();
}

TemplatePart TemplatePart::text(std::string s) {
  TemplatePart p;
  p.kind = Kind::Literal;
  p.literal = std::move(s);
  return p;
}

TemplatePart TemplatePart::hole(ExprPtr e) {
  TemplatePart p;
  p.kind = Kind::Hole;
  p.expr = std::move(e);
  return p;
}

TemplatePart TemplatePart::emitter(EmitFn fn) {
  TemplatePart p;
  p.kind = Kind::Emit;
  p.emit = std::move(fn);
  return p;
}

TemplatePart TemplatePart::loop(std::string binder, ExprPtr collection, ExprPtr guard,
                                TemplateRef body) {
  TemplatePart p;
  p.kind = Kind::For;
  p.binder = std::move(binder);
  p.expr = std::move(collection);
  p.guard = std::move(guard);
  p.body = std::move(body);
  return p;
}

TemplatePart TemplatePart::when(ExprPtr cond, TemplateRef body) {
  TemplatePart p;
  p.kind = Kind::If;
  p.expr = std::move(cond);
  p.body = std::move(body);
  return p;
}

TemplateRef makeTemplate(int margin, std::vector<TemplatePart> parts) {
  auto t = std::make_shared<Template>();
  t->margin = margin;
  t->parts = std::move(parts);
  return t;
}

void render(const Store& store, const Template& t, const Env& env, const Value& self,
            OutputSink& sink) {
  sink.pushMargin(t.margin);
  for (const TemplatePart& part : t.parts) {
    switch (part.kind) {
      case TemplatePart::Kind::Literal:
        sink.write(part.literal);
        break;
      case TemplatePart::Kind::Hole: {
        Value v = evalExpr(store, part.expr, env, self);
        if (v.isStr()) sink.write(v.asStr());
        else if (v.isInt()) sink.write(std::to_string(v.asInt()));
        else if (v.isBool()) sink.write(v.asBool() ? "true" : "false");
        else fail("TypeError", "hole " + printExpr(part.expr) + " produced " + v.describe());
        break;
      }
      case TemplatePart::Kind::Emit:
        part.emit(store, env, self, sink);
        break;
      case TemplatePart::Kind::For: {
        Value coll = evalExpr(store, part.expr, env, self);
        for (const Value& item : coll.items()) {
          Env scope = env;
          scope[part.binder] = item;
          if (part.guard && !evalExpr(store, part.guard, scope, self).asBool()) continue;
          render(store, *part.body, scope, self, sink);
        }
        break;
      }
      case TemplatePart::Kind::If: {
        Value cond = evalExpr(store, part.expr, env, self);
        if (cond.asBool()) render(store, *part.body, env, self, sink);
        break;
      }
    }
  }
  sink.popMargin();
}

}  // namespace mpk
