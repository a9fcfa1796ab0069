#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "mpk/eval.hpp"

namespace mpk {

// Margin-aware output accumulator: after every newline the next non-empty
// line starts at the current margin. Indentation is applied lazily, so blank
// lines carry no trailing spaces.
class OutputSink {
public:
  void write(const std::string& s);
  void pushMargin(int margin);
  void popMargin();
  int margin() const { return margins_.back(); }
  const std::string& str() const { return text_; }

private:
  std::string text_;
  std::vector<int> margins_{0};
  bool atLineStart_ = true;
};

struct Template;
using TemplateRef = std::shared_ptr<const Template>;

// One template part: literal text, an evaluated hole, a host emitter hole
// (for nested code calls), a guarded loop or a conditional.
struct TemplatePart {
  enum class Kind { Literal, Hole, Emit, For, If };
  using EmitFn = std::function<void(const Store&, const Env&, const Value& self, OutputSink&)>;

  Kind kind = Kind::Literal;
  std::string literal;
  ExprPtr expr;      // Hole value, For collection, If condition
  EmitFn emit;
  std::string binder;  // For
  ExprPtr guard;       // For when-guard, may be null
  TemplateRef body;    // For / If

  static TemplatePart text(std::string s);
  static TemplatePart hole(ExprPtr e);
  static TemplatePart emitter(EmitFn fn);
  static TemplatePart loop(std::string binder, ExprPtr collection, ExprPtr guard, TemplateRef body);
  static TemplatePart when(ExprPtr cond, TemplateRef body);
};

struct Template {
  int margin = 0;
  std::vector<TemplatePart> parts;
};

TemplateRef makeTemplate(int margin, std::vector<TemplatePart> parts);

// Renders literal parts verbatim (margin-adjusted newlines), holes as their
// stringified values; loops iterate the collection in its deterministic
// order, honoring the when-guard.
void render(const Store& store, const Template& t, const Env& env, const Value& self,
            OutputSink& sink);

}  // namespace mpk
