#include "grql/core.hpp"

#include "overload.hpp"

namespace grql {

using detail::Overload;

const char* constructor_name(std::size_t index) {
  static constexpr const char* kNames[] = {"Var",      "Prim",  "Empty", "Union",   "Name",
                                           "Proj",     "Backlink", "Shaping", "Call", "IfStrict",
                                           "With",     "For",   "OrderBy", "Insert", "Update"};
  static_assert(std::size(kNames) == kCoreConstructorCount);
  return index < kCoreConstructorCount ? kNames[index] : "?";
}

namespace {

bool eq(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return expr_equal(*a, *b);
}

bool shape_eq(const core::Shape& a, const core::Shape& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i].label == b[i].label) || !eq(a[i].expr, b[i].expr)) return false;
  }
  return true;
}

}  // namespace

bool expr_equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      Overload{
          [&](const core::Var& x) { return x.name == b.as<core::Var>()->name; },
          [&](const core::Prim& x) { return x.value == b.as<core::Prim>()->value; },
          [&](const core::Empty& x) { return x.type == b.as<core::Empty>()->type; },
          [&](const core::Union& x) {
            const auto* y = b.as<core::Union>();
            return eq(x.lhs, y->lhs) && eq(x.rhs, y->rhs);
          },
          [&](const core::Name& x) { return x.type == b.as<core::Name>()->type; },
          [&](const core::Proj& x) {
            const auto* y = b.as<core::Proj>();
            return x.label == y->label && eq(x.subject, y->subject);
          },
          [&](const core::Backlink& x) {
            const auto* y = b.as<core::Backlink>();
            return x.label == y->label && x.source == y->source && eq(x.subject, y->subject);
          },
          [&](const core::Shaping& x) {
            const auto* y = b.as<core::Shaping>();
            return x.binder == y->binder && eq(x.subject, y->subject) && shape_eq(x.shape, y->shape);
          },
          [&](const core::Call& x) {
            const auto* y = b.as<core::Call>();
            if (x.function != y->function || x.args.size() != y->args.size()) return false;
            for (std::size_t i = 0; i < x.args.size(); ++i) {
              if (!eq(x.args[i], y->args[i])) return false;
            }
            return true;
          },
          [&](const core::IfStrict& x) {
            const auto* y = b.as<core::IfStrict>();
            return eq(x.cond, y->cond) && eq(x.then_branch, y->then_branch) && eq(x.else_branch, y->else_branch);
          },
          [&](const core::With& x) {
            const auto* y = b.as<core::With>();
            return x.var == y->var && eq(x.bound, y->bound) && eq(x.body, y->body);
          },
          [&](const core::For& x) {
            const auto* y = b.as<core::For>();
            return x.var == y->var && eq(x.source, y->source) && eq(x.body, y->body);
          },
          [&](const core::OrderBy& x) {
            const auto* y = b.as<core::OrderBy>();
            return x.var == y->var && eq(x.subject, y->subject) && eq(x.key, y->key);
          },
          [&](const core::Insert& x) {
            const auto* y = b.as<core::Insert>();
            return x.type == y->type && shape_eq(x.shape, y->shape);
          },
          [&](const core::Update& x) {
            const auto* y = b.as<core::Update>();
            return x.var == y->var && eq(x.subject, y->subject) && shape_eq(x.shape, y->shape);
          },
      },
      a.node);
}

namespace {

std::string show_shape(const core::Shape& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    out += (i == 0 ? " " : ", ") + s[i].label.spelled() + " := " + show(*s[i].expr);
  }
  return out + (s.empty() ? "}" : " }");
}

}  // namespace

std::string show(const Expr& e) {
  return std::visit(
      Overload{
          [](const core::Var& x) { return x.name; },
          [](const core::Prim& x) { return x.value.to_literal(); },
          [](const core::Empty& x) { return "<" + x.type.to_string() + ">{}"; },
          [](const core::Union& x) { return "union(" + show(*x.lhs) + ", " + show(*x.rhs) + ")"; },
          [](const core::Name& x) { return x.type; },
          [](const core::Proj& x) { return show(*x.subject) + "." + x.label.spelled(); },
          [](const core::Backlink& x) {
            return show(*x.subject) + ".<" + x.label.spelled() + "[is " + x.source + "]";
          },
          [](const core::Shaping& x) {
            return "shape(" + show(*x.subject) + "; " + x.binder + ". " + show_shape(x.shape) + ")";
          },
          [](const core::Call& x) {
            std::string out = x.function + "†(";
            for (std::size_t i = 0; i < x.args.size(); ++i) out += (i ? ", " : "") + show(*x.args[i]);
            return out + ")";
          },
          [](const core::IfStrict& x) {
            return "if†(" + show(*x.cond) + "; " + show(*x.then_branch) + "; " + show(*x.else_branch) + ")";
          },
          [](const core::With& x) { return "with(" + show(*x.bound) + "; " + x.var + ". " + show(*x.body) + ")"; },
          [](const core::For& x) { return "for(" + show(*x.source) + "; " + x.var + ". " + show(*x.body) + ")"; },
          [](const core::OrderBy& x) {
            return "orderby(" + show(*x.subject) + "; " + x.var + ". " + show(*x.key) + ")";
          },
          [](const core::Insert& x) { return "insert " + x.type + " " + show_shape(x.shape); },
          [](const core::Update& x) {
            return "update†(" + show(*x.subject) + ") set " + x.var + ". " + show_shape(x.shape);
          },
      },
      e.node);
}

std::size_t expr_size(const Expr& e) {
  auto sz = [](const ExprPtr& p) { return p ? expr_size(*p) : 0; };
  auto shape_sz = [&](const core::Shape& s) {
    std::size_t n = 0;
    for (const auto& el : s) n += sz(el.expr);
    return n;
  };
  return 1 + std::visit(Overload{
                            [](const core::Var&) -> std::size_t { return 0; },
                            [](const core::Prim&) -> std::size_t { return 0; },
                            [](const core::Empty&) -> std::size_t { return 0; },
                            [&](const core::Union& x) { return sz(x.lhs) + sz(x.rhs); },
                            [](const core::Name&) -> std::size_t { return 0; },
                            [&](const core::Proj& x) { return sz(x.subject); },
                            [&](const core::Backlink& x) { return sz(x.subject); },
                            [&](const core::Shaping& x) { return sz(x.subject) + shape_sz(x.shape); },
                            [&](const core::Call& x) {
                              std::size_t n = 0;
                              for (const auto& a : x.args) n += sz(a);
                              return n;
                            },
                            [&](const core::IfStrict& x) {
                              return sz(x.cond) + sz(x.then_branch) + sz(x.else_branch);
                            },
                            [&](const core::With& x) { return sz(x.bound) + sz(x.body); },
                            [&](const core::For& x) { return sz(x.source) + sz(x.body); },
                            [&](const core::OrderBy& x) { return sz(x.subject) + sz(x.key); },
                            [&](const core::Insert& x) { return shape_sz(x.shape); },
                            [&](const core::Update& x) { return sz(x.subject) + shape_sz(x.shape); },
                        },
                        e.node);
}

}  // namespace grql
