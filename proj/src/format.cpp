#include "grql/syntax.hpp"

namespace grql {

std::string to_string(SurfaceKind k) {
  switch (k) {
    case SurfaceKind::SetLit: return "SetLit";
    case SurfaceKind::ScalarLit: return "ScalarLit";
    case SurfaceKind::EmptyCast: return "EmptyCast";
    case SurfaceKind::Path: return "Path";
    case SurfaceKind::Backlink: return "Backlink";
    case SurfaceKind::Shape: return "Shape";
    case SurfaceKind::Select: return "Select";
    case SurfaceKind::Filter: return "Filter";
    case SurfaceKind::OrderBy: return "OrderBy";
    case SurfaceKind::For: return "For";
    case SurfaceKind::With: return "With";
    case SurfaceKind::If: return "If";
    case SurfaceKind::Call: return "Call";
    case SurfaceKind::Insert: return "Insert";
    case SurfaceKind::Update: return "Update";
    case SurfaceKind::Var: return "Var";
    case SurfaceKind::TypeRef: return "TypeRef";
  }
  return "?";
}

namespace {

// Forms whose trailing expression extends as far right as possible.
bool greedy(const SurfaceExpr& e) {
  switch (e.kind) {
    case SurfaceKind::Filter:
    case SurfaceKind::OrderBy:
    case SurfaceKind::Select:
    case SurfaceKind::With:
    case SurfaceKind::For:
    case SurfaceKind::If: return true;
    default: return false;
  }
}

bool postfix_safe(const SurfaceExpr& e) {
  switch (e.kind) {
    case SurfaceKind::Var:
    case SurfaceKind::TypeRef:
    case SurfaceKind::Path:
    case SurfaceKind::Backlink:
    case SurfaceKind::Shape:
    case SurfaceKind::SetLit:
    case SurfaceKind::EmptyCast: return true;
    case SurfaceKind::Call: return e.name != "not";
    case SurfaceKind::ScalarLit: return !(e.scalar->is_int() && e.scalar->as_int() < 0);
    default: return false;
  }
}

std::string top(const SurfaceExpr& e);

std::string paren(const std::string& s) { return "(" + s + ")"; }

std::string subject(const SurfaceExpr& e) { return postfix_safe(e) ? top(e) : paren(top(e)); }

std::string operand(const SurfaceExpr& e) { return greedy(e) ? paren(top(e)) : top(e); }

std::string items(const std::vector<ShapeItem>& xs) {
  if (xs.empty()) return "{}";
  std::string out = "{ ";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) out += ", ";
    const auto& it = xs[i];
    out += it.label.spelled();
    switch (it.form) {
      case ShapeItem::Form::Shorthand: break;
      case ShapeItem::Form::Assign: out += " := " + top(*it.expr); break;
      case ShapeItem::Form::Nested: out += ": " + items(it.items); break;
    }
  }
  return out + " }";
}

std::string top(const SurfaceExpr& e) {
  switch (e.kind) {
    case SurfaceKind::SetLit: {
      std::string out = "{";
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        if (i > 0) out += ", ";
        out += top(*e.children[i]);
      }
      return out + "}";
    }
    case SurfaceKind::ScalarLit: return e.scalar->to_literal();
    case SurfaceKind::EmptyCast: return "<" + e.name + ">{}";
    case SurfaceKind::Path: {
      const std::string lhs = e.children[0] ? subject(*e.children[0]) : "";
      return lhs + "." + e.label.spelled();
    }
    case SurfaceKind::Backlink: {
      const std::string lhs = e.children[0] ? subject(*e.children[0]) : "";
      return lhs + ".<" + e.label.spelled() + "[is " + e.name + "]";
    }
    case SurfaceKind::Shape: return subject(*e.children[0]) + " " + items(e.items);
    case SurfaceKind::Select: return "select " + top(*e.children[0]);
    case SurfaceKind::Filter:
    case SurfaceKind::OrderBy: {
      const SurfaceExpr& s = *e.children[0];
      const bool chain = s.kind == SurfaceKind::Filter || s.kind == SurfaceKind::OrderBy;
      const std::string lhs = chain ? top(s) : operand(s);
      const char* kw = e.kind == SurfaceKind::Filter ? " filter " : " order by ";
      return lhs + kw + operand(*e.children[1]);
    }
    case SurfaceKind::For:
      return "for " + e.name + " in " + operand(*e.children[0]) + " union " + top(*e.children[1]);
    case SurfaceKind::With:
      return "with " + e.name + " := " + top(*e.children[0]) + " select " + top(*e.children[1]);
    case SurfaceKind::If:
      return "if " + top(*e.children[0]) + " then " + top(*e.children[1]) + " else " + top(*e.children[2]);
    case SurfaceKind::Call: {
      std::string out = e.name + "(";
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        if (i > 0) out += ", ";
        out += top(*e.children[i]);
      }
      return out + ")";
    }
    case SurfaceKind::Insert: return "insert " + e.name + " " + items(e.items);
    case SurfaceKind::Update: return "update " + top(*e.children[0]) + " set " + items(e.items);
    case SurfaceKind::Var:
    case SurfaceKind::TypeRef: return e.name;
  }
  return "?";
}

bool items_equal(const std::vector<ShapeItem>& a, const std::vector<ShapeItem>& b);

bool ptr_equal(const SurfacePtr& a, const SurfacePtr& b) {
  if (!a || !b) return !a && !b;
  return surface_equal(*a, *b);
}

bool items_equal(const std::vector<ShapeItem>& a, const std::vector<ShapeItem>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i].label == b[i].label) || a[i].form != b[i].form) return false;
    if (!ptr_equal(a[i].expr, b[i].expr) || !items_equal(a[i].items, b[i].items)) return false;
  }
  return true;
}

}  // namespace

std::string format_expr(const SurfaceExpr& e) { return top(e); }

bool surface_equal(const SurfaceExpr& a, const SurfaceExpr& b) {
  if (a.kind != b.kind || a.name != b.name || !(a.label == b.label) || a.scalar != b.scalar) return false;
  if (a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!ptr_equal(a.children[i], b.children[i])) return false;
  }
  return items_equal(a.items, b.items);
}

}  // namespace grql
