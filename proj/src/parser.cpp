#include <algorithm>
#include <limits>
#include <set>

#include "grql/syntax.hpp"
#include "lexer.hpp"

namespace grql {

using detail::Tok;
using detail::Token;

namespace {

class Cursor {
 public:
  explicit Cursor(const std::string& text) : toks_(detail::lex(text)) {}

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_kw(const char* kw) const { return detail::is_keyword(peek(), kw); }

  Token take() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }

  bool accept(Tok k) {
    if (!at(k)) return false;
    take();
    return true;
  }
  bool accept_kw(const char* kw) {
    if (!at_kw(kw)) return false;
    take();
    return true;
  }

  Token expect(Tok k, const std::string& what) {
    if (!at(k)) fail("expected " + what, detail::describe(k));
    return take();
  }
  void expect_kw(const char* kw) {
    if (!at_kw(kw)) fail(std::string("expected '") + kw + "'", std::string("'") + kw + "'");
    take();
  }

  [[noreturn]] void fail(const std::string& message, const std::string& expected = {}) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : detail::describe(t.kind);
    if (t.kind == Tok::Ident) found = "'" + t.text + "'";
    throw ParseError(message + ", found " + found, t.span, expected);
  }

  std::size_t last_end() const { return pos_ == 0 ? 0 : toks_[pos_ - 1].span.end; }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// Schema grammar ------------------------------------------------------------------

SurfaceField parse_field(Cursor& cur, bool link_prop) {
  SurfaceField f;
  const std::size_t begin = cur.peek().span.begin;
  for (;;) {
    if (cur.accept_kw("required")) {
      f.required = true;
    } else if (cur.accept_kw("multi")) {
      f.multi = true;
    } else if (cur.accept_kw("single")) {
      f.multi = false;
    } else {
      break;
    }
  }
  if (cur.at(Tok::AtIdent)) {
    f.label = "@" + cur.take().text;
  } else {
    f.label = cur.expect(Tok::Ident, "a label").text;
  }
  cur.expect(Tok::Colon, "':'");
  f.target = cur.expect(Tok::Ident, "a type").text;
  if (cur.at(Tok::LBrace)) {
    if (link_prop) cur.fail("link properties cannot carry link properties");
    cur.take();
    while (!cur.at(Tok::RBrace)) {
      f.link_props.push_back(parse_field(cur, true));
    }
    cur.take();
  }
  f.span = {begin, cur.last_end()};
  if (!cur.accept(Tok::Semi) && !cur.at(Tok::RBrace)) cur.fail("expected ';'", "';'");
  return f;
}

}  // namespace

std::vector<SurfaceSchemaDecl> parse_schema(const std::string& text) {
  Cursor cur(text);
  std::vector<SurfaceSchemaDecl> out;
  while (!cur.at(Tok::End)) {
    if (cur.accept(Tok::Semi)) continue;
    SurfaceSchemaDecl d;
    const std::size_t begin = cur.peek().span.begin;
    cur.expect_kw("type");
    d.name = cur.expect(Tok::Ident, "a type name").text;
    cur.expect(Tok::LBrace, "'{'");
    while (!cur.at(Tok::RBrace)) {
      d.fields.push_back(parse_field(cur, false));
    }
    cur.take();
    d.span = {begin, cur.last_end()};
    out.push_back(std::move(d));
  }
  return out;
}

namespace {

std::optional<ScalarType> scalar_named(const std::string& n) {
  if (n == "str") return ScalarType::Str;
  if (n == "int64" || n == "int") return ScalarType::Int;
  if (n == "bool") return ScalarType::Bool;
  return std::nullopt;
}

Cardinality mode_of(bool required, bool multi) {
  if (required) return multi ? Cardinality::at_least_one() : Cardinality::one();
  return multi ? Cardinality::many() : Cardinality::optional();
}

}  // namespace

Schema lower_schema(const std::vector<SurfaceSchemaDecl>& decls, Diagnostics& diags) {
  Schema schema;
  for (const auto& d : decls) {
    ObjectTypeDecl obj;
    for (const auto& f : d.fields) {
      const Label label = Label::parse(f.label);
      FieldDecl field{ScalarType::Str, mode_of(f.required, f.multi)};
      if (auto s = scalar_named(f.target)) {
        field.type = *s;
        if (!f.link_props.empty()) {
          diags.push_back({diag::kLabelKindClash, d.name + "." + f.label, "scalar properties cannot carry link properties"});
        }
      } else {
        StoredRefType ref{f.target, {}};
        for (const auto& lp : f.link_props) {
          const std::string spelled = lp.label.front() == '@' ? lp.label : "@" + lp.label;
          auto st = scalar_named(lp.target);
          if (!st) {
            diags.push_back({diag::kLabelKindClash, d.name + "." + f.label + "." + spelled,
                             "link properties must have a scalar type"});
            continue;
          }
          if (!ref.link_props.insert(Label::parse(spelled), LinkPropDecl{*st, mode_of(lp.required, lp.multi)})) {
            diags.push_back({diag::kDuplicateLabel, d.name + "." + f.label + "." + spelled, "link property declared twice"});
          }
        }
        field.type = std::move(ref);
      }
      if (!obj.insert(label, std::move(field))) {
        diags.push_back({diag::kDuplicateLabel, d.name + "." + f.label, "label declared twice"});
      }
    }
    if (!schema.insert(d.name, std::move(obj))) {
      diags.push_back({diag::kDuplicateLabel, d.name, "type declared twice"});
    }
  }
  return schema;
}

namespace {

std::string modifiers(Cardinality c) {
  std::string out;
  if (c.lo() == Bound::One) out += "required ";
  if (c.hi() == Bound::Many) out += "multi ";
  return out;
}

std::string scalar_keyword(ScalarType t) { return t == ScalarType::Int ? "int64" : to_string(t); }

}  // namespace

std::string format_schema(const Schema& schema) {
  std::string out;
  for (const auto& [name, decl] : schema) {
    out += "type " + name + " {";
    if (decl.size() == 0) {
      out += " }\n";
      continue;
    }
    out += "\n";
    for (const auto& [label, field] : decl) {
      out += "  " + modifiers(field.card) + label.spelled() + ": ";
      if (const auto* s = std::get_if<ScalarType>(&field.type)) {
        out += scalar_keyword(*s);
      } else {
        const auto& ref = std::get<StoredRefType>(field.type);
        out += ref.target;
        if (ref.link_props.size() > 0) {
          out += " {";
          for (const auto& [lp, lp_decl] : ref.link_props) {
            out += " " + modifiers(lp_decl.card) + lp.name + ": " + scalar_keyword(lp_decl.type) + ";";
          }
          out += " }";
        }
      }
      out += ";\n";
    }
    out += "}\n";
  }
  return out;
}

// Query grammar -------------------------------------------------------------------

namespace {

SurfacePtr make(SurfaceExpr e) { return std::make_shared<const SurfaceExpr>(std::move(e)); }

SurfaceExpr node(SurfaceKind k, Span span) {
  SurfaceExpr e{k, {}, std::nullopt, {}, {}, {}, span};
  return e;
}

class QueryParser {
 public:
  explicit QueryParser(const std::string& text) : cur_(text) {}

  SurfacePtr parse_all() {
    SurfacePtr e = expr();
    cur_.accept(Tok::Semi);
    if (!cur_.at(Tok::End)) cur_.fail("unexpected trailing input", "end of input");
    return e;
  }

 private:
  Cursor cur_;
  std::vector<std::string> scope_;

  std::size_t here() const { return cur_.peek().span.begin; }
  Span from(std::size_t begin) const { return {begin, std::max(begin, cur_.last_end())}; }

  bool bound(const std::string& name) const {
    return std::find(scope_.rbegin(), scope_.rend(), name) != scope_.rend();
  }

  std::string binder_name() {
    const Token t = cur_.expect(Tok::Ident, "a variable name");
    if (detail::is_reserved(t.text)) throw ParseError("'" + t.text + "' is a reserved word", t.span, "identifier");
    return t.text;
  }

  SurfacePtr call(const std::string& fn, std::vector<SurfacePtr> args, std::size_t begin) {
    SurfaceExpr e = node(SurfaceKind::Call, from(begin));
    e.name = fn;
    e.children = std::move(args);
    return make(std::move(e));
  }

  // expr := union ('filter' union | 'order' 'by' union)*
  SurfacePtr expr() {
    const std::size_t begin = here();
    SurfacePtr lhs = union_expr();
    for (;;) {
      if (cur_.accept_kw("filter")) {
        SurfacePtr cond = union_expr();
        SurfaceExpr e = node(SurfaceKind::Filter, from(begin));
        e.children = {lhs, cond};
        lhs = make(std::move(e));
      } else if (cur_.at_kw("order")) {
        cur_.take();
        cur_.expect_kw("by");
        SurfacePtr key = union_expr();
        SurfaceExpr e = node(SurfaceKind::OrderBy, from(begin));
        e.children = {lhs, key};
        lhs = make(std::move(e));
      } else {
        return lhs;
      }
    }
  }

  SurfacePtr union_expr() {
    const std::size_t begin = here();
    SurfacePtr lhs = coalesce();
    while (cur_.accept_kw("union")) {
      SurfacePtr rhs = coalesce();
      SurfaceExpr e = node(SurfaceKind::SetLit, from(begin));
      e.children = {lhs, rhs};
      lhs = make(std::move(e));
    }
    return lhs;
  }

  SurfacePtr coalesce() {
    const std::size_t begin = here();
    SurfacePtr lhs = compare();
    while (cur_.accept(Tok::QQ)) {
      lhs = call("coalesce", {lhs, compare()}, begin);
    }
    return lhs;
  }

  SurfacePtr compare() {
    const std::size_t begin = here();
    SurfacePtr lhs = additive();
    if (cur_.accept(Tok::Eq)) return call("eq", {lhs, additive()}, begin);
    if (cur_.accept(Tok::Lt)) return call("lt", {lhs, additive()}, begin);
    return lhs;
  }

  SurfacePtr additive() {
    const std::size_t begin = here();
    SurfacePtr lhs = unary();
    for (;;) {
      if (cur_.accept(Tok::Plus)) {
        lhs = call("add", {lhs, unary()}, begin);
      } else if (cur_.accept(Tok::PlusPlus)) {
        lhs = call("append", {lhs, unary()}, begin);
      } else {
        return lhs;
      }
    }
  }

  SurfacePtr unary() {
    const std::size_t begin = here();
    if (cur_.accept_kw("not")) return call("not", {unary()}, begin);
    if (cur_.accept(Tok::Minus)) {
      if (!cur_.at(Tok::Int)) cur_.fail("'-' applies only to integer literals", "integer");
      const Token t = cur_.take();
      constexpr auto kMin = static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()) + 1;
      std::int64_t v = t.int_value == kMin ? std::numeric_limits<std::int64_t>::min()
                                           : -static_cast<std::int64_t>(t.int_value);
      SurfaceExpr e = node(SurfaceKind::ScalarLit, from(begin));
      e.scalar = ScalarValue::of_int(v);
      return make(std::move(e));
    }
    return postfix();
  }

  Label label_after_dot() {
    if (cur_.at(Tok::AtIdent)) return Label::link_prop(cur_.take().text);
    return Label::object(cur_.expect(Tok::Ident, "a label").text);
  }

  SurfacePtr backlink_tail(SurfacePtr subject, std::size_t begin) {
    SurfaceExpr e = node(SurfaceKind::Backlink, {});
    e.label = Label::object(cur_.expect(Tok::Ident, "a label").text);
    cur_.expect(Tok::LBrack, "'['");
    cur_.expect_kw("is");
    e.name = cur_.expect(Tok::Ident, "a type name").text;
    cur_.expect(Tok::RBrack, "']'");
    e.children = {std::move(subject)};
    e.span = from(begin);
    return make(std::move(e));
  }

  SurfacePtr postfix() {
    const std::size_t begin = here();
    SurfacePtr e = primary();
    for (;;) {
      if (cur_.accept(Tok::Dot)) {
        SurfaceExpr p = node(SurfaceKind::Path, {});
        p.label = label_after_dot();
        p.children = {e};
        p.span = from(begin);
        e = make(std::move(p));
      } else if (cur_.accept(Tok::DotLt)) {
        e = backlink_tail(e, begin);
      } else if (cur_.at(Tok::LBrace)) {
        SurfaceExpr s = node(SurfaceKind::Shape, {});
        s.items = shape_items(true);
        s.children = {e};
        s.span = from(begin);
        e = make(std::move(s));
      } else {
        return e;
      }
    }
  }

  std::vector<ShapeItem> shape_items(bool allow_sugar) {
    cur_.expect(Tok::LBrace, "'{'");
    std::vector<ShapeItem> items;
    if (cur_.accept(Tok::RBrace)) return items;
    do {
      ShapeItem item;
      if (cur_.at(Tok::AtIdent)) {
        item.label = Label::link_prop(cur_.take().text);
      } else {
        item.label = Label::object(cur_.expect(Tok::Ident, "a shape label").text);
      }
      if (cur_.accept(Tok::Assign)) {
        item.form = ShapeItem::Form::Assign;
        item.expr = expr();
      } else if (allow_sugar && cur_.accept(Tok::Colon)) {
        item.form = ShapeItem::Form::Nested;
        item.items = shape_items(true);
      } else if (allow_sugar) {
        item.form = ShapeItem::Form::Shorthand;
      } else {
        cur_.fail("expected ':='", "':='");
      }
      items.push_back(std::move(item));
    } while (cur_.accept(Tok::Comma));
    cur_.expect(Tok::RBrace, "'}'");
    return items;
  }

  SurfacePtr primary() {
    const std::size_t begin = here();
    const Token& t = cur_.peek();
    switch (t.kind) {
      case Tok::Int: {
        const Token tok = cur_.take();
        if (tok.int_value > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
          throw ParseError("integer literal out of range", tok.span);
        }
        SurfaceExpr e = node(SurfaceKind::ScalarLit, tok.span);
        e.scalar = ScalarValue::of_int(static_cast<std::int64_t>(tok.int_value));
        return make(std::move(e));
      }
      case Tok::Str: {
        const Token tok = cur_.take();
        SurfaceExpr e = node(SurfaceKind::ScalarLit, tok.span);
        e.scalar = ScalarValue::of_str(tok.text);
        return make(std::move(e));
      }
      case Tok::LParen: {
        cur_.take();
        SurfacePtr inner = expr();
        cur_.expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::LBrace: {
        cur_.take();
        SurfaceExpr e = node(SurfaceKind::SetLit, {});
        if (!cur_.at(Tok::RBrace)) {
          do {
            e.children.push_back(expr());
          } while (cur_.accept(Tok::Comma));
        }
        cur_.expect(Tok::RBrace, "'}' or ','");
        e.span = from(begin);
        return make(std::move(e));
      }
      case Tok::Lt: {
        cur_.take();
        SurfaceExpr e = node(SurfaceKind::EmptyCast, {});
        e.name = cur_.expect(Tok::Ident, "a type name").text;
        cur_.expect(Tok::Gt, "'>'");
        cur_.expect(Tok::LBrace, "'{'");
        cur_.expect(Tok::RBrace, "'}' (only empty sets can be annotated)");
        e.span = from(begin);
        return make(std::move(e));
      }
      case Tok::Dot: {
        cur_.take();
        SurfaceExpr e = node(SurfaceKind::Path, {});
        e.label = label_after_dot();
        e.children = {nullptr};
        e.span = from(begin);
        return make(std::move(e));
      }
      case Tok::DotLt: {
        cur_.take();
        return backlink_tail(nullptr, begin);
      }
      case Tok::Ident: return keyword_or_name();
      default: cur_.fail("expected an expression", "expression");
    }
  }

  SurfacePtr keyword_or_name() {
    const std::size_t begin = here();
    if (cur_.at_kw("true") || cur_.at_kw("false")) {
      const bool value = cur_.at_kw("true");
      cur_.take();
      SurfaceExpr e = node(SurfaceKind::ScalarLit, from(begin));
      e.scalar = ScalarValue::of_bool(value);
      return make(std::move(e));
    }
    if (cur_.accept_kw("select")) {
      SurfaceExpr e = node(SurfaceKind::Select, {});
      e.children = {expr()};
      e.span = from(begin);
      return make(std::move(e));
    }
    if (cur_.accept_kw("with")) return with_tail(begin);
    if (cur_.accept_kw("for")) {
      const std::string var = binder_name();
      cur_.expect_kw("in");
      SurfacePtr source = coalesce();
      cur_.expect_kw("union");
      scope_.push_back(var);
      SurfacePtr body = expr();
      scope_.pop_back();
      SurfaceExpr e = node(SurfaceKind::For, from(begin));
      e.name = var;
      e.children = {source, body};
      return make(std::move(e));
    }
    if (cur_.accept_kw("if")) {
      SurfacePtr c = expr();
      cur_.expect_kw("then");
      SurfacePtr a = expr();
      cur_.expect_kw("else");
      SurfacePtr b = expr();
      SurfaceExpr e = node(SurfaceKind::If, from(begin));
      e.children = {c, a, b};
      return make(std::move(e));
    }
    if (cur_.accept_kw("insert")) {
      SurfaceExpr e = node(SurfaceKind::Insert, {});
      e.name = cur_.expect(Tok::Ident, "a type name").text;
      e.items = shape_items(false);
      e.span = from(begin);
      return make(std::move(e));
    }
    if (cur_.accept_kw("update")) {
      SurfaceExpr e = node(SurfaceKind::Update, {});
      SurfacePtr subject = expr();
      cur_.expect_kw("set");
      e.items = shape_items(false);
      e.children = {subject};
      e.span = from(begin);
      return make(std::move(e));
    }
    const Token tok = cur_.peek();
    if (detail::is_reserved(tok.text)) cur_.fail("unexpected keyword", "expression");
    cur_.take();
    if (cur_.accept(Tok::LParen)) {
      std::vector<SurfacePtr> args;
      if (!cur_.at(Tok::RParen)) {
        do {
          args.push_back(expr());
        } while (cur_.accept(Tok::Comma));
      }
      cur_.expect(Tok::RParen, "')' or ','");
      return call(tok.text, std::move(args), begin);
    }
    SurfaceExpr e = node(bound(tok.text) ? SurfaceKind::Var : SurfaceKind::TypeRef, tok.span);
    e.name = tok.text;
    return make(std::move(e));
  }

  // with x := e1 (, y := e2)* [select] body
  SurfacePtr with_tail(std::size_t begin) {
    const std::string var = binder_name();
    cur_.expect(Tok::Assign, "':='");
    SurfacePtr bound_expr = expr();
    scope_.push_back(var);
    SurfacePtr body;
    if (cur_.accept(Tok::Comma)) {
      body = with_tail(here());
    } else {
      cur_.accept_kw("select");
      body = expr();
    }
    scope_.pop_back();
    SurfaceExpr e = node(SurfaceKind::With, from(begin));
    e.name = var;
    e.children = {bound_expr, body};
    return make(std::move(e));
  }
};

}  // namespace

SurfacePtr parse_query(const std::string& text) { return QueryParser(text).parse_all(); }

}  // namespace grql
