#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "grql/model.hpp"
#include "grql/wellformed.hpp"

namespace grql {

/// Half-open byte range into the parsed text.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, Span span, std::string expected = {})
      : std::runtime_error(message), span_(span), expected_(std::move(expected)) {}

  Span span() const { return span_; }
  const std::string& expected() const { return expected_; }

 private:
  Span span_;
  std::string expected_;
};

// Schemas -----------------------------------------------------------------------

struct SurfaceField {
  std::string label;  // as spelled, possibly with '@'
  bool required = false;
  bool multi = false;
  std::string target;  // scalar type name or object type name
  std::vector<SurfaceField> link_props;
  Span span;
};

struct SurfaceSchemaDecl {
  std::string name;
  std::vector<SurfaceField> fields;
  Span span;
};

std::vector<SurfaceSchemaDecl> parse_schema(const std::string& text);

/// Builds the schema map. Duplicate type names and duplicate labels are
/// reported as DuplicateLabel diagnostics; check_schema runs afterwards.
Schema lower_schema(const std::vector<SurfaceSchemaDecl>& decls, Diagnostics& diags);

/// Schema source text that parses back to the same schema.
std::string format_schema(const Schema& schema);

// Queries -----------------------------------------------------------------------

enum class SurfaceKind {
  SetLit, ScalarLit, EmptyCast, Path, Backlink, Shape, Select, Filter,
  OrderBy, For, With, If, Call, Insert, Update, Var, TypeRef
};

struct SurfaceExpr;
using SurfacePtr = std::shared_ptr<const SurfaceExpr>;

struct ShapeItem {
  enum class Form { Shorthand, Assign, Nested };
  Label label;
  Form form = Form::Shorthand;
  SurfacePtr expr;               // Assign
  std::vector<ShapeItem> items;  // Nested
};

/// One surface node. Which fields are meaningful depends on `kind`:
///   SetLit    children = elements
///   ScalarLit scalar
///   EmptyCast name = annotation (str, int64, bool, or an object type)
///   Path      children[0] = subject or null for a leading '.', label
///   Backlink  children[0] = subject or null, label, name = source type
///   Shape     children[0] = subject, items
///   Select    children[0]
///   Filter    children = {subject, condition}
///   OrderBy   children = {subject, key}
///   For       name = variable, children = {source, body}
///   With      name = variable, children = {bound, body}
///   If        children = {condition, then, else}
///   Call      name = function, children = arguments
///   Insert    name = type, items
///   Update    children[0] = subject, items
///   Var       name
///   TypeRef   name
struct SurfaceExpr {
  SurfaceKind kind;
  std::vector<SurfacePtr> children;
  std::optional<ScalarValue> scalar;
  std::string name;
  Label label;
  std::vector<ShapeItem> items;
  Span span;
};

/// Parses one query; a trailing ';' is accepted.
SurfacePtr parse_query(const std::string& text);

std::string format_expr(const SurfaceExpr& e);
inline std::string format_expr(const SurfacePtr& e) { return format_expr(*e); }

/// Structural equality ignoring spans.
bool surface_equal(const SurfaceExpr& a, const SurfaceExpr& b);

std::string to_string(SurfaceKind k);

}  // namespace grql
