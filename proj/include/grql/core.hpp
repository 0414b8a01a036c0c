#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "grql/model.hpp"
#include "grql/syntax.hpp"

namespace grql {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;
using VarName = std::string;

namespace core {

struct Var { VarName name; };
struct Prim { ScalarValue value; };
struct Empty { ComputedType type; };
struct Union { ExprPtr lhs, rhs; };
struct Name { TypeName type; };
struct Proj { ExprPtr subject; Label label; };
/// subject .< label [source]
struct Backlink { ExprPtr subject; Label label; TypeName source; };

struct ShapeElem {
  Label label;
  ExprPtr expr;
};
using Shape = std::vector<ShapeElem>;

/// subject ⊲ binder.shape
struct Shaping { ExprPtr subject; VarName binder; Shape shape; };
/// f†(args): arguments already at their parameter cardinality.
struct Call { std::string function; std::vector<ExprPtr> args; };
/// if†(cond; then; else): cond is a single bool.
struct IfStrict { ExprPtr cond, then_branch, else_branch; };
struct With { ExprPtr bound; VarName var; ExprPtr body; };
struct For { ExprPtr source; VarName var; ExprPtr body; };
struct OrderBy { ExprPtr subject; VarName var; ExprPtr key; };
struct Insert { TypeName type; Shape shape; };
/// update†(subject) set var.shape: subject is a single reference.
struct Update { ExprPtr subject; VarName var; Shape shape; };

}  // namespace core

struct Expr {
  using Node = std::variant<core::Var, core::Prim, core::Empty, core::Union, core::Name, core::Proj,
                            core::Backlink, core::Shaping, core::Call, core::IfStrict, core::With,
                            core::For, core::OrderBy, core::Insert, core::Update>;
  Node node;
  Span span;

  template <typename T>
  const T* as() const { return std::get_if<T>(&node); }
};

/// Number of constructors; index order matches Expr::Node.
inline constexpr std::size_t kCoreConstructorCount = std::variant_size_v<Expr::Node>;

const char* constructor_name(std::size_t index);
inline const char* constructor_name(const Expr& e) { return constructor_name(e.node.index()); }

template <typename T>
ExprPtr mk(T node, Span span = {}) {
  return std::make_shared<const Expr>(Expr{Expr::Node(std::move(node)), span});
}

/// Structural equality, ignoring spans.
bool expr_equal(const Expr& a, const Expr& b);

/// Abstract-syntax rendering, e.g. `for(Movie; $1. if†($1; 1; 2))`.
std::string show(const Expr& e);
inline std::string show(const ExprPtr& e) { return show(*e); }

/// Number of nodes (shape entries count their expressions).
std::size_t expr_size(const Expr& e);

}  // namespace grql
