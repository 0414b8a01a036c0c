#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "grql/builtins.hpp"
#include "grql/core.hpp"
#include "grql/syntax.hpp"

namespace grql {

/// Generator of binder names `$1`, `$2`, ... in a namespace the grammar
/// cannot reach.
class FreshNames {
 public:
  VarName next() { return "$" + std::to_string(++counter_); }

 private:
  std::uint64_t counter_ = 0;
};

/// Lowers a surface expression to the core calculus. With a schema, insert
/// shapes are completed with typed empty sets for omitted labels and bare
/// `{}` entries are typed from the declared label. Throws DesugarError.
ExprPtr desugar(const SurfaceExpr& e, const Schema* schema, FreshNames& fresh);
ExprPtr desugar(const SurfaceExpr& e, const Schema* schema = nullptr);

/// Call lifting: nests one binder per argument (argument 1 outermost):
/// `with` for `*`, `for` for `1`, `optional_for` for `?`, ending in f†.
ExprPtr lift_call(const std::string& function, const std::vector<ExprPtr>& args,
                  const std::vector<ParamModifier>& modifiers, FreshNames& fresh, Span span = {});

/// if(c; t; e) as for(c; x. if†(x; t; e)).
ExprPtr derived_if(ExprPtr cond, ExprPtr then_branch, ExprPtr else_branch, FreshNames& fresh, Span span = {});

/// An always-empty expression with the same element type as `var`.
ExprPtr empty_like(const VarName& var, FreshNames& fresh, Span span = {});

/// Renames every binder in `e` to a fresh name.
ExprPtr freshen(const ExprPtr& e, FreshNames& fresh);

}  // namespace grql
