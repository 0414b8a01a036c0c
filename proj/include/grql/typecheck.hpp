#pragma once

#include "grql/core.hpp"
#include "grql/errors.hpp"
#include "grql/model.hpp"

namespace grql {

struct Typed {
  ComputedType type;
  Cardinality card;
  bool operator==(const Typed&) const = default;

  /// `Person { } # [0, inf]`
  std::string to_string() const { return type.to_string() + " # " + card.to_string(); }
};

/// Typing context: variable -> type and mode.
using Context = OrderedMap<VarName, Typed>;

/// Synthesizes the unique type and mode of `e`. Throws TypeError.
Typed synth(const Schema& schema, const Context& ctx, const Expr& e);
inline Typed synth(const Schema& schema, const Expr& e) { return synth(schema, Context{}, e); }

/// The insert/update entry judgment against a stored type and mode;
/// returns the synthesized computed type. Throws TypeError.
ComputedType check_against_stored(const Schema& schema, const Context& ctx, const Expr& e, const StoredType& ty,
                                  Cardinality m);

}  // namespace grql
