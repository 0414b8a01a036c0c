#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "grql/model.hpp"

namespace grql {

enum class ParamModifier { One, Opt, Many };

Cardinality interpret(ParamModifier p);
const char* to_string(ParamModifier p);

struct BuiltinParam {
  ComputedType type;
  ParamModifier modifier;
};

struct BuiltinSignature {
  std::string name;
  std::vector<BuiltinParam> params;
  ComputedType result;
  Cardinality result_card;
};

/// A builtin function: fixed parameter modifiers, a resolver that
/// instantiates the signature from argument types, and an interpretation.
struct BuiltinDef {
  std::string name;
  std::vector<ParamModifier> modifiers;
  std::function<std::optional<BuiltinSignature>(const std::vector<ComputedType>&)> resolve;
  /// May throw EvalFault (BuiltinDomain).
  std::function<ValueSeq(const std::vector<ValueSeq>&)> run;
};

class BuiltinRegistry {
 public:
  /// count, eq, append, coalesce, any, add, lt, not.
  static const BuiltinRegistry& standard();

  void add(BuiltinDef def);
  const BuiltinDef* find(const std::string& name) const;
  std::vector<std::string> names() const;

 private:
  std::vector<BuiltinDef> defs_;
};

/// Resolves against the standard registry; throws TypeError(NoSignature).
BuiltinSignature resolve_builtin(const std::string& name, const std::vector<ComputedType>& arg_types);

/// Runs a builtin after checking argument lengths against the signature;
/// throws EvalFault on domain errors (overflow) or arity/length violations.
ValueSeq run_builtin(const std::string& name, const BuiltinSignature& sig, const std::vector<ValueSeq>& args);

}  // namespace grql
