#pragma once

#include <string>

#include <json.hpp>

#include "grql/errors.hpp"
#include "grql/model.hpp"

namespace grql {

using Json = nlohmann::ordered_json;

/// Type-directed JSON: a mode with upper bound 1 gives null or the bare
/// value, otherwise an array. Objects hold the visible entries only, or
/// {"id": ...} when nothing is visible. Throws SerializeMismatch.
Json serialize(const ValueSeq& vals, const ComputedType& ty, Cardinality m);

/// Compact (no whitespace), or readable: short values on one line with
/// spaces after separators, longer ones indented by two spaces.
std::string to_json_text(const Json& j, bool pretty = false);

/// `[7⟨rating ≔ [4], title ≔ᵢ ["x"]⟩, 3]`
std::string debug_print(const ValueSeq& vals);
std::string debug_print(const ComputedValue& v);

}  // namespace grql
