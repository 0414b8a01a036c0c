#pragma once

#include <optional>
#include <string>
#include <vector>

#include "grql/model.hpp"

namespace grql {

/// One well-formedness problem. `code` is drawn from the closed set below;
/// the CLI prints `CODE path message`.
struct Diagnostic {
  std::string code;
  std::string path;
  std::string message;

  std::string to_string() const { return code + " " + path + " " + message; }
  bool operator==(const Diagnostic&) const = default;
};

namespace diag {
inline constexpr const char* kUndefinedTypeName = "UndefinedTypeName";
inline constexpr const char* kLabelKindClash = "LabelKindClash";
inline constexpr const char* kDuplicateLabel = "DuplicateLabel";
inline constexpr const char* kUnknownType = "UnknownType";
inline constexpr const char* kMissingLabel = "MissingLabel";
inline constexpr const char* kExtraLabel = "ExtraLabel";
inline constexpr const char* kCardinalityViolation = "CardinalityViolation";
inline constexpr const char* kValueTypeMismatch = "ValueTypeMismatch";
inline constexpr const char* kDanglingRef = "DanglingRef";
inline constexpr const char* kDuplicateId = "DuplicateId";
inline constexpr const char* kParseError = "ParseError";
inline constexpr const char* kBadFormat = "BadFormat";
inline constexpr const char* kUnsupportedVersion = "UnsupportedVersion";
}  // namespace diag

using Diagnostics = std::vector<Diagnostic>;

/// Schema well-formedness. Returns every problem found (empty means ok).
Diagnostics check_schema(const Schema& schema);

/// Store well-formedness against a schema that already passed check_schema.
/// Edit marks are not inspected.
Diagnostics check_store(const Schema& schema, const Store& store);

/// Stored-value sequence typing against a stored type and mode.
bool type_stored_seq(const Schema& schema, const Store& store, const StoredSeq& vals,
                     const StoredType& ty, Cardinality m);

/// Why a computed sequence failed to type. `cardinality` is set when the
/// first failure found was a length outside the expected mode.
struct ValueTypingFailure {
  bool cardinality = false;
  std::string detail;
};

/// Computed-value typing relative to the query's initial store and the
/// current (extended) store. Returns nullopt on success.
std::optional<ValueTypingFailure> check_computed_seq(const Schema& schema, const Store& init_store,
                                                     const Store& ext_store, const ValueSeq& vals,
                                                     const ComputedType& ty, Cardinality m);

inline bool type_computed_seq(const Schema& schema, const Store& init_store, const Store& ext_store,
                              const ValueSeq& vals, const ComputedType& ty, Cardinality m) {
  return !check_computed_seq(schema, init_store, ext_store, vals, ty, m).has_value();
}

/// `ext` extends `base`: every id of base survives with its type, and every
/// unlocked tuple of ext appears unchanged in base.
bool store_extends(const Store& base, const Store& ext);

}  // namespace grql
