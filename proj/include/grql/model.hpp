#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "grql/cardinality.hpp"
#include "grql/ordered_map.hpp"

namespace grql {

// Labels ----------------------------------------------------------------------

enum class LabelKind { Object, LinkProp };

/// A record label. Link-property labels are spelled with a leading '@' in
/// concrete syntax and JSON; `name` never includes the '@'.
struct Label {
  std::string name;
  LabelKind kind = LabelKind::Object;

  static Label object(std::string n) { return {std::move(n), LabelKind::Object}; }
  static Label link_prop(std::string n) { return {std::move(n), LabelKind::LinkProp}; }
  /// Parses "@name" as a link-property label and anything else as an object label.
  static Label parse(const std::string& spelled);

  bool is_link_prop() const { return kind == LabelKind::LinkProp; }
  std::string spelled() const { return is_link_prop() ? "@" + name : name; }

  bool operator==(const Label&) const = default;
};

using TypeName = std::string;
using EntityId = std::string;

// Scalars ---------------------------------------------------------------------

enum class ScalarType { Int, Str, Bool };

std::string to_string(ScalarType t);

class ScalarValue {
 public:
  static ScalarValue of_int(std::int64_t v) { return ScalarValue(Repr(v)); }
  static ScalarValue of_str(std::string v) { return ScalarValue(Repr(std::move(v))); }
  static ScalarValue of_bool(bool v) { return ScalarValue(Repr(v)); }

  ScalarType type() const;

  bool is_int() const { return std::holds_alternative<std::int64_t>(repr_); }
  bool is_str() const { return std::holds_alternative<std::string>(repr_); }
  bool is_bool() const { return std::holds_alternative<bool>(repr_); }

  std::int64_t as_int() const { return std::get<std::int64_t>(repr_); }
  const std::string& as_str() const { return std::get<std::string>(repr_); }
  bool as_bool() const { return std::get<bool>(repr_); }

  bool operator==(const ScalarValue&) const = default;

  /// Total order within one scalar type: numeric, byte-lexicographic, ff < tt.
  /// Across types, orders by type tag.
  bool operator<(const ScalarValue& other) const { return repr_ < other.repr_; }

  /// Literal rendering: 3, "hi" (JSON-escaped), true.
  std::string to_literal() const;

 private:
  using Repr = std::variant<std::int64_t, std::string, bool>;
  explicit ScalarValue(Repr r) : repr_(std::move(r)) {}
  Repr repr_;
};

using ScalarSeq = std::vector<ScalarValue>;

// Data at rest ------------------------------------------------------------------

struct LinkPropDecl {
  ScalarType type;
  Cardinality card;
  bool operator==(const LinkPropDecl&) const = default;
};

struct StoredRefType {
  TypeName target;
  OrderedMap<Label, LinkPropDecl> link_props;
  bool operator==(const StoredRefType&) const = default;
};

/// Scalar type or reference type with link properties.
using StoredType = std::variant<ScalarType, StoredRefType>;

struct StoredRef {
  EntityId id;
  OrderedMap<Label, ScalarSeq> link_props;
  bool operator==(const StoredRef&) const = default;
};

using StoredValue = std::variant<ScalarValue, StoredRef>;
using StoredSeq = std::vector<StoredValue>;

enum class EditMark { Unlocked, Locked };

struct FieldDecl {
  StoredType type;
  Cardinality card;
  bool operator==(const FieldDecl&) const = default;
};

using ObjectTypeDecl = OrderedMap<Label, FieldDecl>;
using Schema = OrderedMap<TypeName, ObjectTypeDecl>;

using StoredRecord = OrderedMap<Label, StoredSeq>;

struct StoreTuple {
  EntityId id;
  TypeName type;
  EditMark mark = EditMark::Unlocked;
  StoredRecord record;
  bool operator==(const StoreTuple&) const = default;
};

/// Set of tuples keyed by id, iterated in insertion (allocation) order.
/// Ids are decimal counters handed out by `allocate_id`.
class Store {
 public:
  const std::vector<StoreTuple>& tuples() const { return tuples_; }

  const StoreTuple* find(const EntityId& id) const;
  StoreTuple* find(const EntityId& id);
  bool contains(const EntityId& id) const { return find(id) != nullptr; }

  /// Adds a tuple; throws std::invalid_argument on a duplicate id.
  void insert(StoreTuple tuple);
  /// Replaces the tuple with the same id; throws if absent.
  void replace(StoreTuple tuple);
  bool erase(const EntityId& id);

  /// Returns a fresh id, never used before in this store lineage.
  EntityId allocate_id();
  std::uint64_t next_id() const { return next_id_; }
  void set_next_id(std::uint64_t n) { next_id_ = n; }

  /// Resets every edit mark to Unlocked.
  void unlock_all();

  std::size_t size() const { return tuples_.size(); }

  /// Tuple-set equality (ignores the id counter).
  bool operator==(const Store& other) const { return tuples_ == other.tuples_; }

 private:
  std::vector<StoreTuple> tuples_;
  std::uint64_t next_id_ = 1;
};

// Computed types and values ------------------------------------------------------

struct TypeEntry;

struct RefType {
  TypeName target;
  std::vector<TypeEntry> entries;
  bool operator==(const RefType&) const;
  const TypeEntry* entry(const Label& label) const;
};

struct ComputedType {
  std::variant<ScalarType, RefType> repr;

  static ComputedType scalar(ScalarType t) { return {t}; }
  static ComputedType ref(TypeName target, std::vector<TypeEntry> entries = {});

  bool is_scalar() const { return std::holds_alternative<ScalarType>(repr); }
  bool is_ref() const { return std::holds_alternative<RefType>(repr); }
  ScalarType as_scalar() const { return std::get<ScalarType>(repr); }
  const RefType& as_ref() const { return std::get<RefType>(repr); }
  RefType& as_ref() { return std::get<RefType>(repr); }

  bool operator==(const ComputedType&) const = default;

  /// `int`, `str`, `Person { name: str # [1, 1] }`, `Person { }`.
  std::string to_string() const;
};

struct TypeEntry {
  Label label;
  ComputedType type;
  Cardinality card;
  bool operator==(const TypeEntry&) const = default;
};

/// Converts a stored type into the computed type a projection yields:
/// scalars pass through, references carry their link properties as entries.
ComputedType computed_of(const StoredType& t);

/// Right-biased extension of an object type: new entries first, then the
/// receiver's entries not shadowed by them.
ComputedType extend_type(const ComputedType& base, const std::vector<TypeEntry>& added);

enum class Visibility { Visible, Invisible };

struct ShapeEntry;
using ShapeRecord = std::vector<ShapeEntry>;

struct RefValue {
  EntityId id;
  ShapeRecord shape;
  bool operator==(const RefValue&) const;
  const ShapeEntry* entry(const Label& label) const;
};

struct ComputedValue {
  std::variant<ScalarValue, RefValue> repr;

  static ComputedValue scalar(ScalarValue v) { return {std::move(v)}; }
  static ComputedValue ref(EntityId id, ShapeRecord shape = {});

  bool is_scalar() const { return std::holds_alternative<ScalarValue>(repr); }
  bool is_ref() const { return std::holds_alternative<RefValue>(repr); }
  const ScalarValue& as_scalar() const { return std::get<ScalarValue>(repr); }
  const RefValue& as_ref() const { return std::get<RefValue>(repr); }
  RefValue& as_ref() { return std::get<RefValue>(repr); }

  /// Structural equality, including visibility marks and entry order-insensitive
  /// shape comparison.
  bool operator==(const ComputedValue&) const = default;
};

using ValueSeq = std::vector<ComputedValue>;

struct ShapeEntry {
  Label label;
  Visibility visibility = Visibility::Visible;
  ValueSeq values;
  bool operator==(const ShapeEntry&) const = default;
};

/// Converts a stored value into a computed value; stored link properties
/// become visible entries.
ComputedValue computed_of(const StoredValue& v);
ValueSeq computed_of(const StoredSeq& seq);

/// True iff `a` is a permutation of `b` under structural value equality.
bool seq_perm_eq(const ValueSeq& a, const ValueSeq& b);

}  // namespace grql
