#include "grql/model.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

namespace grql {

Label Label::parse(const std::string& spelled) {
  if (!spelled.empty() && spelled.front() == '@') return link_prop(spelled.substr(1));
  return object(spelled);
}

std::string to_string(ScalarType t) {
  switch (t) {
    case ScalarType::Int: return "int";
    case ScalarType::Str: return "str";
    case ScalarType::Bool: return "bool";
  }
  return "?";
}

ScalarType ScalarValue::type() const {
  if (is_int()) return ScalarType::Int;
  if (is_str()) return ScalarType::Str;
  return ScalarType::Bool;
}

std::string ScalarValue::to_literal() const {
  if (is_int()) return std::to_string(as_int());
  if (is_bool()) return as_bool() ? "true" : "false";
  return nlohmann::json(as_str()).dump();
}

// Store ------------------------------------------------------------------------

const StoreTuple* Store::find(const EntityId& id) const {
  for (const auto& t : tuples_) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

StoreTuple* Store::find(const EntityId& id) {
  for (auto& t : tuples_) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

void Store::insert(StoreTuple tuple) {
  if (contains(tuple.id)) throw std::invalid_argument("duplicate id " + tuple.id);
  // Keep the counter ahead of any numeric id placed in the store directly.
  const auto& id = tuple.id;
  if (!id.empty() && id.size() < 19 &&
      std::all_of(id.begin(), id.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    next_id_ = std::max<std::uint64_t>(next_id_, std::stoull(id) + 1);
  }
  tuples_.push_back(std::move(tuple));
}

void Store::replace(StoreTuple tuple) {
  auto* existing = find(tuple.id);
  if (existing == nullptr) throw std::invalid_argument("no tuple with id " + tuple.id);
  *existing = std::move(tuple);
}

bool Store::erase(const EntityId& id) {
  auto it = std::find_if(tuples_.begin(), tuples_.end(),
                         [&](const StoreTuple& t) { return t.id == id; });
  if (it == tuples_.end()) return false;
  tuples_.erase(it);
  return true;
}

EntityId Store::allocate_id() {
  EntityId id = std::to_string(next_id_++);
  while (contains(id)) id = std::to_string(next_id_++);
  return id;
}

void Store::unlock_all() {
  for (auto& t : tuples_) t.mark = EditMark::Unlocked;
}

// Computed types -----------------------------------------------------------------

namespace {

template <typename Entry>
const Entry* find_entry(const std::vector<Entry>& entries, const Label& label) {
  for (const auto& e : entries) {
    if (e.label == label) return &e;
  }
  return nullptr;
}

// Records are unordered: equal iff same label set with equal payloads.
template <typename Entry>
bool same_record(const std::vector<Entry>& a, const std::vector<Entry>& b) {
  if (a.size() != b.size()) return false;
  for (const auto& ea : a) {
    const Entry* eb = find_entry(b, ea.label);
    if (eb == nullptr || !(*eb == ea)) return false;
  }
  return true;
}

}  // namespace

bool RefType::operator==(const RefType& other) const {
  return target == other.target && same_record(entries, other.entries);
}

const TypeEntry* RefType::entry(const Label& label) const { return find_entry(entries, label); }

ComputedType ComputedType::ref(TypeName target, std::vector<TypeEntry> entries) {
  return {RefType{std::move(target), std::move(entries)}};
}

std::string ComputedType::to_string() const {
  if (is_scalar()) return grql::to_string(as_scalar());
  const auto& r = as_ref();
  std::string out = r.target + " {";
  bool first = true;
  for (const auto& e : r.entries) {
    out += first ? " " : ", ";
    first = false;
    out += e.label.spelled() + ": " + e.type.to_string() + " # " + e.card.to_string();
  }
  out += " }";
  return out;
}

ComputedType computed_of(const StoredType& t) {
  if (const auto* s = std::get_if<ScalarType>(&t)) return ComputedType::scalar(*s);
  const auto& r = std::get<StoredRefType>(t);
  std::vector<TypeEntry> entries;
  for (const auto& [label, decl] : r.link_props) {
    entries.push_back({label, ComputedType::scalar(decl.type), decl.card});
  }
  return ComputedType::ref(r.target, std::move(entries));
}

ComputedType extend_type(const ComputedType& base, const std::vector<TypeEntry>& added) {
  const auto& r = base.as_ref();
  std::vector<TypeEntry> entries = added;
  for (const auto& e : r.entries) {
    if (find_entry(added, e.label) == nullptr) entries.push_back(e);
  }
  return ComputedType::ref(r.target, std::move(entries));
}

// Computed values ----------------------------------------------------------------

bool RefValue::operator==(const RefValue& other) const {
  return id == other.id && same_record(shape, other.shape);
}

const ShapeEntry* RefValue::entry(const Label& label) const { return find_entry(shape, label); }

ComputedValue ComputedValue::ref(EntityId id, ShapeRecord shape) {
  return {RefValue{std::move(id), std::move(shape)}};
}

ComputedValue computed_of(const StoredValue& v) {
  if (const auto* s = std::get_if<ScalarValue>(&v)) return ComputedValue::scalar(*s);
  const auto& r = std::get<StoredRef>(v);
  ShapeRecord shape;
  for (const auto& [label, values] : r.link_props) {
    ValueSeq seq;
    seq.reserve(values.size());
    for (const auto& sv : values) seq.push_back(ComputedValue::scalar(sv));
    shape.push_back({label, Visibility::Visible, std::move(seq)});
  }
  return ComputedValue::ref(r.id, std::move(shape));
}

ValueSeq computed_of(const StoredSeq& seq) {
  ValueSeq out;
  out.reserve(seq.size());
  for (const auto& v : seq) out.push_back(computed_of(v));
  return out;
}

bool seq_perm_eq(const ValueSeq& a, const ValueSeq& b) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& x : a) {
    bool matched = false;
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (!used[i] && b[i] == x) {
        used[i] = true;
        matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

}  // namespace grql
