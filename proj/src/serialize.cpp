#include "grql/serialize.hpp"

namespace grql {

namespace {

Json scalar_json(const ScalarValue& s) {
  if (s.is_int()) return s.as_int();
  if (s.is_bool()) return s.as_bool();
  return s.as_str();
}

Json serialize_one(const ComputedValue& w, const ComputedType& ty) {
  if (w.is_scalar()) {
    if (!ty.is_scalar() || ty.as_scalar() != w.as_scalar().type()) {
      throw SerializeMismatch("scalar " + w.as_scalar().to_literal() + " does not have type " + ty.to_string());
    }
    return scalar_json(w.as_scalar());
  }
  if (!ty.is_ref()) throw SerializeMismatch("reference " + w.as_ref().id + " where " + ty.to_string() + " expected");
  Json obj = Json::object();
  for (const ShapeEntry& e : w.as_ref().shape) {
    if (e.visibility != Visibility::Visible) continue;
    const TypeEntry* te = ty.as_ref().entry(e.label);
    if (te == nullptr) throw SerializeMismatch("entry " + e.label.spelled() + " is not in " + ty.to_string());
    obj[e.label.spelled()] = serialize(e.values, te->type, te->card);
  }
  if (obj.empty()) obj["id"] = w.as_ref().id;
  return obj;
}

}  // namespace

Json serialize(const ValueSeq& vals, const ComputedType& ty, Cardinality m) {
  if (!m.admits(vals.size())) {
    throw SerializeMismatch(std::to_string(vals.size()) + " values do not fit mode " + m.to_string());
  }
  if (m.hi() != Bound::Many) {
    if (vals.empty()) return nullptr;
    return serialize_one(vals[0], ty);
  }
  Json arr = Json::array();
  for (const ComputedValue& w : vals) arr.push_back(serialize_one(w, ty));
  return arr;
}

namespace {

constexpr std::size_t kInlineWidth = 72;

// Spaced single-line form: [1, 2], {"a": 1}.
std::string spaced(const Json& j) {
  if (j.is_array()) {
    std::string out = "[";
    for (std::size_t i = 0; i < j.size(); ++i) out += (i ? ", " : "") + spaced(j[i]);
    return out + "]";
  }
  if (j.is_object()) {
    std::string out = "{";
    bool first = true;
    for (const auto& [k, v] : j.items()) {
      out += (first ? "" : ", ") + Json(k).dump() + ": " + spaced(v);
      first = false;
    }
    return out + "}";
  }
  return j.dump();
}

void pretty_into(const Json& j, std::size_t indent, std::string& out) {
  std::string flat = spaced(j);
  if (!j.is_structured() || j.empty() || indent + flat.size() <= kInlineWidth) {
    out += flat;
    return;
  }
  const std::string pad(indent + 2, ' ');
  out += j.is_array() ? "[\n" : "{\n";
  bool first = true;
  for (const auto& [k, v] : j.items()) {
    if (!first) out += ",\n";
    first = false;
    out += pad;
    if (j.is_object()) out += Json(k).dump() + ": ";
    pretty_into(v, indent + 2, out);
  }
  out += "\n" + std::string(indent, ' ') + (j.is_array() ? "]" : "}");
}

}  // namespace

std::string to_json_text(const Json& j, bool pretty) {
  if (!pretty) return j.dump();
  std::string out;
  pretty_into(j, 0, out);
  return out;
}

std::string debug_print(const ComputedValue& v) {
  if (v.is_scalar()) return v.as_scalar().to_literal();
  std::string out = v.as_ref().id + "⟨";
  bool first = true;
  for (const ShapeEntry& e : v.as_ref().shape) {
    if (!first) out += ", ";
    first = false;
    out += e.label.spelled() + (e.visibility == Visibility::Visible ? " ≔ " : " ≔ᵢ ") + debug_print(e.values);
  }
  return out + "⟩";
}

std::string debug_print(const ValueSeq& vals) {
  std::string out = "[";
  for (std::size_t i = 0; i < vals.size(); ++i) out += (i ? ", " : "") + debug_print(vals[i]);
  return out + "]";
}

}  // namespace grql
