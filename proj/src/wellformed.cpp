#include "grql/wellformed.hpp"

#include <map>
#include <set>

namespace grql {

Diagnostics check_schema(const Schema& schema) {
  Diagnostics out;
  // Bare label name -> kind of first use, for the object/link-prop partition.
  std::map<std::string, LabelKind> roles;
  auto claim = [&](const Label& label, const std::string& path) {
    auto [it, fresh] = roles.emplace(label.name, label.kind);
    if (!fresh && it->second != label.kind) {
      out.push_back({diag::kLabelKindClash, path,
                     "label '" + label.name + "' is used both as an object label and as a link property"});
    }
  };

  for (const auto& [type_name, decl] : schema) {
    for (const auto& [label, field] : decl) {
      const std::string path = type_name + "." + label.spelled();
      if (label.is_link_prop()) {
        out.push_back({diag::kLabelKindClash, path, "object types may not declare link properties at top level"});
      }
      claim(label, path);
      const auto* ref = std::get_if<StoredRefType>(&field.type);
      if (ref == nullptr) continue;
      if (!schema.contains(ref->target)) {
        out.push_back({diag::kUndefinedTypeName, path, "link targets undeclared type '" + ref->target + "'"});
      }
      for (const auto& [lp, lp_decl] : ref->link_props) {
        const std::string lp_path = path + "." + lp.spelled();
        if (!lp.is_link_prop()) {
          out.push_back({diag::kLabelKindClash, lp_path, "link properties must be spelled with '@'"});
        }
        claim(lp, lp_path);
      }
    }
  }
  return out;
}

namespace {

bool type_scalar_seq(const ScalarSeq& vals, ScalarType t, Cardinality m) {
  if (!m.admits(vals.size())) return false;
  for (const auto& v : vals) {
    if (v.type() != t) return false;
  }
  return true;
}

bool type_stored_value(const Store& store, const StoredValue& v, const StoredType& ty) {
  if (const auto* s = std::get_if<ScalarValue>(&v)) {
    const auto* t = std::get_if<ScalarType>(&ty);
    return t != nullptr && s->type() == *t;
  }
  const auto& ref = std::get<StoredRef>(v);
  const auto* rt = std::get_if<StoredRefType>(&ty);
  if (rt == nullptr) return false;
  const StoreTuple* target = store.find(ref.id);
  if (target == nullptr || target->type != rt->target) return false;
  if (ref.link_props.size() != rt->link_props.size()) return false;
  for (const auto& [label, decl] : rt->link_props) {
    const ScalarSeq* vals = ref.link_props.get(label);
    if (vals == nullptr || !type_scalar_seq(*vals, decl.type, decl.card)) return false;
  }
  return true;
}

}  // namespace

bool type_stored_seq(const Schema& /*schema*/, const Store& store, const StoredSeq& vals,
                     const StoredType& ty, Cardinality m) {
  if (!m.admits(vals.size())) return false;
  for (const auto& v : vals) {
    if (!type_stored_value(store, v, ty)) return false;
  }
  return true;
}

Diagnostics check_store(const Schema& schema, const Store& store) {
  Diagnostics out;
  for (const auto& tuple : store.tuples()) {
    const std::string base = tuple.type + "#" + tuple.id;
    const ObjectTypeDecl* decl = schema.get(tuple.type);
    if (decl == nullptr) {
      out.push_back({diag::kUnknownType, base, "type '" + tuple.type + "' is not declared"});
      continue;
    }
    for (const auto& [label, vals] : tuple.record) {
      if (!decl->contains(label)) {
        out.push_back({diag::kExtraLabel, base + "." + label.spelled(), "label not declared on " + tuple.type});
      }
    }
    for (const auto& [label, field] : *decl) {
      const std::string path = base + "." + label.spelled();
      const StoredSeq* vals = tuple.record.get(label);
      if (vals == nullptr) {
        out.push_back({diag::kMissingLabel, path, "record has no entry for declared label"});
        continue;
      }
      if (!field.card.admits(vals->size())) {
        out.push_back({diag::kCardinalityViolation, path,
                       std::to_string(vals->size()) + " value(s) outside mode " + field.card.to_string()});
      }
      for (std::size_t i = 0; i < vals->size(); ++i) {
        const auto& v = (*vals)[i];
        const std::string vpath = path + "[" + std::to_string(i) + "]";
        if (const auto* ref = std::get_if<StoredRef>(&v)) {
          const auto* rt = std::get_if<StoredRefType>(&field.type);
          if (rt == nullptr) {
            out.push_back({diag::kValueTypeMismatch, vpath, "reference stored in a scalar field"});
            continue;
          }
          const StoreTuple* target = store.find(ref->id);
          if (target == nullptr) {
            out.push_back({diag::kDanglingRef, vpath, "reference to missing id " + ref->id});
            continue;
          }
          if (target->type != rt->target) {
            out.push_back({diag::kValueTypeMismatch, vpath,
                           "id " + ref->id + " is a " + target->type + ", expected " + rt->target});
            continue;
          }
          for (const auto& [lp, lp_vals] : ref->link_props) {
            if (!rt->link_props.contains(lp)) {
              out.push_back({diag::kExtraLabel, vpath + "." + lp.spelled(), "link property not declared"});
            }
          }
          for (const auto& [lp, lp_decl] : rt->link_props) {
            const std::string lpath = vpath + "." + lp.spelled();
            const ScalarSeq* lp_vals = ref->link_props.get(lp);
            if (lp_vals == nullptr) {
              out.push_back({diag::kMissingLabel, lpath, "link property missing"});
              continue;
            }
            if (!lp_decl.card.admits(lp_vals->size())) {
              out.push_back({diag::kCardinalityViolation, lpath,
                             std::to_string(lp_vals->size()) + " value(s) outside mode " +
                                 lp_decl.card.to_string()});
            }
            for (const auto& sv : *lp_vals) {
              if (sv.type() != lp_decl.type) {
                out.push_back({diag::kValueTypeMismatch, lpath,
                               "expected " + to_string(lp_decl.type) + ", found " + sv.to_literal()});
              }
            }
          }
        } else {
          const auto& sv = std::get<ScalarValue>(v);
          const auto* st = std::get_if<ScalarType>(&field.type);
          if (st == nullptr) {
            out.push_back({diag::kValueTypeMismatch, vpath, "scalar " + sv.to_literal() + " stored in a link"});
          } else if (sv.type() != *st) {
            out.push_back({diag::kValueTypeMismatch, vpath,
                           "expected " + to_string(*st) + ", found " + sv.to_literal()});
          }
        }
      }
    }
  }
  return out;
}

// Computed-value typing ------------------------------------------------------------

namespace {

struct ComputedTyping {
  const Schema& schema;
  const Store& init;
  const Store& ext;

  std::optional<ValueTypingFailure> seq(const ValueSeq& vals, const ComputedType& ty, Cardinality m,
                                        const std::string& path) const {
    if (!m.admits(vals.size())) {
      return ValueTypingFailure{true, path + ": " + std::to_string(vals.size()) + " value(s) outside mode " +
                                          m.to_string()};
    }
    for (std::size_t i = 0; i < vals.size(); ++i) {
      if (auto f = value(vals[i], ty, path + "[" + std::to_string(i) + "]")) return f;
    }
    return std::nullopt;
  }

  std::optional<ValueTypingFailure> value(const ComputedValue& v, const ComputedType& ty,
                                          const std::string& path) const {
    if (v.is_scalar()) {
      if (ty.is_scalar() && v.as_scalar().type() == ty.as_scalar()) return std::nullopt;
      return ValueTypingFailure{false, path + ": scalar " + v.as_scalar().to_literal() + " is not a " +
                                           ty.to_string()};
    }
    if (!ty.is_ref()) return ValueTypingFailure{false, path + ": reference where " + ty.to_string() + " expected"};
    const auto& ref = v.as_ref();
    const auto& rt = ty.as_ref();

    const StoreTuple* stored = init.find(ref.id);
    bool ok_origin = stored != nullptr && stored->type == rt.target;
    if (!ok_origin) {
      const StoreTuple* fresh = ext.find(ref.id);
      const ObjectTypeDecl* decl = schema.get(rt.target);
      if (fresh != nullptr && fresh->type == rt.target && fresh->mark == EditMark::Locked && decl != nullptr) {
        ok_origin = true;
        for (const auto& [label, field] : *decl) {
          if (ref.entry(label) == nullptr) {
            ok_origin = false;
            break;
          }
        }
      }
    }
    if (!ok_origin) {
      return ValueTypingFailure{false, path + ": id " + ref.id + " is neither a stored " + rt.target +
                                           " nor a fully carried new " + rt.target};
    }

    if (ref.shape.size() != rt.entries.size()) {
      return ValueTypingFailure{false, path + ": carried entries do not match " + ty.to_string()};
    }
    for (const auto& te : rt.entries) {
      const ShapeEntry* se = ref.entry(te.label);
      if (se == nullptr) {
        return ValueTypingFailure{false, path + ": missing entry " + te.label.spelled()};
      }
      if (auto f = seq(se->values, te.type, te.card, path + "." + te.label.spelled())) return f;
    }
    return std::nullopt;
  }
};

}  // namespace

std::optional<ValueTypingFailure> check_computed_seq(const Schema& schema, const Store& init_store,
                                                     const Store& ext_store, const ValueSeq& vals,
                                                     const ComputedType& ty, Cardinality m) {
  return ComputedTyping{schema, init_store, ext_store}.seq(vals, ty, m, "$");
}

bool store_extends(const Store& base, const Store& ext) {
  for (const auto& t : base.tuples()) {
    const StoreTuple* e = ext.find(t.id);
    if (e == nullptr || e->type != t.type) return false;
  }
  for (const auto& t : ext.tuples()) {
    if (t.mark != EditMark::Unlocked) continue;
    const StoreTuple* b = base.find(t.id);
    if (b == nullptr || b->mark != EditMark::Unlocked || b->type != t.type || !(b->record == t.record)) {
      return false;
    }
  }
  return true;
}

}  // namespace grql
