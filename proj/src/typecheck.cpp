#include "grql/typecheck.hpp"

#include "grql/builtins.hpp"
#include "overload.hpp"

namespace grql {

using detail::Overload;

namespace {

class Checker {
 public:
  Checker(const Schema& schema, const Context& ctx) : schema_(schema) {
    for (const auto& [name, t] : ctx) scope_.emplace_back(name, t);
  }

  Typed synth(const Expr& e) {
    const Span sp = e.span;
    return std::visit(
        Overload{
            [&](const core::Var& x) { return lookup(x.name, sp); },
            [&](const core::Prim& x) { return Typed{ComputedType::scalar(x.value.type()), Cardinality::one()}; },
            [&](const core::Empty& x) {
              validate(x.type, sp);
              return Typed{x.type, Cardinality::empty()};
            },
            [&](const core::Union& x) {
              Typed a = synth(*x.lhs);
              Typed b = synth(*x.rhs);
              if (!(a.type == b.type)) {
                throw TypeError("BranchTypeMismatch",
                                "union of " + a.type.to_string() + " and " + b.type.to_string(), sp);
              }
              return Typed{a.type, card_add(a.card, b.card)};
            },
            [&](const core::Name& x) {
              if (!schema_.contains(x.type)) throw TypeError("UnknownName", "unknown type '" + x.type + "'", sp);
              return Typed{ComputedType::ref(x.type), Cardinality::many()};
            },
            [&](const core::Proj& x) { return proj(x, sp); },
            [&](const core::Backlink& x) { return backlink(x, sp); },
            [&](const core::Shaping& x) {
              Typed s = synth(*x.subject);
              require_ref(s.type, "shaping", sp);
              std::vector<TypeEntry> added;
              bind(x.binder, {s.type, Cardinality::one()});
              for (const auto& el : x.shape) {
                Typed t = synth(*el.expr);
                added.push_back({el.label, t.type, t.card});
              }
              unbind();
              return Typed{extend_type(s.type, added), s.card};
            },
            [&](const core::Call& x) {
              std::vector<Typed> args;
              std::vector<ComputedType> types;
              for (const auto& a : x.args) {
                args.push_back(synth(*a));
                types.push_back(args.back().type);
              }
              BuiltinSignature sig = resolve(x.function, types, sp);
              for (std::size_t i = 0; i < args.size(); ++i) {
                const Cardinality limit = interpret(sig.params[i].modifier);
                if (!card_le(args[i].card, limit)) {
                  throw TypeError("CardinalityExceeded",
                                  "argument " + std::to_string(i + 1) + " of " + x.function + " has mode " +
                                      args[i].card.to_string() + ", parameter allows " + limit.to_string(),
                                  x.args[i]->span);
                }
              }
              return Typed{sig.result, sig.result_card};
            },
            [&](const core::IfStrict& x) {
              Typed c = synth(*x.cond);
              if (!(c.type == ComputedType::scalar(ScalarType::Bool)) || !(c.card == Cardinality::one())) {
                throw TypeError("CardinalityExceeded", "condition must be bool # [1, 1], found " + c.to_string(),
                                x.cond->span);
              }
              Typed t = synth(*x.then_branch);
              Typed f = synth(*x.else_branch);
              if (!(t.type == f.type)) {
                throw TypeError("BranchTypeMismatch",
                                "branches have types " + t.type.to_string() + " and " + f.type.to_string(), sp);
              }
              return Typed{t.type, card_if_join(t.card, f.card)};
            },
            [&](const core::With& x) {
              Typed b = synth(*x.bound);
              bind(x.var, b);
              Typed body = synth(*x.body);
              unbind();
              return body;
            },
            [&](const core::For& x) {
              Typed s = synth(*x.source);
              bind(x.var, {s.type, Cardinality::one()});
              Typed body = synth(*x.body);
              unbind();
              return Typed{body.type, card_mul(s.card, body.card)};
            },
            [&](const core::OrderBy& x) {
              Typed s = synth(*x.subject);
              bind(x.var, {s.type, Cardinality::one()});
              Typed k = synth(*x.key);
              unbind();
              if (!card_le(k.card, Cardinality::optional())) {
                throw TypeError("KeyNotOptionalSingle", "order key has mode " + k.card.to_string(), x.key->span);
              }
              if (!k.type.is_scalar()) {
                throw TypeError("KeyNotOptionalSingle", "order key must be a scalar, found " + k.type.to_string(),
                                x.key->span);
              }
              return s;
            },
            [&](const core::Insert& x) { return insert(x, sp); },
            [&](const core::Update& x) { return update(x, sp); },
        },
        e.node);
  }

  ComputedType against_stored(const Expr& e, const StoredType& ty, Cardinality m) {
    Typed t = synth(e);
    const Span sp = e.span;
    if (const auto* scalar = std::get_if<ScalarType>(&ty)) {
      if (!(t.type == ComputedType::scalar(*scalar))) {
        throw TypeError("StoreTypeMismatch", "expected " + to_string(*scalar) + ", found " + t.type.to_string(), sp);
      }
    } else {
      const auto& ref = std::get<StoredRefType>(ty);
      if (!t.type.is_ref() || t.type.as_ref().target != ref.target) {
        throw TypeError("StoreTypeMismatch", "expected a " + ref.target + " reference, found " + t.type.to_string(),
                        sp);
      }
      for (const auto& [label, decl] : ref.link_props) {
        const TypeEntry* carried = t.type.as_ref().entry(label);
        if (carried == nullptr) {
          if (decl.card.lo() == Bound::Zero || t.card.hi() == Bound::Zero) continue;
          throw TypeError("StoreTypeMismatch", "link property " + label.spelled() + " is required but not carried",
                          sp);
        }
        if (!(carried->type == ComputedType::scalar(decl.type))) {
          throw TypeError("StoreTypeMismatch",
                          "link property " + label.spelled() + " expects " + to_string(decl.type) + ", found " +
                              carried->type.to_string(),
                          sp);
        }
        if (!card_le(carried->card, decl.card)) {
          throw TypeError("CardinalityExceeded",
                          "link property " + label.spelled() + " has mode " + carried->card.to_string() +
                              ", declared " + decl.card.to_string(),
                          sp);
        }
      }
    }
    if (!card_le(t.card, m)) {
      throw TypeError("CardinalityExceeded", "mode " + t.card.to_string() + " exceeds declared " + m.to_string(), sp);
    }
    return t.type;
  }

 private:
  const Schema& schema_;
  std::vector<std::pair<VarName, Typed>> scope_;

  void bind(const VarName& v, Typed t) { scope_.emplace_back(v, std::move(t)); }
  void unbind() { scope_.pop_back(); }

  Typed lookup(const VarName& v, Span sp) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->first == v) return it->second;
    }
    throw TypeError("UnboundVar", "unbound variable '" + v + "'", sp);
  }

  void validate(const ComputedType& t, Span sp) const {
    if (t.is_scalar()) return;
    if (!schema_.contains(t.as_ref().target)) {
      throw TypeError("UnknownName", "unknown type '" + t.as_ref().target + "'", sp);
    }
    for (const auto& e : t.as_ref().entries) validate(e.type, sp);
  }

  static void require_ref(const ComputedType& t, const std::string& what, Span sp) {
    if (!t.is_ref()) throw TypeError("NotAnObject", what + " needs an object, found " + t.to_string(), sp);
  }

  static BuiltinSignature resolve(const std::string& f, const std::vector<ComputedType>& types, Span sp) {
    try {
      return resolve_builtin(f, types);
    } catch (const TypeError& err) {
      throw TypeError(err.code(), err.what(), sp);
    }
  }

  const ObjectTypeDecl& decl_of(const TypeName& n, Span sp) const {
    const ObjectTypeDecl* d = schema_.get(n);
    if (d == nullptr) throw TypeError("UnknownName", "unknown type '" + n + "'", sp);
    return *d;
  }

  Typed proj(const core::Proj& x, Span sp) {
    Typed s = synth(*x.subject);
    require_ref(s.type, "projection of " + x.label.spelled(), sp);
    const RefType& rt = s.type.as_ref();
    if (const TypeEntry* carried = rt.entry(x.label)) {
      return Typed{carried->type, card_mul(carried->card, s.card)};
    }
    const FieldDecl* field = decl_of(rt.target, sp).get(x.label);
    if (field == nullptr) {
      throw TypeError("NoSuchLabel", rt.target + " has no label " + x.label.spelled(), sp);
    }
    return Typed{computed_of(field->type), card_mul(field->card, s.card)};
  }

  Typed backlink(const core::Backlink& x, Span sp) {
    Typed s = synth(*x.subject);
    require_ref(s.type, "backlink", sp);
    const FieldDecl* field = decl_of(x.source, sp).get(x.label);
    if (field == nullptr) throw TypeError("NoSuchLabel", x.source + " has no label " + x.label.spelled(), sp);
    const auto* ref = std::get_if<StoredRefType>(&field->type);
    if (ref == nullptr) {
      throw TypeError("NotAnObject", x.source + "." + x.label.spelled() + " is not a link", sp);
    }
    if (ref->target != s.type.as_ref().target) {
      throw TypeError("NoSuchLabel",
                      x.source + "." + x.label.spelled() + " links to " + ref->target + ", not " +
                          s.type.as_ref().target,
                      sp);
    }
    std::vector<TypeEntry> entries;
    for (const auto& [lp, decl] : ref->link_props) {
      entries.push_back({lp, ComputedType::scalar(decl.type), decl.card});
    }
    return Typed{ComputedType::ref(x.source, std::move(entries)), Cardinality::many()};
  }

  Typed insert(const core::Insert& x, Span sp) {
    const ObjectTypeDecl& decl = decl_of(x.type, sp);
    std::vector<TypeEntry> entries;
    for (const auto& el : x.shape) {
      const FieldDecl* field = decl.get(el.label);
      if (field == nullptr) throw TypeError("NoSuchLabel", x.type + " has no label " + el.label.spelled(), sp);
      ComputedType t = against_stored(*el.expr, field->type, field->card);
      entries.push_back({el.label, std::move(t), field->card});
    }
    for (const auto& [label, field] : decl) {
      bool given = false;
      for (const auto& el : x.shape) given = given || el.label == label;
      if (!given) {
        throw TypeError("StoreTypeMismatch", "insert " + x.type + " must provide label " + label.spelled(), sp);
      }
    }
    return Typed{ComputedType::ref(x.type, std::move(entries)), Cardinality::one()};
  }

  Typed update(const core::Update& x, Span sp) {
    Typed s = synth(*x.subject);
    if (!s.type.is_ref() || !(s.card == Cardinality::one())) {
      throw TypeError("BadUpdateSubject", "update needs a single object, found " + s.to_string(), x.subject->span);
    }
    const ObjectTypeDecl& decl = decl_of(s.type.as_ref().target, sp);
    std::vector<TypeEntry> entries;
    bind(x.var, {s.type, Cardinality::one()});
    for (const auto& el : x.shape) {
      const FieldDecl* field = decl.get(el.label);
      if (field == nullptr || el.label.is_link_prop()) {
        throw TypeError("NoSuchLabel", s.type.as_ref().target + " has no label " + el.label.spelled(), sp);
      }
      ComputedType t = against_stored(*el.expr, field->type, field->card);
      entries.push_back({el.label, std::move(t), field->card});
    }
    unbind();
    return Typed{ComputedType::ref(s.type.as_ref().target, std::move(entries)), Cardinality::optional()};
  }
};

}  // namespace

Typed synth(const Schema& schema, const Context& ctx, const Expr& e) { return Checker(schema, ctx).synth(e); }

ComputedType check_against_stored(const Schema& schema, const Context& ctx, const Expr& e, const StoredType& ty,
                                  Cardinality m) {
  return Checker(schema, ctx).against_stored(e, ty, m);
}

}  // namespace grql
