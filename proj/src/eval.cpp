#include "grql/eval.hpp"

#include <algorithm>
#include <random>

#include "grql/builtins.hpp"
#include "overload.hpp"

namespace grql {

using detail::Overload;

ValueSeq project(const Store& init, const Label& label, const ComputedValue& w) {
  if (!w.is_ref()) throw EvalFault("NotARef", "projection of " + label.spelled() + " from a scalar");
  const RefValue& ref = w.as_ref();
  if (const ShapeEntry* carried = ref.entry(label)) return carried->values;
  const StoreTuple* t = init.find(ref.id);
  if (t != nullptr) {
    if (const StoredSeq* stored = t->record.get(label)) return computed_of(*stored);
  }
  throw EvalFault("MissingLabel", "entity " + ref.id + " has no label " + label.spelled());
}

ValueSeq seek(const Store& init, const TypeName& type, const Label& label, const EntityId& target) {
  ValueSeq out;
  std::vector<std::pair<EntityId, const StoredRef*>> seen;
  for (const StoreTuple& t : init.tuples()) {
    if (t.type != type) continue;
    const StoredSeq* links = t.record.get(label);
    if (links == nullptr) continue;
    for (const StoredValue& v : *links) {
      const auto* r = std::get_if<StoredRef>(&v);
      if (r == nullptr || r->id != target) continue;
      const bool dup = std::any_of(seen.begin(), seen.end(), [&](const auto& s) {
        return s.first == t.id && s.second->link_props == r->link_props;
      });
      if (dup) continue;
      seen.emplace_back(t.id, r);
      ShapeRecord shape;
      for (const auto& [lp, vals] : r->link_props) {
        ValueSeq seq;
        for (const ScalarValue& s : vals) seq.push_back(ComputedValue::scalar(s));
        shape.push_back({lp, Visibility::Invisible, std::move(seq)});
      }
      out.push_back(ComputedValue::ref(t.id, std::move(shape)));
    }
  }
  return out;
}

ComputedValue record_extend(const ComputedValue& w, const ShapeRecord& added) {
  if (!w.is_ref()) throw EvalFault("NotARef", "shaping a scalar");
  ShapeRecord shape = added;
  for (const ShapeEntry& old : w.as_ref().shape) {
    const bool shadowed =
        std::any_of(added.begin(), added.end(), [&](const ShapeEntry& n) { return n.label == old.label; });
    if (!shadowed) shape.push_back({old.label, Visibility::Invisible, old.values});
  }
  return ComputedValue::ref(w.as_ref().id, std::move(shape));
}

StoredSeq strip_for_storage(const ValueSeq& vals, const StoredType& ty) {
  StoredSeq out;
  for (const ComputedValue& v : vals) {
    if (const auto* scalar = std::get_if<ScalarType>(&ty)) {
      if (!v.is_scalar() || v.as_scalar().type() != *scalar) {
        throw EvalFault("Stuck", "value does not fit stored type " + to_string(*scalar));
      }
      out.push_back(v.as_scalar());
      continue;
    }
    const auto& rt = std::get<StoredRefType>(ty);
    if (!v.is_ref()) throw EvalFault("NotARef", "scalar stored into a " + rt.target + " link");
    StoredRef stored{v.as_ref().id, {}};
    for (const auto& [lp, decl] : rt.link_props) {
      ScalarSeq seq;
      if (const ShapeEntry* carried = v.as_ref().entry(lp)) {
        for (const ComputedValue& x : carried->values) {
          if (!x.is_scalar()) throw EvalFault("Stuck", "link property " + lp.spelled() + " holds a reference");
          seq.push_back(x.as_scalar());
        }
      } else if (decl.card.lo() != Bound::Zero) {
        throw EvalFault("MissingLinkProp", "link property " + lp.spelled() + " is required");
      }
      stored.link_props.insert(lp, std::move(seq));
    }
    out.push_back(std::move(stored));
  }
  return out;
}

ValueSeq order_by_keys(std::vector<std::pair<ComputedValue, ValueSeq>> pairs) {
  std::optional<ScalarType> key_type;
  for (const auto& [v, key] : pairs) {
    if (key.size() > 1) throw EvalFault("Stuck", "order key yields more than one value");
    if (key.empty()) continue;
    if (!key[0].is_scalar()) throw EvalFault("IncomparableKeys", "order key is a reference");
    const ScalarType t = key[0].as_scalar().type();
    if (key_type && *key_type != t) throw EvalFault("IncomparableKeys", "order keys mix scalar types");
    key_type = t;
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
    if (a.second.empty() || b.second.empty()) return a.second.empty() && !b.second.empty();
    return a.second[0].as_scalar() < b.second[0].as_scalar();
  });
  ValueSeq out;
  out.reserve(pairs.size());
  for (auto& p : pairs) out.push_back(std::move(p.first));
  return out;
}

namespace {

class Evaluator {
 public:
  Evaluator(const Schema& schema, const EvalConfig& config, const Environment& env, const Store& init, Store& cur)
      : schema_(schema), config_(config), init_(init), cur_(cur) {
    for (const auto& [name, vals] : env) scope_.emplace_back(name, vals);
    if (config.permutation_seed) rng_.emplace(*config.permutation_seed);
  }

  EvalStats stats;

  ValueSeq eval(const Expr& e) {
    const Span sp = e.span;
    try {
      return std::visit(Overload{
                            [&](const core::Var& x) { return lookup(x.name, sp); },
                            [&](const core::Prim& x) { return ValueSeq{ComputedValue::scalar(x.value)}; },
                            [&](const core::Empty&) { return ValueSeq{}; },
                            [&](const core::Union& x) {
                              ValueSeq out = eval(*x.lhs);
                              ValueSeq rhs = eval(*x.rhs);
                              out.insert(out.end(), rhs.begin(), rhs.end());
                              return permute(std::move(out));
                            },
                            [&](const core::Name& x) {
                              ValueSeq out;
                              for (const StoreTuple& t : init_.tuples()) {
                                if (t.type == x.type) out.push_back(ComputedValue::ref(t.id));
                              }
                              return permute(std::move(out));
                            },
                            [&](const core::Proj& x) {
                              ValueSeq out;
                              for (const ComputedValue& w : eval(*x.subject)) {
                                ValueSeq part = project(init_, x.label, w);
                                out.insert(out.end(), part.begin(), part.end());
                              }
                              return dedup(permute(std::move(out)));
                            },
                            [&](const core::Backlink& x) {
                              ValueSeq out;
                              for (const ComputedValue& w : eval(*x.subject)) {
                                if (!w.is_ref()) throw EvalFault("NotARef", "backlink from a scalar");
                                ValueSeq part = seek(init_, x.source, x.label, w.as_ref().id);
                                out.insert(out.end(), part.begin(), part.end());
                              }
                              return dedup(permute(std::move(out)));
                            },
                            [&](const core::Shaping& x) {
                              ValueSeq out;
                              for (const ComputedValue& w : eval(*x.subject)) {
                                if (!w.is_ref()) throw EvalFault("NotARef", "shaping a scalar");
                                bind(x.binder, {w});
                                ShapeRecord added;
                                for (const auto& el : x.shape) {
                                  added.push_back({el.label, Visibility::Visible, eval(*el.expr)});
                                }
                                unbind();
                                out.push_back(record_extend(w, added));
                              }
                              return out;
                            },
                            [&](const core::Call& x) { return call(x); },
                            [&](const core::IfStrict& x) {
                              ValueSeq c = eval(*x.cond);
                              if (c.size() != 1 || !c[0].is_scalar() || !c[0].as_scalar().is_bool()) {
                                throw EvalFault("Stuck", "condition is not a single boolean");
                              }
                              return c[0].as_scalar().as_bool() ? eval(*x.then_branch) : eval(*x.else_branch);
                            },
                            [&](const core::With& x) {
                              bind(x.var, eval(*x.bound));
                              ValueSeq out = eval(*x.body);
                              unbind();
                              return out;
                            },
                            [&](const core::For& x) {
                              ValueSeq out;
                              for (const ComputedValue& w : eval(*x.source)) {
                                bind(x.var, {w});
                                ValueSeq part = eval(*x.body);
                                unbind();
                                out.insert(out.end(), part.begin(), part.end());
                              }
                              return permute(std::move(out));
                            },
                            [&](const core::OrderBy& x) {
                              std::vector<std::pair<ComputedValue, ValueSeq>> pairs;
                              for (const ComputedValue& w : eval(*x.subject)) {
                                bind(x.var, {w});
                                ValueSeq key = eval(*x.key);
                                unbind();
                                pairs.emplace_back(w, std::move(key));
                              }
                              return order_by_keys(std::move(pairs));
                            },
                            [&](const core::Insert& x) { return insert(x); },
                            [&](const core::Update& x) { return update(x); },
                        },
                        e.node);
    } catch (const EvalFault& f) {
      if (f.span().begin == f.span().end && sp.begin != sp.end) throw EvalFault(f.code(), f.what(), sp);
      throw;
    } catch (const std::bad_variant_access&) {
      throw EvalFault("Stuck", "value has the wrong shape for " + std::string(constructor_name(e.node.index())), sp);
    }
  }

 private:
  const Schema& schema_;
  const EvalConfig& config_;
  const Store& init_;
  Store& cur_;
  std::vector<std::pair<VarName, ValueSeq>> scope_;
  std::optional<std::mt19937_64> rng_;

  void bind(const VarName& v, ValueSeq vals) { scope_.emplace_back(v, std::move(vals)); }
  void unbind() { scope_.pop_back(); }

  const ValueSeq& lookup(const VarName& v, Span sp) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->first == v) return it->second;
    }
    throw EvalFault("UnboundVar", "unbound variable '" + v + "'", sp);
  }

  ValueSeq permute(ValueSeq vals) {
    if (rng_) std::shuffle(vals.begin(), vals.end(), *rng_);
    return vals;
  }

  ValueSeq dedup(ValueSeq vals) const {
    if (!config_.dedup_projections) return vals;
    ValueSeq out;
    for (ComputedValue& v : vals) {
      const bool dup = v.is_ref() && std::any_of(out.begin(), out.end(), [&](const ComputedValue& o) {
                         return o.is_ref() && o.as_ref().id == v.as_ref().id;
                       });
      if (!dup) out.push_back(std::move(v));
    }
    return out;
  }

  ValueSeq call(const core::Call& x) {
    const BuiltinDef* def = BuiltinRegistry::standard().find(x.function);
    if (def == nullptr) throw EvalFault("Stuck", "unknown function '" + x.function + "'");
    if (def->modifiers.size() != x.args.size()) throw EvalFault("Stuck", "arity mismatch calling " + x.function);
    std::vector<ValueSeq> args;
    for (std::size_t i = 0; i < x.args.size(); ++i) {
      args.push_back(eval(*x.args[i]));
      if (!interpret(def->modifiers[i]).admits(args.back().size())) {
        throw EvalFault("Stuck", "argument " + std::to_string(i + 1) + " of " + x.function +
                                     " has wrong cardinality");
      }
    }
    return permute(def->run(args));
  }

  const ObjectTypeDecl& decl_of(const TypeName& n) const {
    const ObjectTypeDecl* d = schema_.get(n);
    if (d == nullptr) throw EvalFault("Stuck", "unknown type '" + n + "'");
    return *d;
  }

  EntityId fresh_id() {
    for (;;) {
      EntityId id = cur_.allocate_id();
      if (!init_.contains(id) && !cur_.contains(id)) return id;
    }
  }

  ValueSeq insert(const core::Insert& x) {
    const ObjectTypeDecl& decl = decl_of(x.type);
    ShapeRecord entries;
    for (const auto& el : x.shape) entries.push_back({el.label, Visibility::Invisible, eval(*el.expr)});
    StoredRecord record;
    for (const auto& [label, field] : decl) {
      auto it = std::find_if(entries.begin(), entries.end(), [&](const ShapeEntry& s) { return s.label == label; });
      if (it == entries.end()) throw EvalFault("MissingLabel", "insert " + x.type + " lacks " + label.spelled());
      record.insert(label, strip_for_storage(it->values, field.type));
    }
    for (const ShapeEntry& s : entries) {
      if (!decl.contains(s.label)) throw EvalFault("MissingLabel", x.type + " has no label " + s.label.spelled());
    }
    EntityId id = fresh_id();
    cur_.insert({id, x.type, EditMark::Locked, std::move(record)});
    ++stats.inserts;
    return {ComputedValue::ref(std::move(id), std::move(entries))};
  }

  ValueSeq update(const core::Update& x) {
    ValueSeq subject = eval(*x.subject);
    if (subject.size() != 1 || !subject[0].is_ref()) throw EvalFault("Stuck", "update needs a single reference");
    bind(x.var, subject);
    ShapeRecord entries;
    for (const auto& el : x.shape) entries.push_back({el.label, Visibility::Invisible, eval(*el.expr)});
    unbind();
    const EntityId& id = subject[0].as_ref().id;
    StoreTuple* t = cur_.find(id);
    if (t == nullptr) return {};
    if (t->mark == EditMark::Locked) {
      ++stats.lock_conflicts;
      return {};
    }
    const ObjectTypeDecl& decl = decl_of(t->type);
    StoreTuple updated = *t;
    for (const ShapeEntry& s : entries) {
      const FieldDecl* field = decl.get(s.label);
      if (field == nullptr) throw EvalFault("MissingLabel", t->type + " has no label " + s.label.spelled());
      updated.record.insert_or_assign(s.label, strip_for_storage(s.values, field->type));
    }
    updated.mark = EditMark::Locked;
    cur_.replace(std::move(updated));
    ++stats.updates;
    return {ComputedValue::ref(id, std::move(entries))};
  }
};

}  // namespace

EvalOutcome eval(const Schema& schema, const EvalConfig& config, const Environment& env, const Store& init,
                 const Store& cur, const Expr& e) {
  EvalOutcome out;
  out.store_after = cur;
  Evaluator ev(schema, config, env, init, out.store_after);
  out.result = ev.eval(e);
  out.stats = ev.stats;
  return out;
}

}  // namespace grql
