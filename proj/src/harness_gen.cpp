// Type-directed instance generator.

#include <algorithm>
#include <random>

#include "grql/builtins.hpp"
#include "grql/harness.hpp"
#include "grql/wellformed.hpp"

namespace grql {

namespace {

constexpr std::int64_t kIntLimit = 1 << 16;
constexpr int kAttempts = 64;

const char* const kWords[] = {"a", "b", "tt", "Meg", "x y", "", "zz", "Q"};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(gen_); }
  int between(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  bool chance(double p) { return std::uniform_real_distribution<double>(0, 1)(gen_) < p; }
  template <typename T>
  const T& pick(const std::vector<T>& v) { return v[below(v.size())]; }
  Cardinality mode() { return kAllCardinalities[below(kAllCardinalities.size())]; }
  /// The four modes schema text can spell.
  Cardinality declared_mode() {
    static constexpr Cardinality kDeclared[] = {Cardinality::optional(), Cardinality::many(), Cardinality::one(),
                                                Cardinality::at_least_one()};
    return kDeclared[below(4)];
  }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

ScalarType random_scalar_type(Rng& rng) {
  static const std::vector<ScalarType> kTypes = {ScalarType::Int, ScalarType::Str, ScalarType::Bool};
  return rng.pick(kTypes);
}

ScalarValue random_scalar(Rng& rng, ScalarType t) {
  switch (t) {
    case ScalarType::Int: return ScalarValue::of_int(rng.between(-kIntLimit, kIntLimit));
    case ScalarType::Str: return ScalarValue::of_str(kWords[rng.below(std::size(kWords))]);
    case ScalarType::Bool: return ScalarValue::of_bool(rng.chance(0.5));
  }
  return ScalarValue::of_int(0);
}

std::size_t sample_length(Rng& rng, Cardinality m) {
  const int lo = m.lo() == Bound::One ? 1 : 0;
  const int hi = m.hi() == Bound::Zero ? 0 : (m.hi() == Bound::One ? 1 : 3);
  return static_cast<std::size_t>(rng.between(lo, hi));
}

// Schemas and stores ---------------------------------------------------------------

Schema gen_schema(Rng& rng, const GenConfig& cfg) {
  const int n_types = rng.between(1, std::max(1, cfg.max_types));
  std::vector<TypeName> names;
  for (int i = 0; i < n_types; ++i) names.push_back("T" + std::to_string(i));
  std::vector<int> level(n_types, 0);
  Schema schema;
  int lp_counter = 0;
  for (int i = 0; i < n_types; ++i) {
    ObjectTypeDecl decl;
    const int n_labels = rng.between(1, std::max(1, cfg.max_labels));
    for (int k = 0; k < n_labels; ++k) {
      Label label = Label::object("f" + std::to_string(k));
      Cardinality card = rng.declared_mode();
      if (rng.chance(0.6)) {
        decl.insert(label, {random_scalar_type(rng), card});
        continue;
      }
      // Required links only point at earlier types of bounded level, so
      // nested inserts always bottom out.
      int target = rng.between(0, n_types - 1);
      if (card.lo() == Bound::One) {
        std::vector<int> ok;
        for (int j = 0; j < i; ++j) {
          if (level[j] + 1 <= cfg.max_depth) ok.push_back(j);
        }
        if (ok.empty()) {
          card = Cardinality::make(Bound::Zero, card.hi());
        } else {
          target = ok[rng.below(ok.size())];
          level[i] = std::max(level[i], level[target] + 1);
        }
      }
      StoredRefType ref{names[target], {}};
      const int n_props = rng.between(0, 2);
      for (int p = 0; p < n_props; ++p) {
        ref.link_props.insert(Label::link_prop("p" + std::to_string(lp_counter++)),
                              {random_scalar_type(rng), rng.declared_mode()});
      }
      decl.insert(label, {std::move(ref), card});
    }
    schema.insert(names[i], std::move(decl));
  }
  return schema;
}

Store gen_store(Rng& rng, const GenConfig& cfg, const Schema& schema) {
  Store store;
  std::vector<std::pair<EntityId, TypeName>> ids;
  const int budget = std::max<int>(cfg.max_store_size, static_cast<int>(schema.size()));
  for (const auto& [name, decl] : schema) ids.emplace_back(store.allocate_id(), name);
  const int extra = rng.between(0, budget - static_cast<int>(schema.size()));
  for (int i = 0; i < extra; ++i) {
    auto it = schema.begin();
    std::advance(it, rng.below(schema.size()));
    ids.emplace_back(store.allocate_id(), it->first);
  }
  auto of_type = [&](const TypeName& n) {
    std::vector<EntityId> out;
    for (const auto& [id, t] : ids) {
      if (t == n) out.push_back(id);
    }
    return out;
  };
  for (const auto& [id, type] : ids) {
    StoreTuple t{id, type, EditMark::Unlocked, {}};
    for (const auto& [label, field] : *schema.get(type)) {
      StoredSeq seq;
      const std::size_t n = sample_length(rng, field.card);
      for (std::size_t k = 0; k < n; ++k) {
        if (const auto* st = std::get_if<ScalarType>(&field.type)) {
          seq.push_back(random_scalar(rng, *st));
          continue;
        }
        const auto& rt = std::get<StoredRefType>(field.type);
        StoredRef r{rng.pick(of_type(rt.target)), {}};
        for (const auto& [lp, decl] : rt.link_props) {
          ScalarSeq vals;
          const std::size_t m = sample_length(rng, decl.card);
          for (std::size_t j = 0; j < m; ++j) vals.push_back(random_scalar(rng, decl.type));
          r.link_props.insert(lp, std::move(vals));
        }
        seq.push_back(std::move(r));
      }
      t.record.insert(label, std::move(seq));
    }
    store.insert(std::move(t));
  }
  return store;
}

// Expressions ----------------------------------------------------------------------

struct Gen {
  ExprPtr expr;
  Typed typed;
};

enum class Cls { Any, Scalar, Ref };

struct Want {
  std::optional<ComputedType> exact;
  Cls cls = Cls::Any;
  std::optional<TypeName> target;
  Cardinality bound = Cardinality::many();

  static Want exactly(ComputedType t, Cardinality m) { return {std::move(t), Cls::Any, std::nullopt, m}; }
  static Want any(Cardinality m) { return {std::nullopt, Cls::Any, std::nullopt, m}; }

  bool type_ok(const ComputedType& t) const {
    if (exact) return t == *exact;
    if (cls == Cls::Scalar && !t.is_scalar()) return false;
    if (cls == Cls::Ref && !t.is_ref()) return false;
    if (target && (!t.is_ref() || t.as_ref().target != *target)) return false;
    return true;
  }
  bool ok(const Typed& t) const { return card_le(t.card, bound) && type_ok(t.type); }
  bool may_be_ref() const { return exact ? exact->is_ref() : cls != Cls::Scalar; }
  bool may_be_scalar() const { return exact ? exact->is_scalar() : cls != Cls::Ref && !target; }
};

enum class Prod { Var, Prim, Empty, Name, Union, ProjDb, ProjExt, Backlink, Shaping, Call, If, With, For, OrderBy,
                  Insert, Update };

struct Weighted {
  Prod prod;
  int weight;
};

class ExprGen {
 public:
  ExprGen(Rng& rng, const GenConfig& cfg, const Schema& schema) : rng_(rng), cfg_(cfg), schema_(schema) {
    for (const auto& [name, decl] : schema_) {
      type_names_.push_back(name);
      universe_.push_back(ComputedType::ref(name));
      for (const auto& [label, field] : decl) {
        if (std::holds_alternative<StoredRefType>(field.type)) universe_.push_back(computed_of(field.type));
      }
    }
    for (ScalarType t : {ScalarType::Int, ScalarType::Str, ScalarType::Bool}) universe_.push_back(ComputedType::scalar(t));
  }

  std::optional<Gen> top() {
    Want w = Want::any(Cardinality::many());
    return gen(w, cfg_.max_expr_depth);
  }

 private:
  Rng& rng_;
  const GenConfig& cfg_;
  const Schema& schema_;
  std::vector<TypeName> type_names_;
  std::vector<ComputedType> universe_;
  std::vector<std::pair<VarName, Typed>> gamma_;
  int var_counter_ = 0;

  VarName fresh() { return "v" + std::to_string(++var_counter_); }

  Context context() const {
    Context ctx;
    for (const auto& [v, t] : gamma_) ctx.insert_or_assign(v, t);
    return ctx;
  }

  // Types the node with the checker and keeps it only if it meets `w`.
  std::optional<Gen> finish(ExprPtr e, const Want& w) {
    try {
      Typed t = synth(schema_, context(), *e);
      if (!w.ok(t)) return std::nullopt;
      return Gen{std::move(e), std::move(t)};
    } catch (const TypeError&) {
      return std::nullopt;
    }
  }

  template <typename F>
  auto scoped(const VarName& v, Typed t, F&& f) {
    gamma_.emplace_back(v, std::move(t));
    auto r = f();
    gamma_.pop_back();
    return r;
  }

  int sub_depth(int depth) { return rng_.chance(0.7) ? depth - 1 : rng_.between(1, depth - 1); }

  std::vector<std::pair<Cardinality, Cardinality>> splits(Cardinality bound, bool product) {
    std::vector<std::pair<Cardinality, Cardinality>> out;
    for (Cardinality a : kAllCardinalities) {
      for (Cardinality b : kAllCardinalities) {
        if (card_le(product ? card_mul(a, b) : card_add(a, b), bound)) out.emplace_back(a, b);
      }
    }
    return out;
  }

  std::optional<ComputedType> pick_type(const Want& w) {
    if (w.exact) return w.exact;
    std::vector<ComputedType> ok;
    for (const auto& t : universe_) {
      if (w.type_ok(t)) ok.push_back(t);
    }
    if (ok.empty()) return std::nullopt;
    return rng_.pick(ok);
  }

 public:
  std::optional<Gen> gen(const Want& w, int depth) {
    // Leaves are rare while there is depth left to spend.
    const bool deep = depth > 2;
    std::vector<Weighted> prods = {
        {Prod::Var, deep ? 6 : 12}, {Prod::Prim, deep ? 3 : 8}, {Prod::Empty, 1}, {Prod::Name, deep ? 6 : 8}};
    if (depth > 1) {
      const bool mut = rng_.chance(cfg_.mutation_probability);
      prods.insert(prods.end(), {{Prod::Union, 9},   {Prod::ProjDb, 15}, {Prod::ProjExt, 6}, {Prod::Backlink, 8},
                                 {Prod::Shaping, 9}, {Prod::Call, 12},   {Prod::If, 6},      {Prod::With, 6},
                                 {Prod::For, 12},    {Prod::OrderBy, 6}});
      if (mut) prods.insert(prods.end(), {{Prod::Insert, 9}, {Prod::Update, 12}});
    }
    // Weighted order without replacement.
    while (!prods.empty()) {
      int total = 0;
      for (const auto& p : prods) total += p.weight;
      int r = rng_.between(0, total - 1);
      std::size_t i = 0;
      while (r >= prods[i].weight) r -= prods[i++].weight;
      const Prod p = prods[i].prod;
      prods.erase(prods.begin() + static_cast<std::ptrdiff_t>(i));
      if (auto g = attempt(p, w, depth)) return g;
    }
    return std::nullopt;
  }

  std::optional<Gen> gen_stored(const FieldDecl& field, int depth) {
    if (const auto* st = std::get_if<ScalarType>(&field.type)) {
      return gen(Want::exactly(ComputedType::scalar(*st), field.card), depth);
    }
    const auto& rt = std::get<StoredRefType>(field.type);
    for (int attempt = 0; attempt < 4; ++attempt) {
      Want w{std::nullopt, Cls::Ref, rt.target, field.card};
      if (rng_.chance(0.3)) w = Want::exactly(computed_of(field.type), field.card);
      auto sub = gen(w, depth);
      if (!sub) continue;
      ExprPtr e = sub->expr;
      const bool wrap = !rt.link_props.empty() && (rng_.chance(0.7) || !sub->typed.type.as_ref().entries.empty());
      if (wrap && depth > 1) {
        const VarName x = fresh();
        core::Shape shape;
        bool failed = false;
        scoped(x, Typed{sub->typed.type, Cardinality::one()}, [&] {
          for (const auto& [lp, decl] : rt.link_props) {
            if (decl.card.lo() == Bound::Zero && rng_.chance(0.3)) continue;
            auto v = gen(Want::exactly(ComputedType::scalar(decl.type), decl.card), sub_depth(depth));
            if (!v) {
              failed = true;
              return 0;
            }
            shape.push_back({lp, v->expr});
          }
          return 0;
        });
        if (failed) continue;
        e = mk(core::Shaping{e, x, std::move(shape)});
      }
      try {
        ComputedType t = check_against_stored(schema_, context(), *e, field.type, field.card);
        return Gen{e, Typed{t, field.card}};
      } catch (const TypeError&) {
      }
    }
    return std::nullopt;
  }

  std::optional<Gen> attempt(Prod p, const Want& w, int depth) {
    switch (p) {
      case Prod::Var: {
        std::vector<std::size_t> ok;
        for (std::size_t i = 0; i < gamma_.size(); ++i) {
          if (w.ok(gamma_[i].second)) ok.push_back(i);
        }
        // Later binders shadow earlier ones with the same name; names are unique here.
        if (ok.empty()) return std::nullopt;
        const auto& [v, t] = gamma_[ok[rng_.below(ok.size())]];
        return Gen{mk(core::Var{v}), t};
      }
      case Prod::Prim: {
        if (!w.may_be_scalar()) return std::nullopt;
        ScalarType t = w.exact ? w.exact->as_scalar() : random_scalar_type(rng_);
        return finish(mk(core::Prim{random_scalar(rng_, t)}), w);
      }
      case Prod::Empty: {
        auto t = pick_type(w);
        if (!t) return std::nullopt;
        return finish(mk(core::Empty{*t}), w);
      }
      case Prod::Name: {
        if (!w.may_be_ref()) return std::nullopt;
        TypeName n = w.exact ? w.exact->as_ref().target : (w.target ? *w.target : rng_.pick(type_names_));
        return finish(mk(core::Name{n}), w);
      }
      case Prod::Union: {
        auto opts = splits(w.bound, false);
        if (opts.empty()) return std::nullopt;
        auto [ma, mb] = rng_.pick(opts);
        Want wa = w;
        wa.bound = ma;
        auto a = gen(wa, sub_depth(depth));
        if (!a) return std::nullopt;
        auto b = gen(Want::exactly(a->typed.type, mb), sub_depth(depth));
        if (!b) return std::nullopt;
        return finish(mk(core::Union{a->expr, b->expr}), w);
      }
      case Prod::ProjDb: {
        std::vector<std::tuple<TypeName, Label, FieldDecl>> ok;
        for (const auto& [n, decl] : schema_) {
          for (const auto& [l, f] : decl) {
            if (w.type_ok(computed_of(f.type))) ok.emplace_back(n, l, f);
          }
        }
        if (ok.empty()) return std::nullopt;
        const auto& [n, l, f] = ok[rng_.below(ok.size())];
        std::vector<Cardinality> subj;
        for (Cardinality s : kAllCardinalities) {
          if (card_le(card_mul(f.card, s), w.bound)) subj.push_back(s);
        }
        if (subj.empty()) return std::nullopt;
        auto s = gen(Want::exactly(ComputedType::ref(n), rng_.pick(subj)), sub_depth(depth));
        if (!s) return std::nullopt;
        return finish(mk(core::Proj{s->expr, l}), w);
      }
      case Prod::ProjExt: {
        auto opts = splits(w.bound, true);
        if (opts.empty()) return std::nullopt;
        auto [ms, me] = rng_.pick(opts);
        auto s = gen(Want::exactly(ComputedType::ref(rng_.pick(type_names_)), ms), sub_depth(depth));
        if (!s) return std::nullopt;
        const VarName x = fresh();
        Want we = w;
        we.bound = me;
        auto e = scoped(x, Typed{s->typed.type, Cardinality::one()}, [&] { return gen(we, sub_depth(depth)); });
        if (!e) return std::nullopt;
        const Label l = Label::object(rng_.chance(0.5) ? "s0" : "s1");
        return finish(mk(core::Proj{mk(core::Shaping{s->expr, x, {{l, e->expr}}}), l}), w);
      }
      case Prod::Backlink: {
        std::vector<std::tuple<TypeName, Label, TypeName>> ok;
        for (const auto& [n, decl] : schema_) {
          for (const auto& [l, f] : decl) {
            const auto* rt = std::get_if<StoredRefType>(&f.type);
            if (rt == nullptr) continue;
            std::vector<TypeEntry> entries;
            for (const auto& [lp, d] : rt->link_props) entries.push_back({lp, ComputedType::scalar(d.type), d.card});
            if (w.type_ok(ComputedType::ref(n, entries))) ok.emplace_back(n, l, rt->target);
          }
        }
        if (ok.empty()) return std::nullopt;
        const auto& [n, l, target] = ok[rng_.below(ok.size())];
        auto s = gen(Want::exactly(ComputedType::ref(target), rng_.mode()), sub_depth(depth));
        if (!s) return std::nullopt;
        return finish(mk(core::Backlink{s->expr, l, n}), w);
      }
      case Prod::Shaping: {
        if (!w.may_be_ref()) return std::nullopt;
        Want ws = w;
        if (!w.exact) {
          ws.cls = Cls::Ref;
        }
        auto s = gen(ws, sub_depth(depth));
        if (!s) return std::nullopt;
        const VarName x = fresh();
        core::Shape shape;
        if (!w.exact) {
          std::vector<Label> labels = {Label::object("s0"), Label::object("s1")};
          for (const auto& [l, f] : *schema_.get(s->typed.type.as_ref().target)) labels.push_back(l);
          const int n = rng_.between(0, 2);
          bool failed = false;
          scoped(x, Typed{s->typed.type, Cardinality::one()}, [&] {
            for (int i = 0; i < n && !failed; ++i) {
              const Label l = rng_.pick(labels);
              if (std::any_of(shape.begin(), shape.end(), [&](const core::ShapeElem& el) { return el.label == l; })) {
                continue;
              }
              auto e = gen(Want::any(rng_.mode()), sub_depth(depth));
              if (!e) {
                failed = true;
                break;
              }
              shape.push_back({l, e->expr});
            }
            return 0;
          });
          if (failed) return std::nullopt;
        }
        return finish(mk(core::Shaping{s->expr, x, std::move(shape)}), w);
      }
      case Prod::Call: return call(w, depth);
      case Prod::If: {
        auto c = gen(Want::exactly(ComputedType::scalar(ScalarType::Bool), Cardinality::one()), sub_depth(depth));
        if (!c) return std::nullopt;
        auto t = gen(w, sub_depth(depth));
        if (!t) return std::nullopt;
        auto f = gen(Want::exactly(t->typed.type, w.bound), sub_depth(depth));
        if (!f) return std::nullopt;
        return finish(mk(core::IfStrict{c->expr, t->expr, f->expr}), w);
      }
      case Prod::With: {
        auto b = gen(Want::any(rng_.mode()), sub_depth(depth));
        if (!b) return std::nullopt;
        const VarName x = fresh();
        auto body = scoped(x, b->typed, [&] { return gen(w, sub_depth(depth)); });
        if (!body) return std::nullopt;
        return finish(mk(core::With{b->expr, x, body->expr}), w);
      }
      case Prod::For: {
        auto opts = splits(w.bound, true);
        if (opts.empty()) return std::nullopt;
        auto [ms, mb] = rng_.pick(opts);
        auto s = gen(Want::any(ms), sub_depth(depth));
        if (!s) return std::nullopt;
        const VarName x = fresh();
        Want wb = w;
        wb.bound = mb;
        auto body = scoped(x, Typed{s->typed.type, Cardinality::one()}, [&] { return gen(wb, sub_depth(depth)); });
        if (!body) return std::nullopt;
        return finish(mk(core::For{s->expr, x, body->expr}), w);
      }
      case Prod::OrderBy: {
        auto s = gen(w, sub_depth(depth));
        if (!s) return std::nullopt;
        const VarName x = fresh();
        Want wk{std::nullopt, Cls::Scalar, std::nullopt, Cardinality::optional()};
        auto k = scoped(x, Typed{s->typed.type, Cardinality::one()}, [&] { return gen(wk, sub_depth(depth)); });
        if (!k) return std::nullopt;
        return finish(mk(core::OrderBy{s->expr, x, k->expr}), w);
      }
      case Prod::Insert: {
        if (w.exact || !w.may_be_ref()) return std::nullopt;
        const TypeName n = w.target ? *w.target : rng_.pick(type_names_);
        core::Shape shape;
        for (const auto& [l, f] : *schema_.get(n)) {
          auto e = gen_stored(f, sub_depth(depth));
          if (!e) return std::nullopt;
          shape.push_back({l, e->expr});
        }
        return finish(mk(core::Insert{n, std::move(shape)}), w);
      }
      case Prod::Update: {
        if (w.exact || !w.may_be_ref()) return std::nullopt;
        Want ws{std::nullopt, Cls::Ref, w.target, Cardinality::one()};
        auto s = gen(ws, sub_depth(depth));
        if (!s) return std::nullopt;
        const auto& decl = *schema_.get(s->typed.type.as_ref().target);
        std::vector<Label> labels;
        for (const auto& [l, f] : decl) labels.push_back(l);
        std::shuffle(labels.begin(), labels.end(), rng_.engine());
        labels.resize(static_cast<std::size_t>(rng_.between(1, static_cast<int>(labels.size()))));
        const VarName x = fresh();
        core::Shape shape;
        bool failed = false;
        scoped(x, Typed{s->typed.type, Cardinality::one()}, [&] {
          for (const Label& l : labels) {
            auto e = gen_stored(*decl.get(l), sub_depth(depth));
            if (!e) {
              failed = true;
              break;
            }
            shape.push_back({l, e->expr});
          }
          return 0;
        });
        if (failed) return std::nullopt;
        return finish(mk(core::Update{s->expr, x, std::move(shape)}), w);
      }
    }
    return std::nullopt;
  }

  std::optional<Gen> call(const Want& w, int depth) {
    static const ComputedType kInt = ComputedType::scalar(ScalarType::Int);
    static const ComputedType kStr = ComputedType::scalar(ScalarType::Str);
    static const ComputedType kBool = ComputedType::scalar(ScalarType::Bool);
    const int d = sub_depth(depth);
    const std::string f = rng_.pick(BuiltinRegistry::standard().names());
    const BuiltinDef* def = BuiltinRegistry::standard().find(f);
    std::vector<ExprPtr> args;
    auto arg = [&](Want aw) {
      auto a = gen(aw, d);
      if (!a) return std::optional<ComputedType>{};
      args.push_back(a->expr);
      return std::optional<ComputedType>{a->typed.type};
    };
    auto bound = [&](std::size_t i) { return interpret(def->modifiers[i]); };
    if (f == "count") {
      if (!arg(Want::any(bound(0)))) return std::nullopt;
    } else if (f == "eq") {
      auto t = arg(Want::any(bound(0)));
      if (!t) return std::nullopt;
      ComputedType second = t->is_ref() ? ComputedType::ref(t->as_ref().target) : *t;
      Want w2 = t->is_ref() ? Want{std::nullopt, Cls::Ref, t->as_ref().target, bound(1)} : Want::exactly(second, bound(1));
      if (!arg(w2)) return std::nullopt;
    } else if (f == "append") {
      if (!arg(Want::exactly(kStr, bound(0))) || !arg(Want::exactly(kStr, bound(1)))) return std::nullopt;
    } else if (f == "coalesce") {
      Want w0 = w;
      w0.bound = bound(0);
      auto t = arg(w0);
      if (!t || !arg(Want::exactly(*t, bound(1)))) return std::nullopt;
    } else if (f == "any" || f == "not") {
      if (!arg(Want::exactly(kBool, bound(0)))) return std::nullopt;
    } else if (f == "add" || f == "lt") {
      if (!arg(Want::exactly(kInt, bound(0))) || !arg(Want::exactly(kInt, bound(1)))) return std::nullopt;
    } else {
      return std::nullopt;
    }
    return finish(mk(core::Call{f, std::move(args)}), w);
  }
};

}  // namespace

Instance gen_instance(const GenConfig& cfg) {
  Rng rng(cfg.seed);
  for (int round = 0;; ++round) {
    Instance inst;
    inst.schema = gen_schema(rng, cfg);
    inst.store = gen_store(rng, cfg, inst.schema);
    if (!check_schema(inst.schema).empty() || !check_store(inst.schema, inst.store).empty()) {
      throw std::logic_error("generated an ill-formed schema or store");
    }
    for (int i = 0; i < kAttempts; ++i) {
      ExprGen g(rng, cfg, inst.schema);
      if (auto e = g.top()) {
        inst.expr = e->expr;
        inst.typed = synth(inst.schema, *inst.expr);
        return inst;
      }
    }
    if (round > 16) throw std::logic_error("expression generation exhausted its budget");
  }
}

}  // namespace grql
