#include "grql/desugar.hpp"

#include <map>

#include "grql/errors.hpp"
#include "overload.hpp"

namespace grql {

using detail::Overload;

ExprPtr derived_if(ExprPtr cond, ExprPtr then_branch, ExprPtr else_branch, FreshNames& fresh, Span span) {
  const VarName x = fresh.next();
  return mk(core::For{std::move(cond), x,
                      mk(core::IfStrict{mk(core::Var{x}, span), std::move(then_branch), std::move(else_branch)}, span)},
            span);
}

ExprPtr empty_like(const VarName& var, FreshNames& fresh, Span span) {
  return mk(core::For{mk(core::Empty{ComputedType::scalar(ScalarType::Bool)}, span), fresh.next(),
                      mk(core::Var{var}, span)},
            span);
}

// Alpha renaming ---------------------------------------------------------------

namespace {

class Renamer {
 public:
  explicit Renamer(FreshNames& fresh) : fresh_(fresh) {}

  ExprPtr operator()(const ExprPtr& e) { return e ? rename(*e) : nullptr; }

 private:
  FreshNames& fresh_;
  std::map<VarName, std::vector<VarName>> scope_;

  VarName bind(const VarName& v) {
    VarName n = fresh_.next();
    scope_[v].push_back(n);
    return n;
  }
  void unbind(const VarName& v) { scope_[v].pop_back(); }
  VarName lookup(const VarName& v) const {
    auto it = scope_.find(v);
    return it == scope_.end() || it->second.empty() ? v : it->second.back();
  }

  core::Shape shape(const core::Shape& s) {
    core::Shape out;
    for (const auto& el : s) out.push_back({el.label, (*this)(el.expr)});
    return out;
  }

  ExprPtr rename(const Expr& e) {
    const Span sp = e.span;
    return std::visit(
        Overload{
            [&](const core::Var& x) { return mk(core::Var{lookup(x.name)}, sp); },
            [&](const core::Prim& x) { return mk(x, sp); },
            [&](const core::Empty& x) { return mk(x, sp); },
            [&](const core::Union& x) { return mk(core::Union{(*this)(x.lhs), (*this)(x.rhs)}, sp); },
            [&](const core::Name& x) { return mk(x, sp); },
            [&](const core::Proj& x) { return mk(core::Proj{(*this)(x.subject), x.label}, sp); },
            [&](const core::Backlink& x) {
              return mk(core::Backlink{(*this)(x.subject), x.label, x.source}, sp);
            },
            [&](const core::Shaping& x) {
              ExprPtr subject = (*this)(x.subject);
              VarName b = bind(x.binder);
              core::Shape s = shape(x.shape);
              unbind(x.binder);
              return mk(core::Shaping{subject, b, std::move(s)}, sp);
            },
            [&](const core::Call& x) {
              std::vector<ExprPtr> args;
              for (const auto& a : x.args) args.push_back((*this)(a));
              return mk(core::Call{x.function, std::move(args)}, sp);
            },
            [&](const core::IfStrict& x) {
              return mk(core::IfStrict{(*this)(x.cond), (*this)(x.then_branch), (*this)(x.else_branch)}, sp);
            },
            [&](const core::With& x) {
              ExprPtr bound = (*this)(x.bound);
              VarName v = bind(x.var);
              ExprPtr body = (*this)(x.body);
              unbind(x.var);
              return mk(core::With{bound, v, body}, sp);
            },
            [&](const core::For& x) {
              ExprPtr source = (*this)(x.source);
              VarName v = bind(x.var);
              ExprPtr body = (*this)(x.body);
              unbind(x.var);
              return mk(core::For{source, v, body}, sp);
            },
            [&](const core::OrderBy& x) {
              ExprPtr subject = (*this)(x.subject);
              VarName v = bind(x.var);
              ExprPtr key = (*this)(x.key);
              unbind(x.var);
              return mk(core::OrderBy{subject, v, key}, sp);
            },
            [&](const core::Insert& x) { return mk(core::Insert{x.type, shape(x.shape)}, sp); },
            [&](const core::Update& x) {
              ExprPtr subject = (*this)(x.subject);
              VarName v = bind(x.var);
              core::Shape s = shape(x.shape);
              unbind(x.var);
              return mk(core::Update{subject, v, std::move(s)}, sp);
            },
        },
        e.node);
  }
};

}  // namespace

ExprPtr freshen(const ExprPtr& e, FreshNames& fresh) { return Renamer(fresh)(e); }

// Call lifting -------------------------------------------------------------------

namespace {

// optional_for(e1; x. body) = with(e1; y. if(eq(0, count†(y)); with(∅; x. body); for(y; x. body)))
ExprPtr optional_for(ExprPtr source, const VarName& x, const ExprPtr& body, FreshNames& fresh, Span sp) {
  const VarName y = fresh.next();
  ExprPtr count = mk(core::Call{"count", {mk(core::Var{y}, sp)}}, sp);
  ExprPtr is_empty =
      lift_call("eq", {mk(core::Prim{ScalarValue::of_int(0)}, sp), count}, {ParamModifier::One, ParamModifier::One},
                fresh, sp);
  ExprPtr when_empty = mk(core::With{empty_like(y, fresh, sp), x, body}, sp);
  // The second copy of the body gets its own binders: rename through a
  // carrier with(y; x. body), then reuse its fresh x' and body'.
  ExprPtr renamed = freshen(mk(core::With{mk(core::Var{y}, sp), x, body}, sp), fresh);
  const auto* carrier = renamed->as<core::With>();
  ExprPtr when_present = mk(core::For{mk(core::Var{y}, sp), carrier->var, carrier->body}, sp);
  return mk(core::With{std::move(source), y, derived_if(is_empty, when_empty, when_present, fresh, sp)}, sp);
}

ExprPtr lift_from(std::size_t i, const std::string& function, const std::vector<ExprPtr>& args,
                  const std::vector<ParamModifier>& mods, std::vector<ExprPtr>& vars, FreshNames& fresh, Span sp) {
  if (i == args.size()) return mk(core::Call{function, vars}, sp);
  const VarName x = fresh.next();
  vars.push_back(mk(core::Var{x}, sp));
  ExprPtr body = lift_from(i + 1, function, args, mods, vars, fresh, sp);
  vars.pop_back();
  switch (mods[i]) {
    case ParamModifier::Many: return mk(core::With{args[i], x, body}, sp);
    case ParamModifier::One: return mk(core::For{args[i], x, body}, sp);
    case ParamModifier::Opt: return optional_for(args[i], x, body, fresh, sp);
  }
  return body;
}

}  // namespace

ExprPtr lift_call(const std::string& function, const std::vector<ExprPtr>& args,
                  const std::vector<ParamModifier>& modifiers, FreshNames& fresh, Span span) {
  std::vector<ExprPtr> vars;
  return lift_from(0, function, args, modifiers, vars, fresh, span);
}

// Surface lowering ---------------------------------------------------------------

namespace {

class Desugarer {
 public:
  Desugarer(const Schema* schema, FreshNames& fresh) : schema_(schema), fresh_(fresh) {}

  ExprPtr lower(const SurfaceExpr& e) {
    const Span sp = e.span;
    switch (e.kind) {
      case SurfaceKind::SetLit: {
        std::vector<const SurfaceExpr*> elems;
        flatten(e, elems);
        if (elems.empty()) {
          throw DesugarError("UntypedEmptySet", "empty set needs a type annotation such as <int>{}", sp);
        }
        ExprPtr acc = lower(*elems[0]);
        for (std::size_t i = 1; i < elems.size(); ++i) acc = mk(core::Union{acc, lower(*elems[i])}, sp);
        return acc;
      }
      case SurfaceKind::ScalarLit: return mk(core::Prim{*e.scalar}, sp);
      case SurfaceKind::EmptyCast: return mk(core::Empty{annotation(e.name)}, sp);
      case SurfaceKind::Path: return mk(core::Proj{subject_or_dot(e), e.label}, sp);
      case SurfaceKind::Backlink: return mk(core::Backlink{subject_or_dot(e), e.label, e.name}, sp);
      case SurfaceKind::Shape: {
        ExprPtr subject = lower(*e.children[0]);
        return shaping(subject, e.children[0].get(), e.items, sp);
      }
      case SurfaceKind::Select: return lower(*e.children[0]);
      case SurfaceKind::Filter: {
        ExprPtr subject = lower(*e.children[0]);
        const VarName x = fresh_.next();
        ExprPtr cond = with_implicit(x, e.children[0].get(), [&] { return lower(*e.children[1]); });
        ExprPtr any = lift_call("any", {cond}, {ParamModifier::Many}, fresh_, sp);
        ExprPtr keep = derived_if(any, mk(core::Var{x}, sp), empty_like(x, fresh_, sp), fresh_, sp);
        return mk(core::For{subject, x, keep}, sp);
      }
      case SurfaceKind::OrderBy: {
        ExprPtr subject = lower(*e.children[0]);
        const VarName x = fresh_.next();
        ExprPtr key = with_implicit(x, e.children[0].get(), [&] { return lower(*e.children[1]); });
        return mk(core::OrderBy{subject, x, key}, sp);
      }
      case SurfaceKind::For: {
        ExprPtr source = lower(*e.children[0]);
        const VarName x = fresh_.next();
        ExprPtr body = scoped(e.name, x, [&] { return lower(*e.children[1]); });
        return mk(core::For{source, x, body}, sp);
      }
      case SurfaceKind::With: {
        ExprPtr bound = lower(*e.children[0]);
        const VarName x = fresh_.next();
        ExprPtr body = scoped(e.name, x, [&] { return lower(*e.children[1]); });
        return mk(core::With{bound, x, body}, sp);
      }
      case SurfaceKind::If:
        return derived_if(lower(*e.children[0]), lower(*e.children[1]), lower(*e.children[2]), fresh_, sp);
      case SurfaceKind::Call: {
        const BuiltinDef* def = BuiltinRegistry::standard().find(e.name);
        if (def == nullptr) throw DesugarError("UnknownFunction", "unknown function '" + e.name + "'", sp);
        if (def->modifiers.size() != e.children.size()) {
          throw DesugarError("ArityMismatch",
                             "'" + e.name + "' takes " + std::to_string(def->modifiers.size()) + " argument(s), got " +
                                 std::to_string(e.children.size()),
                             sp);
        }
        std::vector<ExprPtr> args;
        for (const auto& c : e.children) args.push_back(lower(*c));
        return lift_call(e.name, args, def->modifiers, fresh_, sp);
      }
      case SurfaceKind::Insert: return insert(e);
      case SurfaceKind::Update: {
        ExprPtr subject = lower(*e.children[0]);
        const VarName y = fresh_.next();
        const VarName x = fresh_.next();
        core::Shape shape =
            with_implicit(x, e.children[0].get(), [&] { return assignments(e.items, nullptr, sp); });
        return mk(core::For{subject, y, mk(core::Update{mk(core::Var{y}, sp), x, std::move(shape)}, sp)}, sp);
      }
      case SurfaceKind::Var: {
        auto it = vars_.find(e.name);
        const VarName name = it == vars_.end() || it->second.empty() ? e.name : it->second.back();
        return mk(core::Var{name}, sp);
      }
      case SurfaceKind::TypeRef: {
        auto it = shadows_.find(e.name);
        if (it != shadows_.end() && !it->second.empty()) return mk(core::Var{it->second.back()}, sp);
        return mk(core::Name{e.name}, sp);
      }
    }
    throw DesugarError("Unsupported", "unknown surface node", sp);
  }

 private:
  const Schema* schema_;
  FreshNames& fresh_;
  std::map<std::string, std::vector<VarName>> vars_;
  std::map<std::string, std::vector<VarName>> shadows_;
  std::vector<VarName> dots_;

  static void flatten(const SurfaceExpr& e, std::vector<const SurfaceExpr*>& out) {
    for (const auto& c : e.children) {
      if (c->kind == SurfaceKind::SetLit) {
        flatten(*c, out);
      } else {
        out.push_back(c.get());
      }
    }
  }

  ComputedType annotation(const std::string& name) const {
    if (name == "str") return ComputedType::scalar(ScalarType::Str);
    if (name == "int" || name == "int64") return ComputedType::scalar(ScalarType::Int);
    if (name == "bool") return ComputedType::scalar(ScalarType::Bool);
    return ComputedType::ref(name);
  }

  template <typename F>
  ExprPtr scoped(const std::string& surface, const VarName& core_name, F&& f) {
    vars_[surface].push_back(core_name);
    auto result = f();
    vars_[surface].pop_back();
    return result;
  }

  // Runs f with `.` bound to x; a TypeRef subject N is shadowed by x.
  template <typename F, typename R = std::invoke_result_t<F>>
  R with_implicit(const VarName& x, const SurfaceExpr* subject, F&& f) {
    const bool shadow = subject != nullptr && subject->kind == SurfaceKind::TypeRef;
    dots_.push_back(x);
    if (shadow) shadows_[subject->name].push_back(x);
    auto result = f();
    if (shadow) shadows_[subject->name].pop_back();
    dots_.pop_back();
    return result;
  }

  ExprPtr subject_or_dot(const SurfaceExpr& e) {
    if (e.children[0]) return lower(*e.children[0]);
    if (dots_.empty()) {
      throw DesugarError("NoImplicitSubject", "leading '.' used outside a shape, filter, order by or update", e.span);
    }
    return mk(core::Var{dots_.back()}, e.span);
  }

  ExprPtr shaping(const ExprPtr& subject, const SurfaceExpr* surface_subject, const std::vector<ShapeItem>& items,
                  Span sp) {
    const VarName x = fresh_.next();
    core::Shape shape = with_implicit(x, surface_subject, [&] {
      core::Shape out;
      for (const auto& item : items) {
        check_unique(out, item.label, sp);
        switch (item.form) {
          case ShapeItem::Form::Shorthand:
            out.push_back({item.label, mk(core::Proj{mk(core::Var{x}, sp), item.label}, sp)});
            break;
          case ShapeItem::Form::Assign: out.push_back({item.label, lower(*item.expr)}); break;
          case ShapeItem::Form::Nested: {
            ExprPtr inner = mk(core::Proj{mk(core::Var{x}, sp), item.label}, sp);
            out.push_back({item.label, shaping(inner, nullptr, item.items, sp)});
            break;
          }
        }
      }
      return out;
    });
    return mk(core::Shaping{subject, x, std::move(shape)}, sp);
  }

  static void check_unique(const core::Shape& s, const Label& label, Span sp) {
    for (const auto& el : s) {
      if (el.label == label) throw DesugarError("DuplicateLabel", "label '" + label.spelled() + "' given twice", sp);
    }
  }

  // Shape entries of insert/update. `decl` types bare `{}` right-hand sides.
  core::Shape assignments(const std::vector<ShapeItem>& items, const ObjectTypeDecl* decl, Span sp) {
    core::Shape out;
    for (const auto& item : items) {
      check_unique(out, item.label, sp);
      if (item.form != ShapeItem::Form::Assign) {
        throw DesugarError("BadShape", "insert and update entries must have the form 'label := expr'", sp);
      }
      const FieldDecl* field = decl != nullptr ? decl->get(item.label) : nullptr;
      if (item.expr->kind == SurfaceKind::SetLit && is_empty_set(*item.expr) && field != nullptr) {
        out.push_back({item.label, mk(core::Empty{empty_type(field->type)}, item.expr->span)});
      } else {
        out.push_back({item.label, lower(*item.expr)});
      }
    }
    return out;
  }

  static bool is_empty_set(const SurfaceExpr& e) {
    std::vector<const SurfaceExpr*> elems;
    flatten(e, elems);
    return elems.empty();
  }

  static ComputedType empty_type(const StoredType& t) {
    if (const auto* s = std::get_if<ScalarType>(&t)) return ComputedType::scalar(*s);
    return ComputedType::ref(std::get<StoredRefType>(t).target);
  }

  ExprPtr insert(const SurfaceExpr& e) {
    const ObjectTypeDecl* decl = schema_ != nullptr ? schema_->get(e.name) : nullptr;
    core::Shape shape = assignments(e.items, decl, e.span);
    if (decl != nullptr) {
      for (const auto& [label, field] : *decl) {
        bool given = false;
        for (const auto& el : shape) given = given || el.label == label;
        if (!given) shape.push_back({label, mk(core::Empty{empty_type(field.type)}, e.span)});
      }
    }
    return mk(core::Insert{e.name, std::move(shape)}, e.span);
  }
};

}  // namespace

ExprPtr desugar(const SurfaceExpr& e, const Schema* schema, FreshNames& fresh) {
  return Desugarer(schema, fresh).lower(e);
}

ExprPtr desugar(const SurfaceExpr& e, const Schema* schema) {
  FreshNames fresh;
  return desugar(e, schema, fresh);
}

}  // namespace grql
