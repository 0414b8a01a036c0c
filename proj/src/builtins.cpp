#include "grql/builtins.hpp"

#include "grql/errors.hpp"

namespace grql {

Cardinality interpret(ParamModifier p) {
  switch (p) {
    case ParamModifier::One: return Cardinality::one();
    case ParamModifier::Opt: return Cardinality::optional();
    case ParamModifier::Many: return Cardinality::many();
  }
  return Cardinality::many();
}

const char* to_string(ParamModifier p) {
  switch (p) {
    case ParamModifier::One: return "1";
    case ParamModifier::Opt: return "?";
    case ParamModifier::Many: return "*";
  }
  return "?";
}

namespace {

using Types = std::vector<ComputedType>;
using Args = std::vector<ValueSeq>;

const ComputedType kInt = ComputedType::scalar(ScalarType::Int);
const ComputedType kStr = ComputedType::scalar(ScalarType::Str);
const ComputedType kBool = ComputedType::scalar(ScalarType::Bool);

ValueSeq single(ScalarValue v) { return {ComputedValue::scalar(std::move(v))}; }

// Monomorphic signature over scalar parameters.
BuiltinDef mono(std::string name, std::vector<ComputedType> params, ComputedType result,
                std::function<ValueSeq(const Args&)> run) {
  std::vector<ParamModifier> mods(params.size(), ParamModifier::One);
  auto resolve = [name, params, mods, result](const Types& ts) -> std::optional<BuiltinSignature> {
    if (ts.size() != params.size()) return std::nullopt;
    BuiltinSignature sig{name, {}, result, Cardinality::one()};
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (!(ts[i] == params[i])) return std::nullopt;
      sig.params.push_back({params[i], mods[i]});
    }
    return sig;
  };
  return {std::move(name), std::move(mods), std::move(resolve), std::move(run)};
}

BuiltinRegistry make_standard() {
  BuiltinRegistry r;

  r.add({"count",
         {ParamModifier::Many},
         [](const Types& ts) -> std::optional<BuiltinSignature> {
           if (ts.size() != 1) return std::nullopt;
           return BuiltinSignature{"count", {{ts[0], ParamModifier::Many}}, kInt, Cardinality::one()};
         },
         [](const Args& a) { return single(ScalarValue::of_int(static_cast<std::int64_t>(a[0].size()))); }});

  r.add({"eq",
         {ParamModifier::One, ParamModifier::One},
         [](const Types& ts) -> std::optional<BuiltinSignature> {
           if (ts.size() != 2) return std::nullopt;
           const bool same = (ts[0].is_scalar() && ts[0] == ts[1]) ||
                             (ts[0].is_ref() && ts[1].is_ref() && ts[0].as_ref().target == ts[1].as_ref().target);
           if (!same) return std::nullopt;
           return BuiltinSignature{"eq", {{ts[0], ParamModifier::One}, {ts[1], ParamModifier::One}}, kBool,
                                   Cardinality::one()};
         },
         [](const Args& a) {
           const auto& x = a[0][0];
           const auto& y = a[1][0];
           bool eq = false;
           if (x.is_ref() && y.is_ref()) {
             eq = x.as_ref().id == y.as_ref().id;
           } else if (x.is_scalar() && y.is_scalar()) {
             eq = x.as_scalar() == y.as_scalar();
           }
           return single(ScalarValue::of_bool(eq));
         }});

  r.add(mono("append", {kStr, kStr}, kStr, [](const Args& a) {
    return single(ScalarValue::of_str(a[0][0].as_scalar().as_str() + a[1][0].as_scalar().as_str()));
  }));

  r.add({"coalesce",
         {ParamModifier::Opt, ParamModifier::Many},
         [](const Types& ts) -> std::optional<BuiltinSignature> {
           if (ts.size() != 2 || !(ts[0] == ts[1])) return std::nullopt;
           return BuiltinSignature{"coalesce", {{ts[0], ParamModifier::Opt}, {ts[1], ParamModifier::Many}}, ts[0],
                                   Cardinality::many()};
         },
         [](const Args& a) { return a[0].empty() ? a[1] : a[0]; }});

  r.add({"any",
         {ParamModifier::Many},
         [](const Types& ts) -> std::optional<BuiltinSignature> {
           if (ts.size() != 1 || !(ts[0] == kBool)) return std::nullopt;
           return BuiltinSignature{"any", {{kBool, ParamModifier::Many}}, kBool, Cardinality::one()};
         },
         [](const Args& a) {
           bool any = false;
           for (const auto& v : a[0]) any = any || v.as_scalar().as_bool();
           return single(ScalarValue::of_bool(any));
         }});

  r.add(mono("add", {kInt, kInt}, kInt, [](const Args& a) {
    std::int64_t out = 0;
    if (__builtin_add_overflow(a[0][0].as_scalar().as_int(), a[1][0].as_scalar().as_int(), &out)) {
      throw EvalFault("BuiltinDomain", "integer overflow in add");
    }
    return single(ScalarValue::of_int(out));
  }));

  r.add(mono("lt", {kInt, kInt}, kBool, [](const Args& a) {
    return single(ScalarValue::of_bool(a[0][0].as_scalar().as_int() < a[1][0].as_scalar().as_int()));
  }));

  r.add(mono("not", {kBool}, kBool,
             [](const Args& a) { return single(ScalarValue::of_bool(!a[0][0].as_scalar().as_bool())); }));

  return r;
}

}  // namespace

void BuiltinRegistry::add(BuiltinDef def) {
  for (auto& d : defs_) {
    if (d.name == def.name) {
      d = std::move(def);
      return;
    }
  }
  defs_.push_back(std::move(def));
}

const BuiltinDef* BuiltinRegistry::find(const std::string& name) const {
  for (const auto& d : defs_) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

std::vector<std::string> BuiltinRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& d : defs_) out.push_back(d.name);
  return out;
}

const BuiltinRegistry& BuiltinRegistry::standard() {
  static const BuiltinRegistry registry = make_standard();
  return registry;
}

BuiltinSignature resolve_builtin(const std::string& name, const std::vector<ComputedType>& arg_types) {
  const BuiltinDef* def = BuiltinRegistry::standard().find(name);
  if (def == nullptr) throw TypeError("NoSignature", "unknown function '" + name + "'");
  auto sig = def->resolve(arg_types);
  if (!sig) {
    std::string shown;
    for (const auto& t : arg_types) shown += (shown.empty() ? "" : ", ") + t.to_string();
    throw TypeError("NoSignature", "no signature of '" + name + "' accepts (" + shown + ")");
  }
  return *sig;
}

ValueSeq run_builtin(const std::string& name, const BuiltinSignature& sig, const std::vector<ValueSeq>& args) {
  const BuiltinDef* def = BuiltinRegistry::standard().find(name);
  if (def == nullptr) throw EvalFault("Stuck", "unknown function '" + name + "'");
  if (args.size() != sig.params.size()) throw EvalFault("Stuck", "arity mismatch calling '" + name + "'");
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (!interpret(sig.params[i].modifier).admits(args[i].size())) {
      throw EvalFault("Stuck", "argument " + std::to_string(i + 1) + " of '" + name + "' has wrong cardinality");
    }
  }
  return def->run(args);
}

}  // namespace grql
