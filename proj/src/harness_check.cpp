// Soundness checks, shrinking, replay files and the fuzz driver.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <thread>

#include "grql/harness.hpp"
#include "grql/store_io.hpp"
#include "grql/wellformed.hpp"
#include "overload.hpp"

namespace grql {

using detail::Overload;

namespace {

// Children in a fixed order; `rebuild` accepts the same order back.
std::vector<ExprPtr> children(const Expr& e) {
  auto shape_kids = [](const core::Shape& s) {
    std::vector<ExprPtr> out;
    for (const auto& el : s) out.push_back(el.expr);
    return out;
  };
  return std::visit(
      Overload{
          [](const core::Var&) { return std::vector<ExprPtr>{}; },
          [](const core::Prim&) { return std::vector<ExprPtr>{}; },
          [](const core::Empty&) { return std::vector<ExprPtr>{}; },
          [](const core::Name&) { return std::vector<ExprPtr>{}; },
          [](const core::Union& x) { return std::vector<ExprPtr>{x.lhs, x.rhs}; },
          [](const core::Proj& x) { return std::vector<ExprPtr>{x.subject}; },
          [](const core::Backlink& x) { return std::vector<ExprPtr>{x.subject}; },
          [&](const core::Shaping& x) {
            auto out = shape_kids(x.shape);
            out.insert(out.begin(), x.subject);
            return out;
          },
          [](const core::Call& x) { return x.args; },
          [](const core::IfStrict& x) { return std::vector<ExprPtr>{x.cond, x.then_branch, x.else_branch}; },
          [](const core::With& x) { return std::vector<ExprPtr>{x.bound, x.body}; },
          [](const core::For& x) { return std::vector<ExprPtr>{x.source, x.body}; },
          [](const core::OrderBy& x) { return std::vector<ExprPtr>{x.subject, x.key}; },
          [&](const core::Insert& x) { return shape_kids(x.shape); },
          [&](const core::Update& x) {
            auto out = shape_kids(x.shape);
            out.insert(out.begin(), x.subject);
            return out;
          },
      },
      e.node);
}

ExprPtr rebuild(const Expr& e, const std::vector<ExprPtr>& k) {
  auto reshape = [&](core::Shape s, std::size_t from) {
    for (std::size_t i = 0; i < s.size(); ++i) s[i].expr = k[from + i];
    return s;
  };
  return std::visit(
      Overload{
          [&](const core::Union&) { return mk(core::Union{k[0], k[1]}, e.span); },
          [&](const core::Proj& x) { return mk(core::Proj{k[0], x.label}, e.span); },
          [&](const core::Backlink& x) { return mk(core::Backlink{k[0], x.label, x.source}, e.span); },
          [&](const core::Shaping& x) { return mk(core::Shaping{k[0], x.binder, reshape(x.shape, 1)}, e.span); },
          [&](const core::Call& x) { return mk(core::Call{x.function, k}, e.span); },
          [&](const core::IfStrict&) { return mk(core::IfStrict{k[0], k[1], k[2]}, e.span); },
          [&](const core::With& x) { return mk(core::With{k[0], x.var, k[1]}, e.span); },
          [&](const core::For& x) { return mk(core::For{k[0], x.var, k[1]}, e.span); },
          [&](const core::OrderBy& x) { return mk(core::OrderBy{k[0], x.var, k[1]}, e.span); },
          [&](const core::Insert& x) { return mk(core::Insert{x.type, reshape(x.shape, 0)}, e.span); },
          [&](const core::Update& x) { return mk(core::Update{k[0], x.var, reshape(x.shape, 1)}, e.span); },
          [&](const auto&) -> ExprPtr { throw std::logic_error("rebuild of a leaf"); },
      },
      e.node);
}

bool mutates(const Expr& e) {
  if (e.as<core::Insert>() || e.as<core::Update>()) return true;
  for (const auto& c : children(e)) {
    if (mutates(*c)) return true;
  }
  return false;
}

void count_constructors(const Expr& e, std::array<std::size_t, kCoreConstructorCount>& counts) {
  ++counts[e.node.index()];
  for (const auto& c : children(e)) count_constructors(*c, counts);
}

std::string canonical_value(const ComputedValue& v, const Store& known) {
  if (v.is_scalar()) return v.as_scalar().to_literal();
  const RefValue& r = v.as_ref();
  std::vector<std::string> entries;
  for (const ShapeEntry& e : r.shape) {
    entries.push_back(e.label.spelled() + (e.visibility == Visibility::Visible ? "=" : "~") +
                      canonical(e.values, known));
  }
  std::sort(entries.begin(), entries.end());
  std::string out = (known.contains(r.id) ? r.id : "*") + "<";
  for (const auto& s : entries) out += s + ";";
  return out + ">";
}

std::string canonical_stored(const StoredSeq& seq, const Store& known) {
  std::vector<std::string> parts;
  for (const StoredValue& v : seq) {
    if (const auto* s = std::get_if<ScalarValue>(&v)) {
      parts.push_back(s->to_literal());
      continue;
    }
    const auto& r = std::get<StoredRef>(v);
    std::string p = (known.contains(r.id) ? r.id : "*") + "<";
    for (const auto& [lp, vals] : r.link_props) {
      p += lp.spelled() + "=";
      std::vector<std::string> xs;
      for (const auto& x : vals) xs.push_back(x.to_literal());
      std::sort(xs.begin(), xs.end());
      for (const auto& x : xs) p += x + ",";
      p += ";";
    }
    parts.push_back(p + ">");
  }
  std::sort(parts.begin(), parts.end());
  std::string out = "[";
  for (const auto& p : parts) out += p + ",";
  return out + "]";
}

// Inserted tuples, ids erased, as a sorted list.
std::vector<std::string> inserted_tuples(const Store& before, const Store& after) {
  std::vector<std::string> out;
  for (const StoreTuple& t : after.tuples()) {
    if (before.contains(t.id)) continue;
    std::string s = t.type + "{";
    for (const auto& [l, seq] : t.record) s += l.spelled() + "=" + canonical_stored(seq, before) + ";";
    out.push_back(s + "}");
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct Run {
  EvalOutcome outcome;
  std::uint64_t seed;
};

}  // namespace

std::string canonical(const ValueSeq& vals, const Store& known) {
  std::vector<std::string> parts;
  for (const auto& v : vals) parts.push_back(canonical_value(v, known));
  std::sort(parts.begin(), parts.end());
  std::string out = "[";
  for (const auto& p : parts) out += p + ",";
  return out + "]";
}

EvalFn default_eval() {
  return [](const Schema& schema, const EvalConfig& config, const Store& store, const Expr& e) {
    return eval(schema, config, Environment{}, store, store, e);
  };
}

std::optional<CounterExample> check_soundness(const Instance& inst, const std::vector<std::uint64_t>& eval_seeds,
                                              const EvalFn& eval_fn) {
  auto fail = [&](const char* prop, std::string witness) {
    return CounterExample{0, eval_seeds, inst.schema, inst.store, inst.expr, prop, std::move(witness)};
  };
  const bool has_mutation = mutates(*inst.expr);
  std::vector<Run> runs;
  for (std::uint64_t s : eval_seeds) {
    EvalConfig cfg;
    cfg.permutation_seed = s;
    EvalOutcome out;
    try {
      out = eval_fn(inst.schema, cfg, inst.store, *inst.expr);
    } catch (const EvalFault& f) {
      return fail(property::kTotality, "seed " + std::to_string(s) + ": " + f.code() + ": " + f.what());
    } catch (const std::exception& f) {
      return fail(property::kTotality, "seed " + std::to_string(s) + ": " + f.what());
    }
    if (auto bad = check_computed_seq(inst.schema, inst.store, out.store_after, out.result, inst.typed.type,
                                      inst.typed.card)) {
      return fail(bad->cardinality ? property::kPreservationCardinality : property::kPreservationType,
                  "seed " + std::to_string(s) + ": " + bad->detail + " in " + debug_print(out.result) +
                      " at " + inst.typed.to_string());
    }
    Diagnostics diags = check_store(inst.schema, out.store_after);
    if (!diags.empty()) {
      return fail(property::kStoreWellFormed, "seed " + std::to_string(s) + ": " + diags.front().to_string());
    }
    if (!store_extends(inst.store, out.store_after)) {
      return fail(property::kExtension, "seed " + std::to_string(s) + ": result store does not extend the input");
    }
    if (!has_mutation && !(out.store_after == inst.store)) {
      return fail(property::kReadIsolation, "seed " + std::to_string(s) + ": store changed without mutation");
    }
    runs.push_back({std::move(out), s});
  }
  // First-update-wins makes update outcomes depend on evaluation order, so
  // only update-free expressions are compared across seeds.
  bool has_update = false;
  std::function<void(const Expr&)> scan = [&](const Expr& e) {
    has_update = has_update || e.as<core::Update>() != nullptr;
    for (const auto& c : children(e)) scan(*c);
  };
  scan(*inst.expr);
  if (!has_update) {
    for (std::size_t i = 1; i < runs.size(); ++i) {
      const std::string a = canonical(runs[0].outcome.result, inst.store);
      const std::string b = canonical(runs[i].outcome.result, inst.store);
      if (a != b) {
        return fail(property::kPermutation, "seeds " + std::to_string(runs[0].seed) + " and " +
                                                std::to_string(runs[i].seed) + " give " + a + " vs " + b);
      }
      if (inserted_tuples(inst.store, runs[0].outcome.store_after) !=
          inserted_tuples(inst.store, runs[i].outcome.store_after)) {
        return fail(property::kPermutation, "seeds " + std::to_string(runs[0].seed) + " and " +
                                                std::to_string(runs[i].seed) + " insert different tuples");
      }
    }
  }
  return std::nullopt;
}

// Shrinking -------------------------------------------------------------------------

namespace {

// Every expression one step smaller: a node replaced by one of its children.
void smaller(const ExprPtr& e, std::vector<ExprPtr>& out) {
  auto kids = children(*e);
  for (const auto& k : kids) out.push_back(k);
  for (std::size_t i = 0; i < kids.size(); ++i) {
    std::vector<ExprPtr> sub;
    smaller(kids[i], sub);
    for (const auto& s : sub) {
      auto copy = kids;
      copy[i] = s;
      out.push_back(rebuild(*e, copy));
    }
  }
}

std::optional<CounterExample> still_fails(const Schema& schema, const Store& store, const ExprPtr& e,
                                          const CounterExample& like, const EvalFn& eval_fn) {
  Instance inst{schema, store, e, {}};
  try {
    inst.typed = synth(schema, *e);
  } catch (const TypeError&) {
    return std::nullopt;
  }
  if (!check_store(schema, store).empty()) return std::nullopt;
  auto ce = check_soundness(inst, like.eval_seeds, eval_fn);
  if (!ce || ce->property != like.property) return std::nullopt;
  ce->seed = like.seed;
  return ce;
}

}  // namespace

CounterExample shrink(const CounterExample& ce, const EvalFn& eval_fn) {
  auto cur = still_fails(ce.schema, ce.store, ce.expr, ce, eval_fn);
  if (!cur) return ce;
  for (bool progress = true; progress;) {
    progress = false;
    std::vector<ExprPtr> cands;
    smaller(cur->expr, cands);
    std::stable_sort(cands.begin(), cands.end(),
                     [](const ExprPtr& a, const ExprPtr& b) { return expr_size(*a) < expr_size(*b); });
    for (const auto& c : cands) {
      if (expr_size(*c) >= expr_size(*cur->expr)) break;
      if (auto next = still_fails(cur->schema, cur->store, c, *cur, eval_fn)) {
        cur = std::move(next);
        progress = true;
        break;
      }
    }
    if (progress) continue;
    for (const StoreTuple& t : cur->store.tuples()) {
      Store smaller_store = cur->store;
      smaller_store.erase(t.id);
      if (auto next = still_fails(cur->schema, smaller_store, cur->expr, *cur, eval_fn)) {
        cur = std::move(next);
        progress = true;
        break;
      }
    }
  }
  return *cur;
}

// Replay files ----------------------------------------------------------------------

namespace {

Json type_to_json(const ComputedType& t) {
  if (t.is_scalar()) return to_string(t.as_scalar());
  Json entries = Json::array();
  for (const auto& e : t.as_ref().entries) {
    entries.push_back({{"label", e.label.spelled()}, {"type", type_to_json(e.type)}, {"card", e.card.to_string()}});
  }
  return {{"ref", t.as_ref().target}, {"entries", entries}};
}

[[noreturn]] void bad(const std::string& what) { throw std::runtime_error("malformed replay file: " + what); }

Cardinality card_from(const Json& j) {
  for (Cardinality c : kAllCardinalities) {
    if (j.is_string() && j.get<std::string>() == c.to_string()) return c;
  }
  bad("cardinality " + j.dump());
}

ScalarType scalar_type_from(const std::string& s) {
  for (ScalarType t : {ScalarType::Int, ScalarType::Str, ScalarType::Bool}) {
    if (to_string(t) == s) return t;
  }
  bad("scalar type " + s);
}

ComputedType type_from(const Json& j) {
  if (j.is_string()) return ComputedType::scalar(scalar_type_from(j.get<std::string>()));
  if (!j.is_object() || !j.contains("ref")) bad("type " + j.dump());
  std::vector<TypeEntry> entries;
  for (const auto& e : j.value("entries", Json::array())) {
    entries.push_back({Label::parse(e.at("label").get<std::string>()), type_from(e.at("type")), card_from(e.at("card"))});
  }
  return ComputedType::ref(j.at("ref").get<std::string>(), std::move(entries));
}

Json shape_to_json(const core::Shape& s) {
  Json out = Json::array();
  for (const auto& el : s) out.push_back({{"label", el.label.spelled()}, {"expr", expr_to_json(*el.expr)}});
  return out;
}

core::Shape shape_from(const Json& j) {
  core::Shape s;
  for (const auto& el : j) s.push_back({Label::parse(el.at("label").get<std::string>()), expr_from_json(el.at("expr"))});
  return s;
}

Json scalar_json(const ScalarValue& v) {
  if (v.is_int()) return v.as_int();
  if (v.is_bool()) return v.as_bool();
  return v.as_str();
}

}  // namespace

Json expr_to_json(const Expr& e) {
  Json j = Json::object();
  j["k"] = constructor_name(e.node.index());
  std::visit(Overload{
                 [&](const core::Var& x) { j["name"] = x.name; },
                 [&](const core::Prim& x) { j["value"] = scalar_json(x.value); },
                 [&](const core::Empty& x) { j["type"] = type_to_json(x.type); },
                 [&](const core::Union& x) {
                   j["lhs"] = expr_to_json(*x.lhs);
                   j["rhs"] = expr_to_json(*x.rhs);
                 },
                 [&](const core::Name& x) { j["type"] = x.type; },
                 [&](const core::Proj& x) {
                   j["subject"] = expr_to_json(*x.subject);
                   j["label"] = x.label.spelled();
                 },
                 [&](const core::Backlink& x) {
                   j["subject"] = expr_to_json(*x.subject);
                   j["label"] = x.label.spelled();
                   j["source"] = x.source;
                 },
                 [&](const core::Shaping& x) {
                   j["subject"] = expr_to_json(*x.subject);
                   j["var"] = x.binder;
                   j["shape"] = shape_to_json(x.shape);
                 },
                 [&](const core::Call& x) {
                   j["function"] = x.function;
                   j["args"] = Json::array();
                   for (const auto& a : x.args) j["args"].push_back(expr_to_json(*a));
                 },
                 [&](const core::IfStrict& x) {
                   j["cond"] = expr_to_json(*x.cond);
                   j["then"] = expr_to_json(*x.then_branch);
                   j["else"] = expr_to_json(*x.else_branch);
                 },
                 [&](const core::With& x) {
                   j["bound"] = expr_to_json(*x.bound);
                   j["var"] = x.var;
                   j["body"] = expr_to_json(*x.body);
                 },
                 [&](const core::For& x) {
                   j["source"] = expr_to_json(*x.source);
                   j["var"] = x.var;
                   j["body"] = expr_to_json(*x.body);
                 },
                 [&](const core::OrderBy& x) {
                   j["subject"] = expr_to_json(*x.subject);
                   j["var"] = x.var;
                   j["key"] = expr_to_json(*x.key);
                 },
                 [&](const core::Insert& x) {
                   j["type"] = x.type;
                   j["shape"] = shape_to_json(x.shape);
                 },
                 [&](const core::Update& x) {
                   j["subject"] = expr_to_json(*x.subject);
                   j["var"] = x.var;
                   j["shape"] = shape_to_json(x.shape);
                 },
             },
             e.node);
  return j;
}

ExprPtr expr_from_json(const Json& j) {
  try {
    const std::string k = j.at("k").get<std::string>();
    auto sub = [&](const char* key) { return expr_from_json(j.at(key)); };
    auto str = [&](const char* key) { return j.at(key).get<std::string>(); };
    auto label = [&] { return Label::parse(str("label")); };
    if (k == "Var") return mk(core::Var{str("name")});
    if (k == "Prim") {
      const Json& v = j.at("value");
      if (v.is_boolean()) return mk(core::Prim{ScalarValue::of_bool(v.get<bool>())});
      if (v.is_number_integer()) return mk(core::Prim{ScalarValue::of_int(v.get<std::int64_t>())});
      if (v.is_string()) return mk(core::Prim{ScalarValue::of_str(v.get<std::string>())});
      bad("literal " + v.dump());
    }
    if (k == "Empty") return mk(core::Empty{type_from(j.at("type"))});
    if (k == "Union") return mk(core::Union{sub("lhs"), sub("rhs")});
    if (k == "Name") return mk(core::Name{str("type")});
    if (k == "Proj") return mk(core::Proj{sub("subject"), label()});
    if (k == "Backlink") return mk(core::Backlink{sub("subject"), label(), str("source")});
    if (k == "Shaping") return mk(core::Shaping{sub("subject"), str("var"), shape_from(j.at("shape"))});
    if (k == "Call") {
      std::vector<ExprPtr> args;
      for (const auto& a : j.at("args")) args.push_back(expr_from_json(a));
      return mk(core::Call{str("function"), std::move(args)});
    }
    if (k == "IfStrict") return mk(core::IfStrict{sub("cond"), sub("then"), sub("else")});
    if (k == "With") return mk(core::With{sub("bound"), str("var"), sub("body")});
    if (k == "For") return mk(core::For{sub("source"), str("var"), sub("body")});
    if (k == "OrderBy") return mk(core::OrderBy{sub("subject"), str("var"), sub("key")});
    if (k == "Insert") return mk(core::Insert{str("type"), shape_from(j.at("shape"))});
    if (k == "Update") return mk(core::Update{sub("subject"), str("var"), shape_from(j.at("shape"))});
    bad("constructor " + k);
  } catch (const Json::exception& e) {
    bad(e.what());
  }
}

Json counterexample_to_json(const CounterExample& ce) {
  Json j = Json::object();
  j["seed"] = ce.seed;
  j["property"] = ce.property;
  j["witness"] = ce.witness;
  j["evalSeeds"] = ce.eval_seeds;
  j["query"] = show(*ce.expr);
  j["expr"] = expr_to_json(*ce.expr);
  j["snapshot"] = Json::parse(save_snapshot(ce.schema, ce.store));
  return j;
}

CounterExample counterexample_from_json(const Json& j) {
  try {
    CounterExample ce;
    ce.seed = j.at("seed").get<std::uint64_t>();
    ce.property = j.at("property").get<std::string>();
    ce.witness = j.value("witness", "");
    ce.eval_seeds = j.at("evalSeeds").get<std::vector<std::uint64_t>>();
    ce.expr = expr_from_json(j.at("expr"));
    LoadResult snap = load_snapshot(j.at("snapshot").dump());
    if (!snap.snapshot) bad("snapshot: " + snap.diagnostics.front().to_string());
    ce.schema = std::move(snap.snapshot->schema);
    ce.store = std::move(snap.snapshot->store);
    return ce;
  } catch (const Json::exception& e) {
    bad(e.what());
  }
}

// Driver ----------------------------------------------------------------------------

std::uint64_t case_seed(std::uint64_t seed, std::size_t index) {
  // splitmix64
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

FuzzReport run_fuzz(const FuzzOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  FuzzReport report;
  report.cases = opts.cases;
  std::mutex mu;
  std::vector<std::pair<std::size_t, CounterExample>> failures;
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    std::array<std::size_t, kCoreConstructorCount> coverage{};
    std::size_t mutating = 0;
    for (std::size_t i = next++; i < opts.cases; i = next++) {
      GenConfig gen = opts.gen;
      gen.seed = case_seed(opts.seed, i);
      Instance inst = gen_instance(gen);
      count_constructors(*inst.expr, coverage);
      if (mutates(*inst.expr)) ++mutating;
      std::vector<std::uint64_t> seeds;
      for (std::size_t s = 0; s < opts.eval_seeds_per_case; ++s) seeds.push_back(case_seed(gen.seed, s));
      if (auto ce = check_soundness(inst, seeds, opts.eval_fn)) {
        ce->seed = gen.seed;
        CounterExample out = opts.shrink ? shrink(*ce, opts.eval_fn) : *ce;
        std::lock_guard<std::mutex> lock(mu);
        failures.emplace_back(i, std::move(out));
      }
    }
    std::lock_guard<std::mutex> lock(mu);
    for (std::size_t k = 0; k < coverage.size(); ++k) report.coverage[k] += coverage[k];
    report.mutating_cases += mutating;
  };

  const unsigned n = std::max(1u, opts.workers);
  std::vector<std::thread> threads;
  for (unsigned t = 1; t < n; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();

  std::sort(failures.begin(), failures.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& f : failures) report.failures.push_back(std::move(f.second));
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace grql
