#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "grql/builtins.hpp"
#include "grql/eval.hpp"
#include "grql/wellformed.hpp"

using namespace grql;

namespace {

ComputedValue iv(std::int64_t v) { return ComputedValue::scalar(ScalarValue::of_int(v)); }
ComputedValue sv(const std::string& v) { return ComputedValue::scalar(ScalarValue::of_str(v)); }
ComputedValue bv(bool v) { return ComputedValue::scalar(ScalarValue::of_bool(v)); }
ComputedValue ref(const std::string& id, ShapeRecord r = {}) { return ComputedValue::ref(id, std::move(r)); }
ShapeEntry vis(const std::string& l, ValueSeq v) { return {Label::parse(l), Visibility::Visible, std::move(v)}; }
ShapeEntry invis(const std::string& l, ValueSeq v) { return {Label::parse(l), Visibility::Invisible, std::move(v)}; }

ValueSeq strs(std::initializer_list<const char*> xs) {
  ValueSeq out;
  for (auto x : xs) out.push_back(sv(x));
  return out;
}

class EvalTest : public ::testing::Test {
 protected:
  Snapshot snap = grql::testing::seed_snapshot();

  EvalOutcome run(const std::string& text, EvalConfig cfg = {}) {
    auto e = compile_query(snap.schema, text);
    return eval(snap.schema, cfg, snap.store, *e);
  }
  ValueSeq values(const std::string& text, EvalConfig cfg = {}) { return run(text, cfg).result; }
};

const char* kTr = "with tr := (Movie filter .title = 'Transistors') select ";
const char* kCn = "with cn := (Person filter .name = 'Christopher Nolens') select ";
const char* kSm = "with sm := (Person filter .name = 'Sillier Murphy') select ";

}  // namespace

TEST_F(EvalTest, UnionWithoutSeedConcatenates) {
  EXPECT_EQ(values("{3, 4, 4, <int64>{}}"), (ValueSeq{iv(3), iv(4), iv(4)}));
}

TEST_F(EvalTest, NameListsEveryTuple) {
  EXPECT_TRUE(seq_perm_eq(values("Movie"), {ref("7"), ref("8"), ref("9")}));
  EvalConfig cfg;
  cfg.permutation_seed = 3;
  EXPECT_TRUE(seq_perm_eq(values("Movie", cfg), {ref("7"), ref("8"), ref("9")}));
}

TEST_F(EvalTest, ProjectionGoldens) {
  EXPECT_TRUE(seq_perm_eq(values("Movie.title"), strs({"Transistors", "Interception", "Open Hammer"})));
  EXPECT_EQ(values(std::string(kTr) + "tr.title"), strs({"Transistors"}));
  EXPECT_TRUE(seq_perm_eq(values(std::string(kTr) + "tr.actors.@character"), strs({"Meg Tech", "Sam Man"})));
  EXPECT_EQ(values(std::string(kTr) + "tr.directors"), (ValueSeq{ref("1")}));
  EXPECT_EQ(values(std::string(kTr) + "tr.directors.name"), strs({"Michael Cove"}));
  EXPECT_TRUE(seq_perm_eq(values(std::string(kTr) + "tr.actors"),
                          {ref("2", {vis("@character", strs({"Meg Tech"}))}),
                           ref("5", {vis("@character", strs({"Sam Man"}))})}));
}

TEST_F(EvalTest, BacklinkGoldens) {
  EXPECT_TRUE(seq_perm_eq(values(std::string(kCn) + "cn.<directors[is Movie]"), {ref("8"), ref("9")}));
  EXPECT_TRUE(seq_perm_eq(values(std::string(kCn) + "cn.<directors[is Movie].title"),
                          strs({"Interception", "Open Hammer"})));
  EXPECT_TRUE(values(std::string(kCn) + "cn.<actors[is Movie]").empty());
  EXPECT_TRUE(seq_perm_eq(values(std::string(kSm) + "sm.<actors[is Movie]"),
                          {ref("8", {invis("@character", strs({"Fissure"}))}),
                           ref("9", {invis("@character", strs({"Doc Boom"}))})}));
  EXPECT_TRUE(seq_perm_eq(values(std::string(kSm) + "sm.<actors[is Movie].title"),
                          strs({"Interception", "Open Hammer"})));
  EXPECT_TRUE(seq_perm_eq(values(std::string(kSm) + "sm.<actors[is Movie].@character"),
                          strs({"Fissure", "Doc Boom"})));
}

TEST_F(EvalTest, DirectorsKeepDuplicatesUnlessDedup) {
  EXPECT_EQ(values("Movie.directors").size(), 3u);
  EvalConfig cfg;
  cfg.dedup_projections = true;
  auto deduped = values("Movie.directors", cfg);
  EXPECT_TRUE(seq_perm_eq(deduped, {ref("1"), ref("11")}));
  // Per-step dedup drops one of Sillier Murphy's two actor refs together
  // with the character it carried.
  EXPECT_EQ(values("Movie.actors.@character").size(), 6u);
  EXPECT_EQ(values("Movie.actors.@character", cfg).size(), 5u);
}

TEST_F(EvalTest, ShapedQuery) {
  auto out = run(grql::testing::kShapedQuery);
  ASSERT_EQ(out.result.size(), 3u);
  const auto& tr = out.result[0].as_ref();
  EXPECT_EQ(tr.id, "7");
  EXPECT_EQ(tr.entry(Label::object("title"))->values, strs({"Transistors"}));
  EXPECT_EQ(tr.entry(Label::object("year"))->values, (ValueSeq{iv(2007)}));
  const auto& dirs = tr.entry(Label::object("directors"))->values;
  ASSERT_EQ(dirs.size(), 1u);
  EXPECT_EQ(dirs[0].as_ref().entry(Label::object("age"))->values, (ValueSeq{iv(60)}));
  const auto& actors = tr.entry(Label::object("actors"))->values;
  ASSERT_EQ(actors.size(), 2u);
  EXPECT_EQ(actors[0].as_ref().entry(Label::object("name"))->values, strs({"Megan Wolf"}));
  EXPECT_EQ(actors[0].as_ref().entry(Label::link_prop("character"))->visibility, Visibility::Visible);
  EXPECT_TRUE(out.store_after == snap.store);
}

TEST_F(EvalTest, CountAndBuiltins) {
  EXPECT_EQ(values("count(Movie)"), (ValueSeq{iv(3)}));
  EXPECT_EQ(values("coalesce(<str>{}, {'a', 'b'})"), strs({"a", "b"}));
  EXPECT_EQ(values("coalesce('x', {'a', 'b'})"), strs({"x"}));
  EXPECT_EQ(values("any(<bool>{})"), (ValueSeq{bv(false)}));
  EXPECT_EQ(values("append('a', 'b')"), strs({"ab"}));
  EXPECT_EQ(values("add(2, 3)"), (ValueSeq{iv(5)}));
  EXPECT_EQ(values("lt(2, 3)"), (ValueSeq{bv(true)}));
  EXPECT_EQ(values("not(true)"), (ValueSeq{bv(false)}));
  EXPECT_EQ(values("for m in Movie union eq(m, m)"), (ValueSeq{bv(true), bv(true), bv(true)}));
}

TEST_F(EvalTest, AddOverflowIsADomainFault) {
  try {
    run("add(9223372036854775807, 1)");
    FAIL() << "expected BuiltinDomain";
  } catch (const EvalFault& e) {
    EXPECT_EQ(e.code(), "BuiltinDomain");
  }
}

TEST_F(EvalTest, FilterAndOrder) {
  EXPECT_EQ(values("(Person filter .age = 38 order by .name).name"), strs({"Elton Book", "Megan Wolf", "Shy Andbuff"}));
  EXPECT_EQ(values("(Movie order by .year).title"), strs({"Transistors", "Interception", "Open Hammer"}));
  EXPECT_EQ(values("(Person order by .born).name").front(), sv("Megan Wolf"));
}

TEST_F(EvalTest, IfSelectsThenOnTrue) {
  EXPECT_EQ(values("if true then 1 else 2"), (ValueSeq{iv(1)}));
  EXPECT_EQ(values("if {true, false} then 1 else 2"), (ValueSeq{iv(1), iv(2)}));
  EXPECT_TRUE(values("if <bool>{} then 1 else 2").empty());
}

TEST_F(EvalTest, NestedInsert) {
  auto out = run(
      "insert Movie { directors := (insert Person { name := 'Paul Shiver', age := 37, born := 'Earth' }), "
      "title := 'Frozen Planet', year := 2011, actors := {} }");
  EXPECT_EQ(out.store_after.size(), snap.store.size() + 2);
  EXPECT_EQ(out.stats.inserts, 2u);
  ASSERT_EQ(out.result.size(), 1u);
  const StoreTuple* movie = out.store_after.find(out.result[0].as_ref().id);
  ASSERT_NE(movie, nullptr);
  EXPECT_EQ(movie->type, "Movie");
  EXPECT_EQ(movie->mark, EditMark::Locked);
  const auto& dirs = *movie->record.get(Label::object("directors"));
  ASSERT_EQ(dirs.size(), 1u);
  const StoreTuple* person = out.store_after.find(std::get<StoredRef>(dirs[0]).id);
  ASSERT_NE(person, nullptr);
  EXPECT_EQ(person->type, "Person");
  EXPECT_EQ(std::get<ScalarValue>(person->record.get(Label::object("name"))->front()).as_str(), "Paul Shiver");
  EXPECT_FALSE(snap.store.contains(person->id));
  EXPECT_FALSE(snap.store.contains(movie->id));
  EXPECT_NE(person->id, movie->id);
  Store unlocked = out.store_after;
  unlocked.unlock_all();
  EXPECT_TRUE(check_store(snap.schema, unlocked).empty());
  EXPECT_TRUE(store_extends(snap.store, out.store_after));
}

TEST_F(EvalTest, DoubleUpdateKeepsTheFirst) {
  auto out = run(
      "with p := (Person filter .name = 'Megan Wolf') select "
      "{(update p set { age := 39 }), (update p set { age := 40 })}");
  ASSERT_EQ(out.result.size(), 1u);
  EXPECT_EQ(out.stats.updates, 1u);
  EXPECT_EQ(out.stats.lock_conflicts, 1u);
  const StoreTuple* p = out.store_after.find("2");
  EXPECT_EQ(std::get<ScalarValue>(p->record.get(Label::object("age"))->front()).as_int(), 39);
  EXPECT_EQ(p->mark, EditMark::Locked);
  auto second = run(
      "with p := (Person filter .name = 'Megan Wolf') select "
      "{(update p set { age := 39 }), (update p set { age := 40 })}.age");
  EXPECT_EQ(second.result, (ValueSeq{iv(39)}));
}

TEST_F(EvalTest, ReadsSeeTheInitialStore) {
  // The update is not visible to a later read in the same query.
  auto out = run("{(update (Person filter .name = 'Megan Wolf') set { age := 1 }).age, "
                 "(Person filter .name = 'Megan Wolf').age}");
  EXPECT_EQ(out.result, (ValueSeq{iv(1), iv(38)}));
}

TEST_F(EvalTest, UpdateOfAbsentTupleIsEmpty) {
  auto e = compile_query(snap.schema, "update (Person filter .name = 'Megan Wolf') set { age := 1 }");
  Store cur = snap.store;
  cur.erase("2");
  auto out = eval(snap.schema, {}, Environment{}, snap.store, cur, *e);
  EXPECT_TRUE(out.result.empty());
  EXPECT_FALSE(out.store_after.contains("2"));
}

TEST_F(EvalTest, InsertedIdsAvoidBothStores) {
  auto e = compile_query(snap.schema, "insert Person { name := 'N', age := 1 }");
  Store cur = snap.store;
  Store init = snap.store;
  init.insert({"12", "Person", EditMark::Unlocked, snap.store.find("1")->record});
  auto out = eval(snap.schema, {}, Environment{}, init, cur, *e);
  const auto& id = out.result.at(0).as_ref().id;
  EXPECT_FALSE(init.contains(id));
  EXPECT_FALSE(cur.contains(id));
}

// Helpers -------------------------------------------------------------------------

TEST_F(EvalTest, Project) {
  const Store& mu = snap.store;
  EXPECT_EQ(project(mu, Label::object("title"), ref("7")), strs({"Transistors"}));
  EXPECT_EQ(project(mu, Label::object("rating"), ref("7", {vis("rating", {iv(4)})})), (ValueSeq{iv(4)}));
  EXPECT_EQ(project(mu, Label::object("rating"), ref("7", {invis("rating", {iv(4)})})), (ValueSeq{iv(4)}));
  // A carried entry wins over the stored record.
  EXPECT_EQ(project(mu, Label::object("title"), ref("7", {invis("title", strs({"x"}))})), strs({"x"}));
}

TEST_F(EvalTest, Seek) {
  const Store& mu = snap.store;
  EXPECT_TRUE(seq_perm_eq(seek(mu, "Movie", Label::object("directors"), "11"), {ref("8"), ref("9")}));
  EXPECT_TRUE(seq_perm_eq(seek(mu, "Movie", Label::object("actors"), "6"),
                          {ref("8", {invis("@character", strs({"Fissure"}))}),
                           ref("9", {invis("@character", strs({"Doc Boom"}))})}));
  EXPECT_TRUE(seek(mu, "Movie", Label::object("actors"), "11").empty());
}

TEST_F(EvalTest, RecordExtend) {
  EXPECT_EQ(record_extend(ref("7", {vis("rating", {iv(4)})}), {}), ref("7", {invis("rating", {iv(4)})}));
  EXPECT_EQ(record_extend(ref("7"), {vis("year", {iv(2007)})}), ref("7", {vis("year", {iv(2007)})}));
  EXPECT_EQ(record_extend(ref("7", {vis("a", {iv(1)}), vis("b", {iv(2)})}), {vis("b", {iv(9)})}),
            ref("7", {vis("b", {iv(9)}), invis("a", {iv(1)})}));
}

TEST_F(EvalTest, StripForStorage) {
  EXPECT_EQ(strip_for_storage({iv(5)}, ScalarType::Int), (StoredSeq{ScalarValue::of_int(5)}));
  StoredRefType actors{"Person", {}};
  actors.link_props.insert(Label::link_prop("character"), {ScalarType::Str, Cardinality::one()});
  auto stripped = strip_for_storage(
      {ref("2", {vis("name", strs({"Megan Wolf"})), vis("@character", strs({"Meg Tech"}))})}, actors);
  StoredRef expected{"2", {}};
  expected.link_props.insert(Label::link_prop("character"), {ScalarValue::of_str("Meg Tech")});
  EXPECT_EQ(stripped, (StoredSeq{expected}));
  EXPECT_TRUE(strip_for_storage({}, actors).empty());
  try {
    strip_for_storage({ref("2")}, actors);
    FAIL() << "expected MissingLinkProp";
  } catch (const EvalFault& e) {
    EXPECT_EQ(e.code(), "MissingLinkProp");
  }
}

TEST_F(EvalTest, RunBuiltin) {
  auto count = resolve_builtin("count", {ComputedType::ref("Movie")});
  EXPECT_EQ(run_builtin("count", count, {{ref("7"), ref("8"), ref("9")}}), (ValueSeq{iv(3)}));
  auto str = ComputedType::scalar(ScalarType::Str);
  auto coalesce = resolve_builtin("coalesce", {str, str});
  EXPECT_EQ(run_builtin("coalesce", coalesce, {{}, strs({"a", "b"})}), strs({"a", "b"}));
  auto any = resolve_builtin("any", {ComputedType::scalar(ScalarType::Bool)});
  EXPECT_EQ(run_builtin("any", any, {{}}), (ValueSeq{bv(false)}));
  // Lengths are checked against the modifiers.
  auto add = resolve_builtin("add", {ComputedType::scalar(ScalarType::Int), ComputedType::scalar(ScalarType::Int)});
  EXPECT_THROW(run_builtin("add", add, {{iv(1), iv(2)}, {iv(3)}}), EvalFault);
}

TEST_F(EvalTest, OrderByKeys) {
  ComputedValue a = sv("a"), b = sv("b"), c = sv("c");
  EXPECT_EQ(order_by_keys({{a, {iv(2)}}, {b, {iv(1)}}, {c, {}}}), (ValueSeq{c, b, a}));
  EXPECT_EQ(order_by_keys({{a, {}}, {b, {}}}), (ValueSeq{a, b}));
  EXPECT_EQ(order_by_keys({{a, strs({"x"})}, {b, strs({"x"})}}), (ValueSeq{a, b}));
  try {
    order_by_keys({{a, {iv(1)}}, {b, strs({"x"})}});
    FAIL() << "expected IncomparableKeys";
  } catch (const EvalFault& e) {
    EXPECT_EQ(e.code(), "IncomparableKeys");
  }
}

TEST_F(EvalTest, EvaluationFaults) {
  auto unbound = mk(core::Var{"nope"});
  try {
    eval(snap.schema, {}, snap.store, *unbound);
    FAIL() << "expected UnboundVar";
  } catch (const EvalFault& e) {
    EXPECT_EQ(e.code(), "UnboundVar");
  }
  auto not_a_ref = mk(core::Proj{mk(core::Prim{ScalarValue::of_int(1)}), Label::object("x")});
  try {
    eval(snap.schema, {}, snap.store, *not_a_ref);
    FAIL() << "expected NotARef";
  } catch (const EvalFault& e) {
    EXPECT_EQ(e.code(), "NotARef");
  }
}

TEST_F(EvalTest, SeededRunsArePermutationsOfEachOther) {
  const std::string q = "for m in Movie union m.actors { name, @character }";
  auto base = values(q);
  for (std::uint64_t s = 1; s <= 20; ++s) {
    EvalConfig cfg;
    cfg.permutation_seed = s;
    EXPECT_TRUE(seq_perm_eq(values(q, cfg), base)) << s;
  }
}
