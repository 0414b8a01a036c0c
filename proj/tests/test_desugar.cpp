#include <gtest/gtest.h>

#include <set>

#include "fixtures.hpp"
#include "grql/desugar.hpp"
#include "grql/errors.hpp"
#include "surface_gen.hpp"

using namespace grql;

namespace {

ExprPtr var(const std::string& n) { return mk(core::Var{n}); }
ExprPtr lit(std::int64_t v) { return mk(core::Prim{ScalarValue::of_int(v)}); }
ExprPtr slit(const std::string& v) { return mk(core::Prim{ScalarValue::of_str(v)}); }
ExprPtr name(const std::string& n) { return mk(core::Name{n}); }
ExprPtr proj(ExprPtr e, const std::string& l) { return mk(core::Proj{std::move(e), Label::object(l)}); }
ExprPtr for_(ExprPtr src, const std::string& x, ExprPtr body) { return mk(core::For{std::move(src), x, std::move(body)}); }
ExprPtr with_(ExprPtr b, const std::string& x, ExprPtr body) { return mk(core::With{std::move(b), x, std::move(body)}); }
ExprPtr call(const std::string& f, std::vector<ExprPtr> args) { return mk(core::Call{f, std::move(args)}); }
ExprPtr if_(ExprPtr c, ExprPtr t, ExprPtr e) { return mk(core::IfStrict{std::move(c), std::move(t), std::move(e)}); }

ExprPtr ds(const std::string& text, const Schema* schema = nullptr) { return desugar(*parse_query(text), schema); }

std::string desugar_code(const std::string& text) {
  try {
    ds(text);
  } catch (const DesugarError& e) {
    return e.code();
  }
  return "";
}

void collect_binders(const Expr& e, std::vector<VarName>& out);

void collect_shape(const core::Shape& s, std::vector<VarName>& out) {
  for (const auto& el : s) collect_binders(*el.expr, out);
}

void collect_binders(const Expr& e, std::vector<VarName>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, core::Union>) {
          collect_binders(*n.lhs, out);
          collect_binders(*n.rhs, out);
        } else if constexpr (std::is_same_v<T, core::Proj> || std::is_same_v<T, core::Backlink>) {
          collect_binders(*n.subject, out);
        } else if constexpr (std::is_same_v<T, core::Shaping>) {
          out.push_back(n.binder);
          collect_binders(*n.subject, out);
          collect_shape(n.shape, out);
        } else if constexpr (std::is_same_v<T, core::Call>) {
          for (const auto& a : n.args) collect_binders(*a, out);
        } else if constexpr (std::is_same_v<T, core::IfStrict>) {
          collect_binders(*n.cond, out);
          collect_binders(*n.then_branch, out);
          collect_binders(*n.else_branch, out);
        } else if constexpr (std::is_same_v<T, core::With>) {
          out.push_back(n.var);
          collect_binders(*n.bound, out);
          collect_binders(*n.body, out);
        } else if constexpr (std::is_same_v<T, core::For>) {
          out.push_back(n.var);
          collect_binders(*n.source, out);
          collect_binders(*n.body, out);
        } else if constexpr (std::is_same_v<T, core::OrderBy>) {
          out.push_back(n.var);
          collect_binders(*n.subject, out);
          collect_binders(*n.key, out);
        } else if constexpr (std::is_same_v<T, core::Insert>) {
          collect_shape(n.shape, out);
        } else if constexpr (std::is_same_v<T, core::Update>) {
          out.push_back(n.var);
          collect_binders(*n.subject, out);
          collect_shape(n.shape, out);
        }
      },
      e.node);
}

// Strict forms only take variables where the lifting put them.
bool strict_positions_are_vars(const Expr& e) {
  bool ok = true;
  std::function<void(const Expr&)> walk = [&](const Expr& x) {
    if (const auto* c = x.as<core::Call>()) {
      for (const auto& a : c->args) ok = ok && a->as<core::Var>() != nullptr;
    }
    if (const auto* i = x.as<core::IfStrict>()) ok = ok && i->cond->as<core::Var>() != nullptr;
    if (const auto* u = x.as<core::Update>()) ok = ok && u->subject->as<core::Var>() != nullptr;
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, core::Union>) {
            walk(*n.lhs);
            walk(*n.rhs);
          } else if constexpr (std::is_same_v<T, core::Proj> || std::is_same_v<T, core::Backlink>) {
            walk(*n.subject);
          } else if constexpr (std::is_same_v<T, core::Shaping>) {
            walk(*n.subject);
            for (const auto& el : n.shape) walk(*el.expr);
          } else if constexpr (std::is_same_v<T, core::Call>) {
            for (const auto& a : n.args) walk(*a);
          } else if constexpr (std::is_same_v<T, core::IfStrict>) {
            walk(*n.cond);
            walk(*n.then_branch);
            walk(*n.else_branch);
          } else if constexpr (std::is_same_v<T, core::With>) {
            walk(*n.bound);
            walk(*n.body);
          } else if constexpr (std::is_same_v<T, core::For>) {
            walk(*n.source);
            walk(*n.body);
          } else if constexpr (std::is_same_v<T, core::OrderBy>) {
            walk(*n.subject);
            walk(*n.key);
          } else if constexpr (std::is_same_v<T, core::Insert>) {
            for (const auto& el : n.shape) walk(*el.expr);
          } else if constexpr (std::is_same_v<T, core::Update>) {
            walk(*n.subject);
            for (const auto& el : n.shape) walk(*el.expr);
          }
        },
        x.node);
  };
  walk(e);
  return ok;
}

}  // namespace

TEST(Desugar, SelectShorthand) {
  auto expected = mk(core::Shaping{name("Movie"), "$1", {{Label::object("title"), proj(var("$1"), "title")}}});
  auto got = ds("select Movie { title }");
  EXPECT_TRUE(expr_equal(*got, *expected)) << show(got);
}

TEST(Desugar, FilterExpansion) {
  // filter(Person; x. .age = 38)
  //   = for(Person; x. if(any(eq(x.age, 38)); x; empty))
  // with eq lifted over both arguments, any taking its argument whole, and
  // if lifted over its condition.
  auto eq = for_(proj(var("$1"), "age"), "$2", for_(lit(38), "$3", call("eq", {var("$2"), var("$3")})));
  auto any = with_(eq, "$4", call("any", {var("$4")}));
  auto empty = for_(mk(core::Empty{ComputedType::scalar(ScalarType::Bool)}), "$5", var("$1"));
  auto cond = for_(any, "$6", if_(var("$6"), var("$1"), empty));
  auto expected = for_(name("Person"), "$1", cond);
  auto got = ds("Person filter .age = 38");
  EXPECT_TRUE(expr_equal(*got, *expected)) << show(got) << "\n" << show(expected);
}

TEST(Desugar, CallBroadcastsOverSingletonParameters) {
  auto expected = for_(mk(core::Union{slit("a"), slit("b")}), "$1",
                       for_(slit("c"), "$2", call("append", {var("$1"), var("$2")})));
  auto got = ds("append({'a', 'b'}, 'c')");
  EXPECT_TRUE(expr_equal(*got, *expected)) << show(got);
}

TEST(Desugar, ManyParameterUsesWith) {
  auto expected = with_(name("Movie"), "$1", call("count", {var("$1")}));
  EXPECT_TRUE(expr_equal(*ds("count(Movie)"), *expected));
}

TEST(Desugar, IfSelectsThenOnTrue) {
  auto expected = for_(mk(core::Prim{ScalarValue::of_bool(true)}), "$1", if_(var("$1"), lit(1), lit(2)));
  EXPECT_TRUE(expr_equal(*ds("if true then 1 else 2"), *expected));
}

TEST(Desugar, UpdateIsLifted) {
  auto got = ds("update Person set { age := 2 }");
  const auto* f = got->as<core::For>();
  ASSERT_NE(f, nullptr);
  EXPECT_NE(f->source->as<core::Name>(), nullptr);
  const auto* u = f->body->as<core::Update>();
  ASSERT_NE(u, nullptr);
  EXPECT_EQ(u->subject->as<core::Var>()->name, f->var);
  ASSERT_EQ(u->shape.size(), 1u);
  EXPECT_EQ(u->shape[0].label, Label::object("age"));
}

TEST(Desugar, InsertCompletesOmittedLabels) {
  auto snap = grql::testing::seed_snapshot();
  auto got = ds("insert Person { name := \"P\", age := 37 }", &snap.schema);
  const auto* ins = got->as<core::Insert>();
  ASSERT_NE(ins, nullptr);
  ASSERT_EQ(ins->shape.size(), 3u);
  EXPECT_EQ(ins->shape[2].label, Label::object("born"));
  const auto* empty = ins->shape[2].expr->as<core::Empty>();
  ASSERT_NE(empty, nullptr);
  EXPECT_EQ(empty->type, ComputedType::scalar(ScalarType::Str));
}

TEST(Desugar, BareEmptyInInsertIsTypedFromSchema) {
  auto snap = grql::testing::seed_snapshot();
  auto got = ds("insert Movie { title := \"F\", year := 1, directors := <Person>{}, actors := {} }", &snap.schema);
  const auto* ins = got->as<core::Insert>();
  ASSERT_NE(ins, nullptr);
  const auto* empty = ins->shape[3].expr->as<core::Empty>();
  ASSERT_NE(empty, nullptr);
  EXPECT_EQ(empty->type, ComputedType::ref("Person"));
}

TEST(Desugar, Errors) {
  EXPECT_EQ(desugar_code("foo(1)"), "UnknownFunction");
  EXPECT_EQ(desugar_code("count(1, 2)"), "ArityMismatch");
  EXPECT_EQ(desugar_code("{}"), "UntypedEmptySet");
  EXPECT_EQ(desugar_code("Movie { title, title }"), "DuplicateLabel");
}

TEST(Desugar, ImplicitSubjectFollowsInnermostShape) {
  auto got = ds("Movie { d := .directors { n := .name } }");
  const auto* outer = got->as<core::Shaping>();
  ASSERT_NE(outer, nullptr);
  const auto* inner = outer->shape[0].expr->as<core::Shaping>();
  ASSERT_NE(inner, nullptr);
  EXPECT_EQ(inner->subject->as<core::Proj>()->subject->as<core::Var>()->name, outer->binder);
  EXPECT_EQ(inner->shape[0].expr->as<core::Proj>()->subject->as<core::Var>()->name, inner->binder);
}

TEST(DesugarProperties, TotalWithDistinctBindersAndLiftedStrictForms) {
  grql::testing::TextGen gen(21);
  std::size_t lowered = 0;
  for (int i = 0; i < 3000; ++i) {
    const std::string text = gen.expr(4);
    SurfacePtr s;
    try {
      s = parse_query(text);
    } catch (const ParseError&) {
      continue;
    }
    ExprPtr e;
    try {
      e = desugar(*s);
    } catch (const DesugarError&) {
      continue;
    } catch (const std::exception& ex) {
      ADD_FAILURE() << "desugar threw a non-desugar error on " << text << ": " << ex.what();
      continue;
    }
    ++lowered;
    std::vector<VarName> binders;
    collect_binders(*e, binders);
    std::set<VarName> unique(binders.begin(), binders.end());
    EXPECT_EQ(unique.size(), binders.size()) << text << "\n" << show(e);
    EXPECT_TRUE(strict_positions_are_vars(*e)) << text << "\n" << show(e);
    EXPECT_TRUE(expr_equal(*e, *desugar(*s))) << "desugar is not deterministic on " << text;
  }
  EXPECT_GT(lowered, 500u);
}

TEST(DesugarProperties, CoreFormsPassThrough) {
  // Surface forms that are already core constructs come out unchanged apart
  // from binder names.
  const std::vector<std::pair<std::string, ExprPtr>> cases = {
      {"with x := 1 select x", with_(lit(1), "$1", var("$1"))},
      {"for x in Movie union x.title", for_(name("Movie"), "$1", proj(var("$1"), "title"))},
      {"Movie.title union Person.name",
       mk(core::Union{proj(name("Movie"), "title"), proj(name("Person"), "name")})},
      {"with x := Person select x.<directors[is Movie]",
       with_(name("Person"), "$1", mk(core::Backlink{var("$1"), Label::object("directors"), "Movie"}))},
      {"<int64>{}", mk(core::Empty{ComputedType::scalar(ScalarType::Int)})},
  };
  for (const auto& [text, expected] : cases) {
    auto got = ds(text);
    EXPECT_TRUE(expr_equal(*got, *expected)) << text << " => " << show(got);
  }
}

TEST(DesugarProperties, FreshenRenamesEveryBinder) {
  grql::testing::TextGen gen(22);
  for (int i = 0; i < 500; ++i) {
    ExprPtr e;
    try {
      e = desugar(*parse_query(gen.expr(3)));
    } catch (const std::exception&) {
      continue;
    }
    FreshNames fresh;
    for (int k = 0; k < 1000; ++k) fresh.next();
    auto renamed = freshen(e, fresh);
    std::vector<VarName> before, after;
    collect_binders(*e, before);
    collect_binders(*renamed, after);
    ASSERT_EQ(before.size(), after.size());
    for (const auto& b : after) EXPECT_EQ(std::count(before.begin(), before.end(), b), 0) << b;
    EXPECT_EQ(expr_size(*e), expr_size(*renamed));
  }
}
