#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "surface_gen.hpp"
#include "grql/desugar.hpp"
#include "grql/syntax.hpp"

using namespace grql;

TEST(ParseSchema, PaperSchema) {
  auto decls = parse_schema(grql::testing::kPaperSchema);
  ASSERT_EQ(decls.size(), 2u);
  EXPECT_EQ(decls[0].name, "Person");
  EXPECT_EQ(decls[0].fields.size(), 3u);
  ASSERT_EQ(decls[1].fields.size(), 4u);
  const auto& actors = decls[1].fields[3];
  EXPECT_EQ(actors.label, "actors");
  EXPECT_TRUE(actors.multi);
  EXPECT_FALSE(actors.required);
  ASSERT_EQ(actors.link_props.size(), 1u);
  EXPECT_EQ(actors.link_props[0].label, "character");

  Diagnostics d;
  Schema s = lower_schema(decls, d);
  EXPECT_TRUE(d.empty());
  const auto& link = std::get<StoredRefType>(s.get("Movie")->get(Label::object("actors"))->type);
  EXPECT_EQ(link.link_props.get(Label::link_prop("character"))->card, Cardinality::optional());
  EXPECT_EQ(s.get("Movie")->get(Label::object("directors"))->card, Cardinality::at_least_one());
  EXPECT_EQ(s.get("Person")->get(Label::object("born"))->card, Cardinality::optional());
  EXPECT_EQ(s.get("Person")->get(Label::object("name"))->card, Cardinality::one());
}

TEST(ParseSchema, EmptyBody) {
  auto decls = parse_schema("type T { }");
  ASSERT_EQ(decls.size(), 1u);
  EXPECT_TRUE(decls[0].fields.empty());
}

TEST(ParseSchema, MissingTypeIsAnError) {
  const std::string text = "type T { x: }";
  try {
    parse_schema(text);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.span().begin, text.find('}'));
  }
}

TEST(ParseSchema, FormatRoundTrip) {
  Schema s = grql::testing::schema_from_text(grql::testing::kPaperSchema);
  EXPECT_EQ(grql::testing::schema_from_text(format_schema(s)), s);
}

TEST(ParseQuery, SelectShape) {
  auto e = parse_query("select Movie { title, year }");
  ASSERT_EQ(e->kind, SurfaceKind::Select);
  const auto& shape = *e->children[0];
  ASSERT_EQ(shape.kind, SurfaceKind::Shape);
  EXPECT_EQ(shape.children[0]->kind, SurfaceKind::TypeRef);
  EXPECT_EQ(shape.children[0]->name, "Movie");
  ASSERT_EQ(shape.items.size(), 2u);
  EXPECT_EQ(shape.items[0].label, Label::object("title"));
  EXPECT_EQ(shape.items[0].form, ShapeItem::Form::Shorthand);
  EXPECT_EQ(shape.items[1].label, Label::object("year"));
}

TEST(ParseQuery, SetLiteral) {
  auto e = parse_query("{2,3,4}");
  ASSERT_EQ(e->kind, SurfaceKind::SetLit);
  ASSERT_EQ(e->children.size(), 3u);
  EXPECT_EQ(e->children[2]->scalar->as_int(), 4);
}

TEST(ParseQuery, NestedBracesFlattenAfterDesugar) {
  auto flat = desugar(*parse_query("{2,3,4}"));
  auto nested = desugar(*parse_query("{{{2}, {3, {4}}}}"));
  EXPECT_TRUE(expr_equal(*flat, *nested)) << show(flat) << " vs " << show(nested);
  EXPECT_TRUE(expr_equal(*desugar(*parse_query("{{1},{2}}")), *desugar(*parse_query("{1,2}"))));
}

TEST(ParseQuery, KeywordsAreCaseInsensitive) {
  EXPECT_TRUE(surface_equal(*parse_query("SELECT Movie FILTER .year = 1"), *parse_query("select Movie filter .year = 1")));
}

TEST(ParseQuery, CommentsAndTrailingSemicolon) {
  EXPECT_TRUE(surface_equal(*parse_query("# a comment\n{1, 2}; "), *parse_query("{1,2}")));
}

TEST(ParseQuery, TrailingInputRejected) { EXPECT_THROW(parse_query("1 2"), ParseError); }

TEST(FormatExpr, Examples) {
  EXPECT_EQ(format_expr(parse_query("{2,3,4}")), "{2, 3, 4}");
  EXPECT_EQ(format_expr(parse_query("Movie.title")), "Movie.title");
  EXPECT_EQ(format_expr(parse_query("x.<directors[is Movie]")), "x.<directors[is Movie]");
  EXPECT_EQ(format_expr(parse_query("\"a\\\"b\"")), "\"a\\\"b\"");
}

TEST(SyntaxProperties, FormatThenParseIsIdentity) {
  grql::testing::TextGen gen(11);
  std::size_t parsed = 0;
  for (int i = 0; i < 3000; ++i) {
    const std::string text = gen.expr(4);
    SurfacePtr e;
    try {
      e = parse_query(text);
    } catch (const ParseError&) {
      continue;
    }
    ++parsed;
    const std::string printed = format_expr(e);
    SurfacePtr again;
    ASSERT_NO_THROW(again = parse_query(printed)) << text << "\n=> " << printed;
    EXPECT_TRUE(surface_equal(*e, *again)) << text << "\n=> " << printed;
    EXPECT_EQ(format_expr(again), printed);
  }
  EXPECT_GT(parsed, 1500u);
}

TEST(SyntaxProperties, ParseErrorSpansStayInsideInput) {
  grql::testing::TextGen gen(12);
  std::mt19937_64 rng(13);
  static const char* junk[] = {"(", ")", "{", "}", ":=", ".<", "[", "]", ",", "@", "\"", "select", "union", "<", ">", "%"};
  std::size_t errors = 0;
  for (int i = 0; i < 3000; ++i) {
    std::string text = gen.expr(3);
    if (rng() % 2) {
      text = text.substr(0, rng() % (text.size() + 1));
    } else {
      text.insert(rng() % (text.size() + 1), junk[rng() % 16]);
    }
    try {
      parse_query(text);
    } catch (const ParseError& e) {
      ++errors;
      EXPECT_LE(e.span().begin, e.span().end);
      EXPECT_LE(e.span().end, text.size()) << text;
    }
  }
  EXPECT_GT(errors, 500u);
}

TEST(SyntaxProperties, SchemaParseErrorSpansStayInsideInput) {
  const std::string base = grql::testing::kPaperSchema;
  for (std::size_t cut = 0; cut < base.size(); ++cut) {
    const std::string text = base.substr(0, cut);
    try {
      parse_schema(text);
    } catch (const ParseError& e) {
      EXPECT_LE(e.span().end, text.size());
    }
  }
}
