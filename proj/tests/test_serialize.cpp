#include <gtest/gtest.h>

#include "fig12.hpp"
#include "fixtures.hpp"
#include "grql/serialize.hpp"

using namespace grql;

namespace {

ComputedValue iv(std::int64_t v) { return ComputedValue::scalar(ScalarValue::of_int(v)); }
ComputedValue sv(const std::string& v) { return ComputedValue::scalar(ScalarValue::of_str(v)); }

std::string compact(const ValueSeq& v, const ComputedType& t, Cardinality m) { return to_json_text(serialize(v, t, m)); }

// Reads back a scalar sequence serialized at the given mode.
ValueSeq parse_scalars(const Json& j, ScalarType t, Cardinality m) {
  ValueSeq out;
  auto one = [&](const Json& x) {
    switch (t) {
      case ScalarType::Int: out.push_back(iv(x.get<std::int64_t>())); break;
      case ScalarType::Str: out.push_back(sv(x.get<std::string>())); break;
      case ScalarType::Bool: out.push_back(ComputedValue::scalar(ScalarValue::of_bool(x.get<bool>()))); break;
    }
  };
  if (m.hi() == Bound::Many) {
    for (const auto& x : j) one(x);
  } else if (!j.is_null()) {
    one(j);
  }
  return out;
}

}  // namespace

TEST(Serialize, Fig12Rows) {
  int row = 0;
  for (const auto& r : grql::testing::fig12_rows()) {
    ++row;
    EXPECT_EQ(compact(r.values, r.type, r.card), r.json) << "row " << row;
  }
}

TEST(Serialize, NestedObjectsFollowEntryTypes) {
  auto inner = ComputedType::ref("P", {{Label::object("name"), ComputedType::scalar(ScalarType::Str), Cardinality::one()},
                                       {Label::link_prop("character"), ComputedType::scalar(ScalarType::Str),
                                        Cardinality::optional()}});
  auto outer = ComputedType::ref("M", {{Label::object("actors"), inner, Cardinality::many()}});
  ValueSeq actors{ComputedValue::ref("2", {{Label::object("name"), Visibility::Visible, {sv("Megan Wolf")}},
                                           {Label::link_prop("character"), Visibility::Visible, {sv("Meg Tech")}}})};
  ValueSeq v{ComputedValue::ref("7", {{Label::object("actors"), Visibility::Visible, actors}})};
  EXPECT_EQ(compact(v, outer, Cardinality::one()),
            R"({"actors":[{"name":"Megan Wolf","@character":"Meg Tech"}]})");
}

TEST(Serialize, AllInvisibleGivesId) {
  auto t = ComputedType::ref("N", {{Label::object("a"), ComputedType::scalar(ScalarType::Int), Cardinality::one()}});
  ValueSeq v{ComputedValue::ref("7", {{Label::object("a"), Visibility::Invisible, {iv(1)}}})};
  EXPECT_EQ(compact(v, t, Cardinality::one()), R"({"id":"7"})");
}

TEST(Serialize, Mismatch) {
  auto str = ComputedType::scalar(ScalarType::Str);
  EXPECT_THROW(serialize({sv("a"), sv("b")}, str, Cardinality::one()), SerializeMismatch);
  EXPECT_THROW(serialize({iv(1)}, str, Cardinality::one()), SerializeMismatch);
}

TEST(Serialize, ScalarRoundTrip) {
  const std::vector<std::pair<ScalarType, ValueSeq>> cases = {
      {ScalarType::Int, {iv(0), iv(-5), iv(9223372036854775807)}},
      {ScalarType::Str, {sv(""), sv("q\"uote\n"), sv("\xce\xbb")}},
      {ScalarType::Bool, {ComputedValue::scalar(ScalarValue::of_bool(true))}},
  };
  for (const auto& [t, all] : cases) {
    for (auto m : kAllCardinalities) {
      for (std::size_t n = 0; n <= all.size(); ++n) {
        if (!m.admits(n)) continue;
        ValueSeq vals(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n));
        Json j = serialize(vals, ComputedType::scalar(t), m);
        Json reparsed = Json::parse(to_json_text(j));
        EXPECT_EQ(parse_scalars(reparsed, t, m), vals);
      }
    }
  }
}

TEST(Serialize, PrettyText) {
  Json short_array = Json::array({2, 3, 4});
  EXPECT_EQ(to_json_text(short_array, true), "[2, 3, 4]");
  EXPECT_EQ(to_json_text(short_array), "[2,3,4]");
  Json obj = Json::object();
  obj["title"] = std::string(80, 'x');
  obj["year"] = 2007;
  EXPECT_EQ(to_json_text(obj, true), "{\n  \"title\": \"" + std::string(80, 'x') + "\",\n  \"year\": 2007\n}");
}

TEST(DebugPrint, Notation) {
  EXPECT_EQ(debug_print(ValueSeq{iv(3), iv(4)}), "[3, 4]");
  EXPECT_EQ(debug_print(ValueSeq{ComputedValue::ref("7", {{Label::object("rating"), Visibility::Visible, {iv(4)}}})}),
            "[7⟨rating ≔ [4]⟩]");
  EXPECT_EQ(debug_print(ValueSeq{ComputedValue::ref("7", {{Label::object("rating"), Visibility::Invisible, {iv(4)}}})}),
            "[7⟨rating ≔ᵢ [4]⟩]");
  EXPECT_EQ(debug_print(ValueSeq{sv("a")}), "[\"a\"]");
}

TEST(Serialize, ShapedQueryJson) {
  auto session = grql::testing::seed_session();
  auto out = session.run(grql::testing::kShapedQuery);
  // Michael Cove is 60 in the seed data; one listing of the example gives 53.
  EXPECT_EQ(to_json_text(out.json[0]),
            R"({"title":"Transistors","year":2007,"directors":[{"name":"Michael Cove","age":60}],)"
            R"("actors":[{"name":"Megan Wolf","@character":"Meg Tech"},{"name":"Shy Andbuff","@character":"Sam Man"}]})");
}
