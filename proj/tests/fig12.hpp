#pragma once

// The nine rows of the type-directed serialization table: value, type,
// mode and the expected compact JSON.

#include <string>
#include <vector>

#include "grql/model.hpp"

namespace grql::testing {

struct SerializationRow {
  ValueSeq values;
  ComputedType type;
  Cardinality card;
  std::string json;
};

inline std::vector<SerializationRow> fig12_rows() {
  const auto str = ComputedType::scalar(ScalarType::Str);
  const auto i = ComputedType::scalar(ScalarType::Int);
  auto s = [](const char* v) { return ComputedValue::scalar(ScalarValue::of_str(v)); };
  auto n = [](std::int64_t v) { return ComputedValue::scalar(ScalarValue::of_int(v)); };
  return {
      {{}, str, Cardinality::optional(), "null"},
      {{}, str, Cardinality::many(), "[]"},
      {{s("Hi")}, str, Cardinality::optional(), "\"Hi\""},
      {{s("Hi")}, str, Cardinality::one(), "\"Hi\""},
      {{s("Hi")}, str, Cardinality::many(), "[\"Hi\"]"},
      {{s("Hi"), s("you")}, str, Cardinality::at_least_one(), "[\"Hi\",\"you\"]"},
      {{ComputedValue::ref("7"), ComputedValue::ref("8")}, ComputedType::ref("N"), Cardinality::many(),
       "[{\"id\":\"7\"},{\"id\":\"8\"}]"},
      // Printed with the mode "[1,0]"; read as [0,1].
      {{ComputedValue::ref("7", {{Label::object("foo"), Visibility::Visible, {n(4)}}})},
       ComputedType::ref("N", {{Label::object("foo"), i, Cardinality::one()}}), Cardinality::optional(),
       "{\"foo\":4}"},
      {{ComputedValue::ref("7", {{Label::object("a"), Visibility::Invisible, {n(4)}},
                                 {Label::object("b"), Visibility::Visible, {}}})},
       ComputedType::ref("N", {{Label::object("a"), i, Cardinality::one()},
                               {Label::object("b"), i, Cardinality::optional()}}),
       Cardinality::one(), "{\"b\":null}"},
  };
}

}  // namespace grql::testing
