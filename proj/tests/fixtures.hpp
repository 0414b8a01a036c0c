#pragma once

#include <stdexcept>
#include <string>

#include "grql/session.hpp"
#include "grql/store_io.hpp"
#include "grql/syntax.hpp"

namespace grql::testing {

inline std::string seed_snapshot_path() { return std::string(GRQL_SOURCE_DIR) + "/data/movies.grdb.json"; }

inline Snapshot seed_snapshot() {
  LoadResult r = load_snapshot_file(seed_snapshot_path());
  if (!r.snapshot) throw std::runtime_error("seed snapshot failed to load");
  return *r.snapshot;
}

inline Session seed_session() {
  Snapshot s = seed_snapshot();
  return Session(std::move(s.schema), std::move(s.store));
}

/// Parses and lowers schema text; throws on any diagnostic.
inline Schema schema_from_text(const std::string& text) {
  Diagnostics d;
  Schema s = lower_schema(parse_schema(text), d);
  if (!d.empty()) throw std::runtime_error(d.front().to_string());
  return s;
}

inline bool has_code(const Diagnostics& ds, const std::string& code) {
  for (const auto& d : ds) {
    if (d.code == code) return true;
  }
  return false;
}

inline const char* kPaperSchema =
    "type Person { required name: str; required age: int64; born: str; };\n"
    "type Movie {\n"
    "  required title: str;\n"
    "  required year: int64;\n"
    "  required multi directors: Person;\n"
    "  multi actors: Person { character: str; }; };\n";

inline const char* kShapedQuery =
    "select Movie { title, year, directors: { name, age }, actors: { name, @character }};";

}  // namespace grql::testing
