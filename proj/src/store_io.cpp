#include "grql/store_io.hpp"

#include <fstream>
#include <sstream>

#include "grql/serialize.hpp"
#include "grql/syntax.hpp"

namespace grql {

namespace {

struct LoadFailure {
  Diagnostic diag;
};

[[noreturn]] void fail(const char* code, std::string path, std::string message) {
  throw LoadFailure{{code, std::move(path), std::move(message)}};
}

ScalarValue scalar_cell(const Json& j, const std::string& path) {
  if (j.is_boolean()) return ScalarValue::of_bool(j.get<bool>());
  if (j.is_number_integer()) return ScalarValue::of_int(j.get<std::int64_t>());
  if (j.is_string()) return ScalarValue::of_str(j.get<std::string>());
  fail(diag::kBadFormat, path, "expected a string, integer or boolean, found " + j.dump());
}

StoredValue cell(const Json& j, const FieldDecl* field, const std::string& path) {
  if (!j.is_object()) return scalar_cell(j, path);
  if (!j.contains("ref") || !j["ref"].is_string()) fail(diag::kBadFormat, path, "reference cell needs a string \"ref\"");
  StoredRef r{j["ref"].get<std::string>(), {}};
  if (j.contains("props")) {
    if (!j["props"].is_object()) fail(diag::kBadFormat, path, "\"props\" must be an object");
    for (const auto& [key, vals] : j["props"].items()) {
      if (!vals.is_array()) fail(diag::kBadFormat, path + "." + key, "link property value must be an array");
      ScalarSeq seq;
      for (std::size_t i = 0; i < vals.size(); ++i) {
        seq.push_back(scalar_cell(vals[i], path + "." + key + "[" + std::to_string(i) + "]"));
      }
      if (!r.link_props.insert(Label::parse(key), std::move(seq))) {
        fail(diag::kBadFormat, path + "." + key, "repeated link property");
      }
    }
  }
  for (const auto& key : j.items()) {
    if (key.key() != "ref" && key.key() != "props") fail(diag::kBadFormat, path, "unexpected key '" + key.key() + "'");
  }
  // Declared link properties that are absent default to the empty sequence.
  if (field != nullptr) {
    if (const auto* rt = std::get_if<StoredRefType>(&field->type)) {
      OrderedMap<Label, ScalarSeq> ordered;
      for (const auto& [lp, decl] : rt->link_props) {
        const ScalarSeq* given = r.link_props.get(lp);
        ordered.insert(lp, given ? *given : ScalarSeq{});
      }
      for (const auto& [lp, seq] : r.link_props) {
        if (!ordered.contains(lp)) ordered.insert(lp, seq);
      }
      r.link_props = std::move(ordered);
    }
  }
  return r;
}

std::optional<std::uint64_t> numeric_id(const EntityId& id) {
  if (id.empty() || id.size() > 19) return std::nullopt;
  for (char c : id) {
    if (c < '0' || c > '9') return std::nullopt;
  }
  return std::stoull(id);
}

Snapshot parse(const std::string& text, Diagnostics& diags) {
  Json doc = Json::parse(text, nullptr, false);
  if (doc.is_discarded()) fail(diag::kBadFormat, "$", "not valid JSON");
  if (!doc.is_object()) fail(diag::kBadFormat, "$", "top level must be an object");
  if (!doc.contains("v")) fail(diag::kBadFormat, "$.v", "missing format version");
  if (!doc["v"].is_number_integer() || doc["v"].get<std::int64_t>() != kSnapshotVersion) {
    fail(diag::kUnsupportedVersion, "$.v", "unsupported format version " + doc["v"].dump());
  }
  if (!doc.contains("schema") || !doc["schema"].is_string()) fail(diag::kBadFormat, "$.schema", "missing schema text");
  if (!doc.contains("entities") || !doc["entities"].is_array()) {
    fail(diag::kBadFormat, "$.entities", "missing entities array");
  }

  Snapshot snap;
  try {
    snap.schema = lower_schema(parse_schema(doc["schema"].get<std::string>()), diags);
  } catch (const ParseError& e) {
    fail(diag::kParseError, "$.schema", e.what());
  }
  Diagnostics schema_diags = check_schema(snap.schema);
  diags.insert(diags.end(), schema_diags.begin(), schema_diags.end());
  if (!diags.empty()) return snap;

  std::uint64_t max_id = 0;
  const Json& entities = doc["entities"];
  for (std::size_t i = 0; i < entities.size(); ++i) {
    const Json& ent = entities[i];
    const std::string path = "$.entities[" + std::to_string(i) + "]";
    if (!ent.is_object() || !ent.contains("id") || !ent["id"].is_string() || !ent.contains("type") ||
        !ent["type"].is_string()) {
      fail(diag::kBadFormat, path, "entity needs string \"id\" and \"type\"");
    }
    StoreTuple t;
    t.id = ent["id"].get<std::string>();
    t.type = ent["type"].get<std::string>();
    if (snap.store.contains(t.id)) {
      diags.push_back({diag::kDuplicateId, path, "id " + t.id + " appears more than once"});
      continue;
    }
    const ObjectTypeDecl* decl = snap.schema.get(t.type);
    if (ent.contains("fields")) {
      if (!ent["fields"].is_object()) fail(diag::kBadFormat, path + ".fields", "fields must be an object");
      // Declared labels first, in declaration order; unknown ones after for check_store to report.
      std::vector<std::pair<Label, const Json*>> given;
      for (const auto& [key, vals] : ent["fields"].items()) given.emplace_back(Label::parse(key), &vals);
      auto take = [&](const Label& label, const FieldDecl* field) {
        for (auto& [l, vals] : given) {
          if (!(l == label) || vals == nullptr) continue;
          const std::string fpath = t.type + "#" + t.id + "." + label.spelled();
          if (!vals->is_array()) fail(diag::kBadFormat, fpath, "field value must be an array");
          StoredSeq seq;
          for (std::size_t k = 0; k < vals->size(); ++k) {
            seq.push_back(cell((*vals)[k], field, fpath + "[" + std::to_string(k) + "]"));
          }
          t.record.insert(label, std::move(seq));
          vals = nullptr;
        }
      };
      if (decl != nullptr) {
        for (const auto& [label, field] : *decl) take(label, &field);
      }
      for (auto& g : given) {
        if (g.second != nullptr) take(Label(g.first), nullptr);
      }
    }
    if (auto n = numeric_id(t.id)) max_id = std::max(max_id, *n);
    snap.store.insert(std::move(t));
  }

  std::uint64_t next = max_id + 1;
  if (doc.contains("nextId")) {
    if (!doc["nextId"].is_number_unsigned()) fail(diag::kBadFormat, "$.nextId", "nextId must be a positive integer");
    next = doc["nextId"].get<std::uint64_t>();
    if (next <= max_id) fail(diag::kBadFormat, "$.nextId", "nextId must exceed every numeric id");
  }
  snap.store.set_next_id(next);

  Diagnostics store_diags = check_store(snap.schema, snap.store);
  diags.insert(diags.end(), store_diags.begin(), store_diags.end());
  return snap;
}

Json cell_json(const StoredValue& v) {
  if (const auto* s = std::get_if<ScalarValue>(&v)) {
    if (s->is_int()) return s->as_int();
    if (s->is_bool()) return s->as_bool();
    return s->as_str();
  }
  const auto& r = std::get<StoredRef>(v);
  Json j = Json::object();
  j["ref"] = r.id;
  if (!r.link_props.empty()) {
    Json props = Json::object();
    for (const auto& [lp, seq] : r.link_props) {
      Json arr = Json::array();
      for (const ScalarValue& s : seq) arr.push_back(cell_json(s));
      props[lp.spelled()] = std::move(arr);
    }
    j["props"] = std::move(props);
  }
  return j;
}

}  // namespace

LoadResult load_snapshot(const std::string& text) {
  LoadResult out;
  try {
    Snapshot snap = parse(text, out.diagnostics);
    if (out.diagnostics.empty()) {
      snap.store.unlock_all();
      out.snapshot = std::move(snap);
    }
  } catch (const LoadFailure& f) {
    out.diagnostics.push_back(f.diag);
  } catch (const Json::exception& e) {
    out.diagnostics.push_back({diag::kBadFormat, "$", e.what()});
  }
  return out;
}

LoadResult load_snapshot_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {std::nullopt, {{diag::kBadFormat, path.string(), "cannot open file"}}};
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_snapshot(buf.str());
}

std::string save_snapshot(const Schema& schema, const Store& store) {
  Json head = Json::object();
  head["v"] = kSnapshotVersion;
  head["schema"] = format_schema(schema);
  head["nextId"] = store.next_id();
  std::string out = head.dump();
  out.pop_back();
  out += ",\"entities\":[";
  bool first = true;
  for (const StoreTuple& t : store.tuples()) {
    Json ent = Json::object();
    ent["id"] = t.id;
    ent["type"] = t.type;
    Json fields = Json::object();
    for (const auto& [label, seq] : t.record) {
      Json arr = Json::array();
      for (const StoredValue& v : seq) arr.push_back(cell_json(v));
      fields[label.spelled()] = std::move(arr);
    }
    ent["fields"] = std::move(fields);
    out += (first ? "\n" : ",\n") + ent.dump();
    first = false;
  }
  out += store.size() == 0 ? "]}\n" : "\n]}\n";
  return out;
}

void save_snapshot_file(const std::filesystem::path& path, const Schema& schema, const Store& store) {
  const std::string text = save_snapshot(schema, store);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    if (!out.flush()) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace grql
