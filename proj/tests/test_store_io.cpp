#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "grql/eval.hpp"
#include "grql/harness.hpp"
#include "grql/store_io.hpp"

using namespace grql;
using grql::testing::has_code;

namespace {

std::size_t count_type(const Store& s, const std::string& type) {
  return static_cast<std::size_t>(
      std::count_if(s.tuples().begin(), s.tuples().end(), [&](const StoreTuple& t) { return t.type == type; }));
}

Json seed_json() {
  std::ifstream in(grql::testing::seed_snapshot_path());
  return Json::parse(in);
}

Diagnostics load_diags(const Json& j) { return load_snapshot(j.dump()).diagnostics; }

}  // namespace

TEST(LoadSnapshot, SeedStore) {
  auto r = load_snapshot_file(grql::testing::seed_snapshot_path());
  ASSERT_TRUE(r.snapshot) << (r.diagnostics.empty() ? "" : r.diagnostics[0].to_string());
  EXPECT_EQ(count_type(r.snapshot->store, "Movie"), 3u);
  EXPECT_EQ(count_type(r.snapshot->store, "Person"), 7u);
  EXPECT_TRUE(r.snapshot->store.contains("11"));
  EXPECT_EQ(r.snapshot->store.next_id(), 12u);
}

TEST(LoadSnapshot, DuplicateId) {
  Json j = seed_json();
  j["entities"].push_back(j["entities"][0]);
  auto r = load_snapshot(j.dump());
  EXPECT_FALSE(r.snapshot);
  EXPECT_TRUE(has_code(r.diagnostics, diag::kDuplicateId));
}

TEST(LoadSnapshot, RequiredMultiViolation) {
  Json j = seed_json();
  for (auto& e : j["entities"]) {
    if (e["id"] == "7") e["fields"]["directors"] = Json::array();
  }
  EXPECT_TRUE(has_code(load_diags(j), diag::kCardinalityViolation));
}

TEST(LoadSnapshot, FormatErrors) {
  EXPECT_TRUE(has_code(load_snapshot("not json").diagnostics, diag::kBadFormat));
  EXPECT_TRUE(has_code(load_snapshot("[]").diagnostics, diag::kBadFormat));
  Json j = seed_json();
  j["v"] = 2;
  EXPECT_TRUE(has_code(load_diags(j), diag::kUnsupportedVersion));
  j = seed_json();
  j["schema"] = "type {";
  EXPECT_TRUE(has_code(load_diags(j), diag::kParseError));
  j = seed_json();
  j["nextId"] = 5;
  EXPECT_FALSE(load_snapshot(j.dump()).snapshot);
  j = seed_json();
  j["entities"][7]["fields"]["actors"][0]["ref"] = "404";
  EXPECT_TRUE(has_code(load_diags(j), diag::kDanglingRef));
}

TEST(LoadSnapshot, MissingLinkPropIsFilledEmpty) {
  Json j = seed_json();
  j["entities"][7]["fields"]["actors"][0].erase("props");
  auto r = load_snapshot(j.dump());
  ASSERT_TRUE(r.snapshot);
  const auto& actors = *r.snapshot->store.find("7")->record.get(Label::object("actors"));
  EXPECT_TRUE(std::get<StoredRef>(actors[0]).link_props.get(Label::link_prop("character"))->empty());
}

TEST(SaveSnapshot, RoundTripSeed) {
  auto snap = grql::testing::seed_snapshot();
  const std::string text = save_snapshot(snap.schema, snap.store);
  auto again = load_snapshot(text);
  ASSERT_TRUE(again.snapshot);
  EXPECT_EQ(again.snapshot->schema, snap.schema);
  EXPECT_TRUE(again.snapshot->store == snap.store);
  EXPECT_EQ(again.snapshot->store.next_id(), snap.store.next_id());
  EXPECT_EQ(save_snapshot(again.snapshot->schema, again.snapshot->store), text);
}

TEST(SaveSnapshot, AfterInsert) {
  auto session = grql::testing::seed_session();
  auto out = session.run("insert Person { name := 'New', age := 1 }");
  const std::string id = out.json["id"].get<std::string>();
  auto again = load_snapshot(save_snapshot(session.schema(), session.store()));
  ASSERT_TRUE(again.snapshot);
  const StoreTuple* t = again.snapshot->store.find(id);
  ASSERT_NE(t, nullptr);
  EXPECT_EQ(t->type, "Person");
  EXPECT_EQ(t->mark, EditMark::Unlocked);
  EXPECT_GT(again.snapshot->store.next_id(), std::stoull(id));
}

TEST(SaveSnapshot, EmptyStore) {
  Schema s = grql::testing::schema_from_text("type Person { required name: str; };");
  Json j = Json::parse(save_snapshot(s, Store{}));
  EXPECT_TRUE(j["entities"].is_array());
  EXPECT_TRUE(j["entities"].empty());
  EXPECT_TRUE(load_snapshot(j.dump()).snapshot);
}

TEST(SaveSnapshot, FileWriteIsAtomicAndLoadable) {
  auto snap = grql::testing::seed_snapshot();
  auto dir = std::filesystem::temp_directory_path() / "grql_store_io_test";
  std::filesystem::create_directories(dir);
  auto path = dir / "copy.grdb.json";
  save_snapshot_file(path, snap.schema, snap.store);
  auto r = load_snapshot_file(path);
  ASSERT_TRUE(r.snapshot);
  EXPECT_TRUE(r.snapshot->store == snap.store);
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++files;
  EXPECT_EQ(files, 1u);
  std::filesystem::remove_all(dir);
}

TEST(StoreIoProperties, LoadSaveIsIdentityOnGeneratedStores) {
  for (std::size_t i = 0; i < 300; ++i) {
    GenConfig cfg;
    cfg.seed = case_seed(77, i);
    cfg.mutation_probability = 1.0;
    Instance inst = gen_instance(cfg);
    Store after = eval(inst.schema, {}, inst.store, *inst.expr).store_after;
    after.unlock_all();
    for (const Store* s : {&inst.store, &after}) {
      const std::string text = save_snapshot(inst.schema, *s);
      EXPECT_EQ(save_snapshot(inst.schema, *s), text);
      auto r = load_snapshot(text);
      ASSERT_TRUE(r.snapshot) << text << "\n" << (r.diagnostics.empty() ? "" : r.diagnostics[0].to_string());
      EXPECT_EQ(r.snapshot->schema, inst.schema);
      EXPECT_TRUE(r.snapshot->store == *s);
      EXPECT_EQ(save_snapshot(r.snapshot->schema, r.snapshot->store), text);
    }
  }
}
