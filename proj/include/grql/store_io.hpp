#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "grql/model.hpp"
#include "grql/wellformed.hpp"

namespace grql {

inline constexpr int kSnapshotVersion = 1;

struct Snapshot {
  Schema schema;
  Store store;
};

/// On failure `snapshot` is empty and `diagnostics` says why.
struct LoadResult {
  std::optional<Snapshot> snapshot;
  Diagnostics diagnostics;
};

/// Parses and validates a `.grdb.json` document. Edit marks come back Unlocked.
LoadResult load_snapshot(const std::string& text);
LoadResult load_snapshot_file(const std::filesystem::path& path);

/// Deterministic compact-ish JSON (one entity per line).
std::string save_snapshot(const Schema& schema, const Store& store);
/// Writes through a temporary file and rename. Throws std::runtime_error.
void save_snapshot_file(const std::filesystem::path& path, const Schema& schema, const Store& store);

}  // namespace grql
