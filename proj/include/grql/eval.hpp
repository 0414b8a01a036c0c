#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "grql/core.hpp"
#include "grql/errors.hpp"
#include "grql/model.hpp"

namespace grql {

/// Variable -> value sequence.
using Environment = OrderedMap<VarName, ValueSeq>;

struct EvalConfig {
  /// Without a seed every set-forming step concatenates left to right and
  /// `Name` follows store order. With one, each such step is shuffled.
  std::optional<std::uint64_t> permutation_seed;
  /// Drops repeated refs (by id) from projection and backlink results.
  bool dedup_projections = false;
};

struct EvalStats {
  /// Updates that hit an entity already locked by this query.
  std::size_t lock_conflicts = 0;
  std::size_t inserts = 0;
  std::size_t updates = 0;
};

struct EvalOutcome {
  ValueSeq result;
  Store store_after;
  EvalStats stats;
};

/// Evaluates `e`; reads go to `init`, writes thread through a copy of `cur`.
/// Throws EvalFault.
EvalOutcome eval(const Schema& schema, const EvalConfig& config, const Environment& env, const Store& init,
                 const Store& cur, const Expr& e);

/// Query entry point: init and current store coincide.
inline EvalOutcome eval(const Schema& schema, const EvalConfig& config, const Store& store, const Expr& e) {
  return eval(schema, config, Environment{}, store, store, e);
}

/// A carried entry (visible or not), else the stored record in `init`.
ValueSeq project(const Store& init, const Label& label, const ComputedValue& w);

/// Sources of type `type` whose `label` links to `target`, one per distinct
/// (source, link properties) pair, carrying the link properties invisibly.
ValueSeq seek(const Store& init, const TypeName& type, const Label& label, const EntityId& target);

/// Right-biased extension: `added` entries first, then the receiver's other
/// entries marked invisible.
ComputedValue record_extend(const ComputedValue& w, const ShapeRecord& added);

/// Keeps scalars and ref ids plus the link properties `ty` declares.
StoredSeq strip_for_storage(const ValueSeq& vals, const StoredType& ty);

/// Stable sort by key; an empty key sorts first.
ValueSeq order_by_keys(std::vector<std::pair<ComputedValue, ValueSeq>> pairs);

}  // namespace grql
