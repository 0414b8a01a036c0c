#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "grql/core.hpp"
#include "grql/eval.hpp"
#include "grql/serialize.hpp"
#include "grql/typecheck.hpp"

namespace grql {

struct GenConfig {
  std::uint64_t seed = 1;
  int max_types = 3;
  int max_labels = 4;
  /// Longest chain of required links between generated types.
  int max_depth = 2;
  int max_store_size = 8;
  int max_expr_depth = 5;
  double mutation_probability = 0.25;
};

struct Instance {
  Schema schema;
  Store store;
  ExprPtr expr;
  Typed typed;
};

/// Deterministic in `cfg`. The schema and store are well formed and `expr`
/// is closed and well typed by construction.
Instance gen_instance(const GenConfig& cfg);

using EvalFn = std::function<EvalOutcome(const Schema&, const EvalConfig&, const Store&, const Expr&)>;

/// The shipped evaluator with initial and current store coinciding.
EvalFn default_eval();

namespace property {
inline constexpr const char* kTotality = "totality";
inline constexpr const char* kPreservationType = "preservation-type";
inline constexpr const char* kPreservationCardinality = "preservation-cardinality";
inline constexpr const char* kStoreWellFormed = "store-wellformed";
inline constexpr const char* kExtension = "extension";
inline constexpr const char* kReadIsolation = "read-isolation";
inline constexpr const char* kPermutation = "permutation-insensitivity";
}  // namespace property

struct CounterExample {
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> eval_seeds;
  Schema schema;
  Store store;
  ExprPtr expr;
  std::string property;
  std::string witness;
};

/// Evaluates once per seed and checks totality, preservation, store
/// well-formedness, extension, read isolation and (for update-free
/// expressions) agreement of results and inserted tuples across seeds.
std::optional<CounterExample> check_soundness(const Instance& inst, const std::vector<std::uint64_t>& eval_seeds,
                                              const EvalFn& eval_fn = default_eval());

/// Greedily removes expression nodes and store tuples while the same
/// property still fails. Returns `ce` unchanged if it does not reproduce.
CounterExample shrink(const CounterExample& ce, const EvalFn& eval_fn = default_eval());

/// Order-insensitive rendering of a sequence: nested sequences are sorted
/// and ids absent from `known` print as `*`.
std::string canonical(const ValueSeq& vals, const Store& known);

// Replay files --------------------------------------------------------------------

Json expr_to_json(const Expr& e);
/// Throws std::runtime_error on malformed input.
ExprPtr expr_from_json(const Json& j);

Json counterexample_to_json(const CounterExample& ce);
/// Throws std::runtime_error on malformed input.
CounterExample counterexample_from_json(const Json& j);

// Fuzz driver ---------------------------------------------------------------------

struct FuzzOptions {
  std::size_t cases = 1000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::size_t eval_seeds_per_case = 3;
  bool shrink = true;
  GenConfig gen;
  EvalFn eval_fn = default_eval();
};

struct FuzzReport {
  std::size_t cases = 0;
  std::vector<CounterExample> failures;
  /// Per core constructor, indexed like the Expr variant.
  std::array<std::size_t, kCoreConstructorCount> coverage{};
  std::size_t mutating_cases = 0;
  double seconds = 0;
};

/// The per-case seed for case `index` under master seed `seed`.
std::uint64_t case_seed(std::uint64_t seed, std::size_t index);

FuzzReport run_fuzz(const FuzzOptions& opts);

}  // namespace grql
