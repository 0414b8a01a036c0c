#pragma once

#include <string>

#include "grql/core.hpp"
#include "grql/eval.hpp"
#include "grql/serialize.hpp"
#include "grql/typecheck.hpp"

namespace grql {

enum class OutputFormat { Json, Pretty, Debug };

/// Parses "json", "pretty" or "debug"; throws std::invalid_argument.
OutputFormat parse_output_format(const std::string& s);

struct QueryOutcome {
  Typed typed;
  ValueSeq values;
  Json json;
  EvalStats stats;
};

/// Parse, desugar and type-check a query against a schema. Throws ParseError,
/// DesugarError or TypeError.
ExprPtr compile_query(const Schema& schema, const std::string& text, Typed* typed = nullptr);

/// `Code at line:col: message` followed by the source line and a caret.
std::string describe_error(const std::string& source, const std::string& code, const std::string& message, Span span);

/// Renders any query-pipeline exception; rethrows anything else.
std::string describe_current_error(const std::string& source);

/// One schema and store; each query is a transaction over the store.
class Session {
 public:
  Session(Schema schema, Store store) : schema_(std::move(schema)), store_(std::move(store)) {}

  const Schema& schema() const { return schema_; }
  const Store& store() const { return store_; }
  EvalConfig& eval_config() { return eval_config_; }
  const EvalConfig& eval_config() const { return eval_config_; }
  bool dirty() const { return dirty_; }
  void mark_clean() { dirty_ = false; }

  Typed type_of(const std::string& text) const;

  /// Runs a query with the current store as both initial and current store.
  /// The store is replaced only if evaluation succeeds.
  QueryOutcome run(const std::string& text);

 private:
  Schema schema_;
  Store store_;
  EvalConfig eval_config_;
  bool dirty_ = false;
};

std::string render(const QueryOutcome& out, OutputFormat format);

}  // namespace grql
