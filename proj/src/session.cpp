#include "grql/session.hpp"

#include <stdexcept>

#include "grql/desugar.hpp"
#include "grql/syntax.hpp"
#include "grql/wellformed.hpp"

namespace grql {

OutputFormat parse_output_format(const std::string& s) {
  if (s == "json") return OutputFormat::Json;
  if (s == "pretty") return OutputFormat::Pretty;
  if (s == "debug") return OutputFormat::Debug;
  throw std::invalid_argument("unknown format '" + s + "' (json, pretty, debug)");
}

ExprPtr compile_query(const Schema& schema, const std::string& text, Typed* typed) {
  SurfacePtr surface = parse_query(text);
  ExprPtr core = desugar(*surface, &schema);
  Typed t = synth(schema, *core);
  if (typed != nullptr) *typed = t;
  return core;
}

std::string describe_error(const std::string& source, const std::string& code, const std::string& message,
                           Span span) {
  std::size_t line = 1;
  std::size_t line_start = 0;
  const std::size_t at = std::min(span.begin, source.size());
  for (std::size_t i = 0; i < at; ++i) {
    if (source[i] == '\n') {
      ++line;
      line_start = i + 1;
    }
  }
  std::size_t line_end = source.find('\n', line_start);
  if (line_end == std::string::npos) line_end = source.size();
  std::string out = code + " at " + std::to_string(line) + ":" + std::to_string(at - line_start + 1) + ": " + message;
  if (source.empty()) return out;
  out += "\n  " + source.substr(line_start, line_end - line_start) + "\n  ";
  out += std::string(at - line_start, ' ');
  const std::size_t width = std::max<std::size_t>(1, std::min(span.end, line_end) > at ? std::min(span.end, line_end) - at : 1);
  out += std::string(width, '^');
  return out;
}

std::string describe_current_error(const std::string& source) {
  try {
    throw;
  } catch (const ParseError& e) {
    std::string msg = e.what();
    if (!e.expected().empty()) msg += " (expected " + e.expected() + ")";
    return describe_error(source, "ParseError", msg, e.span());
  } catch (const CodedError& e) {
    return describe_error(source, e.code(), e.what(), e.span());
  }
}

Typed Session::type_of(const std::string& text) const {
  Typed t;
  compile_query(schema_, text, &t);
  return t;
}

QueryOutcome Session::run(const std::string& text) {
  QueryOutcome out;
  ExprPtr core = compile_query(schema_, text, &out.typed);
  Store before = store_;
  before.unlock_all();
  EvalOutcome res = eval(schema_, eval_config_, Environment{}, before, before, *core);
  out.json = serialize(res.result, out.typed.type, out.typed.card);
  out.values = std::move(res.result);
  out.stats = res.stats;
  res.store_after.unlock_all();
  if (!(res.store_after == store_)) {
    Diagnostics diags = check_store(schema_, res.store_after);
    if (!diags.empty()) throw EvalFault("Stuck", "query left the store ill-formed: " + diags.front().to_string());
    store_ = std::move(res.store_after);
    dirty_ = true;
  } else {
    store_.set_next_id(res.store_after.next_id());
  }
  return out;
}

std::string render(const QueryOutcome& out, OutputFormat format) {
  switch (format) {
    case OutputFormat::Json: return to_json_text(out.json, false);
    case OutputFormat::Pretty: return to_json_text(out.json, true);
    case OutputFormat::Debug: return debug_print(out.values) + " : " + out.typed.to_string();
  }
  return {};
}

}  // namespace grql
