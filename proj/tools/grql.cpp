// grql: run, repl, check and fuzz over .grdb.json snapshots.

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "grql/harness.hpp"
#include "grql/session.hpp"
#include "grql/store_io.hpp"
#include "grql/syntax.hpp"

namespace {

using namespace grql;

constexpr int kOk = 0;
constexpr int kQueryError = 1;
constexpr int kStoreError = 2;

void print_diagnostics(const Diagnostics& diags) {
  for (const auto& d : diags) std::cerr << d.to_string() << "\n";
}

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("GRQL_SEED");
  if (s == nullptr || *s == '\0') return std::nullopt;
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    std::cerr << "warning: ignoring GRQL_SEED='" << s << "'\n";
    return std::nullopt;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Single-writer advisory lock held for the lifetime of the object.
class WriteLock {
 public:
  explicit WriteLock(const std::string& store_path) {
    const std::string path = store_path + ".lock";
    fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0 || ::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
      if (fd_ >= 0) ::close(fd_);
      throw std::runtime_error("another writer holds " + path);
    }
  }
  ~WriteLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  WriteLock(const WriteLock&) = delete;
  WriteLock& operator=(const WriteLock&) = delete;

 private:
  int fd_ = -1;
};

std::optional<Session> open_session(const std::string& path) {
  LoadResult loaded = load_snapshot_file(path);
  if (!loaded.snapshot) {
    print_diagnostics(loaded.diagnostics);
    return std::nullopt;
  }
  return Session(std::move(loaded.snapshot->schema), std::move(loaded.snapshot->store));
}

bool save(Session& session, const std::string& path) {
  try {
    WriteLock lock(path);
    save_snapshot_file(path, session.schema(), session.store());
    session.mark_clean();
    return true;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return false;
  }
}

// Runs one query; prints the result or a diagnostic. Returns an exit code.
int run_one(Session& session, const std::string& query, OutputFormat format) {
  try {
    QueryOutcome out = session.run(query);
    std::cout << render(out, format) << "\n";
    return kOk;
  } catch (const ParseError&) {
    std::cerr << describe_current_error(query) << "\n";
  } catch (const CodedError&) {
    std::cerr << describe_current_error(query) << "\n";
  } catch (const SerializeMismatch& e) {
    std::cerr << "SerializeMismatch: " << e.what() << "\n";
  }
  return kQueryError;
}

struct RunArgs {
  std::string store;
  std::string query;
  std::string file;
  bool commit = false;
  std::optional<std::uint64_t> seed;
  std::string format = "json";
  bool dedup = false;
};

int cmd_run(const RunArgs& a) {
  auto session = open_session(a.store);
  if (!session) return kStoreError;
  session->eval_config().permutation_seed = a.seed ? a.seed : env_seed();
  session->eval_config().dedup_projections = a.dedup;
  std::string query = a.query;
  if (!a.file.empty()) {
    try {
      query = a.file == "-" ? std::string(std::istreambuf_iterator<char>(std::cin), {}) : read_file(a.file);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kQueryError;
    }
  }
  const int rc = run_one(*session, query, parse_output_format(a.format));
  if (rc != kOk) return rc;
  if (a.commit && session->dirty() && !save(*session, a.store)) return kStoreError;
  return kOk;
}

bool input_complete(const std::string& buf) {
  // Complete when the last non-space character is a ';' outside a string.
  char quote = 0;
  bool escaped = false;
  bool comment = false;
  char last = 0;
  for (char c : buf) {
    if (comment) {
      if (c == '\n') comment = false;
      continue;
    }
    if (quote) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == quote) {
        quote = 0;
      }
      last = c;
      continue;
    }
    if (c == '#') {
      comment = true;
      continue;
    }
    if (c == '\'' || c == '"') quote = c;
    if (!std::isspace(static_cast<unsigned char>(c))) last = c;
  }
  return quote == 0 && last == ';';
}

int cmd_repl(const std::string& store_path, std::optional<std::uint64_t> seed, bool dedup, const std::string& format) {
  auto session = open_session(store_path);
  if (!session) return kStoreError;
  session->eval_config().permutation_seed = seed ? seed : env_seed();
  session->eval_config().dedup_projections = dedup;
  OutputFormat fmt = parse_output_format(format);
  const bool interactive = ::isatty(STDIN_FILENO);
  std::string buf;
  std::string line;
  auto prompt = [&] {
    if (interactive) std::cout << (buf.empty() ? "grql> " : "  ... ") << std::flush;
  };
  prompt();
  while (std::getline(std::cin, line)) {
    if (buf.empty()) {
      std::string trimmed = line.substr(0, line.find_last_not_of(" \t\r") + 1);
      trimmed.erase(0, trimmed.find_first_not_of(" \t"));
      if (trimmed.empty()) {
        prompt();
        continue;
      }
      if (trimmed[0] == '\\') {
        std::istringstream words(trimmed.substr(1));
        std::string cmd;
        words >> cmd;
        std::string rest;
        std::getline(words, rest);
        rest.erase(0, rest.find_first_not_of(" \t"));
        if (cmd == "quit" || cmd == "q") return kOk;
        if (cmd == "schema") {
          std::cout << format_schema(session->schema());
        } else if (cmd == "type") {
          try {
            std::cout << session->type_of(rest).to_string() << "\n";
          } catch (const CodedError&) {
            std::cerr << describe_current_error(rest) << "\n";
          } catch (const ParseError&) {
            std::cerr << describe_current_error(rest) << "\n";
          }
        } else if (cmd == "save") {
          if (save(*session, store_path)) std::cout << "saved " << store_path << "\n";
        } else if (cmd == "seed") {
          if (rest.empty() || rest == "off") {
            session->eval_config().permutation_seed.reset();
          } else {
            try {
              session->eval_config().permutation_seed = std::stoull(rest);
            } catch (const std::exception&) {
              std::cerr << "usage: \\seed N | \\seed off\n";
            }
          }
        } else if (cmd == "dedup") {
          if (rest == "on" || rest == "off") {
            session->eval_config().dedup_projections = rest == "on";
          } else {
            std::cerr << "usage: \\dedup on|off\n";
          }
        } else if (cmd == "format") {
          try {
            fmt = parse_output_format(rest);
          } catch (const std::exception& e) {
            std::cerr << e.what() << "\n";
          }
        } else if (cmd == "help") {
          std::cout << "\\schema  \\type <expr>  \\save  \\seed N|off  \\dedup on|off  \\format json|pretty|debug  "
                       "\\quit\n";
        } else {
          std::cerr << "unknown command \\" << cmd << " (try \\help)\n";
        }
        prompt();
        continue;
      }
    }
    buf += line + "\n";
    if (input_complete(buf)) {
      run_one(*session, buf, fmt);
      buf.clear();
    }
    prompt();
  }
  if (session->dirty()) std::cerr << "note: unsaved changes discarded (use \\save)\n";
  return kOk;
}

int cmd_check(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kStoreError;
  }
  const auto first = text.find_first_not_of(" \t\r\n");
  Diagnostics diags;
  if (first != std::string::npos && text[first] == '{') {
    diags = load_snapshot(text).diagnostics;
  } else {
    try {
      Schema schema = lower_schema(parse_schema(text), diags);
      if (diags.empty()) diags = check_schema(schema);
    } catch (const ParseError& e) {
      diags.push_back({diag::kParseError, path, describe_error(text, "ParseError", e.what(), e.span())});
    }
  }
  for (const auto& d : diags) std::cout << d.to_string() << "\n";
  return diags.empty() ? kOk : kStoreError;
}

struct FuzzArgs {
  std::size_t cases = 1000;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  std::size_t eval_seeds = 3;
  bool no_shrink = false;
  std::string replay;
  std::string out_dir = ".";
  GenConfig gen;
};

int cmd_fuzz(const FuzzArgs& a) {
  if (!a.replay.empty()) {
    CounterExample ce;
    try {
      ce = counterexample_from_json(Json::parse(read_file(a.replay)));
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kStoreError;
    }
    Instance inst{ce.schema, ce.store, ce.expr, {}};
    try {
      inst.typed = synth(inst.schema, *inst.expr);
    } catch (const TypeError& e) {
      std::cerr << "replayed expression does not type-check: " << e.code() << ": " << e.what() << "\n";
      return kQueryError;
    }
    std::cout << "query: " << show(*inst.expr) << "\n";
    std::cout << "type:  " << inst.typed.to_string() << "\n";
    if (auto again = check_soundness(inst, ce.eval_seeds)) {
      std::cout << "reproduced " << again->property << ": " << again->witness << "\n";
      return kQueryError;
    }
    std::cout << "no violation (recorded: " << ce.property << ")\n";
    return kOk;
  }
  FuzzOptions opts;
  opts.cases = a.cases;
  opts.seed = a.seed;
  opts.workers = a.workers ? a.workers : std::max(1u, std::thread::hardware_concurrency());
  opts.eval_seeds_per_case = a.eval_seeds;
  opts.shrink = !a.no_shrink;
  opts.gen = a.gen;
  FuzzReport r = run_fuzz(opts);
  std::cout << "cases: " << r.cases << " (" << r.mutating_cases << " mutating), eval seeds per case: " << a.eval_seeds
            << ", workers: " << opts.workers << "\n";
  std::cout << "coverage:";
  for (std::size_t k = 0; k < r.coverage.size(); ++k) std::cout << " " << constructor_name(k) << "=" << r.coverage[k];
  std::cout << "\n";
  for (const auto& ce : r.failures) {
    const std::string file = a.out_dir + "/counterexample-" + std::to_string(ce.seed) + ".json";
    std::ofstream(file) << counterexample_to_json(ce).dump(2) << "\n";
    std::cout << "counter-example " << ce.property << " (seed " << ce.seed << "): " << ce.witness << "\n  query: "
              << show(*ce.expr) << "\n  written to " << file << "\n";
  }
  std::cout << "counter-examples: " << r.failures.size() << "\n";
  std::cout << "elapsed: " << r.seconds << "s\n";
  return r.failures.empty() ? kOk : kQueryError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-relational query interpreter"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run one query against a snapshot");
  run_cmd->add_option("store", run.store, "Snapshot file (.grdb.json)")->required();
  run_cmd->add_option("query", run.query, "Query text");
  run_cmd->add_option("-f,--file", run.file, "Read the query from a file ('-' for stdin)");
  run_cmd->add_flag("--commit", run.commit, "Save the resulting store");
  run_cmd->add_option("--seed", run.seed, "Permutation seed (default: GRQL_SEED or canonical order)");
  run_cmd->add_option("--format", run.format, "json | pretty | debug")->check(CLI::IsMember({"json", "pretty", "debug"}));
  run_cmd->add_flag("--dedup", run.dedup, "De-duplicate references after projection and backlinks");

  std::string repl_store;
  std::optional<std::uint64_t> repl_seed;
  bool repl_dedup = false;
  std::string repl_format = "pretty";
  auto* repl_cmd = app.add_subcommand("repl", "Interactive session");
  repl_cmd->add_option("store", repl_store, "Snapshot file (.grdb.json)")->required();
  repl_cmd->add_option("--seed", repl_seed, "Permutation seed");
  repl_cmd->add_flag("--dedup", repl_dedup, "De-duplicate references after projection and backlinks");
  repl_cmd->add_option("--format", repl_format, "json | pretty | debug")
      ->check(CLI::IsMember({"json", "pretty", "debug"}));

  std::string check_path;
  auto* check_cmd = app.add_subcommand("check", "Validate a snapshot or a schema file");
  check_cmd->add_option("path", check_path, "Snapshot (.grdb.json) or schema source")->required();

  FuzzArgs fuzz;
  auto* fuzz_cmd = app.add_subcommand("fuzz", "Check soundness on generated instances");
  fuzz_cmd->add_option("--cases", fuzz.cases, "Number of instances");
  fuzz_cmd->add_option("--seed", fuzz.seed, "Master seed");
  fuzz_cmd->add_option("--workers", fuzz.workers, "Worker threads (default: hardware threads)");
  fuzz_cmd->add_option("--eval-seeds", fuzz.eval_seeds, "Evaluation seeds per instance")->check(CLI::Range(1, 64));
  fuzz_cmd->add_flag("--no-shrink", fuzz.no_shrink, "Report counter-examples unshrunk");
  fuzz_cmd->add_option("--replay", fuzz.replay, "Re-check a counter-example file");
  fuzz_cmd->add_option("--out-dir", fuzz.out_dir, "Where counter-example files go");
  fuzz_cmd->add_option("--max-types", fuzz.gen.max_types)->check(CLI::PositiveNumber);
  fuzz_cmd->add_option("--max-labels", fuzz.gen.max_labels)->check(CLI::PositiveNumber);
  fuzz_cmd->add_option("--max-depth", fuzz.gen.max_depth)->check(CLI::PositiveNumber);
  fuzz_cmd->add_option("--max-store-size", fuzz.gen.max_store_size)->check(CLI::PositiveNumber);
  fuzz_cmd->add_option("--max-expr-depth", fuzz.gen.max_expr_depth)->check(CLI::PositiveNumber);
  fuzz_cmd->add_option("--mutation-probability", fuzz.gen.mutation_probability)->check(CLI::Range(0.0, 1.0));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      if (run.query.empty() == run.file.empty()) {
        std::cerr << "run: give exactly one of a query or --file\n";
        return kQueryError;
      }
      return cmd_run(run);
    }
    if (*repl_cmd) return cmd_repl(repl_store, repl_seed, repl_dedup, repl_format);
    if (*check_cmd) return cmd_check(check_path);
    if (*fuzz_cmd) return cmd_fuzz(fuzz);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kStoreError;
  }
  return kOk;
}
