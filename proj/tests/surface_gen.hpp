#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace grql::testing {

// Random query text from the surface grammar. Not every string is
// guaranteed to parse; callers skip the ones that do not.
class TextGen {
 public:
  explicit TextGen(std::uint64_t seed) : rng_(seed) {}

  std::string expr(int depth) {
    if (depth <= 0) return atom();
    switch (pick(16)) {
      case 0: return "{" + list(depth) + "}";
      case 1: return postfix(depth) + "." + label();
      case 2: return postfix(depth) + ".<" + label() + "[is " + type() + "]";
      case 3: return postfix(depth) + " { " + shape(depth) + " }";
      case 4: return "select " + postfix(depth) + " { " + shape(depth) + " }";
      case 5: return postfix(depth) + " filter " + sub(depth);
      case 6: return postfix(depth) + " order by " + sub(depth);
      case 7: return "for " + var() + " in " + sub(depth) + " union " + sub(depth);
      case 8: return "with " + var() + " := " + sub(depth) + " select " + sub(depth);
      case 9: return "if " + sub(depth) + " then " + sub(depth) + " else " + sub(depth);
      case 10: return fn() + "(" + list(depth) + ")";
      case 11: return "insert " + type() + " { " + assigns(depth) + " }";
      case 12: return "update " + postfix(depth) + " set { " + assigns(depth) + " }";
      case 13: return sub(depth) + " union " + sub(depth);
      case 14: return sub(depth) + " = " + sub(depth);
      default: return "(" + expr(depth - 1) + ")";
    }
  }

 private:
  std::size_t pick(std::size_t n) { return rng_() % n; }

  std::string sub(int depth) { return "(" + expr(depth - 1) + ")"; }
  std::string postfix(int depth) { return pick(2) ? atom() : sub(depth); }

  std::string atom() {
    switch (pick(9)) {
      case 0: return std::to_string(static_cast<int>(pick(200)) - 100);
      case 1: {
        static const char* strs[] = {"\"a\"", "\"Hi\"", "\"q\\\"uote\"", "\"line\\n\"", "\"\""};
        return strs[pick(5)];
      }
      case 2: return pick(2) ? "true" : "false";
      case 3: {
        static const char* ann[] = {"<str>{}", "<int64>{}", "<bool>{}", "<Movie>{}"};
        return ann[pick(4)];
      }
      case 4: return "." + label();
      case 5: return type();
      default: return var();
    }
  }

  std::string list(int depth) {
    std::string out;
    const std::size_t n = pick(4);
    for (std::size_t i = 0; i < n; ++i) out += (i ? ", " : "") + expr(depth - 1);
    return out;
  }

  std::string shape(int depth) {
    std::string out;
    const std::size_t n = 1 + pick(3);
    for (std::size_t i = 0; i < n; ++i) {
      if (i) out += ", ";
      switch (pick(3)) {
        case 0: out += label(); break;
        case 1: out += label() + " := " + expr(depth - 1); break;
        default: out += label() + ": { " + label() + " }"; break;
      }
    }
    return out;
  }

  std::string assigns(int depth) {
    std::string out;
    const std::size_t n = pick(3);
    for (std::size_t i = 0; i < n; ++i) out += (i ? ", " : "") + label() + " := " + expr(depth - 1);
    return out;
  }

  std::string label() {
    static const char* ls[] = {"title", "year", "name", "directors", "actors", "@character"};
    return ls[pick(6)];
  }
  std::string type() { return pick(2) ? "Movie" : "Person"; }
  std::string var() {
    static const char* vs[] = {"x", "y", "z"};
    return vs[pick(3)];
  }
  std::string fn() {
    static const char* fs[] = {"count", "eq", "append", "coalesce", "any", "add", "lt", "not"};
    return fs[pick(8)];
  }

  std::mt19937_64 rng_;
};

}  // namespace grql::testing
