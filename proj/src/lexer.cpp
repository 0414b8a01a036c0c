#include "lexer.hpp"

#include <array>
#include <cctype>
#include <limits>

namespace grql::detail {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

constexpr std::array<const char*, 17> kReserved = {
    "select", "with", "for", "in", "union", "if", "then", "else", "filter",
    "order", "by", "insert", "update", "set", "true", "false", "not"};

}  // namespace

bool is_reserved(const std::string& ident) {
  const std::string l = lower(ident);
  for (const char* kw : kReserved) {
    if (l == kw) return true;
  }
  return false;
}

bool is_keyword(const Token& t, const char* kw) { return t.kind == Tok::Ident && lower(t.text) == kw; }

std::string describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::AtIdent: return "link property";
    case Tok::Int: return "integer";
    case Tok::Str: return "string";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrack: return "'['";
    case Tok::RBrack: return "']'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Dot: return "'.'";
    case Tok::DotLt: return "'.<'";
    case Tok::Colon: return "':'";
    case Tok::Assign: return "':='";
    case Tok::Eq: return "'='";
    case Tok::Lt: return "'<'";
    case Tok::Gt: return "'>'";
    case Tok::Plus: return "'+'";
    case Tok::PlusPlus: return "'++'";
    case Tok::Minus: return "'-'";
    case Tok::QQ: return "'?\?'";
    case Tok::End: return "end of input";
  }
  return "?";
}

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = src.size();

  auto emit = [&](Tok kind, std::size_t begin, std::size_t end) {
    out.push_back({kind, {}, 0, {begin, end}});
  };

  while (i < n) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < n && src[i] != '\n') ++i;
      continue;
    }
    const std::size_t start = i;
    if (ident_start(c)) {
      while (i < n && ident_char(src[i])) ++i;
      out.push_back({Tok::Ident, src.substr(start, i - start), 0, {start, i}});
      continue;
    }
    if (c == '@') {
      ++i;
      if (i >= n || !ident_start(src[i])) throw ParseError("expected a name after '@'", {start, i}, "identifier");
      while (i < n && ident_char(src[i])) ++i;
      out.push_back({Tok::AtIdent, src.substr(start + 1, i - start - 1), 0, {start, i}});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::uint64_t v = 0;
      constexpr std::uint64_t kLimit = static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()) + 1;
      while (i < n && std::isdigit(static_cast<unsigned char>(src[i]))) {
        const auto d = static_cast<std::uint64_t>(src[i] - '0');
        if (v > (kLimit - d) / 10) throw ParseError("integer literal out of range", {start, i + 1});
        v = v * 10 + d;
        ++i;
      }
      if (i < n && ident_start(src[i])) throw ParseError("malformed number", {start, i + 1});
      out.push_back({Tok::Int, src.substr(start, i - start), v, {start, i}});
      continue;
    }
    if (c == '"' || c == '\'') {
      const char quote = c;
      ++i;
      std::string text;
      bool closed = false;
      while (i < n) {
        const char d = src[i];
        if (d == quote) {
          ++i;
          closed = true;
          break;
        }
        if (d == '\\') {
          if (i + 1 >= n) break;
          const char e = src[i + 1];
          i += 2;
          switch (e) {
            case 'n': text += '\n'; break;
            case 't': text += '\t'; break;
            case 'r': text += '\r'; break;
            case 'b': text += '\b'; break;
            case 'f': text += '\f'; break;
            case '"': text += '"'; break;
            case '\'': text += '\''; break;
            case '\\': text += '\\'; break;
            case '/': text += '/'; break;
            case 'u': {
              if (i + 4 > n) throw ParseError("truncated \\u escape", {i - 2, n});
              std::uint32_t cp = 0;
              for (int k = 0; k < 4; ++k) {
                const char h = src[i + k];
                cp <<= 4;
                if (h >= '0' && h <= '9') cp |= static_cast<std::uint32_t>(h - '0');
                else if (h >= 'a' && h <= 'f') cp |= static_cast<std::uint32_t>(h - 'a' + 10);
                else if (h >= 'A' && h <= 'F') cp |= static_cast<std::uint32_t>(h - 'A' + 10);
                else throw ParseError("bad \\u escape", {i - 2, i + 4});
              }
              i += 4;
              append_utf8(text, cp);
              break;
            }
            default: throw ParseError(std::string("unknown escape '\\") + e + "'", {i - 2, i});
          }
          continue;
        }
        text += d;
        ++i;
      }
      if (!closed) throw ParseError("unterminated string literal", {start, n}, "closing quote");
      out.push_back({Tok::Str, std::move(text), 0, {start, i}});
      continue;
    }

    auto next_is = [&](char d) { return i + 1 < n && src[i + 1] == d; };
    switch (c) {
      case '{': emit(Tok::LBrace, i, i + 1); ++i; break;
      case '}': emit(Tok::RBrace, i, i + 1); ++i; break;
      case '(': emit(Tok::LParen, i, i + 1); ++i; break;
      case ')': emit(Tok::RParen, i, i + 1); ++i; break;
      case '[': emit(Tok::LBrack, i, i + 1); ++i; break;
      case ']': emit(Tok::RBrack, i, i + 1); ++i; break;
      case ',': emit(Tok::Comma, i, i + 1); ++i; break;
      case ';': emit(Tok::Semi, i, i + 1); ++i; break;
      case '=': emit(Tok::Eq, i, i + 1); ++i; break;
      case '<': emit(Tok::Lt, i, i + 1); ++i; break;
      case '>': emit(Tok::Gt, i, i + 1); ++i; break;
      case '-': emit(Tok::Minus, i, i + 1); ++i; break;
      case '.':
        if (next_is('<')) {
          emit(Tok::DotLt, i, i + 2);
          i += 2;
        } else {
          emit(Tok::Dot, i, i + 1);
          ++i;
        }
        break;
      case ':':
        if (next_is('=')) {
          emit(Tok::Assign, i, i + 2);
          i += 2;
        } else {
          emit(Tok::Colon, i, i + 1);
          ++i;
        }
        break;
      case '+':
        if (next_is('+')) {
          emit(Tok::PlusPlus, i, i + 2);
          i += 2;
        } else {
          emit(Tok::Plus, i, i + 1);
          ++i;
        }
        break;
      case '?':
        if (next_is('?')) {
          emit(Tok::QQ, i, i + 2);
          i += 2;
          break;
        }
        [[fallthrough]];
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", {i, i + 1});
    }
  }
  out.push_back({Tok::End, {}, 0, {n, n}});
  return out;
}

}  // namespace grql::detail
