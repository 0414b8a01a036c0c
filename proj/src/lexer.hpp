#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "grql/syntax.hpp"

namespace grql::detail {

enum class Tok {
  Ident, AtIdent, Int, Str,
  LBrace, RBrace, LParen, RParen, LBrack, RBrack,
  Comma, Semi, Dot, DotLt, Colon, Assign,
  Eq, Lt, Gt, Plus, PlusPlus, Minus, QQ,
  End
};

struct Token {
  Tok kind;
  std::string text;  // identifier name (without '@'), or decoded string literal
  std::uint64_t int_value = 0;
  Span span;
};

std::vector<Token> lex(const std::string& src);

std::string describe(Tok t);

/// Case-insensitive keyword test on an identifier token.
bool is_keyword(const Token& t, const char* kw);

bool is_reserved(const std::string& ident);

}  // namespace grql::detail
