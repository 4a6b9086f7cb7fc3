#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "coql/error.hpp"

namespace coql::query {

enum class TokenKind {
  Ident,
  Integer,
  Decimal,
  Text,
  // keywords (case-insensitive)
  KwConcept,
  KwIdentity,
  KwEntity,
  KwIn,
  KwCreate,
  KwTable,
  KwInsert,
  KwInto,
  KwUnder,
  KwSelect,
  KwFrom,
  KwForall,
  KwWhere,
  KwBody,
  KwReturn,
  KwAnd,
  KwOr,
  KwNot,
  KwParent,
  KwThis,
  KwTrue,
  KwFalse,
  // punctuation
  LParen,
  RParen,
  Comma,
  Semicolon,
  Dot,
  Bar,
  Slash,
  Minus,
  Arrow,      // ->
  BackArrow,  // <-
  Eq,         // =
  EqEq,       // ==
  NotEq,      // !=
  Less,
  LessEq,
  Greater,
  GreaterEq,
  End,
};

std::string_view to_string(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;  // identifier name, unescaped text literal, or lexeme
  Span span;
  std::int64_t integer = 0;
  double decimal = 0;

  friend bool operator==(const Token& a, const Token& b) {
    return a.kind == b.kind && a.text == b.text && a.integer == b.integer && a.decimal == b.decimal;
  }
};

/// Splits CoQL source into tokens, ending with one End token. `//` comments
/// and whitespace are skipped. Throws LexError with the offending position.
std::vector<Token> tokenize(std::string_view input);

}  // namespace coql::query
