#include "coql/query/lexer.hpp"

#include <cctype>
#include <charconv>
#include <map>

namespace coql::query {

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Ident: return "identifier";
    case TokenKind::Integer: return "integer";
    case TokenKind::Decimal: return "decimal";
    case TokenKind::Text: return "text literal";
    case TokenKind::KwConcept: return "CONCEPT";
    case TokenKind::KwIdentity: return "IDENTITY";
    case TokenKind::KwEntity: return "ENTITY";
    case TokenKind::KwIn: return "IN";
    case TokenKind::KwCreate: return "CREATE";
    case TokenKind::KwTable: return "TABLE";
    case TokenKind::KwInsert: return "INSERT";
    case TokenKind::KwInto: return "INTO";
    case TokenKind::KwUnder: return "UNDER";
    case TokenKind::KwSelect: return "SELECT";
    case TokenKind::KwFrom: return "FROM";
    case TokenKind::KwForall: return "FORALL";
    case TokenKind::KwWhere: return "WHERE";
    case TokenKind::KwBody: return "BODY";
    case TokenKind::KwReturn: return "RETURN";
    case TokenKind::KwAnd: return "AND";
    case TokenKind::KwOr: return "OR";
    case TokenKind::KwNot: return "NOT";
    case TokenKind::KwParent: return "parent";
    case TokenKind::KwThis: return "this";
    case TokenKind::KwTrue: return "TRUE";
    case TokenKind::KwFalse: return "FALSE";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::Comma: return "','";
    case TokenKind::Semicolon: return "';'";
    case TokenKind::Dot: return "'.'";
    case TokenKind::Bar: return "'|'";
    case TokenKind::Slash: return "'/'";
    case TokenKind::Minus: return "'-'";
    case TokenKind::Arrow: return "'->'";
    case TokenKind::BackArrow: return "'<-'";
    case TokenKind::Eq: return "'='";
    case TokenKind::EqEq: return "'=='";
    case TokenKind::NotEq: return "'!='";
    case TokenKind::Less: return "'<'";
    case TokenKind::LessEq: return "'<='";
    case TokenKind::Greater: return "'>'";
    case TokenKind::GreaterEq: return "'>='";
    case TokenKind::End: return "end of input";
  }
  return "?";
}

namespace {

const std::map<std::string, TokenKind>& keywords() {
  static const std::map<std::string, TokenKind> table{
      {"CONCEPT", TokenKind::KwConcept}, {"IDENTITY", TokenKind::KwIdentity}, {"ENTITY", TokenKind::KwEntity},
      {"IN", TokenKind::KwIn},           {"CREATE", TokenKind::KwCreate},     {"TABLE", TokenKind::KwTable},
      {"INSERT", TokenKind::KwInsert},   {"INTO", TokenKind::KwInto},         {"UNDER", TokenKind::KwUnder},
      {"SELECT", TokenKind::KwSelect},   {"FROM", TokenKind::KwFrom},         {"FORALL", TokenKind::KwForall},
      {"WHERE", TokenKind::KwWhere},     {"BODY", TokenKind::KwBody},         {"RETURN", TokenKind::KwReturn},
      {"AND", TokenKind::KwAnd},         {"OR", TokenKind::KwOr},             {"NOT", TokenKind::KwNot},
      {"PARENT", TokenKind::KwParent},   {"THIS", TokenKind::KwThis},         {"TRUE", TokenKind::KwTrue},
      {"FALSE", TokenKind::KwFalse},
  };
  return table;
}

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

class Lexer {
 public:
  explicit Lexer(std::string_view in) : in_(in) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      if (pos_ >= in_.size()) {
        out.push_back(Token{TokenKind::End, "", here(0), 0, 0});
        return out;
      }
      out.push_back(next());
    }
  }

 private:
  Span here(std::size_t length) const { return Span{pos_, length, line_, col_}; }

  [[noreturn]] void fail(const std::string& message) const {
    throw Error(ErrorKind::LexError, message, here(1));
  }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < in_.size(); ++i) {
      if (in_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else if ((static_cast<unsigned char>(in_[pos_]) & 0xC0) != 0x80) {
        ++col_;
      }
      ++pos_;
    }
  }

  char peek(std::size_t ahead = 0) const { return pos_ + ahead < in_.size() ? in_[pos_ + ahead] : '\0'; }

  void skip_space() {
    while (pos_ < in_.size()) {
      char c = in_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < in_.size() && in_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  // Length of the UTF-8 sequence starting at the cursor; fails on malformed input.
  std::size_t utf8_length() const {
    auto c = static_cast<unsigned char>(in_[pos_]);
    std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 0;
    if (len == 0 || pos_ + len > in_.size()) fail("invalid UTF-8 sequence");
    for (std::size_t i = 1; i < len; ++i) {
      if ((static_cast<unsigned char>(in_[pos_ + i]) & 0xC0) != 0x80) fail("invalid UTF-8 sequence");
    }
    return len;
  }

  Token finish(TokenKind kind, const Span& start, std::string text = {}) {
    Token t{kind, std::move(text), start, 0, 0};
    t.span.length = pos_ - start.offset;
    if (t.text.empty() && kind != TokenKind::Text) t.text = std::string(in_.substr(start.offset, t.span.length));
    return t;
  }

  Token next() {
    const Span start = here(0);
    const auto c = static_cast<unsigned char>(peek());

    if (ident_start(c)) {
      while (pos_ < in_.size() && ident_char(static_cast<unsigned char>(peek()))) advance(utf8_length());
      std::string word(in_.substr(start.offset, pos_ - start.offset));
      std::string upper = word;
      for (auto& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
      if (auto kw = keywords().find(upper); kw != keywords().end()) return finish(kw->second, start, word);
      return finish(TokenKind::Ident, start, word);
    }
    if (std::isdigit(c)) return number(start);
    if (c == '\'') return text(start);

    auto two = [&](TokenKind kind) {
      advance(2);
      return finish(kind, start);
    };
    auto one = [&](TokenKind kind) {
      advance();
      return finish(kind, start);
    };
    switch (c) {
      case '(': return one(TokenKind::LParen);
      case ')': return one(TokenKind::RParen);
      case ',': return one(TokenKind::Comma);
      case ';': return one(TokenKind::Semicolon);
      case '.': return one(TokenKind::Dot);
      case '|': return one(TokenKind::Bar);
      case '/': return one(TokenKind::Slash);
      case '-': return peek(1) == '>' ? two(TokenKind::Arrow) : one(TokenKind::Minus);
      case '=': return peek(1) == '=' ? two(TokenKind::EqEq) : one(TokenKind::Eq);
      case '!':
        if (peek(1) == '=') return two(TokenKind::NotEq);
        break;
      case '<':
        if (peek(1) == '-') return two(TokenKind::BackArrow);
        if (peek(1) == '=') return two(TokenKind::LessEq);
        return one(TokenKind::Less);
      case '>': return peek(1) == '=' ? two(TokenKind::GreaterEq) : one(TokenKind::Greater);
      default: break;
    }
    fail("unexpected character '" + std::string(1, static_cast<char>(c)) + "'");
  }

  Token number(const Span& start) {
    bool decimal = false;
    while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      decimal = true;
      advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    }
    if ((peek() == 'e' || peek() == 'E') &&
        (std::isdigit(static_cast<unsigned char>(peek(1))) ||
         ((peek(1) == '+' || peek(1) == '-') && std::isdigit(static_cast<unsigned char>(peek(2)))))) {
      decimal = true;
      advance(2);
      while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    }
    if (ident_char(static_cast<unsigned char>(peek()))) fail("malformed number");
    Token t = finish(decimal ? TokenKind::Decimal : TokenKind::Integer, start);
    const char* first = in_.data() + start.offset;
    const char* last = in_.data() + pos_;
    std::from_chars_result r;
    if (decimal) {
      r = std::from_chars(first, last, t.decimal);
    } else {
      r = std::from_chars(first, last, t.integer);
    }
    if (r.ec != std::errc{}) throw Error(ErrorKind::LexError, "number out of range", t.span);
    return t;
  }

  Token text(const Span& start) {
    advance();
    std::string value;
    while (true) {
      if (pos_ >= in_.size()) throw Error(ErrorKind::LexError, "unterminated text literal", start);
      char c = peek();
      if (c == '\'') {
        if (peek(1) == '\'') {
          value += '\'';
          advance(2);
          continue;
        }
        advance();
        break;
      }
      const auto len = utf8_length();
      value += in_.substr(pos_, len);
      advance(len);
    }
    return finish(TokenKind::Text, start, std::move(value));
  }

  std::string_view in_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view input) { return Lexer(input).run(); }

}  // namespace coql::query
