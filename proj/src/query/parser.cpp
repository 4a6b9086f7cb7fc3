#include "coql/query/parser.hpp"

#include <algorithm>
#include <cctype>
#include <initializer_list>

namespace coql::query {

namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

bool is_numeric(const Expr& e) {
  auto lit = std::get_if<Literal>(&e.node);
  return lit && (std::holds_alternative<std::int64_t>(lit->value) || std::holds_alternative<double>(lit->value));
}

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : toks_(tokens) {
    if (toks_.empty() || toks_.back().kind != TokenKind::End) {
      throw Error(ErrorKind::ParseError, "token stream must end with an end token");
    }
  }

  std::vector<Statement> script() {
    std::vector<Statement> out;
    while (accept(TokenKind::Semicolon)) {
    }
    while (!at(TokenKind::End)) {
      out.push_back(statement());
      while (accept(TokenKind::Semicolon)) {
      }
    }
    return out;
  }

  Expr single_expression() {
    Expr e = expression();
    if (!at(TokenKind::End)) fail({"end of input"});
    return e;
  }

 private:
  // --- token helpers ---

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at(TokenKind kind, std::size_t k = 0) const { return peek(k).kind == kind; }
  const Token& advance() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    last_ = &t;
    return t;
  }
  bool accept(TokenKind kind) {
    if (!at(kind)) return false;
    advance();
    return true;
  }

  [[noreturn]] void fail(std::initializer_list<std::string_view> expected) const {
    const Token& t = peek();
    std::string msg = "expected ";
    std::size_t i = 0;
    for (auto e : expected) {
      if (i) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += e;
      ++i;
    }
    msg += t.kind == TokenKind::End ? ", found end of input" : ", found '" + t.text + "'";
    throw Error(ErrorKind::ParseError, msg, t.span);
  }

  const Token& expect(TokenKind kind, std::string_view what) {
    if (!at(kind)) fail({what});
    return advance();
  }

  std::string ident(std::string_view what) { return expect(TokenKind::Ident, what).text; }

  Span span_from(const Span& start) const {
    Span s = start;
    if (last_ && last_->span.offset >= start.offset) {
      s.length = last_->span.offset + last_->span.length - start.offset;
    }
    return s;
  }

  // --- statements ---

  Statement statement() {
    Span start = peek().span;
    Statement st;
    switch (peek().kind) {
      case TokenKind::KwConcept: st.node = concept_decl(); break;
      case TokenKind::KwCreate: st.node = create_table(); break;
      case TokenKind::KwInsert: st.node = insert(); break;
      case TokenKind::KwSelect: st.node = select(); break;
      case TokenKind::KwForall: st.node = forall(); break;
      case TokenKind::LParen:
        if (restriction_ahead()) {
          st.node = PathQuery{access_path(term(), false)};
        } else {
          st.node = product_short_form();
        }
        break;
      case TokenKind::Ident:
        if (at(TokenKind::Ident, 1) && at(TokenKind::Eq, 2)) {
          st.node = assignment();
          break;
        }
        st.node = PathQuery{access_path(term(), false)};
        break;
      case TokenKind::KwThis: st.node = PathQuery{access_path(term(), false)}; break;
      default:
        fail({"CONCEPT", "CREATE", "INSERT", "SELECT", "FORALL", "collection name", "'('"});
    }
    st.span = span_from(start);
    return st;
  }

  TypeName type_name() {
    const Token& t = expect(TokenKind::Ident, "type name");
    TypeName out{t.text, std::nullopt};
    auto u = upper(t.text);
    if (u == "CHAR") {
      out.name = u;
      expect(TokenKind::LParen, "'(' after CHAR");
      out.length = expect(TokenKind::Integer, "length").integer;
      expect(TokenKind::RParen, "')'");
    } else if (u == "DOUBLE" || u == "INT") {
      out.name = u;
    } else if (u == "COLLECTION") {
      out.name = "Collection";
    }
    return out;
  }

  std::vector<FieldDecl> field_list() {
    std::vector<FieldDecl> out;
    do {
      Span start = peek().span;
      FieldDecl f;
      f.type = type_name();
      f.name = ident("field name");
      f.span = span_from(start);
      out.push_back(std::move(f));
    } while (accept(TokenKind::Comma));
    return out;
  }

  ConceptDecl concept_decl() {
    expect(TokenKind::KwConcept, "CONCEPT");
    ConceptDecl out;
    out.name = ident("concept name");
    if (accept(TokenKind::KwIn)) out.parent = ident("parent concept name");
    if (accept(TokenKind::KwIdentity)) out.identity = field_list();
    if (accept(TokenKind::KwEntity)) out.entity = field_list();
    return out;
  }

  CreateTable create_table() {
    expect(TokenKind::KwCreate, "CREATE");
    expect(TokenKind::KwTable, "TABLE");
    CreateTable out;
    out.name = ident("collection name");
    expect(TokenKind::KwConcept, "CONCEPT");
    out.concept_name = ident("concept name");
    if (accept(TokenKind::KwIn)) out.parent = ident("parent collection name");
    for (;;) {
      bool comma = at(TokenKind::Comma) && at(TokenKind::Ident, 1) && at(TokenKind::Eq, 2);
      if (!comma && !(at(TokenKind::Ident) && at(TokenKind::Eq, 1))) break;
      if (comma) advance();
      std::string field = ident("field name");
      expect(TokenKind::Eq, "'='");
      out.bindings.emplace_back(std::move(field), ident("collection name"));
    }
    return out;
  }

  Literal literal() {
    Literal out;
    bool negative = accept(TokenKind::Minus);
    if (at(TokenKind::Integer)) {
      auto v = advance().integer;
      out.value = negative ? -v : v;
    } else if (at(TokenKind::Decimal)) {
      auto v = advance().decimal;
      out.value = negative ? -v : v;
    } else if (negative) {
      fail({"number"});
    } else if (at(TokenKind::Text)) {
      out.value = advance().text;
    } else if (accept(TokenKind::KwTrue)) {
      out.value = true;
    } else if (accept(TokenKind::KwFalse)) {
      out.value = false;
    } else {
      fail({"literal"});
    }
    return out;
  }

  IdentityAtom identity_atom() {
    if (at(TokenKind::Less)) return IdentityAtom{Box<IdentityLiteral>(identity_literal())};
    return IdentityAtom{literal()};
  }

  IdentityLiteral identity_literal() {
    expect(TokenKind::Less, "'<'");
    IdentityLiteral out;
    do {
      std::vector<IdentityAtom> segment;
      if (accept(TokenKind::LParen)) {
        do {
          segment.push_back(identity_atom());
        } while (accept(TokenKind::Comma));
        expect(TokenKind::RParen, "')'");
      } else {
        segment.push_back(identity_atom());
      }
      out.segments.push_back(std::move(segment));
    } while (accept(TokenKind::Slash));
    expect(TokenKind::Greater, "'>'");
    return out;
  }

  Insert insert() {
    expect(TokenKind::KwInsert, "INSERT");
    expect(TokenKind::KwInto, "INTO");
    Insert out;
    out.collection = ident("collection name");
    if (accept(TokenKind::KwUnder)) out.under = identity_literal();
    expect(TokenKind::LParen, "'('");
    if (!at(TokenKind::RParen)) {
      do {
        Span start = peek().span;
        FieldValue fv;
        fv.field = ident("field name");
        expect(TokenKind::Eq, "'='");
        if (at(TokenKind::Less)) {
          fv.value = identity_literal();
        } else {
          fv.value = literal();
        }
        fv.span = span_from(start);
        out.values.push_back(std::move(fv));
      } while (accept(TokenKind::Comma));
    }
    expect(TokenKind::RParen, "')'");
    return out;
  }

  Select select() {
    expect(TokenKind::KwSelect, "SELECT");
    Select out;
    do {
      out.columns.push_back(expression());
    } while (accept(TokenKind::Comma));
    expect(TokenKind::KwFrom, "FROM");
    if (!at(TokenKind::Ident) && !at(TokenKind::LParen)) fail({"collection name", "'('"});
    out.source = access_path(term(), false);
    if (accept(TokenKind::KwWhere)) out.where = expression();
    return out;
  }

  // Source of a product: `Name [alias]` or `(Name [alias] | predicate)`.
  Term source() {
    if (at(TokenKind::LParen)) return term();
    Span start = peek().span;
    Term t;
    t.name = ident("collection name");
    if (at(TokenKind::Ident) && !at(TokenKind::Eq, 1)) t.alias = advance().text;
    if (t.alias == t.name) t.alias.reset();
    t.span = span_from(start);
    return t;
  }

  // `[type] name =` starts a binding.
  bool binding_ahead() const {
    if (!at(TokenKind::Ident)) return false;
    if (at(TokenKind::Eq, 1)) return true;
    if (at(TokenKind::Ident, 1) && at(TokenKind::Eq, 2)) return true;
    return at(TokenKind::LParen, 1) && at(TokenKind::Integer, 2) && at(TokenKind::RParen, 3) &&
           at(TokenKind::Ident, 4) && at(TokenKind::Eq, 5);
  }

  BodyBinding body_binding() {
    Span start = peek().span;
    BodyBinding b;
    if (!at(TokenKind::Eq, 1)) b.type = type_name();
    b.name = ident("binding name");
    expect(TokenKind::Eq, "'='");
    b.value = expression();
    b.span = span_from(start);
    return b;
  }

  ForAll forall() {
    expect(TokenKind::KwForall, "FORALL");
    ForAll out;
    expect(TokenKind::LParen, "'('");
    do {
      out.sources.push_back(source());
    } while (accept(TokenKind::Comma));
    expect(TokenKind::RParen, "')'");
    if (accept(TokenKind::KwWhere)) out.where = expression();
    if (accept(TokenKind::KwBody)) {
      expect(TokenKind::LParen, "'('");
      while (!at(TokenKind::RParen)) {
        if (!binding_ahead()) fail({"binding", "')'"});
        out.body.push_back(body_binding());
        if (!accept(TokenKind::Comma)) accept(TokenKind::Semicolon);
      }
      advance();
    }
    expect(TokenKind::KwReturn, "RETURN");
    expect(TokenKind::LParen, "'('");
    do {
      out.returns.push_back(expression());
    } while (accept(TokenKind::Comma));
    expect(TokenKind::RParen, "')'");
    return out;
  }

  // `( Sources..., bindings... )`: returns every alias, then every binding.
  ForAll product_short_form() {
    expect(TokenKind::LParen, "'('");
    ForAll out;
    do {
      if (binding_ahead()) {
        out.body.push_back(body_binding());
      } else {
        if (!out.body.empty()) fail({"binding"});
        out.sources.push_back(source());
      }
    } while (accept(TokenKind::Comma));
    expect(TokenKind::RParen, "')'");
    if (out.sources.empty()) throw Error(ErrorKind::ParseError, "a product needs at least one source", last_->span);
    for (const auto& s : out.sources) {
      out.returns.push_back(Expr{PathExpr{{source_alias(s)}}, s.span});
    }
    for (const auto& b : out.body) out.returns.push_back(Expr{PathExpr{{b.name}}, b.span});
    return out;
  }

  Assignment assignment() {
    const Token& kw = expect(TokenKind::Ident, "Collection");
    if (upper(kw.text) != "COLLECTION") {
      throw Error(ErrorKind::ParseError, "expected Collection, found '" + kw.text + "'", kw.span);
    }
    Assignment out;
    out.name = ident("variable name");
    expect(TokenKind::Eq, "'='");
    if (at(TokenKind::KwForall)) {
      out.value = forall();
    } else if (at(TokenKind::LParen) && !restriction_ahead()) {
      out.value = product_short_form();
    } else if (at(TokenKind::Ident) || at(TokenKind::KwThis) || at(TokenKind::LParen)) {
      out.value = access_path(term(), false);
    } else {
      fail({"access path", "product", "FORALL"});
    }
    return out;
  }

  // --- access paths ---

  bool restriction_ahead() const {
    if (!at(TokenKind::LParen) || !at(TokenKind::Ident, 1)) return false;
    return at(TokenKind::Bar, 2) || (at(TokenKind::Ident, 2) && at(TokenKind::Bar, 3));
  }

  Term term() {
    Span start = peek().span;
    Term t;
    if (accept(TokenKind::LParen)) {
      t.name = ident("collection name");
      if (at(TokenKind::Ident)) t.alias = advance().text;
      if (t.alias == t.name) t.alias.reset();
      expect(TokenKind::Bar, "'|'");
      t.predicate = Box<Expr>(expression());
      expect(TokenKind::RParen, "')'");
    } else if (accept(TokenKind::KwThis)) {
      t.name = "this";
    } else {
      t.name = ident("collection name");
    }
    t.span = span_from(start);
    return t;
  }

  std::string step_name() {
    if (accept(TokenKind::KwParent)) return "parent";
    return ident("dimension name");
  }

  std::vector<std::string> dimension() {
    std::vector<std::string> out{step_name()};
    while (accept(TokenKind::Dot)) out.push_back(step_name());
    return out;
  }

  AccessPath access_path(Term head, bool allow_suffix) {
    AccessPath p;
    Span start = head.span;
    p.head = std::move(head);
    for (;;) {
      Span step_start = peek().span;
      Step s;
      if (accept(TokenKind::Arrow)) {
        s.kind = StepKind::Project;
        s.dimension = dimension();
        expect(TokenKind::Arrow, "'->'");
      } else if (accept(TokenKind::BackArrow)) {
        s.kind = StepKind::Deproject;
        s.dimension = dimension();
        expect(TokenKind::BackArrow, "'<-'");
      } else {
        break;
      }
      if (!at(TokenKind::Ident) && !at(TokenKind::LParen) && !at(TokenKind::KwThis)) fail({"collection name", "'('"});
      s.term = term();
      s.span = span_from(step_start);
      p.steps.push_back(std::move(s));
    }
    if (allow_suffix && !p.steps.empty() && !p.steps.back().term.restricted()) {
      while (accept(TokenKind::Dot)) p.suffix.push_back(step_name());
    }
    p.span = span_from(start);
    return p;
  }

  // --- expressions ---

  Expr expression() { return disjunction(); }

  Expr binary(BinaryOp op, Expr lhs, Expr rhs, const Span& start) {
    Expr e{BinaryExpr{op, Box<Expr>(std::move(lhs)), Box<Expr>(std::move(rhs))}, {}};
    e.span = span_from(start);
    return e;
  }

  Expr disjunction() {
    Span start = peek().span;
    Expr lhs = conjunction();
    while (accept(TokenKind::KwOr)) lhs = binary(BinaryOp::Or, std::move(lhs), conjunction(), start);
    return lhs;
  }

  Expr conjunction() {
    Span start = peek().span;
    Expr lhs = comparison();
    while (accept(TokenKind::KwAnd)) lhs = binary(BinaryOp::And, std::move(lhs), comparison(), start);
    return lhs;
  }

  std::optional<BinaryOp> comparison_op() const {
    switch (peek().kind) {
      case TokenKind::Eq:
      case TokenKind::EqEq: return BinaryOp::Eq;
      case TokenKind::NotEq: return BinaryOp::NotEq;
      case TokenKind::Less: return BinaryOp::Less;
      case TokenKind::LessEq: return BinaryOp::LessEq;
      case TokenKind::Greater: return BinaryOp::Greater;
      case TokenKind::GreaterEq: return BinaryOp::GreaterEq;
      default: return std::nullopt;
    }
  }

  Expr comparison() {
    Span start = peek().span;
    Expr lhs = unary();
    auto op = comparison_op();
    if (!op) return lhs;
    advance();
    Expr rhs = unary();
    auto path = std::get_if<Box<AccessPath>>(&lhs.node);
    if (path && (*path)->suffix.empty() && is_numeric(rhs)) {
      Span span = lhs.span;
      std::vector<Expr> args;
      args.push_back(std::move(lhs));
      lhs = Expr{CallExpr{"SIZE", std::move(args)}, span};
    }
    return binary(*op, std::move(lhs), std::move(rhs), start);
  }

  Expr unary() {
    Span start = peek().span;
    if (accept(TokenKind::KwNot)) {
      Expr e{UnaryExpr{UnaryOp::Not, Box<Expr>(unary())}, {}};
      e.span = span_from(start);
      return e;
    }
    if (at(TokenKind::Minus)) {
      if (at(TokenKind::Integer, 1) || at(TokenKind::Decimal, 1)) {
        Expr e{literal(), {}};
        e.span = span_from(start);
        return e;
      }
      advance();
      Expr e{UnaryExpr{UnaryOp::Negate, Box<Expr>(unary())}, {}};
      e.span = span_from(start);
      return e;
    }
    return postfix();
  }

  Expr postfix() {
    Span start = peek().span;
    if (restriction_ahead()) {
      Expr e{Box<AccessPath>(access_path(term(), true)), {}};
      e.span = span_from(start);
      return e;
    }
    Expr e = primary();
    if (!at(TokenKind::Arrow) && !at(TokenKind::BackArrow)) return e;
    auto path = std::get_if<PathExpr>(&e.node);
    if (!path || path->steps.size() != 1 || path->steps.front() == "parent") {
      throw Error(ErrorKind::ParseError, "expected a collection name before '" + peek().text + "'", peek().span);
    }
    Term head{path->steps.front(), std::nullopt, std::nullopt, e.span};
    Expr out{Box<AccessPath>(access_path(std::move(head), true)), {}};
    out.span = span_from(start);
    return out;
  }

  Expr primary() {
    Span start = peek().span;
    Expr e;
    switch (peek().kind) {
      case TokenKind::Integer:
      case TokenKind::Decimal:
      case TokenKind::Text:
      case TokenKind::KwTrue:
      case TokenKind::KwFalse: e.node = literal(); break;
      case TokenKind::LParen: {
        advance();
        e = expression();
        expect(TokenKind::RParen, "')'");
        e.span = span_from(start);
        return e;
      }
      case TokenKind::Ident:
        if (at(TokenKind::LParen, 1)) {
          CallExpr call;
          call.name = advance().text;
          advance();
          if (!at(TokenKind::RParen)) {
            do {
              call.args.push_back(expression());
            } while (accept(TokenKind::Comma));
          }
          expect(TokenKind::RParen, "')'");
          e.node = std::move(call);
          break;
        }
        [[fallthrough]];
      case TokenKind::KwThis:
      case TokenKind::KwParent: {
        PathExpr p;
        if (accept(TokenKind::KwThis)) {
          p.steps.push_back("this");
        } else {
          p.steps.push_back(step_name());
        }
        while (accept(TokenKind::Dot)) p.steps.push_back(step_name());
        e.node = std::move(p);
        break;
      }
      default: fail({"expression"});
    }
    e.span = span_from(start);
    return e;
  }

  const std::vector<Token>& toks_;
  std::size_t pos_ = 0;
  const Token* last_ = nullptr;
};

}  // namespace

std::vector<Statement> parse(const std::vector<Token>& tokens) { return Parser(tokens).script(); }

std::vector<Statement> parse_script(std::string_view text) { return parse(tokenize(text)); }

Expr parse_expression(std::string_view text) {
  auto tokens = tokenize(text);
  return Parser(tokens).single_expression();
}

}  // namespace coql::query
