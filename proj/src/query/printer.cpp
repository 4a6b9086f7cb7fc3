#include "coql/query/printer.hpp"

#include <charconv>

namespace coql::query {

namespace {

enum Level { kOr = 1, kAnd = 2, kCompare = 3, kUnary = 4, kPrimary = 5 };

int level(const Expr& e) {
  if (auto b = std::get_if<BinaryExpr>(&e.node)) {
    if (b->op == BinaryOp::Or) return kOr;
    if (b->op == BinaryOp::And) return kAnd;
    return kCompare;
  }
  if (std::holds_alternative<UnaryExpr>(e.node)) return kUnary;
  // A negative number reads as a unary minus applied to a literal.
  if (auto lit = std::get_if<Literal>(&e.node)) {
    if (auto i = std::get_if<std::int64_t>(&lit->value); i && *i < 0) return kUnary;
    if (auto d = std::get_if<double>(&lit->value); d && *d < 0) return kUnary;
  }
  return kPrimary;
}

bool numeric_literal(const Expr& e) {
  auto lit = std::get_if<Literal>(&e.node);
  return lit && (std::holds_alternative<std::int64_t>(lit->value) || std::holds_alternative<double>(lit->value));
}

std::string wrapped(const Expr& e, int min_level) {
  auto text = to_text(e);
  return level(e) < min_level ? "(" + text + ")" : text;
}

std::string join_steps(const std::vector<std::string>& steps) {
  std::string out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i) out += '.';
    out += steps[i];
  }
  return out;
}

template <class T, class F>
std::string join(const std::vector<T>& items, F&& fn) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += fn(items[i]);
  }
  return out;
}

std::string field_list(const std::vector<FieldDecl>& fields) {
  return join(fields, [](const FieldDecl& f) { return to_text(f.type) + " " + f.name; });
}

std::string atom_text(const IdentityAtom& atom) {
  if (auto lit = std::get_if<Literal>(&atom.value)) return to_text(*lit);
  return to_text(*std::get<Box<IdentityLiteral>>(atom.value));
}

std::string forall_text(const ForAll& q) {
  std::string out = "FORALL (" + join(q.sources, [](const Term& t) { return to_text(t); }) + ")";
  if (q.where) out += " WHERE " + to_text(*q.where);
  if (!q.body.empty()) {
    out += " BODY (" + join(q.body, [](const BodyBinding& b) {
      std::string text = b.type ? to_text(*b.type) + " " : "";
      return text + b.name + " = " + to_text(b.value);
    }) + ")";
  }
  out += " RETURN (" + join(q.returns, [](const Expr& e) { return to_text(e); }) + ")";
  return out;
}

struct StatementPrinter {
  std::string operator()(const ConceptDecl& c) const {
    std::string out = "CONCEPT " + c.name;
    if (c.parent) out += " IN " + *c.parent;
    if (!c.identity.empty()) out += " IDENTITY " + field_list(c.identity);
    if (!c.entity.empty()) out += " ENTITY " + field_list(c.entity);
    return out;
  }
  std::string operator()(const CreateTable& c) const {
    std::string out = "CREATE TABLE " + c.name + " CONCEPT " + c.concept_name;
    if (c.parent) out += " IN " + *c.parent;
    if (!c.bindings.empty()) {
      out += " " + join(c.bindings, [](const auto& b) { return b.first + " = " + b.second; });
    }
    return out;
  }
  std::string operator()(const Insert& i) const {
    std::string out = "INSERT INTO " + i.collection;
    if (i.under) out += " UNDER " + to_text(*i.under);
    out += " (" + join(i.values, [](const FieldValue& fv) {
      std::string v = std::visit([](const auto& x) { return to_text(x); }, fv.value);
      return fv.field + " = " + v;
    }) + ")";
    return out;
  }
  std::string operator()(const Select& s) const {
    std::string out = "SELECT " + join(s.columns, [](const Expr& e) { return to_text(e); });
    out += " FROM " + to_text(s.source);
    if (s.where) out += " WHERE " + to_text(*s.where);
    return out;
  }
  std::string operator()(const PathQuery& q) const { return to_text(q.path); }
  std::string operator()(const ForAll& q) const { return forall_text(q); }
  std::string operator()(const Assignment& a) const {
    std::string value = std::holds_alternative<ForAll>(a.value) ? forall_text(std::get<ForAll>(a.value))
                                                                : to_text(std::get<AccessPath>(a.value));
    return "Collection " + a.name + " = " + value;
  }
};

struct ExprPrinter {
  std::string operator()(const Literal& l) const { return to_text(l); }
  std::string operator()(const PathExpr& p) const { return join_steps(p.steps); }
  std::string operator()(const CallExpr& c) const {
    return c.name + "(" + join(c.args, [](const Expr& e) { return to_text(e); }) + ")";
  }
  std::string operator()(const UnaryExpr& u) const {
    if (u.op == UnaryOp::Not) return "NOT " + wrapped(*u.operand, kUnary);
    if (numeric_literal(*u.operand)) return "-(" + to_text(*u.operand) + ")";
    return "-" + wrapped(*u.operand, kUnary);
  }
  std::string operator()(const BinaryExpr& b) const {
    int lv = b.op == BinaryOp::Or ? kOr : b.op == BinaryOp::And ? kAnd : kCompare;
    // Comparisons do not chain; AND/OR associate to the left.
    int lhs_min = lv == kCompare ? kUnary : lv;
    return wrapped(*b.lhs, lhs_min) + " " + to_text(b.op) + " " + wrapped(*b.rhs, lv + 1);
  }
  std::string operator()(const Box<AccessPath>& p) const { return to_text(*p); }
};

}  // namespace

std::string to_text(BinaryOp op) {
  switch (op) {
    case BinaryOp::Or: return "OR";
    case BinaryOp::And: return "AND";
    case BinaryOp::Eq: return "=";
    case BinaryOp::NotEq: return "!=";
    case BinaryOp::Less: return "<";
    case BinaryOp::LessEq: return "<=";
    case BinaryOp::Greater: return ">";
    case BinaryOp::GreaterEq: return ">=";
  }
  return "?";
}

std::string to_text(const Literal& literal) {
  struct V {
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const {
      char buf[64];
      auto res = std::to_chars(buf, buf + sizeof buf, v);
      std::string s(buf, res.ptr);
      if (s.find_first_of(".e") == std::string::npos) s += ".0";
      return s;
    }
    std::string operator()(const std::string& v) const {
      std::string out = "'";
      for (char c : v) {
        if (c == '\'') out += '\'';
        out += c;
      }
      return out + "'";
    }
    std::string operator()(bool v) const { return v ? "TRUE" : "FALSE"; }
  };
  return std::visit(V{}, literal.value);
}

std::string to_text(const IdentityLiteral& identity) {
  std::string out = "<";
  for (std::size_t i = 0; i < identity.segments.size(); ++i) {
    if (i) out += "/";
    const auto& seg = identity.segments[i];
    if (seg.size() == 1) {
      out += atom_text(seg.front());
    } else {
      out += "(" + join(seg, atom_text) + ")";
    }
  }
  // "<-" would lex as an arrow.
  if (out.size() > 1 && out[1] == '-') out.insert(1, " ");
  return out + ">";
}

std::string to_text(const TypeName& type) {
  if (type.length) return type.name + "(" + std::to_string(*type.length) + ")";
  return type.name;
}

std::string to_text(const Term& term) {
  std::string out = term.name;
  if (term.alias) out += " " + *term.alias;
  if (term.predicate) return "(" + out + " | " + to_text(**term.predicate) + ")";
  return out;
}

std::string to_text(const AccessPath& path) {
  std::string out = to_text(path.head);
  for (const auto& s : path.steps) {
    const char* arrow = s.kind == StepKind::Project ? "->" : "<-";
    out += std::string(" ") + arrow + " " + join_steps(s.dimension) + " " + arrow + " " + to_text(s.term);
  }
  for (const auto& f : path.suffix) out += "." + f;
  return out;
}

std::string to_text(const Expr& expr) { return std::visit(ExprPrinter{}, expr.node); }

std::string to_text(const Statement& statement) { return std::visit(StatementPrinter{}, statement.node); }

std::string pretty_print(const std::vector<Statement>& statements) {
  std::string out;
  for (const auto& s : statements) out += to_text(s) + ";\n";
  return out;
}

}  // namespace coql::query
