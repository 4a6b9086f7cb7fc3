#include "coql/eval/session.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "coql/query/parser.hpp"
#include "coql/query/printer.hpp"

namespace coql::eval {

namespace {

using namespace coql::query;
using schema::ComplexIdentity;

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

Error type_error(const std::string& message) { return Error(ErrorKind::TypeCheckError, message); }

std::string describe(const Datum& d) {
  struct V {
    std::string operator()(const Value& v) const { return type_name(v) + " value"; }
    std::string operator()(ItemId) const { return "item"; }
    std::string operator()(const ItemSet& s) const { return "collection of '" + s.collection + "'"; }
    std::string operator()(const ValueList&) const { return "value list"; }
  };
  return std::visit(V{}, d);
}

Datum from_step(schema::StepResult r) {
  if (auto id = std::get_if<ItemId>(&r)) return *id;
  return std::get<Value>(std::move(r));
}

Value literal_value(const Literal& lit) {
  return std::visit([](const auto& v) { return Value(v); }, lit.value);
}

ComplexIdentity identity_value(const IdentityLiteral& lit) {
  ComplexIdentity out;
  for (const auto& seg : lit.segments) {
    schema::Segment s;
    for (const auto& atom : seg) {
      if (auto l = std::get_if<Literal>(&atom.value)) {
        s.push_back(literal_value(*l));
      } else {
        s.push_back(identity_value(*std::get<Box<IdentityLiteral>>(atom.value)));
      }
    }
    out.segments.push_back(std::move(s));
  }
  return out;
}

schema::FieldType field_type(const TypeName& t) {
  if (t.name == "CHAR") return schema::FieldType::char_type(static_cast<std::size_t>(t.length.value_or(0)));
  if (t.name == "DOUBLE") return schema::FieldType::double_type();
  if (t.name == "INT") return schema::FieldType::int_type();
  if (t.name == "Collection") throw type_error("a concept field cannot hold a collection");
  return schema::FieldType::concept_type(t.name);
}

bool ordering(BinaryOp op) { return op != BinaryOp::Eq && op != BinaryOp::NotEq; }

template <class T>
bool apply(BinaryOp op, const T& a, const T& b) {
  switch (op) {
    case BinaryOp::Eq: return a == b;
    case BinaryOp::NotEq: return a != b;
    case BinaryOp::Less: return a < b;
    case BinaryOp::LessEq: return a <= b;
    case BinaryOp::Greater: return a > b;
    case BinaryOp::GreaterEq: return a >= b;
    default: break;
  }
  return false;
}

bool compare_values(const Value& a, const Value& b, BinaryOp op) {
  if (a.is_number() && b.is_number()) {
    auto ai = std::get_if<std::int64_t>(&a);
    auto bi = std::get_if<std::int64_t>(&b);
    if (ai && bi) return apply(op, *ai, *bi);
    return apply(op, a.as_double(), b.as_double());
  }
  auto as = std::get_if<std::string>(&a);
  auto bs = std::get_if<std::string>(&b);
  if (as && bs) return apply(op, schema::rtrim(*as), schema::rtrim(*bs));
  bool same_kind = a.index() == b.index();
  if (same_kind && !ordering(op)) return op == BinaryOp::Eq ? a == b : !(a == b);
  if (same_kind) throw type_error("values of type " + type_name(a) + " have no order");
  throw type_error("cannot compare " + type_name(a) + " with " + type_name(b));
}

}  // namespace

std::optional<ItemId> Env::current_item() const {
  for (const Env* e = this; e; e = e->outer) {
    if (e->self) return e->self;
  }
  return std::nullopt;
}

const Datum* Env::find(std::string_view name) const {
  for (const Env* e = this; e; e = e->outer) {
    if (auto it = e->names.find(name); it != e->names.end()) return &it->second;
  }
  return nullptr;
}

void Session::check_budget(std::size_t size) const {
  if (size > budget_) {
    throw Error(ErrorKind::BudgetExceeded, "intermediate result of " + std::to_string(size) +
                                               " items exceeds the evaluation budget of " + std::to_string(budget_));
  }
}

// --- statements ---

std::optional<ResultTable> Session::execute(const Statement& statement) {
  struct Visitor {
    Session& s;

    std::optional<ResultTable> operator()(const ConceptDecl& d) const {
      schema::Concept c;
      c.name = d.name;
      c.parent = d.parent;
      for (const auto& f : d.identity) c.identity.push_back({f.name, schema::FieldKind::Identity, field_type(f.type)});
      for (const auto& f : d.entity) c.entity.push_back({f.name, schema::FieldKind::Entity, field_type(f.type)});
      s.store_.declare_concept(std::move(c));
      return std::nullopt;
    }

    std::optional<ResultTable> operator()(const CreateTable& t) const {
      if (s.variables_.count(t.name)) throw type_error("'" + t.name + "' is already a query variable");
      schema::Collection c{t.name, t.concept_name, t.parent, {}};
      for (const auto& [field, target] : t.bindings) {
        if (!c.bindings.emplace(field, target).second) throw type_error("field '" + field + "' is bound twice");
      }
      s.store_.create_collection(std::move(c));
      return std::nullopt;
    }

    std::optional<ResultTable> operator()(const Insert& ins) const {
      std::map<std::string, Value> values;
      for (const auto& fv : ins.values) {
        Value v = std::holds_alternative<Literal>(fv.value) ? literal_value(std::get<Literal>(fv.value))
                                                            : Value(identity_value(std::get<IdentityLiteral>(fv.value)));
        if (!values.emplace(fv.field, std::move(v)).second) {
          throw Error(ErrorKind::DuplicateField, "field '" + fv.field + "' is given twice", fv.span);
        }
      }
      std::optional<ComplexIdentity> parent;
      if (ins.under) parent = identity_value(*ins.under);
      s.store_.insert_item(ins.collection, parent, values);
      return std::nullopt;
    }

    std::optional<ResultTable> operator()(const Select& q) const {
      ItemSet source = s.path_set(q.source, {});
      ResultTable table;
      for (const auto& col : q.columns) table.columns.push_back({to_text(col), {}});
      for (auto id : source.items) {
        Env env{nullptr, id, {}};
        if (q.where && !s.truth(*q.where, env)) continue;
        std::vector<Value> row;
        for (const auto& col : q.columns) row.push_back(s.to_value(s.eval(col, env), to_text(col)));
        table.rows.push_back(std::move(row));
      }
      table.finalize();
      return table;
    }

    std::optional<ResultTable> operator()(const PathQuery& q) const {
      return s.identity_table(s.path_set(q.path, {}));
    }

    std::optional<ResultTable> operator()(const ForAll& q) const { return s.eval_forall(q, {}); }

    std::optional<ResultTable> operator()(const Assignment& a) const {
      if (s.store_.has_collection(a.name)) {
        throw type_error("variable '" + a.name + "' would shadow the collection of the same name");
      }
      if (auto path = std::get_if<AccessPath>(&a.value)) {
        ItemSet set = s.path_set(*path, {});
        auto table = s.identity_table(set);
        s.variables_.insert_or_assign(a.name, std::move(set));
        return table;
      }
      ResultTable table = s.eval_forall(std::get<ForAll>(a.value), {});
      s.variables_.insert_or_assign(a.name, table);
      return table;
    }
  };

  try {
    return std::visit(Visitor{*this}, statement.node);
  } catch (Error& e) {
    e.attach_span(statement.span);
    throw;
  }
}

std::vector<std::optional<ResultTable>> Session::execute_script(std::string_view text) {
  auto statements = parse_script(text);
  std::vector<std::optional<ResultTable>> out;
  out.reserve(statements.size());
  for (const auto& st : statements) out.push_back(execute(st));
  return out;
}

ResultTable Session::identity_table(const ItemSet& set) const {
  ResultTable table;
  table.columns.push_back({"identity", "IDENTITY"});
  for (auto id : set.items) table.rows.push_back({store_.identity(id)});
  return table;
}

// --- collections ---

ItemSet Session::term_set(const Term& term, const Env& env, bool filter) const {
  try {
    ItemSet base;
    if (term.name == "this") {
      auto self = env.current_item();
      if (!self) throw type_error("'this' is only defined inside a restriction");
      base = ItemSet{store_.item(*self).collection, {*self}};
    } else if (const Datum* d = env.find(term.name)) {
      if (auto id = std::get_if<ItemId>(d)) {
        base = ItemSet{store_.item(*id).collection, {*id}};
      } else if (auto set = std::get_if<ItemSet>(d)) {
        base = *set;
      } else {
        throw type_error("'" + term.name + "' is a " + describe(*d) + ", not a collection");
      }
    } else if (auto var = variables_.find(term.name); var != variables_.end()) {
      auto set = std::get_if<ItemSet>(&var->second);
      if (!set) throw type_error("'" + term.name + "' holds a product table and cannot be navigated");
      base = *set;
    } else if (store_.has_collection(term.name)) {
      base = ItemSet::all(store_, term.name);
    } else {
      throw Error(ErrorKind::UnknownCollection, "unknown collection '" + term.name + "'");
    }
    check_budget(base.size());
    if (!term.restricted() || !filter) return base;
    return nav::restrict(base, [&](ItemId id) {
      Env inner{&env, id, {}};
      if (term.alias) inner.names.emplace(*term.alias, id);
      return truth(**term.predicate, inner);
    });
  } catch (Error& e) {
    e.attach_span(term.span);
    throw;
  }
}

ItemSet Session::path_set(const AccessPath& path, const Env& env) const {
  ItemSet current = term_set(path.head, env);
  for (const auto& step : path.steps) {
    try {
      // Nothing left to navigate from: skip the restriction, keep the checks.
      ItemSet other = term_set(step.term, env, !current.empty());
      if (step.kind == StepKind::Project) {
        current = nav::project(store_, current, order::ComplexDimension{step.dimension}, other);
      } else if (step.is_parent()) {
        current = nav::deproject_children(store_, current, other);
      } else if (step.dimension.size() == 1) {
        current = nav::deproject(store_, current, step.dimension.front(), other);
      } else {
        order::ComplexDimension dim{step.dimension};
        auto target = nav::dimension_target(store_, other.collection, dim);
        if (target != current.collection) {
          throw Error(ErrorKind::UnknownDimension, "'" + dim.text() + "' of '" + other.collection +
                                                       "' does not lead to '" + current.collection + "'");
        }
        current = nav::restrict(other, [&](ItemId id) {
          auto up = nav::project(store_, ItemSet{other.collection, {id}}, dim);
          return !up.items.empty() && current.contains(up.items.front());
        });
      }
      check_budget(current.size());
    } catch (Error& e) {
      e.attach_span(step.span);
      throw;
    }
  }
  return current;
}

ItemSet Session::eval_access_path(const AccessPath& path, const Env& env) const {
  if (!path.suffix.empty()) throw Error(ErrorKind::TypeCheckError, "field suffix yields values, not items", path.span);
  return path_set(path, env);
}

// --- expressions ---

bool Session::eval_predicate(const Expr& predicate, ItemId item, const Env& env) const {
  Env inner{&env, item, {}};
  return truth(predicate, inner);
}

Datum Session::eval_expression(const Expr& expr, const Env& env) const { return eval(expr, env); }

bool Session::truth(const Expr& expr, const Env& env) const {
  Datum d = eval(expr, env);
  auto v = std::get_if<Value>(&d);
  auto b = v ? std::get_if<bool>(v) : nullptr;
  if (!b) throw Error(ErrorKind::TypeCheckError, "condition yields a " + describe(d) + ", not a boolean", expr.span);
  return *b;
}

Value Session::to_value(const Datum& datum, std::string_view what) const {
  if (auto v = std::get_if<Value>(&datum)) return *v;
  if (auto id = std::get_if<ItemId>(&datum)) return store_.identity(*id);
  throw type_error("'" + std::string(what) + "' is a " + describe(datum) + "; only values and items can be returned");
}

Datum Session::eval(const Expr& expr, const Env& env) const {
  struct Visitor {
    const Session& s;
    const Env& env;

    Datum operator()(const Literal& l) const { return literal_value(l); }
    Datum operator()(const PathExpr& p) const { return s.eval_path_expr(p, env); }
    Datum operator()(const CallExpr& c) const { return s.eval_call(c, env); }
    Datum operator()(const UnaryExpr& u) const {
      if (u.op == UnaryOp::Not) return Value(!s.truth(*u.operand, env));
      Datum d = s.eval(*u.operand, env);
      auto v = std::get_if<Value>(&d);
      if (v && std::holds_alternative<std::int64_t>(*v)) return Value(-std::get<std::int64_t>(*v));
      if (v && std::holds_alternative<double>(*v)) return Value(-std::get<double>(*v));
      throw type_error("cannot negate a " + describe(d));
    }
    Datum operator()(const BinaryExpr& b) const { return s.eval_binary(b, env); }
    Datum operator()(const Box<AccessPath>& p) const { return s.eval_path_datum(*p, env); }
  };
  try {
    return std::visit(Visitor{*this, env}, expr.node);
  } catch (Error& e) {
    e.attach_span(expr.span);
    throw;
  }
}

Datum Session::eval_path_datum(const AccessPath& path, const Env& env) const {
  ItemSet set = path_set(path, env);
  if (path.suffix.empty()) return set;
  std::string field;
  for (const auto& f : path.suffix) field += (field.empty() ? "" : ".") + f;
  ValueList out;
  out.reserve(set.size());
  for (auto id : set.items) out.push_back(store_.field_path_value(id, field));
  return out;
}

Datum Session::resolve_name(std::string_view name, const Env& env) const {
  if (auto self = env.current_item()) {
    try {
      return from_step(store_.step(*self, name));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::UnknownField) throw;
    }
  }
  if (const Datum* d = env.find(name)) return *d;
  if (auto var = variables_.find(name); var != variables_.end()) {
    if (auto set = std::get_if<ItemSet>(&var->second)) return *set;
    throw type_error("'" + std::string(name) + "' holds a product table and cannot be used in an expression");
  }
  if (store_.has_collection(name)) return ItemSet::all(store_, name);
  throw type_error("unknown name '" + std::string(name) + "'");
}

Datum Session::eval_path_expr(const PathExpr& path, const Env& env) const {
  const auto& first = path.steps.front();
  Datum current;
  if (first == "this" || first == "parent") {
    auto self = env.current_item();
    if (!self) throw type_error("'" + first + "' is only defined inside a restriction");
    current = first == "this" ? Datum(*self) : from_step(store_.step(*self, "parent"));
  } else {
    current = resolve_name(first, env);
  }
  for (std::size_t i = 1; i < path.steps.size(); ++i) {
    const auto& step = path.steps[i];
    if (auto id = std::get_if<ItemId>(&current)) {
      current = from_step(store_.step(*id, step));
    } else if (auto set = std::get_if<ItemSet>(&current)) {
      std::string rest;
      for (std::size_t k = i; k < path.steps.size(); ++k) rest += (rest.empty() ? "" : ".") + path.steps[k];
      ValueList values;
      values.reserve(set->size());
      for (auto member : set->items) values.push_back(store_.field_path_value(member, rest));
      return values;
    } else {
      throw type_error("cannot take '" + step + "' of a " + describe(current));
    }
  }
  return current;
}

Datum Session::eval_call(const CallExpr& call, const Env& env) const {
  auto fn = nav::parse_aggregate(call.name);
  if (!fn) throw type_error("unknown function '" + call.name + "'");
  if (call.args.size() != 1) throw type_error(upper(call.name) + " takes exactly one argument");
  Datum arg = eval(call.args.front(), env);
  if (auto set = std::get_if<ItemSet>(&arg)) {
    if (*fn == nav::Aggregate::Size) return Value(static_cast<std::int64_t>(set->size()));
    throw type_error(std::string(nav::to_string(*fn)) + " needs values; select a field with '" +
                     set->collection + ".<field>'");
  }
  if (auto values = std::get_if<ValueList>(&arg)) return nav::aggregate_values(*fn, *values);
  throw type_error(std::string(nav::to_string(*fn)) + " expects a collection, got a " + describe(arg));
}

Datum Session::eval_binary(const BinaryExpr& expr, const Env& env) const {
  if (expr.op == BinaryOp::And) return Value(truth(*expr.lhs, env) && truth(*expr.rhs, env));
  if (expr.op == BinaryOp::Or) return Value(truth(*expr.lhs, env) || truth(*expr.rhs, env));

  Datum lhs = eval(*expr.lhs, env);
  Datum rhs = eval(*expr.rhs, env);
  auto size_of = [](Datum& d, const Datum& other) {
    auto set = std::get_if<ItemSet>(&d);
    auto v = std::get_if<Value>(&other);
    if (set && v && v->is_number()) d = Value(static_cast<std::int64_t>(set->size()));
  };
  size_of(lhs, rhs);
  size_of(rhs, lhs);

  auto lid = std::get_if<ItemId>(&lhs);
  auto rid = std::get_if<ItemId>(&rhs);
  if (lid && rid) {
    if (ordering(expr.op)) throw type_error("items have no order");
    return Value(expr.op == BinaryOp::Eq ? *lid == *rid : *lid != *rid);
  }
  if (lid) lhs = Value(store_.identity(*lid));
  if (rid) rhs = Value(store_.identity(*rid));
  auto lv = std::get_if<Value>(&lhs);
  auto rv = std::get_if<Value>(&rhs);
  if (!lv || !rv) throw type_error("cannot compare a " + describe(lhs) + " with a " + describe(rhs));
  return Value(compare_values(*lv, *rv, expr.op));
}

// --- products ---

ResultTable Session::eval_forall(const ForAll& q, const Env& env) const {
  if (q.returns.empty()) throw type_error("RETURN needs at least one expression");
  std::set<std::string> aliases;
  std::vector<ItemSet> sets;
  for (const auto& src : q.sources) {
    if (!aliases.insert(source_alias(src)).second) {
      throw Error(ErrorKind::TypeCheckError, "alias '" + source_alias(src) + "' is used twice", src.span);
    }
    sets.push_back(term_set(src, env));
  }
  nav::ProductSet cells = nav::product(sets, budget_);

  ResultTable table;
  for (const auto& r : q.returns) table.columns.push_back({to_text(r), {}});
  for (const auto& cell : cells.cells) {
    Env scope{&env, std::nullopt, {}};
    for (std::size_t k = 0; k < cell.size(); ++k) scope.names.insert_or_assign(source_alias(q.sources[k]), cell[k]);
    if (q.where && !truth(*q.where, scope)) continue;
    for (const auto& b : q.body) {
      try {
        Datum d = eval(b.value, scope);
        if (std::holds_alternative<ValueList>(d)) throw type_error("a value list can only be aggregated");
        if (b.type) {
          const auto& t = b.type->name;
          auto v = std::get_if<Value>(&d);
          if (t == "Collection") {
            if (!std::holds_alternative<ItemSet>(d)) throw type_error("'" + b.name + "' expects a collection");
          } else if (t == "DOUBLE") {
            if (!v || !v->is_number()) throw type_error("'" + b.name + "' expects a number");
            d = Value(v->as_double());
          } else if (t == "INT") {
            if (!v || !std::holds_alternative<std::int64_t>(*v)) throw type_error("'" + b.name + "' expects an INT");
          } else if (t == "CHAR") {
            auto str = v ? std::get_if<std::string>(v) : nullptr;
            if (!str || schema::rtrim(*str).size() > static_cast<std::size_t>(b.type->length.value_or(0))) {
              throw type_error("'" + b.name + "' expects " + to_text(*b.type));
            }
          } else {
            auto id = std::get_if<ItemId>(&d);
            if (!id || store_.concept_of_collection(store_.item(*id).collection).name != t) {
              throw type_error("'" + b.name + "' expects an item of concept '" + t + "'");
            }
          }
        }
        scope.names.insert_or_assign(b.name, std::move(d));
      } catch (Error& e) {
        e.attach_span(b.span);
        throw;
      }
    }
    std::vector<Value> row;
    row.reserve(q.returns.size());
    for (const auto& r : q.returns) {
      try {
        row.push_back(to_value(eval(r, scope), to_text(r)));
      } catch (Error& e) {
        e.attach_span(r.span);
        throw;
      }
    }
    table.rows.push_back(std::move(row));
  }
  table.finalize();
  return table;
}

}  // namespace coql::eval
