#pragma once

// Executes CoQL statements against a store. Declarations, table creation and
// inserts change the store; every query leaves it untouched.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "coql/eval/result_table.hpp"
#include "coql/nav/ops.hpp"
#include "coql/query/ast.hpp"
#include "coql/schema/store.hpp"

namespace coql::eval {

using nav::ItemSet;
using schema::ItemId;

inline constexpr std::size_t kDefaultBudget = 1'000'000;

/// Result of evaluating an expression. `Set.field` yields a value list,
/// which only aggregation functions accept.
using ValueList = std::vector<Value>;
using Datum = std::variant<Value, ItemId, ItemSet, ValueList>;

/// Name bindings visible to an expression: the current item (`this`) of a
/// restriction, FORALL aliases and BODY locals. Lookups fall through to the
/// enclosing scope.
struct Env {
  const Env* outer = nullptr;
  std::optional<ItemId> self;
  std::map<std::string, Datum, std::less<>> names;

  std::optional<ItemId> current_item() const;
  const Datum* find(std::string_view name) const;
};

class Session {
 public:
  using Variable = std::variant<ItemSet, ResultTable>;

  explicit Session(std::size_t budget = kDefaultBudget) : budget_(budget) {}

  /// Runs one statement. Queries and assignments return a table; the other
  /// statements return nothing. Errors carry the span of the failing node.
  std::optional<ResultTable> execute(const query::Statement& statement);

  /// Parses the whole text first, then runs the statements in order.
  std::vector<std::optional<ResultTable>> execute_script(std::string_view text);

  ItemSet eval_access_path(const query::AccessPath& path, const Env& env = {}) const;
  bool eval_predicate(const query::Expr& predicate, ItemId item, const Env& env = {}) const;
  ResultTable eval_forall(const query::ForAll& query, const Env& env = {}) const;
  Datum eval_expression(const query::Expr& expr, const Env& env = {}) const;

  schema::Store& store() { return store_; }
  const schema::Store& store() const { return store_; }

  const std::map<std::string, Variable, std::less<>>& variables() const { return variables_; }

  std::size_t budget() const { return budget_; }
  void set_budget(std::size_t budget) { budget_ = budget; }

 private:
  Datum eval(const query::Expr& expr, const Env& env) const;
  Datum eval_path_expr(const query::PathExpr& path, const Env& env) const;
  Datum eval_call(const query::CallExpr& call, const Env& env) const;
  Datum eval_binary(const query::BinaryExpr& expr, const Env& env) const;
  Datum eval_path_datum(const query::AccessPath& path, const Env& env) const;
  Datum resolve_name(std::string_view name, const Env& env) const;
  ItemSet path_set(const query::AccessPath& path, const Env& env) const;
  ItemSet term_set(const query::Term& term, const Env& env, bool filter = true) const;
  bool truth(const query::Expr& expr, const Env& env) const;
  Value to_value(const Datum& datum, std::string_view what) const;
  void check_budget(std::size_t size) const;
  ResultTable identity_table(const ItemSet& set) const;

  schema::Store store_;
  std::map<std::string, Variable, std::less<>> variables_;
  std::size_t budget_;
};

}  // namespace coql::eval
