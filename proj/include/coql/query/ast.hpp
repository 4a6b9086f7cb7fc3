#pragma once

// Syntax tree of CoQL statements. Every node that can be the subject of an
// error message carries its source span. Equality ignores spans, so trees
// parsed from differently formatted text compare equal.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "coql/error.hpp"

namespace coql::query {

/// Heap-allocated value with value semantics, for recursive nodes.
template <class T>
class Box {
 public:
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}  // NOLINT(google-explicit-constructor)
  Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& other) {
    if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;
  ~Box() = default;

  T& operator*() { return *ptr_; }
  const T& operator*() const { return *ptr_; }
  T* operator->() { return ptr_.get(); }
  const T* operator->() const { return ptr_.get(); }

  friend bool operator==(const Box& a, const Box& b) { return *a == *b; }

 private:
  std::unique_ptr<T> ptr_;
};

struct Literal {
  std::variant<std::int64_t, double, std::string, bool> value;

  friend bool operator==(const Literal&, const Literal&) = default;
};

struct IdentityLiteral;

/// One value inside an identity literal: a literal or a nested identity.
struct IdentityAtom {
  std::variant<Literal, Box<IdentityLiteral>> value;

  friend bool operator==(const IdentityAtom&, const IdentityAtom&) = default;
};

/// `<seg/seg/...>`; a segment with several values is written `(a, b)`.
struct IdentityLiteral {
  std::vector<std::vector<IdentityAtom>> segments;

  friend bool operator==(const IdentityLiteral&, const IdentityLiteral&) = default;
};

enum class UnaryOp { Not, Negate };
enum class BinaryOp { Or, And, Eq, NotEq, Less, LessEq, Greater, GreaterEq };

struct Expr;
struct AccessPath;

/// Dotted path such as `parent.address.city`; the first step may be `this`
/// or `parent`.
struct PathExpr {
  std::vector<std::string> steps;

  friend bool operator==(const PathExpr&, const PathExpr&) = default;
};

struct CallExpr {
  std::string name;
  std::vector<Expr> args;

  friend bool operator==(const CallExpr&, const CallExpr&);
};

struct UnaryExpr {
  UnaryOp op;
  Box<Expr> operand;

  friend bool operator==(const UnaryExpr&, const UnaryExpr&);
};

struct BinaryExpr {
  BinaryOp op;
  Box<Expr> lhs;
  Box<Expr> rhs;

  friend bool operator==(const BinaryExpr&, const BinaryExpr&);
};

struct Expr {
  std::variant<Literal, PathExpr, CallExpr, UnaryExpr, BinaryExpr, Box<AccessPath>> node;
  Span span;

  friend bool operator==(const Expr& a, const Expr& b);
};

/// A collection operand: a name (collection, variable, alias or `this`), or a
/// restriction `(Name [alias] | predicate)`.
struct Term {
  std::string name;
  std::optional<std::string> alias;
  std::optional<Box<Expr>> predicate;
  Span span;

  bool restricted() const { return predicate.has_value(); }
  friend bool operator==(const Term& a, const Term& b) {
    return a.name == b.name && a.alias == b.alias && a.predicate == b.predicate;
  }
};

enum class StepKind { Project, Deproject };

/// `-> d -> Term` or `<- f <- Term`. A dimension of {"parent"} is the
/// hierarchical variant.
struct Step {
  StepKind kind = StepKind::Project;
  std::vector<std::string> dimension;
  Term term;
  Span span;

  bool is_parent() const { return dimension.size() == 1 && dimension.front() == "parent"; }
  friend bool operator==(const Step& a, const Step& b) {
    return a.kind == b.kind && a.dimension == b.dimension && a.term == b.term;
  }
};

/// Head term, projection/de-projection steps, and an optional trailing field
/// path (`... <- SavingsAccounts.balance`) that turns the result into values.
struct AccessPath {
  Term head;
  std::vector<Step> steps;
  std::vector<std::string> suffix;
  Span span;

  friend bool operator==(const AccessPath& a, const AccessPath& b) {
    return a.head == b.head && a.steps == b.steps && a.suffix == b.suffix;
  }
};

inline bool operator==(const Expr& a, const Expr& b) { return a.node == b.node; }
inline bool operator==(const CallExpr& a, const CallExpr& b) { return a.name == b.name && a.args == b.args; }
inline bool operator==(const UnaryExpr& a, const UnaryExpr& b) { return a.op == b.op && a.operand == b.operand; }
inline bool operator==(const BinaryExpr& a, const BinaryExpr& b) {
  return a.op == b.op && a.lhs == b.lhs && a.rhs == b.rhs;
}

/// CHAR(n), DOUBLE, INT, Collection, or a concept name. Built-in names are
/// stored upper-case.
struct TypeName {
  std::string name;
  std::optional<std::int64_t> length;

  friend bool operator==(const TypeName&, const TypeName&) = default;
};

struct FieldDecl {
  TypeName type;
  std::string name;
  Span span;

  friend bool operator==(const FieldDecl& a, const FieldDecl& b) { return a.type == b.type && a.name == b.name; }
};

struct ConceptDecl {
  std::string name;
  std::optional<std::string> parent;
  std::vector<FieldDecl> identity;
  std::vector<FieldDecl> entity;

  friend bool operator==(const ConceptDecl&, const ConceptDecl&) = default;
};

struct CreateTable {
  std::string name;
  std::string concept_name;
  std::optional<std::string> parent;
  std::vector<std::pair<std::string, std::string>> bindings;  // field, collection

  friend bool operator==(const CreateTable&, const CreateTable&) = default;
};

struct FieldValue {
  std::string field;
  std::variant<Literal, IdentityLiteral> value;
  Span span;

  friend bool operator==(const FieldValue& a, const FieldValue& b) {
    return a.field == b.field && a.value == b.value;
  }
};

/// INSERT INTO <Collection> [UNDER <identity>] ( field = value, ... )
struct Insert {
  std::string collection;
  std::optional<IdentityLiteral> under;
  std::vector<FieldValue> values;

  friend bool operator==(const Insert&, const Insert&) = default;
};

struct Select {
  std::vector<Expr> columns;
  AccessPath source;
  std::optional<Expr> where;

  friend bool operator==(const Select&, const Select&) = default;
};

struct PathQuery {
  AccessPath path;

  friend bool operator==(const PathQuery&, const PathQuery&) = default;
};

/// `[type] name = expression` inside BODY (or the short product form).
struct BodyBinding {
  std::optional<TypeName> type;
  std::string name;
  Expr value;
  Span span;

  friend bool operator==(const BodyBinding& a, const BodyBinding& b) {
    return a.type == b.type && a.name == b.name && a.value == b.value;
  }
};

/// FORALL (sources) [WHERE p] [BODY (bindings)] RETURN (expressions).
/// A source's alias defaults to its collection name.
struct ForAll {
  std::vector<Term> sources;
  std::optional<Expr> where;
  std::vector<BodyBinding> body;
  std::vector<Expr> returns;

  friend bool operator==(const ForAll&, const ForAll&) = default;
};

inline const std::string& source_alias(const Term& source) { return source.alias ? *source.alias : source.name; }

/// `Collection X = <access path | product>`.
struct Assignment {
  std::string name;
  std::variant<AccessPath, ForAll> value;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct Statement {
  std::variant<ConceptDecl, CreateTable, Insert, Select, PathQuery, ForAll, Assignment> node;
  Span span;

  friend bool operator==(const Statement& a, const Statement& b) { return a.node == b.node; }
};

}  // namespace coql::query
