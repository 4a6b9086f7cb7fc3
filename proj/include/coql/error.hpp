#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace coql {

/// Position of a construct in CoQL source text. Lines and columns are 1-based.
struct Span {
  std::size_t offset = 0;
  std::size_t length = 0;
  int line = 1;
  int column = 1;
};

enum class ErrorKind {
  // order-core
  SecondRoot,
  InvalidNode,
  InvalidTree,
  InvalidLabel,
  CycleDetected,
  DuplicateLabel,
  SyntacticViolation,
  PrimitiveViolation,
  BoundViolation,
  NoSuchDimension,
  PathBudgetExceeded,
  // schema-store
  DuplicateConcept,
  UnknownParent,
  UnknownFieldType,
  InclusionCycle,
  DuplicateField,
  MissingIdentity,
  UnknownConcept,
  DuplicateCollection,
  UnknownCollection,
  BindingMismatch,
  MissingBinding,
  MissingParentCollection,
  DuplicateIdentity,
  DanglingReference,
  MissingParent,
  MissingField,
  TypeMismatch,
  NotFound,
  SegmentCountMismatch,
  UnknownField,
  NullParent,
  // nav-ops
  UnknownDimension,
  NoParentConcept,
  NotAChildCollection,
  CollectionMismatch,
  EmptyAggregate,
  NonNumericField,
  // query language
  LexError,
  ParseError,
  TypeCheckError,
  BudgetExceeded,
};

std::string_view to_string(ErrorKind kind);

/// True for the kinds raised while reading source text (lexing and parsing).
inline bool is_syntax_error(ErrorKind kind) {
  return kind == ErrorKind::LexError || kind == ErrorKind::ParseError;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::optional<Span> span = std::nullopt)
      : std::runtime_error(message), kind_(kind), span_(span) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::optional<Span>& span() const noexcept { return span_; }

  /// Attaches a span if none is recorded yet.
  void attach_span(const Span& span) {
    if (!span_) span_ = span;
  }

 private:
  ErrorKind kind_;
  std::optional<Span> span_;
};

}  // namespace coql
