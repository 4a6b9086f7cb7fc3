#include "coql/error.hpp"

namespace coql {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SecondRoot: return "SecondRoot";
    case ErrorKind::InvalidNode: return "InvalidNode";
    case ErrorKind::InvalidTree: return "InvalidTree";
    case ErrorKind::InvalidLabel: return "InvalidLabel";
    case ErrorKind::CycleDetected: return "CycleDetected";
    case ErrorKind::DuplicateLabel: return "DuplicateLabel";
    case ErrorKind::SyntacticViolation: return "SyntacticViolation";
    case ErrorKind::PrimitiveViolation: return "PrimitiveViolation";
    case ErrorKind::BoundViolation: return "BoundViolation";
    case ErrorKind::NoSuchDimension: return "NoSuchDimension";
    case ErrorKind::PathBudgetExceeded: return "PathBudgetExceeded";
    case ErrorKind::DuplicateConcept: return "DuplicateConcept";
    case ErrorKind::UnknownParent: return "UnknownParent";
    case ErrorKind::UnknownFieldType: return "UnknownFieldType";
    case ErrorKind::InclusionCycle: return "InclusionCycle";
    case ErrorKind::DuplicateField: return "DuplicateField";
    case ErrorKind::MissingIdentity: return "MissingIdentity";
    case ErrorKind::UnknownConcept: return "UnknownConcept";
    case ErrorKind::DuplicateCollection: return "DuplicateCollection";
    case ErrorKind::UnknownCollection: return "UnknownCollection";
    case ErrorKind::BindingMismatch: return "BindingMismatch";
    case ErrorKind::MissingBinding: return "MissingBinding";
    case ErrorKind::MissingParentCollection: return "MissingParentCollection";
    case ErrorKind::DuplicateIdentity: return "DuplicateIdentity";
    case ErrorKind::DanglingReference: return "DanglingReference";
    case ErrorKind::MissingParent: return "MissingParent";
    case ErrorKind::MissingField: return "MissingField";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::SegmentCountMismatch: return "SegmentCountMismatch";
    case ErrorKind::UnknownField: return "UnknownField";
    case ErrorKind::NullParent: return "NullParent";
    case ErrorKind::UnknownDimension: return "UnknownDimension";
    case ErrorKind::NoParentConcept: return "NoParentConcept";
    case ErrorKind::NotAChildCollection: return "NotAChildCollection";
    case ErrorKind::CollectionMismatch: return "CollectionMismatch";
    case ErrorKind::EmptyAggregate: return "EmptyAggregate";
    case ErrorKind::NonNumericField: return "NonNumericField";
    case ErrorKind::LexError: return "LexError";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::TypeCheckError: return "TypeCheckError";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
  }
  return "Unknown";
}

}  // namespace coql
