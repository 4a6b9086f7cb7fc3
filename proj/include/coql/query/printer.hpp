#pragma once

// Canonical text of CoQL syntax trees: one statement per line, each ending in
// ";", upper-case keywords, single spaces, minimal parentheses. Parsing the
// output yields the tree that was printed.

#include <string>
#include <vector>

#include "coql/query/ast.hpp"

namespace coql::query {

std::string pretty_print(const std::vector<Statement>& statements);

std::string to_text(const Statement& statement);
std::string to_text(const Expr& expr);
std::string to_text(const AccessPath& path);
std::string to_text(const Term& term);
std::string to_text(const Literal& literal);
std::string to_text(const IdentityLiteral& identity);
std::string to_text(const TypeName& type);
std::string to_text(BinaryOp op);

}  // namespace coql::query
