#pragma once

#include <string_view>
#include <vector>

#include "coql/query/ast.hpp"
#include "coql/query/lexer.hpp"

namespace coql::query {

/// Parses a whole script. Statements end where the grammar ends them; a `;`
/// after a statement is optional. Throws ParseError naming the expected
/// tokens and the position of the offending one.
std::vector<Statement> parse(const std::vector<Token>& tokens);

/// tokenize + parse.
std::vector<Statement> parse_script(std::string_view text);

/// Parses a single expression (trailing tokens are an error).
Expr parse_expression(std::string_view text);

}  // namespace coql::query
