#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "coql/cli/render.hpp"
#include "coql/error.hpp"
#include "coql/eval/session.hpp"

namespace coql::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitQueryError = 1;
inline constexpr int kExitSyntaxError = 2;

struct RunOptions {
  Format format = Format::Table;
  std::size_t budget = eval::kDefaultBudget;
  bool trace = false;  // echo each statement to the error stream
};

/// `file:line:col: error: Kind: message`.
std::string format_error(const Error& error, std::string_view source_name);

/// 2 for lexing and parsing errors, 1 for everything else.
int exit_code(const Error& error);

/// Parses all of `text`, then executes it statement by statement, printing
/// every result table. Stops at the first error.
int run_source(eval::Session& session, std::string_view text, std::string_view source_name,
               const RunOptions& options, std::ostream& out, std::ostream& err);

int run_script(const std::string& path, const RunOptions& options, std::ostream& out, std::ostream& err);

/// Writes the primitive table of the data-level model as CSV. The model is
/// built by `from_script` when given, otherwise it is empty.
int export_primitive(const std::string& csv_path, const std::optional<std::string>& from_script,
                     const RunOptions& options, std::ostream& err);

class Repl {
 public:
  Repl(eval::Session& session, RunOptions options) : session_(session), options_(options) {}

  /// Reads until end of input or `:quit`. A statement is submitted once its
  /// parentheses balance and it ends with `;`, or at a blank line.
  int run(std::istream& in, std::ostream& out);

 private:
  void submit(const std::string& text, std::ostream& out);
  bool meta_command(const std::string& line, std::ostream& out);

  eval::Session& session_;
  RunOptions options_;
};

}  // namespace coql::cli
