#include <charconv>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "coql/cli/driver.hpp"

namespace {

std::optional<std::size_t> parse_budget(const std::string& text) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value == 0) return std::nullopt;
  return value;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CoQL: concept-oriented query engine"};
  std::string run_path;
  std::string export_path;
  std::string from_path;
  std::string format = "table";
  std::string budget_text;
  bool repl = false;
  bool trace = false;

  auto* run_opt = app.add_option("--run", run_path, "Execute a CoQL script");
  auto* repl_opt = app.add_flag("--repl", repl, "Interactive session");
  auto* export_opt = app.add_option("--export-primitive", export_path, "Write the primitive table as CSV");
  app.add_option("--from", from_path, "Script that builds the model for --export-primitive")->needs(export_opt);
  app.add_option("--format", format, "Result format")->check(CLI::IsMember({"table", "csv"}));
  app.add_option("--budget", budget_text, "Cap on intermediate result sizes (also COQL_BUDGET)");
  app.add_flag("--trace", trace, "Echo statements to stderr");
  run_opt->excludes(repl_opt)->excludes(export_opt);
  repl_opt->excludes(export_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : coql::cli::kExitSyntaxError;
  }
  if (run_opt->count() + repl_opt->count() + export_opt->count() != 1) {
    std::cerr << "coql: choose exactly one of --run, --repl, --export-primitive\n" << app.help();
    return coql::cli::kExitSyntaxError;
  }

  coql::cli::RunOptions options;
  options.format = format == "csv" ? coql::cli::Format::Csv : coql::cli::Format::Table;
  options.trace = trace;
  if (budget_text.empty()) {
    if (const char* env = std::getenv("COQL_BUDGET")) budget_text = env;
  }
  if (!budget_text.empty()) {
    auto budget = parse_budget(budget_text);
    if (!budget) {
      std::cerr << "coql: invalid budget '" << budget_text << "'\n";
      return coql::cli::kExitSyntaxError;
    }
    options.budget = *budget;
  }

  if (!run_path.empty() || run_opt->count()) return coql::cli::run_script(run_path, options, std::cout, std::cerr);
  if (export_opt->count()) {
    std::optional<std::string> from;
    if (!from_path.empty()) from = from_path;
    return coql::cli::export_primitive(export_path, from, options, std::cerr);
  }
  coql::eval::Session session(options.budget);
  return coql::cli::Repl(session, options).run(std::cin, std::cout);
}
