#include "coql/cli/driver.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "coql/order/primitive_csv.hpp"
#include "coql/query/parser.hpp"
#include "coql/query/printer.hpp"

namespace coql::cli {

namespace {

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

// Parenthesis depth outside text literals and `//` comments.
int depth(std::string_view text) {
  int d = 0;
  bool in_text = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_text) {
      if (c == '\'') in_text = false;
      continue;
    }
    if (c == '\'') {
      in_text = true;
    } else if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (c == '(') {
      ++d;
    } else if (c == ')') {
      --d;
    }
  }
  return d;
}

// Last line with its comment removed, to see whether it ends in ';'.
bool ends_statement(std::string_view buffer) {
  std::string text = trim(buffer);
  auto nl = text.rfind('\n');
  std::string last = nl == std::string::npos ? text : text.substr(nl + 1);
  if (auto c = last.find("//"); c != std::string::npos && last.find('\'') == std::string::npos) last.erase(c);
  last = trim(last);
  return !last.empty() && last.back() == ';';
}

}  // namespace

std::string format_error(const Error& error, std::string_view source_name) {
  std::string out(source_name);
  if (error.span()) out += ":" + std::to_string(error.span()->line) + ":" + std::to_string(error.span()->column);
  out += ": error: ";
  out += to_string(error.kind());
  out += ": ";
  out += error.what();
  return out;
}

int exit_code(const Error& error) { return is_syntax_error(error.kind()) ? kExitSyntaxError : kExitQueryError; }

int run_source(eval::Session& session, std::string_view text, std::string_view source_name,
               const RunOptions& options, std::ostream& out, std::ostream& err) {
  session.set_budget(options.budget);
  try {
    auto statements = query::parse_script(text);
    bool first = true;
    for (const auto& st : statements) {
      if (options.trace) err << "-- " << query::to_text(st) << ";\n";
      auto result = session.execute(st);
      if (!result) continue;
      if (!first) out << '\n';
      first = false;
      render(*result, options.format, out);
    }
  } catch (const Error& e) {
    out.flush();
    err << format_error(e, source_name) << '\n';
    return exit_code(e);
  }
  return kExitOk;
}

int run_script(const std::string& path, const RunOptions& options, std::ostream& out, std::ostream& err) {
  auto text = read_file(path);
  if (!text) {
    err << path << ": error: cannot open script file\n";
    return kExitSyntaxError;
  }
  eval::Session session(options.budget);
  return run_source(session, *text, path, options, out, err);
}

int export_primitive(const std::string& csv_path, const std::optional<std::string>& from_script,
                     const RunOptions& options, std::ostream& err) {
  eval::Session session(options.budget);
  if (from_script) {
    auto text = read_file(*from_script);
    if (!text) {
      err << *from_script << ": error: cannot open script file\n";
      return kExitSyntaxError;
    }
    std::ostringstream discard;
    int rc = run_source(session, *text, *from_script, options, discard, err);
    if (rc != kExitOk) return rc;
  }
  std::ofstream out(csv_path, std::ios::binary | std::ios::trunc);
  if (!out) {
    err << csv_path << ": error: cannot write file\n";
    return kExitQueryError;
  }
  try {
    order::write_primitive_csv(session.store().data_order(), out);
  } catch (const Error& e) {
    err << format_error(e, csv_path) << '\n';
    return exit_code(e);
  }
  out.flush();
  if (!out) {
    err << csv_path << ": error: write failed\n";
    return kExitQueryError;
  }
  return kExitOk;
}

int Repl::run(std::istream& in, std::ostream& out) {
  std::string buffer;
  std::string line;
  out << "coql> " << std::flush;
  while (std::getline(in, line)) {
    std::string stripped = trim(line);
    if (buffer.empty()) {
      if (stripped.empty()) {
        out << "coql> " << std::flush;
        continue;
      }
      if (stripped.front() == ':') {
        if (!meta_command(stripped, out)) return kExitOk;
        out << "coql> " << std::flush;
        continue;
      }
    }
    bool blank = stripped.empty();
    if (!blank) buffer += line + "\n";
    if (depth(buffer) <= 0 && (blank || ends_statement(buffer))) {
      submit(buffer, out);
      buffer.clear();
      out << "coql> " << std::flush;
    } else {
      out << "  ... " << std::flush;
    }
  }
  if (!trim(buffer).empty()) submit(buffer, out);
  out << '\n';
  return kExitOk;
}

void Repl::submit(const std::string& text, std::ostream& out) {
  run_source(session_, text, "<repl>", options_, out, out);
}

bool Repl::meta_command(const std::string& line, std::ostream& out) {
  std::istringstream words(line);
  std::string cmd;
  words >> cmd;
  if (cmd == ":quit" || cmd == ":q") return false;
  const auto& store = session_.store();
  if (cmd == ":schema") {
    for (const auto& name : store.concept_names()) {
      const auto& c = store.concept_of(name);
      std::string text = "CONCEPT " + c.name;
      if (c.parent) text += " IN " + *c.parent;
      for (const auto* fields : {&c.identity, &c.entity}) {
        if (fields->empty()) continue;
        text += fields == &c.identity ? " IDENTITY " : " ENTITY ";
        for (std::size_t i = 0; i < fields->size(); ++i) {
          if (i) text += ", ";
          text += (*fields)[i].type.text() + " " + (*fields)[i].name;
        }
      }
      out << text << '\n';
    }
    for (const auto& name : store.collection_names()) {
      const auto& coll = store.collection(name);
      out << "TABLE " << coll.name << " CONCEPT " << coll.concept_name;
      if (coll.parent) out << " IN " << *coll.parent;
      for (const auto& [field, target] : coll.bindings) out << ' ' << field << " = " << target;
      out << "  (" << store.items(name).size() << " items)\n";
    }
    return true;
  }
  if (cmd == ":primitive") {
    std::string path;
    if (!(words >> path)) {
      out << "usage: :primitive <csv-path>\n";
      return true;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
      out << path << ": error: cannot write file\n";
      return true;
    }
    try {
      order::write_primitive_csv(store.data_order(), file);
      out << "wrote " << path << '\n';
    } catch (const Error& e) {
      out << format_error(e, path) << '\n';
    }
    return true;
  }
  out << "unknown command " << cmd << " (commands: :schema, :primitive <csv-path>, :quit)\n";
  return true;
}

}  // namespace coql::cli
