#include "fixtures.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace coql::testing {

std::string data_path(const std::string& relative) { return std::string(COQL_TEST_DATA_DIR) + "/" + relative; }

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string temp_path(const std::string& name) {
  static std::atomic<int> counter{0};
  auto dir = std::filesystem::temp_directory_path() /
             ("coql-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

CliResult run_cli(const std::string& args, const std::string& env) {
  const std::string out_path = temp_path("stdout"), err_path = temp_path("stderr");
  std::string command = env + (env.empty() ? "" : " ") + "'" + COQL_CLI_PATH + "' " + args + " >'" + out_path +
                        "' 2>'" + err_path + "' </dev/null";
  int status = std::system(command.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_text(out_path);
  r.err = read_text(err_path);
  return r;
}

eval::Session db1_session() {
  eval::Session session;
  session.execute_script(read_text(data_path("data/db1.coql")));
  return session;
}

order::ModelDescription g1_description() {
  order::ModelDescription d;
  // 0 root, 1 P, 2 Q, 3 a, 4 b; top = 5, bottom = 6
  d.elements = {{"root", std::nullopt}, {"P", 0}, {"Q", 0}, {"a", 0}, {"b", 0}};
  d.edges = {{1, "p", 5}, {2, "q", 5}, {3, "x", 1}, {3, "y", 2}, {4, "z", 3}, {6, "u", 3}, {6, "v", 4}};
  return d;
}

}  // namespace coql::testing
