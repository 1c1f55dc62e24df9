#include "fixtures.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <sys/wait.h>

namespace fdc::testing {

std::string fixture_path(const std::string& name) { return std::string(FDC_FIXTURES) + "/" + name; }

std::string read_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name), std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::shared_ptr<const Schema> load_schema(const std::string& name) {
  dsl::ParsedSchema parsed = dsl::parse_schema(read_fixture(name));
  if (!parsed.ok()) {
    std::string text;
    for (const Diagnostic& d : parsed.diagnostics) text += format(d, name) + "\n";
    throw std::runtime_error(text);
  }
  return parsed.schema;
}

std::vector<dsl::Mutation> load_script(const std::string& name, const Schema& schema) {
  dsl::ParsedScript parsed = dsl::parse_script(read_fixture(name), schema);
  if (!parsed.ok()) {
    std::string text;
    for (const Diagnostic& d : parsed.diagnostics) text += format(d, name) + "\n";
    throw std::runtime_error(text);
  }
  return parsed.mutations;
}

int run_command(const std::string& command, std::string& output) {
  output.clear();
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return -1;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) output.append(buf.data(), got);
  const int status = pclose(pipe);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace fdc::testing
