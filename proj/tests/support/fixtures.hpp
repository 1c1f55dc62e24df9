#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fdc/dsl.hpp"
#include "fdc/model.hpp"

namespace fdc::testing {

std::string fixture_path(const std::string& name);
std::string read_fixture(const std::string& name);

/// Parses a fixture schema; throws when it has errors.
std::shared_ptr<const Schema> load_schema(const std::string& name);
std::vector<dsl::Mutation> load_script(const std::string& name, const Schema& schema);

/// Runs a command line, capturing stdout; returns the exit status.
int run_command(const std::string& command, std::string& output);

}  // namespace fdc::testing
