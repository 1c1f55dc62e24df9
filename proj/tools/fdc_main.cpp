#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fdc/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"fdc: enforce and generate checks for function diagram constraints"};
  app.require_subcommand(1);

  std::string schema_path;
  std::string script_path;
  bool json = false;
  bool stop_on_reject = false;

  auto* validate = app.add_subcommand("validate", "Parse a schema and classify its constraints");
  validate->add_option("schema", schema_path, "Schema file (.fd)")->required();

  auto* run = app.add_subcommand("run", "Apply a mutation script with constraint enforcement");
  run->add_option("schema", schema_path, "Schema file (.fd)")->required();
  run->add_option("script", script_path, "Mutation script (.fdm)")->required();
  run->add_flag("--json", json, "Emit the run report as JSON");
  run->add_flag("--stop-on-reject", stop_on_reject, "Halt at the first rejected mutation");

  auto* check = app.add_subcommand("check", "Apply a script without enforcement, then list violations");
  check->add_option("schema", schema_path, "Schema file (.fd)")->required();
  check->add_option("script", script_path, "Mutation script (.fdm)")->required();
  check->add_flag("--json", json, "Emit violations as JSON");

  fdc::cli::GenOptions gen_options;
  std::string constraint;
  std::string dialect = "paper-style";
  std::string out_dir;
  auto* gen = app.add_subcommand("gen", "Emit row sources and check procedures");
  gen->add_option("schema", schema_path, "Schema file (.fd)")->required();
  gen->add_option("--constraint", constraint, "Only this constraint id");
  gen->add_option("--what", gen_options.what, "What to emit")
      ->check(CLI::IsMember({"row-sources", "domain-check", "link-checks", "all"}));
  gen->add_option("--dialect", dialect, "Target dialect")->check(CLI::IsMember({"paper-style", "generic-sql"}));
  gen->add_option("--out", out_dir, "Write one file per unit into this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (validate->parsed()) return fdc::cli::cmd_validate(schema_path, std::cout, std::cerr);
  if (run->parsed()) {
    return fdc::cli::cmd_run(schema_path, script_path, {json, stop_on_reject}, std::cout, std::cerr);
  }
  if (check->parsed()) return fdc::cli::cmd_check(schema_path, script_path, json, std::cout, std::cerr);

  if (!constraint.empty()) gen_options.constraint = constraint;
  if (!out_dir.empty()) gen_options.out_dir = out_dir;
  gen_options.dialect = *fdc::codegen::parse_dialect(dialect);
  return fdc::cli::cmd_gen(schema_path, gen_options, std::cout, std::cerr);
}
