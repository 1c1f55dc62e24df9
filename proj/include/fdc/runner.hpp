#pragma once

// Command implementations behind the fdc executable. Each returns the process
// exit status: 0 success, 1 semantic failure, 2 I/O or parse failure.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fdc/codegen.hpp"
#include "fdc/dsl.hpp"
#include "fdc/engine.hpp"
#include "fdc/store.hpp"

namespace fdc::cli {

/// Script handles bound to the rows their inserts created.
class HandleTable {
 public:
  void bind(const std::string& name, RowId row) { rows_[name] = row; }
  std::optional<RowId> find(const std::string& name) const;

  /// Resolves handles to surrogates. Returns nullopt and sets `missing` when
  /// a handle was never bound (its insert was rejected).
  std::optional<RowChange> resolve(const dsl::Mutation& m, std::string& missing) const;

 private:
  std::map<std::string, RowId> rows_;
};

struct MutationRecord {
  std::size_t index = 0;  // 1-based
  std::string action;     // e.g. "update MOUNTAIN_RANGES#1"
  std::string statement;  // canonical script text
  std::optional<dsl::Expectation> expectation;
  Verdict verdict;
  /// Empty when the mutation carried no expectation.
  std::optional<bool> expectation_met;
};

struct RunReport {
  std::vector<MutationRecord> records;
  std::size_t applied = 0;
  std::size_t rejected = 0;
  std::size_t store_errors = 0;
  std::size_t expectation_failures = 0;
  /// Rejections by store errors on mutations without an expectation.
  std::size_t unexpected_store_errors = 0;
  std::uint64_t rows_inspected = 0;
  bool stopped_early = false;

  bool ok() const { return expectation_failures == 0 && unexpected_store_errors == 0; }
};

struct RunOptions {
  bool json = false;
  bool stop_on_reject = false;
};

/// Applies mutations in order through the engine.
RunReport run_script(Database& db, const Engine& engine, const std::vector<dsl::Mutation>& mutations,
                     bool stop_on_reject);

nlohmann::json run_report_json(const Schema& schema, const RunReport& report);
void print_run_report(std::ostream& out, const Schema& schema, const RunReport& report);

struct GenOptions {
  std::optional<std::string> constraint;
  std::string what = "all";  // row-sources | domain-check | link-checks | all
  codegen::Dialect dialect = codegen::Dialect::PaperStyle;
  std::optional<std::string> out_dir;
};

/// Units for the selected constraints in deterministic order: per constraint,
/// row sources (left, right), the domain check, link checks (left side first,
/// positions ascending); link checks sharing a target are merged. "all" in the
/// trigger dialect leaves out row sources, which are always paper-style.
std::vector<codegen::EmittedUnit> generate(const Schema& schema, const GenOptions& options);

int cmd_validate(const std::string& schema_path, std::ostream& out, std::ostream& err);
int cmd_run(const std::string& schema_path, const std::string& script_path, const RunOptions& options,
            std::ostream& out, std::ostream& err);
int cmd_check(const std::string& schema_path, const std::string& script_path, bool json, std::ostream& out,
              std::ostream& err);
int cmd_gen(const std::string& schema_path, const GenOptions& options, std::ostream& out, std::ostream& err);

}  // namespace fdc::cli
