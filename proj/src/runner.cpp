#include "fdc/runner.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fdc/oracle.hpp"
#include "fdc/report.hpp"

namespace fdc::cli {

namespace {

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool only_refusals(const std::vector<Diagnostic>& diags) {
  for (const Diagnostic& d : diags) {
    if (d.severity == Severity::Error && d.code != DiagCode::RefusedHbfp && d.code != DiagCode::RefusedLocal) {
      return false;
    }
  }
  return true;
}

void print_diagnostics(std::ostream& err, const std::vector<Diagnostic>& diags, const std::string& path) {
  for (const Diagnostic& d : diags) err << format(d, path) << "\n";
}

// Loads a schema, printing diagnostics. Sets `status` to the exit code on
// failure.
std::shared_ptr<const Schema> load_schema(const std::string& path, std::ostream& err, int& status) {
  const auto text = read_file(path);
  if (!text) {
    err << path << ": cannot read file\n";
    status = 2;
    return nullptr;
  }
  dsl::ParsedSchema parsed = dsl::parse_schema(*text);
  print_diagnostics(err, parsed.diagnostics, path);
  if (!parsed.ok()) status = only_refusals(parsed.diagnostics) ? 1 : 2;
  return parsed.schema;
}

std::optional<std::vector<dsl::Mutation>> load_script(const std::string& path, const Schema& schema,
                                                      std::ostream& err) {
  const auto text = read_file(path);
  if (!text) {
    err << path << ": cannot read file\n";
    return std::nullopt;
  }
  dsl::ParsedScript parsed = dsl::parse_script(*text, schema);
  print_diagnostics(err, parsed.diagnostics, path);
  if (!parsed.ok()) return std::nullopt;
  return parsed.mutations;
}

std::string row_text(const Schema& schema, const RowId& row) {
  return schema.set(row.set).name + "#" + std::to_string(row.x);
}

std::string action_text(const Schema& schema, const dsl::Mutation& m, const HandleTable& handles) {
  const std::string verb(to_string(m.action));
  if (m.action == RowChange::Action::Insert) return verb + " " + schema.set(m.set).name;
  const auto row = handles.find(m.row_ref);
  return verb + " " + (row ? row_text(schema, *row) : "@" + m.row_ref);
}

Verdict unbound_verdict(const std::string& handle) {
  Violation v;
  v.constraint = std::string(to_string(StoreErrorCode::UnknownRow));
  v.kind = ViolationKind::StoreError;
  v.message = "handle @" + handle + " is not bound to a row (its insert was rejected)";
  Verdict verdict;
  verdict.outcome = Outcome::Rejected;
  verdict.violations.push_back(std::move(v));
  return verdict;
}

bool store_rejection(const Verdict& v) {
  return !v.applied() && !v.violations.empty() && v.violations.front().kind == ViolationKind::StoreError;
}

}  // namespace

std::optional<RowId> HandleTable::find(const std::string& name) const {
  const auto it = rows_.find(name);
  if (it == rows_.end()) return std::nullopt;
  return it->second;
}

std::optional<RowChange> HandleTable::resolve(const dsl::Mutation& m, std::string& missing) const {
  RowChange change;
  change.action = m.action;
  change.set = m.set;
  if (m.action != RowChange::Action::Insert) {
    const auto row = find(m.row_ref);
    if (!row) {
      missing = m.row_ref;
      return std::nullopt;
    }
    change.set = row->set;
    change.x = row->x;
  }
  for (const dsl::MutationBinding& b : m.bindings) {
    Value value;
    if (const auto* i = std::get_if<std::int64_t>(&b.value)) {
      value = *i;
    } else if (const auto* s = std::get_if<std::string>(&b.value)) {
      value = *s;
    } else if (const auto* h = std::get_if<dsl::Handle>(&b.value)) {
      const auto row = find(h->name);
      if (!row) {
        missing = h->name;
        return std::nullopt;
      }
      value = Ref{row->x};
    }
    change.bindings.emplace_back(b.function, std::move(value));
  }
  return change;
}

RunReport run_script(Database& db, const Engine& engine, const std::vector<dsl::Mutation>& mutations,
                     bool stop_on_reject) {
  const Schema& schema = engine.schema();
  RunReport report;
  HandleTable handles;
  for (std::size_t i = 0; i < mutations.size(); ++i) {
    const dsl::Mutation& m = mutations[i];
    MutationRecord record;
    record.index = i + 1;
    record.action = action_text(schema, m, handles);
    record.statement = dsl::print_mutation(schema, m);
    record.expectation = m.expectation;

    std::string missing;
    if (const auto change = handles.resolve(m, missing)) {
      record.verdict = engine.apply(db, *change);
    } else {
      record.verdict = unbound_verdict(missing);
    }
    const Verdict& v = record.verdict;
    if (v.applied()) {
      ++report.applied;
      if (m.bind_as && v.inserted) handles.bind(*m.bind_as, *v.inserted);
    } else {
      ++report.rejected;
      if (store_rejection(v)) {
        ++report.store_errors;
        if (!m.expectation) ++report.unexpected_store_errors;
      }
    }
    if (m.expectation) {
      const bool met = (*m.expectation == dsl::Expectation::Accept) == v.applied();
      record.expectation_met = met;
      if (!met) ++report.expectation_failures;
    }
    report.rows_inspected += v.rows_inspected;
    const bool stop = stop_on_reject && !v.applied();
    report.records.push_back(std::move(record));
    if (stop) {
      report.stopped_early = i + 1 < mutations.size();
      break;
    }
  }
  return report;
}

nlohmann::json run_report_json(const Schema& schema, const RunReport& report) {
  nlohmann::json out;
  out["schema"] = schema.name;
  out["mutations"] = nlohmann::json::array();
  for (const MutationRecord& r : report.records) {
    nlohmann::json rec;
    rec["index"] = r.index;
    rec["action"] = r.action;
    rec["statement"] = r.statement;
    rec["expectation"] = r.expectation ? nlohmann::json(std::string(dsl::to_string(*r.expectation))) : nullptr;
    rec["expectation_met"] = r.expectation_met ? nlohmann::json(*r.expectation_met) : nullptr;
    rec["verdict"] = verdict_json(schema, r.verdict);
    out["mutations"].push_back(std::move(rec));
  }
  out["totals"] = {{"mutations", report.records.size()},
                   {"applied", report.applied},
                   {"rejected", report.rejected},
                   {"store_errors", report.store_errors},
                   {"expectation_failures", report.expectation_failures}};
  out["counters"] = {{"rows_inspected", report.rows_inspected}};
  out["stopped_early"] = report.stopped_early;
  out["ok"] = report.ok();
  return out;
}

void print_run_report(std::ostream& out, const Schema& schema, const RunReport& report) {
  for (const MutationRecord& r : report.records) {
    out << "[" << r.index << "] " << r.statement << " -> " << to_string(r.verdict.outcome);
    if (r.verdict.inserted) out << " " << row_text(schema, *r.verdict.inserted);
    if (r.expectation_met) out << (*r.expectation_met ? " (as expected)" : " (EXPECTATION FAILED)");
    out << "\n";
    for (const Violation& v : r.verdict.violations) out << "    " << render_line(schema, v) << "\n";
  }
  out << "---\n";
  out << "mutations=" << report.records.size() << " applied=" << report.applied << " rejected=" << report.rejected
      << " store_errors=" << report.store_errors << " expectation_failures=" << report.expectation_failures
      << " rows_inspected=" << report.rows_inspected << "\n";
  if (report.stopped_early) out << "stopped at first rejection\n";
}

std::vector<codegen::EmittedUnit> generate(const Schema& schema, const GenOptions& options) {
  using namespace codegen;
  const bool all = options.what == "all";
  std::vector<EmittedUnit> units;
  for (const DiagramConstraint& c : schema.constraints) {
    if (options.constraint && c.id != *options.constraint) continue;
    // row sources only exist for the event-handler forms
    if ((all && options.dialect == Dialect::PaperStyle) || options.what == "row-sources") {
      units.push_back(gen_row_source(schema, c, ChainSide::Left));
      units.push_back(gen_row_source(schema, c, ChainSide::Right));
    }
    if (all || options.what == "domain-check") units.push_back(gen_domain_check(schema, c, options.dialect));
    if (all || options.what == "link-checks") {
      for (EmittedUnit& u : gen_link_checks(schema, c, options.dialect)) units.push_back(std::move(u));
    }
  }
  return merge_units(std::move(units));
}

int cmd_validate(const std::string& schema_path, std::ostream& out, std::ostream& err) {
  int status = 0;
  const auto schema = load_schema(schema_path, err, status);
  if (!schema) return status;
  out << "schema " << schema->name << ": " << schema->sets.size() << " sets, " << schema->functions.size()
      << " functions, " << schema->constraints.size() << " constraints\n";
  for (const DiagramConstraint& c : schema->constraints) {
    out << "constraint " << c.id << " " << to_string(c.kind) << " " << to_string(classify_constraint(c)) << ": "
        << schema->chain_text(c.left, c.domain) << (c.kind == ConstraintKind::Commutative ? " = " : " <> ")
        << schema->chain_text(c.right, c.domain) << " on " << schema->set(c.domain).name << "\n";
  }
  return 0;
}

int cmd_run(const std::string& schema_path, const std::string& script_path, const RunOptions& options,
            std::ostream& out, std::ostream& err) {
  int status = 0;
  const auto schema = load_schema(schema_path, err, status);
  if (!schema) return status;
  const auto mutations = load_script(script_path, *schema, err);
  if (!mutations) return 2;

  Database db(schema);
  const Engine engine(schema);
  const RunReport report = run_script(db, engine, *mutations, options.stop_on_reject);
  if (options.json) {
    out << run_report_json(*schema, report).dump(2) << "\n";
  } else {
    print_run_report(out, *schema, report);
  }
  return report.ok() ? 0 : 1;
}

int cmd_check(const std::string& schema_path, const std::string& script_path, bool json, std::ostream& out,
              std::ostream& err) {
  int status = 0;
  const auto schema = load_schema(schema_path, err, status);
  if (!schema) return status;
  const auto mutations = load_script(script_path, *schema, err);
  if (!mutations) return 2;

  Database db(schema);
  HandleTable handles;
  std::vector<std::string> store_errors;
  for (std::size_t i = 0; i < mutations->size(); ++i) {
    const dsl::Mutation& m = (*mutations)[i];
    std::string missing;
    const auto change = handles.resolve(m, missing);
    if (!change) {
      store_errors.push_back("[" + std::to_string(i + 1) + "] handle @" + missing + " is not bound");
      continue;
    }
    try {
      Database::Staging staging(db);
      const auto row = apply_raw(db, *change);
      staging.commit();
      if (row && m.bind_as) handles.bind(*m.bind_as, *row);
    } catch (const StoreError& e) {
      store_errors.push_back("[" + std::to_string(i + 1) + "] " + std::string(to_string(e.code())) + ": " + e.what());
    }
  }
  const oracle::OracleReport report = oracle::full_check(db);
  if (json) {
    nlohmann::json doc;
    doc["violations"] = nlohmann::json::array();
    for (const Violation& v : report.violations) doc["violations"].push_back(violation_json(*schema, v));
    doc["store_errors"] = store_errors;
    doc["rows_scanned"] = report.rows_scanned;
    out << doc.dump(2) << "\n";
  } else {
    for (const std::string& e : store_errors) out << "store error " << e << "\n";
    for (const Violation& v : report.violations) out << render_line(*schema, v) << "\n";
    out << "---\n";
    out << "violations=" << report.violations.size() << " rows_scanned=" << report.rows_scanned << "\n";
  }
  return report.violations.empty() ? 0 : 1;
}

int cmd_gen(const std::string& schema_path, const GenOptions& options, std::ostream& out, std::ostream& err) {
  int status = 0;
  const auto schema = load_schema(schema_path, err, status);
  if (!schema) return status;
  if (options.constraint && !schema->find_constraint(*options.constraint)) {
    err << "unknown constraint '" << *options.constraint << "'\n";
    return 2;
  }
  const auto units = generate(*schema, options);
  if (options.out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(*options.out_dir, ec);
    for (const auto& u : units) {
      const auto path = std::filesystem::path(*options.out_dir) / u.file_name(*schema);
      std::ofstream file(path, std::ios::binary);
      if (!(file << u.body)) {
        err << path.string() << ": cannot write file\n";
        return 2;
      }
      out << path.string() << "\n";
    }
    return 0;
  }
  for (const auto& u : units) {
    out << "--- " << u.file_name(*schema) << "\n";
    out << u.body;
  }
  return 0;
}

}  // namespace fdc::cli
