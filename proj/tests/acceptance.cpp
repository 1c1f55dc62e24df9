// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "fdc/codegen.hpp"
#include "fdc/engine.hpp"
#include "fdc/oracle.hpp"
#include "fdc/runner.hpp"
#include "fixtures.hpp"
#include "random_world.hpp"

using namespace fdc;
using Clock = std::chrono::steady_clock;

namespace {

struct Result {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail.clear();
      if (!detail.empty()) detail += "; ";
      detail += what;
      pass = false;
    }
  }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

// Rejections seen by AC-1..AC-3 and whether each left the database untouched.
struct AtomicityLedger {
  std::size_t rejections = 0;
  std::size_t intact = 0;

  void record(const Database& before, const std::string& before_dump, const Database& after) {
    ++rejections;
    if (before == after && before_dump == after.dump()) ++intact;
  }
};

AtomicityLedger atomicity;

// Replays a fixture script in process; returns the verdicts.
std::vector<Verdict> replay(const std::string& base, std::shared_ptr<const Schema>& schema_out,
                            Database*& db_out, cli::HandleTable& handles) {
  static std::vector<std::unique_ptr<Database>> keep;
  const auto schema = testing::load_schema(base + ".fd");
  const auto script = testing::load_script(base + ".fdm", *schema);
  keep.push_back(std::make_unique<Database>(schema));
  Database& db = *keep.back();
  const Engine engine(schema);
  std::vector<Verdict> verdicts;
  for (const auto& m : script) {
    std::string missing;
    const auto change = handles.resolve(m, missing);
    if (!change) throw std::runtime_error("unbound handle @" + missing);
    const Database before = db;
    const std::string before_dump = db.dump();
    Verdict v = engine.apply(db, *change);
    if (!v.applied()) atomicity.record(before, before_dump, db);
    if (v.inserted && m.bind_as) handles.bind(*m.bind_as, *v.inserted);
    verdicts.push_back(std::move(v));
  }
  schema_out = schema;
  db_out = &db;
  return verdicts;
}

// Runs `fdc run` on a fixture pair and checks exit status, time and expectations.
void cli_replay(Result& out, const std::string& base, std::size_t expected_rejections) {
  std::string output;
  const auto start = Clock::now();
  const int status = testing::run_command(std::string(FDC_EXE) + " run --json " + testing::fixture_path(base + ".fd") +
                                              " " + testing::fixture_path(base + ".fdm"),
                                          output);
  const double elapsed = seconds_since(start);
  out.require(status == 0, "exit " + std::to_string(status));
  out.require(elapsed < 1.0, "took " + fmt(elapsed) + " s");
  const auto doc = nlohmann::json::parse(output);
  std::size_t rejections = 0;
  for (const auto& m : doc["mutations"]) {
    out.require(m["expectation_met"] == true, "expectation failed at " + m["statement"].get<std::string>());
    if (m["verdict"]["outcome"] == "rejected") ++rejections;
  }
  out.require(rejections == expected_rejections, std::to_string(rejections) + " rejections");
  if (out.pass) out.detail = "exit 0 in " + fmt(elapsed) + " s, " + std::to_string(rejections) + " rejections matched";
}

const Violation* only_violation(const Verdict& v) {
  return !v.applied() && v.violations.size() == 1 ? &v.violations.front() : nullptr;
}

std::string name_of(const Database& db, RowId row) {
  const auto fn = db.schema().set(row.set).name_attribute;
  const Value& v = db.peek(row, *fn);
  const auto* s = std::get_if<std::string>(&v);
  return s ? *s : "";
}

Result ac1() {
  Result out;
  cli_replay(out, "geography", 2);
  std::shared_ptr<const Schema> schema;
  Database* db = nullptr;
  cli::HandleTable handles;
  const auto verdicts = replay("geography", schema, db, handles);
  // (a) Inn, (b) Alps move, (c) Urals move, (d) Ob with no mountain
  out.require(only_violation(verdicts[13]) != nullptr, "(a) not rejected");
  const Violation* b = only_violation(verdicts[14]);
  out.require(b && b->witness && name_of(*db, *b->witness) == "Danube", "(b) witness is not the Danube");
  out.require(verdicts[15].applied(), "(c) not applied");
  out.require(verdicts[16].applied(), "(d) not applied");
  return out;
}

Result ac2() {
  Result out;
  cli_replay(out, "neighbors", 2);
  std::shared_ptr<const Schema> schema;
  Database* db = nullptr;
  cli::HandleTable handles;
  const auto verdicts = replay("neighbors", schema, db, handles);
  const SetId pairs = *schema->find_set("NEIGHBOR_COUNTRIES");
  const FunctionId country = *schema->find_function(pairs, "Country");
  const FunctionId neighbor = *schema->find_function(pairs, "Neighbor");
  out.require(only_violation(verdicts[3]) != nullptr, "(a) not rejected");
  out.require(verdicts[4].applied(), "(b) not applied");
  const Violation* c = only_violation(verdicts[5]);
  bool witness_ok = c && c->witness && c->witness->set == pairs;
  if (witness_ok) {
    witness_ok = db->peek(*c->witness, country) == Value{Ref{handles.find("france")->x}} &&
                 db->peek(*c->witness, neighbor) == Value{Ref{handles.find("germany")->x}};
  }
  out.require(witness_ok, "(c) witness is not the (France, Germany) pair");
  out.require(verdicts[6].applied() && verdicts[7].applied(), "(d) not applied");
  return out;
}

Result ac3() {
  Result out;
  const auto start = Clock::now();
  testing::Rng rng(20241017);
  testing::WorldSpec spec;  // chains 1..6, 10..500 rows, 30% nulls
  std::size_t schemas = 0, mutations = 0, agreed = 0, applied = 0, constraint_rejections = 0, dirty = 0;
  std::set<ConstraintKind> kinds;
  std::set<std::size_t> lengths;
  for (int w = 0; w < 24; ++w) {
    const auto schema = testing::random_schema(rng, spec);
    for (const auto& c : schema->constraints) {
      kinds.insert(c.kind);
      lengths.insert(c.left.length());
      lengths.insert(c.right.length());
    }
    Database db(schema);
    const Engine engine(schema);
    testing::populate(db, engine, rng, spec);
    Database shadow = db;
    ++schemas;
    for (int step = 0; step < 60; ++step) {
      const RowChange change = testing::random_mutation(db, rng, spec.null_rate);
      const Database before = db;
      const std::string before_dump = db.dump();
      const Verdict mine = apply_mutation(db, change);
      const Verdict truth = oracle::oracle_apply(shadow, change);
      ++mutations;
      if (mine.outcome == truth.outcome && db == shadow) ++agreed;
      if (mine.applied()) {
        ++applied;
        if (!oracle::full_check(db).violations.empty()) ++dirty;
      } else {
        atomicity.record(before, before_dump, db);
        if (mine.violations.front().kind != ViolationKind::StoreError) ++constraint_rejections;
      }
    }
  }
  const double elapsed = seconds_since(start);
  out.require(schemas >= 20 && mutations >= 1000, "too small a sample");
  out.require(kinds.size() == 2, "both constraint kinds not exercised");
  out.require(lengths.count(1) && lengths.count(6), "chain lengths 1 and 6 not exercised");
  out.require(agreed == mutations, std::to_string(mutations - agreed) + " disagreements");
  out.require(dirty == 0, std::to_string(dirty) + " applied mutations left violations");
  out.require(elapsed < 60.0, "took " + fmt(elapsed) + " s");
  if (out.pass) {
    out.detail = std::to_string(mutations) + " mutations over " + std::to_string(schemas) + " schemas, 100% agreement (" +
                 std::to_string(applied) + " applied, " + std::to_string(constraint_rejections) +
                 " constraint rejections), " + fmt(elapsed) + " s";
  }
  return out;
}

Result ac4() {
  Result out;
  const auto schema = testing::load_schema("geography.fd");
  Database db(schema);
  auto set = [&](const char* name) { return *schema->find_set(name); };
  auto fn = [&](const char* s, const char* name) { return *schema->find_function(set(s), name); };
  auto add = [&](const char* s, std::vector<Binding> values) { return db.insert_row(set(s), values); };

  const RowId europe = add("CONTINENTS", {{fn("CONTINENTS", "Continent"), "Europe"}});
  const RowId asia = add("CONTINENTS", {{fn("CONTINENTS", "Continent"), "Asia"}});
  std::vector<RowId> ranges;
  for (int r = 0; r < 1000; ++r) {
    const RowId continent = r % 2 ? asia : europe;
    const std::string tag = std::to_string(r);
    const RowId range = add("MOUNTAIN_RANGES", {{fn("MOUNTAIN_RANGES", "Range"), "Range " + tag},
                                                {fn("MOUNTAIN_RANGES", "Continent"), Ref{continent.x}}});
    const RowId sub = add("MOUNT_SUBRANGES", {{fn("MOUNT_SUBRANGES", "Subrange"), "Subrange " + tag},
                                              {fn("MOUNT_SUBRANGES", "Range"), Ref{range.x}}});
    const RowId group = add("MOUNT_GROUPS", {{fn("MOUNT_GROUPS", "MountGroup"), "Group " + tag},
                                             {fn("MOUNT_GROUPS", "Subrange"), Ref{sub.x}}});
    const RowId mountain = add("MOUNTAINS", {{fn("MOUNTAINS", "Mountain"), "Mountain " + tag},
                                             {fn("MOUNTAINS", "Group"), Ref{group.x}}});
    for (int k = 0; k < 10; ++k) {
      add("RIVERS", {{fn("RIVERS", "River"), "River " + tag + "." + std::to_string(k)},
                     {fn("RIVERS", "Continent"), Ref{continent.x}},
                     {fn("RIVERS", "Mountain"), Ref{mountain.x}}});
    }
    ranges.push_back(range);
  }
  out.require(db.rows(set("RIVERS")).size() == 10'000, "river count");
  out.require(oracle::full_check(db).violations.empty(), "seeded state is not consistent");

  // one range moves continent: its 10 rivers now disagree
  RowChange move;
  move.action = RowChange::Action::Update;
  move.set = set("MOUNTAIN_RANGES");
  move.x = ranges[500].x;
  move.bindings = {{fn("MOUNTAIN_RANGES", "Continent"), Ref{asia.x}}};

  Database shadow = db;
  const Engine engine(schema);
  const Verdict mine = engine.apply(db, move);
  const Verdict truth = oracle::oracle_apply(shadow, move);
  out.require(!mine.applied() && mine.violations.size() == 10, "engine did not report the 10 rivers");
  out.require(mine.outcome == truth.outcome, "engine and oracle disagree");
  out.require(mine.rows_inspected <= 200, "engine inspected " + std::to_string(mine.rows_inspected) + " rows");
  out.require(truth.rows_inspected >= 10'000, "oracle inspected " + std::to_string(truth.rows_inspected) + " rows");

  // a rename touches no chain at all
  RowChange rename = move;
  rename.bindings = {{fn("MOUNTAIN_RANGES", "Range"), "Renamed"}};
  const Verdict cheap = engine.apply(db, rename);
  out.require(cheap.applied() && cheap.rows_inspected <= 200, "rename inspected " + std::to_string(cheap.rows_inspected));

  if (out.pass) {
    out.detail = "engine " + std::to_string(mine.rows_inspected) + " rows (ceiling 200), oracle " +
                 std::to_string(truth.rows_inspected) + " rows (floor 10000)";
  }
  return out;
}

bool contains(const std::string& text, const std::string& part) { return text.find(part) != std::string::npos; }

Result ac5() {
  using namespace codegen;
  Result out;
  const auto schema = testing::load_schema("geography.fd");
  const DiagramConstraint& c = schema->constraints.front();
  out.require(normalize_text(gen_row_source(*schema, c, ChainSide::Left).body) ==
                  normalize_text(testing::read_fixture("golden/mountain_row_source.sql")),
              "left row source differs from the reference");
  out.require(normalize_text(gen_row_source(*schema, c, ChainSide::Right).body) ==
                  normalize_text(testing::read_fixture("golden/continent_row_source.sql")),
              "right row source differs from the reference");

  const std::string domain = gen_domain_check(*schema, c, Dialect::PaperStyle).body;
  out.require(contains(domain, "If Not Cancel And Not IsNull(Mountain) And Not IsNull(Continent) Then"),
              "domain null guards");
  out.require(contains(domain, "If Mountain.Column(2) <> CStr(Continent) Then"), "domain comparison");
  out.require(contains(domain, "Cancel = True") && !contains(domain, "Undo"), "domain cancel without undo");

  const auto links = gen_link_checks(*schema, c, Dialect::PaperStyle);
  out.require(links.size() == 4, std::to_string(links.size()) + " link units");
  for (const auto& u : links) {
    const std::string& fi = u.function;
    const std::string& b = u.body;
    out.require(contains(b, "Sub " + fi + "_BeforeUpdate(Cancel As Integer)"), fi + ": event header");
    out.require(contains(b, "Not NewRecord"), fi + ": new-record guard");
    out.require(contains(b, fi + " <> " + fi + ".OldValue"), fi + ": change guard");
    out.require(contains(b, "Not IsNull(" + fi + ")") && contains(b, "If Not IsNull(v) Then") &&
                    contains(b, "If Not IsNull(w) Then"),
                fi + ": null guards");
    out.require(contains(b, "If CLng(v) <> CLng(w) Then"), fi + ": comparison");
    out.require(contains(b, "Cancel = True") && contains(b, "Undo"), fi + ": cancel and undo");
    out.require(b.find("Cancel = True") < b.find("Undo"), fi + ": undo after cancel");
  }
  if (out.pass) out.detail = "row sources match the references token for token; domain check and 4 link checks";
  return out;
}

Result ac6() {
  Result out;
  testing::Rng rng(606);
  testing::WorldSpec spec;
  spec.max_rows = 200;
  std::size_t mutations = 0, store_errors = 0, constraint_rejections = 0, worlds = 0;
  while (mutations < 1000) {
    const auto schema = testing::random_schema(rng, spec);
    // one nullable link on the common domain per constraint, kept null throughout
    std::set<FunctionId> frozen;
    bool usable = true;
    for (const auto& c : schema->constraints) {
      std::optional<FunctionId> pick;
      for (const ChainSpec* chain : {&c.left, &c.right}) {
        const FunctionId f = chain->at(chain->length());
        if (!pick && schema->function(f).nullable && schema->function(f).is_link()) pick = f;
      }
      if (!pick) usable = false;
      else frozen.insert(*pick);
    }
    if (!usable) continue;
    ++worlds;
    Database db(schema);
    const Engine engine(schema);
    testing::populate(db, engine, rng, spec);
    for (FunctionId f : frozen) {
      const SetId d = schema->function(f).domain;
      for (std::int64_t x : db.rows(d)) db.set_value(RowId{d, x}, f, Value{});
    }
    for (int step = 0; step < 100 && mutations < 1000; ++step) {
      const RowChange change = testing::random_mutation(db, rng, spec.null_rate, frozen);
      const Verdict v = engine.apply(db, change);
      ++mutations;
      if (v.applied()) continue;
      if (v.violations.front().kind == ViolationKind::StoreError) ++store_errors;
      else ++constraint_rejections;
    }
  }
  out.require(constraint_rejections == 0, std::to_string(constraint_rejections) + " constraint rejections");
  if (out.pass) {
    out.detail = std::to_string(mutations) + " mutations over " + std::to_string(worlds) +
                 " schemas, no constraint rejections (" + std::to_string(store_errors) + " store errors excluded)";
  }
  return out;
}

// The fixture's sets with one constraint classified directly.
ConstraintClass classify_fixture(const std::string& name, const RawConstraint& raw) {
  std::string text = testing::read_fixture(name);
  text.erase(text.find("constraint "));
  const auto parsed = dsl::parse_schema(text);
  if (!parsed.ok()) throw std::runtime_error("cannot parse the sets of " + name);
  const ResolvedDiagram resolved = validate_diagram(*parsed.schema, raw);
  if (!resolved.ok()) throw std::runtime_error("cannot resolve the constraint of " + name);
  return classify_constraint(*resolved.constraint);
}

RawConstraint raw_constraint(const std::string& domain, std::vector<std::string> left,
                             std::vector<std::string> right) {
  RawConstraint raw;
  raw.id = "C";
  raw.domain = domain;
  for (auto& n : left) raw.left.entries.push_back({std::move(n), {}});
  for (auto& n : right) raw.right.entries.push_back({std::move(n), {}});
  raw.right.identity = raw.right.entries.empty();
  return raw;
}

Result ac7() {
  Result out;
  const auto geo = testing::load_schema("geography.fd");
  const auto& c = geo->constraints.front();
  out.require(c.left.length() == 5 && c.right.length() == 1, "geography is not n=5, m=1");
  out.require(classify_constraint(c) == ConstraintClass::General, "geography is not GENERAL");
  out.require(classify_fixture("hbfp.fd", raw_constraint("PERSONS", {"Mother"}, {"Spouse"})) == ConstraintClass::Hbfp,
              "marriage example is not HBFP");
  out.require(classify_fixture("local.fd", raw_constraint("STATES", {"State", "StateCapital"}, {})) ==
                  ConstraintClass::Local,
              "capital example is not LOCAL");

  std::string output;
  const std::string exe = FDC_EXE;
  out.require(testing::run_command(exe + " validate " + testing::fixture_path("geography.fd"), output) == 0,
              "validate refused geography");
  for (const auto& [file, label] : {std::pair{"hbfp.fd", "HBFP"}, std::pair{"local.fd", "LOCAL"}}) {
    const int status = testing::run_command(exe + " validate " + testing::fixture_path(file) + " 2>&1", output);
    out.require(status == 1 && contains(output, label), std::string("validate did not refuse ") + file);
  }
  if (out.pass) out.detail = "GENERAL / HBFP / LOCAL; validate exits 0 / 1 / 1";
  return out;
}

Result ac8() {
  Result out;
  out.require(atomicity.rejections > 0, "no rejections recorded");
  out.require(atomicity.intact == atomicity.rejections,
              std::to_string(atomicity.rejections - atomicity.intact) + " rejections changed the database");
  if (out.pass) out.detail = std::to_string(atomicity.rejections) + " rejections from AC-1..AC-3, all snapshots identical";
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
      {"AC-1", ac1}, {"AC-2", ac2}, {"AC-3", ac3}, {"AC-4", ac4},
      {"AC-5", ac5}, {"AC-6", ac6}, {"AC-7", ac7}, {"AC-8", ac8},
  };
  int failures = 0;
  for (const auto& [id, run] : criteria) {
    Result o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::cout << id << " " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
