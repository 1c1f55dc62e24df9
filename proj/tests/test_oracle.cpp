#include <doctest.h>

#include "fdc/oracle.hpp"
#include "fdc/runner.hpp"
#include "fixtures.hpp"
#include "random_world.hpp"

using namespace fdc;

namespace {

// Applies a fixture script raw (store checks only), as `fdc check` does.
Database seed_raw(const std::shared_ptr<const Schema>& schema, const std::string& script_text) {
  Database db(schema);
  cli::HandleTable handles;
  const auto parsed = dsl::parse_script(script_text, *schema);
  REQUIRE(parsed.ok());
  for (const dsl::Mutation& m : parsed.mutations) {
    std::string missing;
    const auto change = handles.resolve(m, missing);
    REQUIRE(change);
    const auto row = apply_raw(db, *change);
    if (row && m.bind_as) handles.bind(*m.bind_as, *row);
  }
  return db;
}

}  // namespace

TEST_CASE("empty database") {
  const auto schema = testing::load_schema("geography.fd");
  const Database db(schema);
  const auto report = oracle::full_check(db);
  CHECK(report.violations.empty());
  CHECK(report.rows_scanned == 0);
}

TEST_CASE("seeded violating river") {
  const auto schema = testing::load_schema("geography.fd");
  // strip the expectations so every line is applied raw
  std::string script = testing::read_fixture("geography.fdm");
  for (const char* e : {" expect accept", " expect reject"}) {
    for (auto at = script.find(e); at != std::string::npos; at = script.find(e)) script.erase(at, std::string(e).size());
  }
  Database db = seed_raw(schema, script);
  const auto report = oracle::full_check(db);
  // moving the Alps to Asia strands the Danube and happens to legitimize the Inn
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].witness->x == 1);
  CHECK(report.rows_scanned == db.row_count(*schema->find_set("RIVERS")));

  SUBCASE("pre-existing violations are not re-attributed") {
    RowChange c;
    c.action = RowChange::Action::Update;
    c.set = *schema->find_set("RIVERS");
    c.x = 2;
    c.bindings = {{*schema->find_function(c.set, "River"), std::string("Sindhu")}};
    const Verdict v = oracle::oracle_apply(db, c);
    CHECK(v.applied());
    CHECK(v.rows_inspected >= 2 * report.rows_scanned);
  }
  SUBCASE("a new violation is rejected and leaves the database alone") {
    const Database before = db;
    RowChange c;
    c.action = RowChange::Action::Update;
    c.set = *schema->find_set("RIVERS");
    c.x = 2;  // Indus, from Kailash, moved to Europe
    c.bindings = {{*schema->find_function(c.set, "Continent"), Ref{1}}};
    const Verdict v = oracle::oracle_apply(db, c);
    CHECK_FALSE(v.applied());
    REQUIRE(v.violations.size() == 1);
    CHECK(v.violations[0].witness->x == 2);
    CHECK(db == before);
  }
}

TEST_CASE("all-null chains are vacuous") {
  const auto schema = testing::load_schema("geography.fd");
  Database db = seed_raw(schema, testing::read_fixture("geography.fdm"));
  const SetId mountains = *schema->find_set("MOUNTAINS");
  for (std::int64_t x : db.rows(mountains)) db.set_value(RowId{mountains, x}, *schema->find_function(mountains, "Group"), Value{});
  const SetId ranges = *schema->find_set("MOUNTAIN_RANGES");
  db.set_value(RowId{ranges, 1}, *schema->find_function(ranges, "Continent"), Ref{2});
  CHECK(oracle::full_check(db).violations.empty());
}

TEST_CASE("store errors surface as rejections") {
  const auto schema = testing::load_schema("geography.fd");
  Database db(schema);
  RowChange c;
  c.action = RowChange::Action::Insert;
  c.set = *schema->find_set("MOUNTAIN_RANGES");
  const Verdict v = oracle::oracle_apply(db, c);
  CHECK_FALSE(v.applied());
  CHECK(v.violations.at(0).kind == ViolationKind::StoreError);
  CHECK(v.violations.at(0).constraint == "MissingRequired");
}

TEST_CASE("property: full_check is insensitive to insertion order") {
  testing::Rng rng(5150);
  testing::WorldSpec spec;
  spec.max_rows = 50;
  spec.max_diagrams = 1;
  for (int w = 0; w < 20; ++w) {
    const auto schema = testing::random_schema(rng, spec);
    // an unchecked random state
    Database db(schema);
    for (int i = 0; i < 600; ++i) {
      try {
        Database::Staging s(db);
        apply_raw(db, testing::random_mutation(db, rng, 0.3));
        s.commit();
      } catch (const StoreError&) {
      }
    }
    const auto report = oracle::full_check(db);
    std::size_t expected_scanned = 0;
    for (const DiagramConstraint& c : schema->constraints) expected_scanned += db.row_count(c.domain);
    CHECK(report.rows_scanned == expected_scanned);
    for (std::size_t i = 1; i < report.violations.size(); ++i) {
      const auto& a = report.violations[i - 1];
      const auto& b = report.violations[i];
      CHECK(std::tie(a.constraint, a.witness->x) < std::tie(b.constraint, b.witness->x));
    }
    // every reported witness really violates, every other row does not
    for (const DiagramConstraint& c : schema->constraints) {
      for (std::int64_t x : db.rows(c.domain)) {
        const bool bad = violates(c.kind, testing::brute_eval(db, c.left, x), testing::brute_eval(db, c.right, x));
        const bool reported = std::any_of(report.violations.begin(), report.violations.end(), [&](const Violation& v) {
          return v.constraint == c.id && v.witness->x == x;
        });
        CHECK(bad == reported);
      }
    }
  }
}
