#include "fdc/oracle.hpp"

#include <set>
#include <utility>

namespace fdc::oracle {

OracleReport full_check(const Database& db) {
  OracleReport report;
  const Schema& schema = db.schema();
  for (const DiagramConstraint& c : schema.constraints) {
    for (std::int64_t x : db.rows(c.domain)) {
      ++report.rows_scanned;
      const RowId row{c.domain, x};
      Value left = eval_chain(db, c.left, row);
      Value right = eval_chain(db, c.right, row);
      if (violates(c.kind, left, right)) {
        report.violations.push_back(make_violation(db, c, x, std::move(left), std::move(right), std::nullopt));
      }
    }
  }
  normalize_violations(report.violations);
  return report;
}

Verdict oracle_apply(Database& db, const RowChange& change) {
  Verdict verdict;
  Database copy = db;
  copy.reset_rows_inspected();

  const OracleReport before = full_check(copy);
  std::set<std::pair<std::string, std::int64_t>> known;
  for (const Violation& v : before.violations) known.emplace(v.constraint, v.witness->x);

  std::optional<RowId> inserted;
  try {
    inserted = apply_raw(copy, change);
  } catch (const StoreError& e) {
    verdict.outcome = Outcome::Rejected;
    verdict.violations.push_back(store_violation(e, change));
    verdict.rows_inspected = copy.rows_inspected();
    return verdict;
  }

  for (Violation& v : full_check(copy).violations) {
    if (!known.count({v.constraint, v.witness->x})) verdict.violations.push_back(std::move(v));
  }
  verdict.rows_inspected = copy.rows_inspected();

  if (!verdict.violations.empty()) {
    verdict.outcome = Outcome::Rejected;
    return verdict;
  }
  verdict.inserted = inserted;
  db = std::move(copy);
  return verdict;
}

}  // namespace fdc::oracle
