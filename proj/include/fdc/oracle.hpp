#pragma once

// Brute-force ground truth: re-evaluates every constraint on every row of its
// domain. Intentionally O(|D| * (n + m)) per constraint.

#include <cstdint>
#include <vector>

#include "fdc/engine.hpp"
#include "fdc/store.hpp"

namespace fdc::oracle {

struct OracleReport {
  std::vector<Violation> violations;  // sorted by (constraint, witness x)
  std::uint64_t rows_scanned = 0;
};

OracleReport full_check(const Database& db);

/// Applies the change to a copy with store checks only and compares
/// full_check before and after. Rejects iff a (constraint, witness) pair is
/// violated afterwards that was not violated before. On acceptance `db` is
/// replaced by the updated copy; on rejection it is left untouched.
/// Verdict::rows_inspected counts the rows the copy touched.
Verdict oracle_apply(Database& db, const RowChange& change);

}  // namespace fdc::oracle
