#pragma once

// Random schemas, databases and mutation streams for property tests.

#include <cstdint>
#include <memory>
#include <random>
#include <set>
#include <vector>

#include "fdc/engine.hpp"
#include "fdc/model.hpp"
#include "fdc/store.hpp"

namespace fdc::testing {

using Rng = std::mt19937_64;

struct WorldSpec {
  int min_chain = 1;
  int max_chain = 6;
  int max_diagrams = 2;
  int min_rows = 10;
  int max_rows = 500;
  double null_rate = 0.3;
};

/// One or more independent diagrams, each over its own sets. Chains may share
/// an outer prefix (f1 .. fk) like the frontier-color example.
std::shared_ptr<const Schema> random_schema(Rng& rng, const WorldSpec& spec);

/// Fills every set in dependency order through the engine, so the result is
/// a reachable state. Domain rows retry a few random candidates.
void populate(Database& db, const Engine& engine, Rng& rng, const WorldSpec& spec);

/// A random insert, update or delete; some violate store rules on purpose.
/// Functions in `frozen` are only ever bound to null.
RowChange random_mutation(const Database& db, Rng& rng, double null_rate, const std::set<FunctionId>& frozen = {});

/// Random value for a function: a live row of its target, a small integer or
/// text, or null (nullable functions only, with probability null_rate).
Value random_value(const Database& db, Rng& rng, const FunctionDef& f, double null_rate);

/// { x in D : f(i+1) . ... . fn (x) = r } by scanning every row of D.
std::set<std::int64_t> brute_affected(const Database& db, const ChainSpec& chain, SetId domain,
                                      std::size_t position, std::int64_t r);

/// Composed chain value by uncounted reads.
Value brute_eval(const Database& db, const ChainSpec& chain, std::int64_t x);

}  // namespace fdc::testing
