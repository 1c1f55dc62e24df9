#pragma once

// Chain evaluation with null propagation and incremental enforcement of
// commutative / anti-commutative function diagram constraints.
//
// Every check reads the database it is given as the post-mutation state:
// apply_mutation stages the change in place, checks, and rolls back on
// rejection.

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fdc/model.hpp"
#include "fdc/store.hpp"
#include "fdc/value.hpp"

namespace fdc {

/// One chain position of one constraint: where a check must be planted.
struct Occurrence {
  std::size_t constraint = 0;  // index into Schema::constraints
  ChainSide side = ChainSide::Left;
  std::size_t position = 1;  // 1-based, outermost first

  auto operator<=>(const Occurrence&) const = default;
};

enum class ViolationKind { Commutative, AntiCommutative, StoreError };

std::string_view to_string(ViolationKind k);

struct ChangedCell {
  SetId set;
  std::string function;
  std::int64_t x = 0;
  bool operator==(const ChangedCell&) const = default;
};

struct Violation {
  std::string constraint;
  ViolationKind kind = ViolationKind::Commutative;
  std::optional<RowId> witness;
  Value left;
  Value right;
  /// Set of the compared values when they are rows; empty for scalars.
  std::optional<SetId> value_set;
  std::optional<ChangedCell> changed;
  std::string message;

  bool operator==(const Violation&) const = default;
};

enum class Outcome { Applied, Rejected };

std::string_view to_string(Outcome o);

struct Verdict {
  Outcome outcome = Outcome::Applied;
  std::vector<Violation> violations;
  /// Surrogate assigned by an applied insert.
  std::optional<RowId> inserted;
  /// Rows touched while deciding, from the store's inspection counter.
  std::uint64_t rows_inspected = 0;

  bool applied() const { return outcome == Outcome::Applied; }
};

/// Applies fn, fn-1, ..., f1 starting from row x of the common domain.
Value eval_chain(const Database& db, const ChainSpec& chain, RowId x);

/// Applies f(i-1), ..., f1 to `start`, a value of codom(f_i). Position 1
/// returns start unchanged.
Value eval_prefix(const Database& db, const ChainSpec& chain, std::size_t position, const Value& start);

/// { x in D : f(i+1) . ... . fn (x) = r }, via reverse-index steps outward
/// from r. For position = chain length the result is {r.x}.
std::set<std::int64_t> affected_rows(const Database& db, const ChainSpec& chain, std::size_t position,
                                     std::int64_t r);

/// Whether a pair of composed values violates a constraint of `kind`.
/// Nulls never violate.
bool violates(ConstraintKind kind, const Value& left, const Value& right);

std::vector<Violation> check_domain_row(const Database& db, const DiagramConstraint& c, std::int64_t x);

std::vector<Violation> check_link_update(const Database& db, const Occurrence& occurrence, std::int64_t r,
                                         const Value& new_value);

using DispatchKey = std::pair<SetId, FunctionId>;
using DispatchMap = std::map<DispatchKey, std::vector<Occurrence>>;

/// Every chain position of every constraint, keyed by (dom(f_i), f_i).
DispatchMap dispatch(const Schema& schema);

/// Fills in the message from the constraint's template.
Violation make_violation(const Database& db, const DiagramConstraint& c, std::int64_t witness, Value left,
                         Value right, std::optional<ChangedCell> changed);

/// Wraps a store-level failure as a violation of kind StoreError; the error
/// code goes in the constraint field.
Violation store_violation(const StoreError& error, const RowChange& change);

class Engine {
 public:
  explicit Engine(std::shared_ptr<const Schema> schema);

  const Schema& schema() const { return *schema_; }
  const DispatchMap& dispatch_map() const { return dispatch_; }

  /// Stages the change, runs store validation and every triggered
  /// constraint check, and commits only when nothing is violated. A rejected
  /// change leaves the database exactly as it was.
  Verdict apply(Database& db, const RowChange& change) const;

 private:
  std::vector<Violation> check_staged(const Database& db, const RowChange& change, std::int64_t x,
                                      const std::vector<Binding>& old_values) const;

  std::shared_ptr<const Schema> schema_;
  DispatchMap dispatch_;
};

Verdict apply_mutation(Database& db, const RowChange& change);

/// Sorts by (constraint, witness x) and removes duplicates.
void normalize_violations(std::vector<Violation>& violations);

/// "constraint=C kind=commutative witness=RIVERS#4 left=CONTINENTS#1 right=..."
std::string render_line(const Schema& schema, const Violation& v);

}  // namespace fdc
