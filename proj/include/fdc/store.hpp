#pragma once

// In-memory relational store: one table per set keyed by surrogate x, with
// referential integrity and a reverse index on every link function.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fdc/model.hpp"
#include "fdc/value.hpp"

namespace fdc {

struct RowId {
  SetId set;
  std::int64_t x = 0;
  auto operator<=>(const RowId&) const = default;
};

enum class StoreErrorCode {
  MissingRequired,
  DanglingReference,
  UnknownFunction,
  UnknownRow,
  RestrictViolation,
  TypeMismatch,
};

std::string_view to_string(StoreErrorCode code);

class StoreError : public std::runtime_error {
 public:
  StoreError(StoreErrorCode code, const std::string& what, std::vector<RowId> rows = {})
      : std::runtime_error(what), code_(code), rows_(std::move(rows)) {}

  StoreErrorCode code() const { return code_; }
  /// For RestrictViolation: the referencing rows.
  const std::vector<RowId>& rows() const { return rows_; }

 private:
  StoreErrorCode code_;
  std::vector<RowId> rows_;
};

using Binding = std::pair<FunctionId, Value>;

/// A mutation with every symbolic reference already resolved to a surrogate.
struct RowChange {
  enum class Action { Insert, Update, Delete };

  Action action = Action::Insert;
  SetId set;
  std::int64_t x = 0;  // target row for Update/Delete
  std::vector<Binding> bindings;
};

std::string_view to_string(RowChange::Action a);

class Database {
 public:
  explicit Database(std::shared_ptr<const Schema> schema);

  const Schema& schema() const { return *schema_; }
  const std::shared_ptr<const Schema>& schema_ptr() const { return schema_; }

  /// Unbound nullable functions default to null.
  RowId insert_row(SetId set, std::span<const Binding> values);
  void set_value(RowId row, FunctionId fn, Value value);
  /// RESTRICT: refuses while any link still references the row.
  void delete_row(RowId row);

  // Counted reads: every row touched adds one to rows_inspected().
  const Value& lookup(RowId row, FunctionId fn) const;
  /// Exact preimage { r : fn(r) = target } of a link function.
  const std::set<std::int64_t>& inverse(FunctionId fn, Ref target) const;
  std::vector<std::int64_t> rows(SetId set) const;
  bool contains(RowId row) const;

  // Uncounted reads, for rendering and debugging.
  const Value& peek(RowId row, FunctionId fn) const;
  bool exists(RowId row) const;
  std::size_t row_count(SetId set) const;
  /// Value of the set's name attribute, or "#x" when it has none.
  std::string display_name(RowId row) const;

  std::uint64_t rows_inspected() const { return rows_inspected_; }
  void reset_rows_inspected() { rows_inspected_ = 0; }

  /// Line-oriented text dump: one line per row, "SET x=1 fn=value ...",
  /// followed by one "next SET=k" line per set. Not a stable format.
  std::string dump() const;

  /// Compares data (rows, reverse indexes, surrogate counters); ignores the
  /// inspection counter.
  bool operator==(const Database& other) const;

  /// Records every change made while alive and undoes them on destruction
  /// unless commit() was called. Only one may be active at a time.
  class Staging {
   public:
    explicit Staging(Database& db);
    Staging(const Staging&) = delete;
    Staging& operator=(const Staging&) = delete;
    ~Staging();

    void commit();
    void rollback();

   private:
    Database* db_;
    bool open_ = true;
  };

 private:
  struct Inserted {
    SetId set;
    std::int64_t x;
    std::int64_t previous_next;
  };
  struct Changed {
    RowId row;
    FunctionId fn;
    Value old_value;
  };
  struct Deleted {
    SetId set;
    std::int64_t x;
    std::vector<Value> values;
  };
  using JournalEntry = std::variant<Inserted, Changed, Deleted>;

  using Row = std::vector<Value>;
  using Table = std::map<std::int64_t, Row>;
  using ReverseIndex = std::map<std::int64_t, std::set<std::int64_t>>;

  std::size_t slot(FunctionId fn) const { return slot_of_.at(fn.index); }
  const FunctionDef& checked_function(SetId set, FunctionId fn) const;
  void check_value(const FunctionDef& f, const Value& v) const;
  void index_add(FunctionId fn, const Value& target, std::int64_t source);
  void index_remove(FunctionId fn, const Value& target, std::int64_t source);
  void write(RowId row, FunctionId fn, Value value);
  void undo(const JournalEntry& entry);

  std::shared_ptr<const Schema> schema_;
  std::vector<std::size_t> slot_of_;
  std::vector<Table> tables_;
  std::vector<ReverseIndex> reverse_;
  std::vector<std::int64_t> next_x_;
  mutable std::uint64_t rows_inspected_ = 0;

  bool journaling_ = false;
  std::vector<JournalEntry> journal_;
};

/// Applies a change with store-level checks only (no diagram constraints).
/// Returns the new row for inserts.
std::optional<RowId> apply_raw(Database& db, const RowChange& change);

}  // namespace fdc
