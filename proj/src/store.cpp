#include "fdc/store.hpp"

#include <cassert>
#include <sstream>

namespace fdc {

std::string_view to_string(StoreErrorCode code) {
  switch (code) {
    case StoreErrorCode::MissingRequired: return "MissingRequired";
    case StoreErrorCode::DanglingReference: return "DanglingReference";
    case StoreErrorCode::UnknownFunction: return "UnknownFunction";
    case StoreErrorCode::UnknownRow: return "UnknownRow";
    case StoreErrorCode::RestrictViolation: return "RestrictViolation";
    case StoreErrorCode::TypeMismatch: return "TypeMismatch";
  }
  return "?";
}

std::string_view to_string(RowChange::Action a) {
  switch (a) {
    case RowChange::Action::Insert: return "insert";
    case RowChange::Action::Update: return "update";
    case RowChange::Action::Delete: return "delete";
  }
  return "?";
}

namespace {

const std::set<std::int64_t> kEmpty;

std::string row_text(const Schema& schema, RowId row) {
  return schema.set(row.set).name + "#" + std::to_string(row.x);
}

}  // namespace

Database::Database(std::shared_ptr<const Schema> schema)
    : schema_(std::move(schema)),
      slot_of_(schema_->functions.size(), 0),
      tables_(schema_->sets.size()),
      reverse_(schema_->functions.size()),
      next_x_(schema_->sets.size(), 1) {
  for (const SetDef& s : schema_->sets) {
    for (std::size_t i = 0; i < s.functions.size(); ++i) slot_of_[s.functions[i].index] = i;
  }
}

const FunctionDef& Database::checked_function(SetId set, FunctionId fn) const {
  if (fn.index >= schema_->functions.size() || schema_->function(fn).domain != set) {
    throw StoreError(StoreErrorCode::UnknownFunction,
                     "function is not defined on " + schema_->set(set).name);
  }
  return schema_->function(fn);
}

void Database::check_value(const FunctionDef& f, const Value& v) const {
  const std::string where = schema_->set(f.domain).name + "." + f.name;
  if (is_null(v)) {
    if (!f.nullable) throw StoreError(StoreErrorCode::MissingRequired, where + " may not be null");
    return;
  }
  if (f.is_link()) {
    const Ref* r = std::get_if<Ref>(&v);
    if (!r) throw StoreError(StoreErrorCode::TypeMismatch, where + " expects a row of " + schema_->set(f.target()).name);
    if (!contains(RowId{f.target(), r->x})) {
      throw StoreError(StoreErrorCode::DanglingReference,
                       where + " references missing row " + row_text(*schema_, RowId{f.target(), r->x}));
    }
    return;
  }
  const bool ok = std::get<ScalarType>(f.codomain) == ScalarType::Text ? std::holds_alternative<std::string>(v)
                                                                        : std::holds_alternative<std::int64_t>(v);
  if (!ok) {
    throw StoreError(StoreErrorCode::TypeMismatch,
                     where + " expects " + std::string(to_string(std::get<ScalarType>(f.codomain))));
  }
}

void Database::index_add(FunctionId fn, const Value& target, std::int64_t source) {
  if (const Ref* r = std::get_if<Ref>(&target)) reverse_[fn.index][r->x].insert(source);
}

void Database::index_remove(FunctionId fn, const Value& target, std::int64_t source) {
  const Ref* r = std::get_if<Ref>(&target);
  if (!r) return;
  ReverseIndex& idx = reverse_[fn.index];
  auto it = idx.find(r->x);
  if (it == idx.end()) return;
  it->second.erase(source);
  if (it->second.empty()) idx.erase(it);
}

RowId Database::insert_row(SetId set, std::span<const Binding> values) {
  const SetDef& def = schema_->set(set);
  Row row(def.functions.size());
  std::vector<bool> bound(def.functions.size(), false);
  for (const auto& [fn, value] : values) {
    const FunctionDef& f = checked_function(set, fn);
    check_value(f, value);
    row[slot(fn)] = value;
    bound[slot(fn)] = true;
  }
  for (std::size_t i = 0; i < def.functions.size(); ++i) {
    const FunctionDef& f = schema_->function(def.functions[i]);
    if (!bound[i] && !f.nullable) {
      throw StoreError(StoreErrorCode::MissingRequired, def.name + "." + f.name + " is required");
    }
  }

  const std::int64_t x = next_x_[set.index]++;
  for (std::size_t i = 0; i < def.functions.size(); ++i) index_add(def.functions[i], row[i], x);
  tables_[set.index].emplace(x, std::move(row));
  if (journaling_) journal_.push_back(Inserted{set, x, x});
  return RowId{set, x};
}

void Database::write(RowId row, FunctionId fn, Value value) {
  Value& cell = tables_[row.set.index].at(row.x)[slot(fn)];
  index_remove(fn, cell, row.x);
  index_add(fn, value, row.x);
  cell = std::move(value);
}

void Database::set_value(RowId row, FunctionId fn, Value value) {
  if (!contains(row)) throw StoreError(StoreErrorCode::UnknownRow, "no row " + row_text(*schema_, row));
  const FunctionDef& f = checked_function(row.set, fn);
  check_value(f, value);
  if (journaling_) journal_.push_back(Changed{row, fn, tables_[row.set.index].at(row.x)[slot(fn)]});
  write(row, fn, std::move(value));
}

void Database::delete_row(RowId row) {
  if (!contains(row)) throw StoreError(StoreErrorCode::UnknownRow, "no row " + row_text(*schema_, row));
  std::vector<RowId> referencing;
  for (std::size_t i = 0; i < schema_->functions.size(); ++i) {
    const FunctionDef& f = schema_->functions[i];
    if (!f.is_link() || f.target() != row.set) continue;
    for (std::int64_t src : inverse(FunctionId{i}, Ref{row.x})) referencing.push_back(RowId{f.domain, src});
  }
  if (!referencing.empty()) {
    std::string msg = row_text(*schema_, row) + " is still referenced by";
    for (const RowId& r : referencing) msg += " " + row_text(*schema_, r);
    throw StoreError(StoreErrorCode::RestrictViolation, msg, std::move(referencing));
  }

  auto node = tables_[row.set.index].extract(row.x);
  const SetDef& def = schema_->set(row.set);
  for (std::size_t i = 0; i < def.functions.size(); ++i) index_remove(def.functions[i], node.mapped()[i], row.x);
  if (journaling_) journal_.push_back(Deleted{row.set, row.x, std::move(node.mapped())});
}

const Value& Database::lookup(RowId row, FunctionId fn) const {
  ++rows_inspected_;
  return peek(row, fn);
}

const std::set<std::int64_t>& Database::inverse(FunctionId fn, Ref target) const {
  const ReverseIndex& idx = reverse_.at(fn.index);
  auto it = idx.find(target.x);
  if (it == idx.end()) return kEmpty;
  rows_inspected_ += it->second.size();
  return it->second;
}

std::vector<std::int64_t> Database::rows(SetId set) const {
  std::vector<std::int64_t> out;
  out.reserve(tables_.at(set.index).size());
  for (const auto& [x, row] : tables_[set.index]) out.push_back(x);
  rows_inspected_ += out.size();
  return out;
}

bool Database::contains(RowId row) const {
  ++rows_inspected_;
  return exists(row);
}

const Value& Database::peek(RowId row, FunctionId fn) const {
  assert(schema_->function(fn).domain == row.set);
  return tables_.at(row.set.index).at(row.x).at(slot(fn));
}

bool Database::exists(RowId row) const { return tables_.at(row.set.index).count(row.x) > 0; }

std::size_t Database::row_count(SetId set) const { return tables_.at(set.index).size(); }

std::string Database::display_name(RowId row) const {
  const SetDef& def = schema_->set(row.set);
  if (def.name_attribute && exists(row)) {
    const Value& v = peek(row, *def.name_attribute);
    if (const auto* s = std::get_if<std::string>(&v)) return *s;
    if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  }
  return "#" + std::to_string(row.x);
}

std::string Database::dump() const {
  std::ostringstream out;
  for (std::size_t s = 0; s < tables_.size(); ++s) {
    const SetDef& def = schema_->sets[s];
    for (const auto& [x, row] : tables_[s]) {
      out << def.name << " x=" << x;
      for (std::size_t i = 0; i < def.functions.size(); ++i) {
        out << ' ' << schema_->function(def.functions[i]).name << '=' << to_literal(row[i]);
      }
      out << '\n';
    }
  }
  for (std::size_t s = 0; s < tables_.size(); ++s) out << "next " << schema_->sets[s].name << '=' << next_x_[s] << '\n';
  return out.str();
}

bool Database::operator==(const Database& other) const {
  return *schema_ == *other.schema_ && tables_ == other.tables_ && reverse_ == other.reverse_ &&
         next_x_ == other.next_x_;
}

void Database::undo(const JournalEntry& entry) {
  if (const auto* ins = std::get_if<Inserted>(&entry)) {
    auto node = tables_[ins->set.index].extract(ins->x);
    const SetDef& def = schema_->set(ins->set);
    for (std::size_t i = 0; i < def.functions.size(); ++i) index_remove(def.functions[i], node.mapped()[i], ins->x);
    next_x_[ins->set.index] = ins->previous_next;
  } else if (const auto* ch = std::get_if<Changed>(&entry)) {
    write(ch->row, ch->fn, ch->old_value);
  } else {
    const auto& del = std::get<Deleted>(entry);
    const SetDef& def = schema_->set(del.set);
    for (std::size_t i = 0; i < def.functions.size(); ++i) index_add(def.functions[i], del.values[i], del.x);
    tables_[del.set.index].emplace(del.x, del.values);
  }
}

Database::Staging::Staging(Database& db) : db_(&db) {
  assert(!db.journaling_);
  db_->journaling_ = true;
  db_->journal_.clear();
}

Database::Staging::~Staging() {
  if (open_) rollback();
}

void Database::Staging::commit() {
  if (!open_) return;
  db_->journal_.clear();
  db_->journaling_ = false;
  open_ = false;
}

void Database::Staging::rollback() {
  if (!open_) return;
  for (auto it = db_->journal_.rbegin(); it != db_->journal_.rend(); ++it) db_->undo(*it);
  db_->journal_.clear();
  db_->journaling_ = false;
  open_ = false;
}

std::optional<RowId> apply_raw(Database& db, const RowChange& change) {
  switch (change.action) {
    case RowChange::Action::Insert:
      return db.insert_row(change.set, change.bindings);
    case RowChange::Action::Update: {
      const RowId row{change.set, change.x};
      if (!db.contains(row)) {
        throw StoreError(StoreErrorCode::UnknownRow, "no row " + row_text(db.schema(), row));
      }
      for (const auto& [fn, value] : change.bindings) db.set_value(row, fn, value);
      return std::nullopt;
    }
    case RowChange::Action::Delete:
      db.delete_row(RowId{change.set, change.x});
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace fdc
