#include "fdc/engine.hpp"

#include <algorithm>
#include <tuple>

namespace fdc {

std::string_view to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::Commutative: return "commutative";
    case ViolationKind::AntiCommutative: return "anticommutative";
    case ViolationKind::StoreError: return "store-error";
  }
  return "?";
}

std::string_view to_string(Outcome o) { return o == Outcome::Applied ? "applied" : "rejected"; }

Value eval_chain(const Database& db, const ChainSpec& chain, RowId x) {
  Value value = Ref{x.x};
  const Schema& schema = db.schema();
  for (std::size_t p = chain.length(); p >= 1; --p) {
    const Ref* at = std::get_if<Ref>(&value);
    if (!at) return Value{};
    const FunctionId fn = chain.at(p);
    value = db.lookup(RowId{schema.function(fn).domain, at->x}, fn);
  }
  return value;
}

Value eval_prefix(const Database& db, const ChainSpec& chain, std::size_t position, const Value& start) {
  Value value = start;
  const Schema& schema = db.schema();
  for (std::size_t p = position - 1; p >= 1; --p) {
    const Ref* at = std::get_if<Ref>(&value);
    if (!at) return Value{};
    const FunctionId fn = chain.at(p);
    value = db.lookup(RowId{schema.function(fn).domain, at->x}, fn);
  }
  return value;
}

std::set<std::int64_t> affected_rows(const Database& db, const ChainSpec& chain, std::size_t position,
                                     std::int64_t r) {
  std::set<std::int64_t> frontier{r};
  for (std::size_t p = position + 1; p <= chain.length() && !frontier.empty(); ++p) {
    std::set<std::int64_t> next;
    for (std::int64_t t : frontier) {
      const auto& sources = db.inverse(chain.at(p), Ref{t});
      next.insert(sources.begin(), sources.end());
    }
    frontier = std::move(next);
  }
  return frontier;
}

bool violates(ConstraintKind kind, const Value& left, const Value& right) {
  if (is_null(left) || is_null(right)) return false;
  return kind == ConstraintKind::Commutative ? left != right : left == right;
}

namespace {

std::string display_value(const Database& db, const Value& v, std::optional<SetId> value_set) {
  if (const auto* r = std::get_if<Ref>(&v)) {
    return value_set ? db.display_name(RowId{*value_set, r->x}) : "#" + std::to_string(r->x);
  }
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  return "null";
}

void replace_all(std::string& text, std::string_view key, const std::string& with) {
  for (std::size_t at = text.find(key); at != std::string::npos; at = text.find(key, at + with.size())) {
    text.replace(at, key.size(), with);
  }
}

}  // namespace

Violation make_violation(const Database& db, const DiagramConstraint& c, std::int64_t witness, Value left,
                         Value right, std::optional<ChangedCell> changed) {
  Violation v;
  v.constraint = c.id;
  v.kind = c.kind == ConstraintKind::Commutative ? ViolationKind::Commutative : ViolationKind::AntiCommutative;
  v.witness = RowId{c.domain, witness};
  const Codomain codomain = db.schema().chain_codomain(c.left, c.domain);
  if (const auto* s = std::get_if<SetId>(&codomain)) v.value_set = *s;
  v.left = std::move(left);
  v.right = std::move(right);
  v.changed = std::move(changed);

  v.message = c.message;
  replace_all(v.message, "{constraint}", c.id);
  replace_all(v.message, "{witness}", db.display_name(*v.witness));
  replace_all(v.message, "{left}", display_value(db, v.left, v.value_set));
  replace_all(v.message, "{right}", display_value(db, v.right, v.value_set));
  return v;
}

std::vector<Violation> check_domain_row(const Database& db, const DiagramConstraint& c, std::int64_t x) {
  const RowId row{c.domain, x};
  Value left = eval_chain(db, c.left, row);
  if (is_null(left)) return {};
  Value right = eval_chain(db, c.right, row);
  if (!violates(c.kind, left, right)) return {};
  return {make_violation(db, c, x, std::move(left), std::move(right), std::nullopt)};
}

std::vector<Violation> check_link_update(const Database& db, const Occurrence& occurrence, std::int64_t r,
                                         const Value& new_value) {
  const Schema& schema = db.schema();
  const DiagramConstraint& c = schema.constraints.at(occurrence.constraint);
  const ChainSpec& own = c.chain(occurrence.side);
  const ChainSpec& other = c.other(occurrence.side);

  const Value head = eval_prefix(db, own, occurrence.position, new_value);
  if (is_null(head)) return {};

  const FunctionId fn = own.at(occurrence.position);
  const ChangedCell changed{schema.function(fn).domain, schema.function(fn).name, r};

  std::vector<Violation> out;
  for (std::int64_t x : affected_rows(db, own, occurrence.position, r)) {
    Value theirs = eval_chain(db, other, RowId{c.domain, x});
    const bool left_side = occurrence.side == ChainSide::Left;
    const Value& left = left_side ? head : theirs;
    const Value& right = left_side ? theirs : head;
    if (violates(c.kind, left, right)) out.push_back(make_violation(db, c, x, left, right, changed));
  }
  return out;
}

DispatchMap dispatch(const Schema& schema) {
  DispatchMap map;
  for (std::size_t ci = 0; ci < schema.constraints.size(); ++ci) {
    const DiagramConstraint& c = schema.constraints[ci];
    for (ChainSide side : {ChainSide::Left, ChainSide::Right}) {
      const ChainSpec& chain = c.chain(side);
      for (std::size_t p = 1; p <= chain.length(); ++p) {
        const FunctionId fn = chain.at(p);
        map[{schema.function(fn).domain, fn}].push_back(Occurrence{ci, side, p});
      }
    }
  }
  return map;
}

void normalize_violations(std::vector<Violation>& violations) {
  auto key = [](const Violation& v) {
    return std::make_tuple(v.constraint, v.witness ? v.witness->x : 0, v.changed ? v.changed->function : "");
  };
  std::stable_sort(violations.begin(), violations.end(),
                   [&](const Violation& a, const Violation& b) { return key(a) < key(b); });
  violations.erase(std::unique(violations.begin(), violations.end(),
                               [](const Violation& a, const Violation& b) {
                                 return a.constraint == b.constraint && a.witness == b.witness &&
                                        a.left == b.left && a.right == b.right;
                               }),
                   violations.end());
}

Violation store_violation(const StoreError& error, const RowChange& change) {
  Violation v;
  v.kind = ViolationKind::StoreError;
  v.constraint = std::string(to_string(error.code()));
  if (change.action != RowChange::Action::Insert) v.witness = RowId{change.set, change.x};
  v.message = error.what();
  return v;
}

Engine::Engine(std::shared_ptr<const Schema> schema) : schema_(std::move(schema)), dispatch_(dispatch(*schema_)) {}

std::vector<Violation> Engine::check_staged(const Database& db, const RowChange& change, std::int64_t x,
                                            const std::vector<Binding>& old_values) const {
  std::vector<Violation> out;
  auto append = [&out](std::vector<Violation> more) {
    out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
  };

  if (change.action == RowChange::Action::Insert) {
    // A fresh row has no inbound references, so only its own diagrams can break.
    for (const DiagramConstraint& c : schema_->constraints) {
      if (c.domain == change.set) append(check_domain_row(db, c, x));
    }
    return out;
  }
  if (change.action != RowChange::Action::Update) return out;

  std::set<std::size_t> domain_checks;
  for (const auto& [fn, old_value] : old_values) {
    const Value& now = db.peek(RowId{change.set, x}, fn);
    if (now == old_value) continue;
    auto it = dispatch_.find({change.set, fn});
    if (it == dispatch_.end()) continue;
    for (const Occurrence& occ : it->second) {
      const DiagramConstraint& c = schema_->constraints[occ.constraint];
      if (occ.position == c.chain(occ.side).length()) {
        domain_checks.insert(occ.constraint);
      } else {
        append(check_link_update(db, occ, x, now));
      }
    }
  }
  for (std::size_t ci : domain_checks) append(check_domain_row(db, schema_->constraints[ci], x));
  return out;
}

Verdict Engine::apply(Database& db, const RowChange& change) const {
  Verdict verdict;
  const std::uint64_t counter_start = db.rows_inspected();
  Database::Staging staging(db);

  std::vector<Binding> old_values;
  std::optional<RowId> inserted;
  try {
    if (change.action == RowChange::Action::Update) {
      const RowId row{change.set, change.x};
      if (db.contains(row)) {
        for (const auto& [fn, value] : change.bindings) {
          const bool seen = std::any_of(old_values.begin(), old_values.end(),
                                        [&](const Binding& b) { return b.first == fn; });
          if (seen || fn.index >= schema_->functions.size() || schema_->function(fn).domain != change.set) continue;
          old_values.emplace_back(fn, db.lookup(row, fn));
        }
      }
    }
    inserted = apply_raw(db, change);
  } catch (const StoreError& e) {
    verdict.outcome = Outcome::Rejected;
    verdict.violations.push_back(store_violation(e, change));
    verdict.rows_inspected = db.rows_inspected() - counter_start;
    return verdict;
  }

  const std::int64_t x = inserted ? inserted->x : change.x;
  verdict.violations = check_staged(db, change, x, old_values);
  normalize_violations(verdict.violations);
  if (verdict.violations.empty()) {
    staging.commit();
    verdict.inserted = inserted;
  } else {
    verdict.outcome = Outcome::Rejected;
  }
  verdict.rows_inspected = db.rows_inspected() - counter_start;
  return verdict;
}

Verdict apply_mutation(Database& db, const RowChange& change) { return Engine(db.schema_ptr()).apply(db, change); }

std::string render_line(const Schema& schema, const Violation& v) {
  std::string out = "constraint=" + (v.constraint.empty() ? std::string("-") : v.constraint);
  out += " kind=";
  out += to_string(v.kind);
  out += " witness=";
  out += v.witness ? schema.set(v.witness->set).name + "#" + std::to_string(v.witness->x) : "-";
  auto value_text = [&](const Value& val) {
    if (const auto* r = std::get_if<Ref>(&val); r && v.value_set) {
      return schema.set(*v.value_set).name + "#" + std::to_string(r->x);
    }
    return to_literal(val);
  };
  if (v.kind != ViolationKind::StoreError) {
    out += " left=" + value_text(v.left);
    out += " right=" + value_text(v.right);
    out += " changed=";
    out += v.changed ? schema.set(v.changed->set).name + "." + v.changed->function + "#" + std::to_string(v.changed->x)
                     : "-";
  }
  out += " message=" + quote_string(v.message);
  return out;
}

}  // namespace fdc
