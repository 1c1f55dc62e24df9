#pragma once

// Text emitters for combo-box row-source queries and trigger-style check
// procedures, in an event-handler dialect (PaperStyle, VBA-like) and a
// portable trigger dialect (GenericSql, SQLite-compatible).

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fdc/model.hpp"

namespace fdc::codegen {

enum class Dialect { PaperStyle, GenericSql };

std::string_view to_string(Dialect d);
std::optional<Dialect> parse_dialect(std::string_view text);

enum class UnitKind { RowSource, DomainCheck, LinkCheck };

std::string_view to_string(UnitKind k);

struct EmittedUnit {
  SetId set;
  /// Target function name; "Form" for row-level domain checks.
  std::string function;
  UnitKind kind = UnitKind::RowSource;
  Dialect dialect = Dialect::PaperStyle;
  /// Constraint ids covered, joined by '+' after merging.
  std::string constraint;
  /// Independent check blocks; body wraps them for the dialect.
  std::vector<std::string> sections;
  std::string body;

  /// <set>_<function>_<constraint>.<dialect>.txt; row sources carry a
  /// "_RowSource" suffix on the function part.
  std::string file_name(const Schema& schema) const;
};

/// Row source of the combo box for the innermost function of one side:
/// a three-column right-join ladder query for chains longer than one, a
/// two-column query over the codomain set otherwise.
EmittedUnit gen_row_source(const Schema& schema, const DiagramConstraint& c, ChainSide side);

/// Row-level check on the common domain.
EmittedUnit gen_domain_check(const Schema& schema, const DiagramConstraint& c, Dialect dialect);

/// One unit per (set, function) target below the top of either chain; both
/// sides' positions on the same target share a unit. Left side first,
/// positions ascending.
std::vector<EmittedUnit> gen_link_checks(const Schema& schema, const DiagramConstraint& c, Dialect dialect);

/// Concatenates units that share (set, function, kind, dialect), keeping the
/// order of first appearance.
std::vector<EmittedUnit> merge_units(std::vector<EmittedUnit> units);

/// Canonical form for comparing emitted text: one space between tokens, line
/// continuations dropped, square-bracket quoting removed, keywords
/// uppercased. Idempotent.
std::string normalize_text(std::string_view body);

}  // namespace fdc::codegen
