#pragma once

// Schema and constraint model: sets, functions, composition chains and
// function diagram constraints over them.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fdc/diagnostic.hpp"

namespace fdc {

struct SetId {
  std::size_t index = 0;
  auto operator<=>(const SetId&) const = default;
};

struct FunctionId {
  std::size_t index = 0;
  auto operator<=>(const FunctionId&) const = default;
};

enum class ScalarType { Text, Integer };

std::string_view to_string(ScalarType t);

/// Codomain of a function: another set (link function) or a scalar domain
/// (attribute function).
using Codomain = std::variant<SetId, ScalarType>;

struct SetDef {
  std::string name;
  /// The designated display attribute; absent when the set declares none.
  std::optional<FunctionId> name_attribute;
  /// Functions defined on this set, in declaration order.
  std::vector<FunctionId> functions;

  bool operator==(const SetDef&) const = default;
};

struct FunctionDef {
  std::string name;
  SetId domain;
  Codomain codomain;
  bool nullable = false;

  bool is_link() const { return std::holds_alternative<SetId>(codomain); }
  SetId target() const { return std::get<SetId>(codomain); }

  bool operator==(const FunctionDef&) const = default;
};

/// A composition chain f1 . f2 . ... . fn stored outermost-first: entry 0 is
/// f1 (applied last), the final entry is fn (defined on the common domain).
/// An identity chain has no entries and stands for the unity mapping of the
/// common domain.
struct ChainSpec {
  std::vector<FunctionId> functions;
  bool identity = false;

  std::size_t length() const { return functions.size(); }
  /// 1-based position, as used in Occurrence and diagnostics.
  FunctionId at(std::size_t position) const { return functions.at(position - 1); }

  bool operator==(const ChainSpec&) const = default;
};

enum class ConstraintKind { Commutative, AntiCommutative };

std::string_view to_string(ConstraintKind k);

enum class ChainSide { Left, Right };

std::string_view to_string(ChainSide s);

struct DiagramConstraint {
  std::string id;
  ConstraintKind kind = ConstraintKind::Commutative;
  SetId domain;
  ChainSpec left;
  ChainSpec right;
  /// Message template; may contain {constraint}, {witness}, {left}, {right}.
  std::string message;

  const ChainSpec& chain(ChainSide side) const { return side == ChainSide::Left ? left : right; }
  const ChainSpec& other(ChainSide side) const { return side == ChainSide::Left ? right : left; }

  bool operator==(const DiagramConstraint&) const = default;
};

enum class ConstraintClass { General, Hbfp, Local };

std::string_view to_string(ConstraintClass c);

/// Immutable once built. Holds sets, functions and the accepted constraints.
class Schema {
 public:
  std::string name;
  std::vector<SetDef> sets;
  std::vector<FunctionDef> functions;
  std::vector<DiagramConstraint> constraints;

  const SetDef& set(SetId id) const { return sets.at(id.index); }
  const FunctionDef& function(FunctionId id) const { return functions.at(id.index); }

  std::optional<SetId> find_set(std::string_view set_name) const;
  /// Looks a function up by (domain, name).
  std::optional<FunctionId> find_function(SetId domain, std::string_view fn_name) const;
  const DiagramConstraint* find_constraint(std::string_view id) const;

  /// Adds a set without functions. Caller guarantees name uniqueness.
  SetId add_set(std::string set_name);
  FunctionId add_function(SetId domain, std::string fn_name, Codomain codomain, bool nullable);

  /// "SET.function" for messages.
  std::string qualified_name(FunctionId id) const;
  std::string codomain_name(const Codomain& c) const;
  Codomain chain_codomain(const ChainSpec& chain, SetId domain) const;
  /// Renders a chain outermost-first joined by " ∘ ", or "1_D" for identity.
  std::string chain_text(const ChainSpec& chain, SetId domain) const;

  bool operator==(const Schema&) const = default;
};

/// A chain as written in source: names outermost-first, each with a position.
struct RawChain {
  struct Entry {
    std::string name;
    SourcePos pos;
  };
  std::vector<Entry> entries;
  bool identity = false;
  SourcePos pos;
};

struct RawConstraint {
  std::string id;
  ConstraintKind kind = ConstraintKind::Commutative;
  std::string domain;
  SourcePos domain_pos;
  RawChain left;
  RawChain right;
  std::optional<std::string> message;
  SourcePos pos;
};

/// Result of resolving a raw constraint: the candidate constraint (possibly
/// of a refused class) or every diagnostic found while resolving.
struct ResolvedDiagram {
  std::optional<DiagramConstraint> constraint;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return constraint.has_value() && diagnostics.empty(); }
};

/// Resolves both chains by walking domains from the common domain outward and
/// checks composability and the shared codomain. Reports every problem found.
/// Does not classify; see classify_constraint.
ResolvedDiagram validate_diagram(const Schema& schema, const RawConstraint& raw);

ConstraintClass classify_constraint(const DiagramConstraint& c);

/// Builds the diagnostic that refuses a non-general constraint and names the
/// enforcement family that handles it instead.
Diagnostic refusal_diagnostic(const DiagramConstraint& c, ConstraintClass cls, SourcePos pos);

/// Default message template for a constraint.
std::string default_message(const Schema& schema, const DiagramConstraint& c);

/// Re-walks a constraint's chains and returns a description of the first
/// broken structural invariant, if any.
std::optional<std::string> check_resolved(const Schema& schema, const DiagramConstraint& c);

}  // namespace fdc
