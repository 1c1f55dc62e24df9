#pragma once

// Schema (.fd) and mutation script (.fdm) formats.
//
//   schema Geography;
//   set RIVERS { name River : text; Mountain -> MOUNTAINS ?; }
//   constraint C commutative on RIVERS {
//     left = Continent . Range . Subrange . Group . Mountain;
//     right = Continent;
//   }
//
//   insert CONTINENTS (Continent="Europe") as eu;
//   update @alps set Continent = @asia expect reject;
//   delete @alps;

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fdc/diagnostic.hpp"
#include "fdc/model.hpp"
#include "fdc/store.hpp"

namespace fdc::dsl {

struct ParsedSchema {
  std::shared_ptr<const Schema> schema;  // null whenever diagnostics has an error
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return schema != nullptr; }
};

/// All-or-nothing: either a validated schema whose constraints are all
/// GENERAL, or every diagnostic found.
ParsedSchema parse_schema(std::string_view source);

struct Handle {
  std::string name;
  bool operator==(const Handle&) const = default;
};

/// Right-hand side of a binding as written: null, integer, text or @handle.
using Operand = std::variant<std::monostate, std::int64_t, std::string, Handle>;

struct MutationBinding {
  FunctionId function;
  Operand value;
  bool operator==(const MutationBinding&) const = default;
};

enum class Expectation { Accept, Reject };

std::string_view to_string(Expectation e);

struct Mutation {
  RowChange::Action action = RowChange::Action::Insert;
  SetId set;
  std::string row_ref;  // Update / Delete
  std::vector<MutationBinding> bindings;
  std::optional<std::string> bind_as;  // Insert
  std::optional<Expectation> expectation;
  SourcePos pos;

  /// Model equality; source positions are ignored.
  bool operator==(const Mutation& other) const {
    return action == other.action && set == other.set && row_ref == other.row_ref && bindings == other.bindings &&
           bind_as == other.bind_as && expectation == other.expectation;
  }
};

struct ParsedScript {
  std::vector<Mutation> mutations;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return !has_errors(diagnostics); }
};

/// Handles resolve forward-only: a handle must be bound by an earlier insert.
ParsedScript parse_script(std::string_view source, const Schema& schema);

std::string print_schema(const Schema& schema);
std::string print_mutation(const Schema& schema, const Mutation& m);
std::string print_script(const Schema& schema, const std::vector<Mutation>& mutations);

}  // namespace fdc::dsl
