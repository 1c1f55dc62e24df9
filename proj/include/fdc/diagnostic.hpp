#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace fdc {

struct SourcePos {
  int line = 1;
  int column = 1;
  bool operator==(const SourcePos&) const = default;
};

enum class Severity { Error, Warning };

enum class DiagCode {
  // lexical
  UnexpectedCharacter,
  UnterminatedString,
  InvalidEscape,
  IntegerOverflow,
  // syntax
  UnexpectedToken,
  NoSchema,
  // schema
  DuplicateSet,
  DuplicateFunction,
  UnknownSet,
  DuplicateNameAttribute,
  InvalidNameAttribute,
  DuplicateConstraint,
  // diagrams
  UnknownFunction,
  BrokenComposition,
  CodomainMismatch,
  DomainMismatch,
  TrivialIdentity,
  RefusedHbfp,
  RefusedLocal,
  // scripts
  UnboundHandle,
  DuplicateHandle,
  DuplicateBinding,
  TypeMismatch,
};

std::string_view to_string(DiagCode code);

struct Diagnostic {
  Severity severity = Severity::Error;
  SourcePos pos;
  DiagCode code = DiagCode::UnexpectedToken;
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

Diagnostic error(SourcePos pos, DiagCode code, std::string message);

/// "line:col: error[Code]: message", prefixed with `file` when non-empty.
std::string format(const Diagnostic& d, std::string_view file = {});

bool has_errors(const std::vector<Diagnostic>& diags);

}  // namespace fdc
