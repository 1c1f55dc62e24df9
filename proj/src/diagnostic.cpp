#include "fdc/diagnostic.hpp"

#include <algorithm>

namespace fdc {

std::string_view to_string(DiagCode code) {
  switch (code) {
    case DiagCode::UnexpectedCharacter: return "UnexpectedCharacter";
    case DiagCode::UnterminatedString: return "UnterminatedString";
    case DiagCode::InvalidEscape: return "InvalidEscape";
    case DiagCode::IntegerOverflow: return "IntegerOverflow";
    case DiagCode::UnexpectedToken: return "UnexpectedToken";
    case DiagCode::NoSchema: return "NoSchema";
    case DiagCode::DuplicateSet: return "DuplicateSet";
    case DiagCode::DuplicateFunction: return "DuplicateFunction";
    case DiagCode::UnknownSet: return "UnknownSet";
    case DiagCode::DuplicateNameAttribute: return "DuplicateNameAttribute";
    case DiagCode::InvalidNameAttribute: return "InvalidNameAttribute";
    case DiagCode::DuplicateConstraint: return "DuplicateConstraint";
    case DiagCode::UnknownFunction: return "UnknownFunction";
    case DiagCode::BrokenComposition: return "BrokenComposition";
    case DiagCode::CodomainMismatch: return "CodomainMismatch";
    case DiagCode::DomainMismatch: return "DomainMismatch";
    case DiagCode::TrivialIdentity: return "TrivialIdentity";
    case DiagCode::RefusedHbfp: return "RefusedHbfp";
    case DiagCode::RefusedLocal: return "RefusedLocal";
    case DiagCode::UnboundHandle: return "UnboundHandle";
    case DiagCode::DuplicateHandle: return "DuplicateHandle";
    case DiagCode::DuplicateBinding: return "DuplicateBinding";
    case DiagCode::TypeMismatch: return "TypeMismatch";
  }
  return "Unknown";
}

Diagnostic error(SourcePos pos, DiagCode code, std::string message) {
  return Diagnostic{Severity::Error, pos, code, std::move(message)};
}

std::string format(const Diagnostic& d, std::string_view file) {
  std::string out;
  if (!file.empty()) {
    out.append(file);
    out += ':';
  }
  out += std::to_string(d.pos.line) + ":" + std::to_string(d.pos.column) + ": ";
  out += d.severity == Severity::Error ? "error" : "warning";
  out += "[";
  out += to_string(d.code);
  out += "]: ";
  out += d.message;
  return out;
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

}  // namespace fdc
