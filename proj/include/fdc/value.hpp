#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <variant>

namespace fdc {

/// Surrogate identifier of a row within a set. Values start at 1.
struct Ref {
  std::int64_t x = 0;
  auto operator<=>(const Ref&) const = default;
};

/// A cell value: null, a link target, an integer or a text.
using Value = std::variant<std::monostate, Ref, std::int64_t, std::string>;

inline bool is_null(const Value& v) { return std::holds_alternative<std::monostate>(v); }

/// Literal rendering: null, #x, 42, "text" (with escapes).
std::string to_literal(const Value& v);

std::string quote_string(const std::string& s);

}  // namespace fdc
