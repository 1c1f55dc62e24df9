#pragma once

// JSON rendering of verdicts and violations.

#include <json.hpp>

#include "fdc/engine.hpp"
#include "fdc/model.hpp"
#include "fdc/value.hpp"

namespace fdc {

/// null, an integer, a string, or {"set": S, "x": n} for a row reference.
nlohmann::json value_json(const Schema& schema, const Value& v, std::optional<SetId> value_set);

/// Fixed fields: constraint, kind, witness, left, right, changed, message.
nlohmann::json violation_json(const Schema& schema, const Violation& v);

nlohmann::json verdict_json(const Schema& schema, const Verdict& verdict);

}  // namespace fdc
