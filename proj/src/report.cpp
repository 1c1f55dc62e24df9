#include "fdc/report.hpp"

namespace fdc {

namespace {

nlohmann::json row_json(const Schema& schema, const RowId& row) {
  return {{"set", schema.set(row.set).name}, {"x", row.x}};
}

}  // namespace

nlohmann::json value_json(const Schema& schema, const Value& v, std::optional<SetId> value_set) {
  if (is_null(v)) return nullptr;
  if (const auto* r = std::get_if<Ref>(&v)) {
    if (value_set) return row_json(schema, RowId{*value_set, r->x});
    return {{"set", nullptr}, {"x", r->x}};
  }
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  return std::get<std::string>(v);
}

nlohmann::json violation_json(const Schema& schema, const Violation& v) {
  nlohmann::json out;
  out["constraint"] = v.constraint;
  out["kind"] = to_string(v.kind);
  out["witness"] = v.witness ? row_json(schema, *v.witness) : nlohmann::json(nullptr);
  out["left"] = value_json(schema, v.left, v.value_set);
  out["right"] = value_json(schema, v.right, v.value_set);
  if (v.changed) {
    out["changed"] = {{"set", schema.set(v.changed->set).name}, {"function", v.changed->function}, {"x", v.changed->x}};
  } else {
    out["changed"] = nullptr;
  }
  out["message"] = v.message;
  return out;
}

nlohmann::json verdict_json(const Schema& schema, const Verdict& verdict) {
  nlohmann::json out;
  out["outcome"] = to_string(verdict.outcome);
  out["inserted"] = verdict.inserted ? row_json(schema, *verdict.inserted) : nlohmann::json(nullptr);
  out["rows_inspected"] = verdict.rows_inspected;
  out["violations"] = nlohmann::json::array();
  for (const Violation& v : verdict.violations) out["violations"].push_back(violation_json(schema, v));
  return out;
}

}  // namespace fdc
