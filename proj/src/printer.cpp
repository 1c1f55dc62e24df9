#include <sstream>

#include "fdc/dsl.hpp"
#include "fdc/value.hpp"

namespace fdc::dsl {

namespace {

std::string chain_source(const Schema& schema, const ChainSpec& chain) {
  if (chain.identity) return "identity";
  std::string out;
  for (std::size_t i = 0; i < chain.functions.size(); ++i) {
    if (i > 0) out += " . ";
    out += schema.function(chain.functions[i]).name;
  }
  return out;
}

std::string operand_source(const Operand& v) {
  if (std::holds_alternative<std::monostate>(v)) return "null";
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (const auto* s = std::get_if<std::string>(&v)) return quote_string(*s);
  return "@" + std::get<Handle>(v).name;
}

}  // namespace

std::string print_schema(const Schema& schema) {
  std::ostringstream out;
  out << "schema " << schema.name << ";\n";
  for (const SetDef& s : schema.sets) {
    out << "\nset " << s.name << " {\n";
    for (FunctionId fid : s.functions) {
      const FunctionDef& f = schema.function(fid);
      out << "  ";
      if (s.name_attribute == fid) out << "name ";
      out << f.name;
      if (f.is_link()) {
        out << " -> " << schema.set(f.target()).name;
      } else {
        out << " : " << to_string(std::get<ScalarType>(f.codomain));
      }
      if (f.nullable) out << " ?";
      out << ";\n";
    }
    out << "}\n";
  }
  for (const DiagramConstraint& c : schema.constraints) {
    out << "\nconstraint " << c.id << ' ' << to_string(c.kind) << " on " << schema.set(c.domain).name << " {\n";
    out << "  left = " << chain_source(schema, c.left) << ";\n";
    out << "  right = " << chain_source(schema, c.right) << ";\n";
    out << "  message = " << quote_string(c.message) << ";\n";
    out << "}\n";
  }
  return out.str();
}

std::string print_mutation(const Schema& schema, const Mutation& m) {
  std::string out;
  auto bindings = [&](std::string_view sep) {
    std::string b;
    for (std::size_t i = 0; i < m.bindings.size(); ++i) {
      if (i > 0) b += ", ";
      b += schema.function(m.bindings[i].function).name;
      b += sep;
      b += operand_source(m.bindings[i].value);
    }
    return b;
  };
  switch (m.action) {
    case RowChange::Action::Insert:
      out = "insert " + schema.set(m.set).name + " (" + bindings("=") + ")";
      if (m.bind_as) out += " as " + *m.bind_as;
      break;
    case RowChange::Action::Update:
      out = "update @" + m.row_ref + " set " + bindings(" = ");
      break;
    case RowChange::Action::Delete:
      out = "delete @" + m.row_ref;
      break;
  }
  if (m.expectation) out += " expect " + std::string(to_string(*m.expectation));
  out += ";";
  return out;
}

std::string print_script(const Schema& schema, const std::vector<Mutation>& mutations) {
  std::string out;
  for (const Mutation& m : mutations) out += print_mutation(schema, m) + "\n";
  return out;
}

}  // namespace fdc::dsl
