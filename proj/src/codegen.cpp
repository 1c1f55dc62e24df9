#include "fdc/codegen.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>

namespace fdc::codegen {

std::string_view to_string(Dialect d) { return d == Dialect::PaperStyle ? "paper-style" : "generic-sql"; }

std::optional<Dialect> parse_dialect(std::string_view text) {
  if (text == "paper-style") return Dialect::PaperStyle;
  if (text == "generic-sql") return Dialect::GenericSql;
  return std::nullopt;
}

std::string_view to_string(UnitKind k) {
  switch (k) {
    case UnitKind::RowSource: return "row-source";
    case UnitKind::DomainCheck: return "domain-check";
    case UnitKind::LinkCheck: return "link-check";
  }
  return "?";
}

std::string EmittedUnit::file_name(const Schema& schema) const {
  std::string fn = function;
  if (kind == UnitKind::RowSource) fn += "_RowSource";
  return schema.set(set).name + "_" + fn + "_" + constraint + "." + std::string(to_string(dialect)) + ".txt";
}

namespace {

// ---------------------------------------------------------------------------
// shared helpers

const FunctionDef& fn_at(const Schema& schema, const ChainSpec& chain, std::size_t position) {
  return schema.function(chain.at(position));
}

const std::string& table_at(const Schema& schema, const ChainSpec& chain, std::size_t position) {
  return schema.set(fn_at(schema, chain, position).domain).name;
}

bool reserved_word(std::string_view name) {
  static constexpr std::array<std::string_view, 14> kReserved = {
      "GROUP", "ORDER", "SELECT", "FROM", "WHERE", "BY", "TABLE", "INDEX", "KEY", "VALUE", "DATE", "TIME", "USER", "SET"};
  std::string upper(name);
  for (char& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return std::find(kReserved.begin(), kReserved.end(), upper) != kReserved.end();
}

// Column reference inside embedded SQL of the event-handler dialect.
std::string access_column(std::string_view name) {
  return reserved_word(name) ? "[" + std::string(name) + "]" : std::string(name);
}

std::string sql_ident(std::string_view name) { return "\"" + std::string(name) + "\""; }

std::string sql_literal(std::string_view text) {
  std::string out = "'";
  for (char c : text) {
    out += c;
    if (c == '\'') out += '\'';
  }
  return out + "'";
}

void replace_all(std::string& text, std::string_view key, std::string_view with) {
  for (std::size_t at = text.find(key); at != std::string::npos; at = text.find(key, at + with.size())) {
    text.replace(at, key.size(), with);
  }
}

// Runtime values spliced into the SQL text of DLookup criteria.
constexpr char kOpen = '\x01';
constexpr char kClose = '\x02';

std::string splice(std::string_view expr) { return std::string(1, kOpen) + std::string(expr) + kClose; }

// Turns SQL text with spliced expressions into a VBA string expression.
std::string vba_string(std::string_view text) {
  std::vector<std::string> parts;
  std::string literal;
  auto flush = [&] {
    if (literal.empty()) return;
    std::string q = "\"";
    for (char c : literal) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    parts.push_back(q + "\"");
    literal.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == kOpen) {
      flush();
      const std::size_t end = text.find(kClose, i);
      parts.emplace_back(text.substr(i + 1, end - i - 1));
      i = end;
    } else {
      literal += text[i];
    }
  }
  flush();
  if (parts.empty()) return "\"\"";
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += " & ";
    out += parts[i];
  }
  return out;
}

std::string vba_quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

// Splices a runtime value into criteria, quoting it when it is text.
std::string criteria_value(const Codomain& codomain, std::string_view expr) {
  if (std::holds_alternative<ScalarType>(codomain) && std::get<ScalarType>(codomain) == ScalarType::Text) {
    return "'" + splice(expr) + "'";
  }
  return splice(expr);
}

std::string constraint_text(const Schema& schema, const DiagramConstraint& c) {
  const std::string rel = c.kind == ConstraintKind::Commutative ? " = " : " <> ";
  return schema.chain_text(c.left, c.domain) + rel + schema.chain_text(c.right, c.domain);
}

std::string wrap(const EmittedUnit& unit) {
  std::string body;
  if (unit.dialect == Dialect::GenericSql) {
    for (std::size_t i = 0; i < unit.sections.size(); ++i) {
      if (i > 0) body += "\n";
      body += unit.sections[i];
    }
    return body;
  }
  body = "Sub " + unit.function + "_BeforeUpdate(Cancel As Integer)\n";
  body += "Dim v, w As Variant\n";
  for (const std::string& s : unit.sections) body += s;
  body += "End Sub\n";
  return body;
}

// ---------------------------------------------------------------------------
// row sources

std::string row_source_ladder(const Schema& schema, const ChainSpec& chain) {
  const std::size_t n = chain.length();
  const std::size_t k = n - 1;  // tables dom(f1) .. dom(f(n-1))
  auto table = [&](std::size_t i) { return table_at(schema, chain, i); };
  auto link = [&](std::size_t i) { return fn_at(schema, chain, i).name; };

  std::vector<std::string> tables;
  for (std::size_t i = 1; i <= k; ++i) tables.push_back(table(i));

  auto display_item = [&](std::size_t i) {
    const SetDef& def = schema.set(fn_at(schema, chain, i).domain);
    const std::string col = def.name_attribute ? schema.function(*def.name_attribute).name : "x";
    int owners = 0;
    for (std::size_t j = 1; j <= k; ++j) {
      const SetId sid = fn_at(schema, chain, j).domain;
      if (col == "x" || schema.find_function(sid, col)) ++owners;
    }
    return owners > 1 ? "[" + def.name + "].[" + col + "]" : "[" + col + "]";
  };

  std::string display;
  std::string labels;
  for (std::size_t i = 1; i <= k; ++i) {
    if (i > 1) {
      display += " & \", \" & ";
      labels += ", ";
    }
    display += display_item(i);
    labels += link(i + 1);
  }

  std::string from;
  if (k == 1) {
    from = table(1);
  } else {
    from = table(k - 1) + " RIGHT JOIN " + table(k) + " ON " + table(k) + "." + link(k) + " = " + table(k - 1) + ".x";
    for (std::size_t i = k - 1; i-- > 1;) {
      from = table(i) + " RIGHT JOIN\n(" + from + ") ON\n" + table(i) + ".x = " + table(i + 1) + "." + link(i + 1);
    }
  }

  std::string out = "SELECT " + table(k) + ".x, " + display + " AS [" + labels + "],\n";
  out += table(1) + "." + link(1) + "\n";
  out += "FROM " + from + "\n";
  out += "ORDER BY " + display + ";\n";
  return out;
}

std::string row_source_single(const Schema& schema, const ChainSpec& chain) {
  const FunctionDef& f = fn_at(schema, chain, 1);
  if (f.is_link()) {
    const SetDef& target = schema.set(f.target());
    const std::string col = target.name_attribute ? schema.function(*target.name_attribute).name : "x";
    return "SELECT [" + target.name + "].[x], [" + target.name + "].[" + col + "] FROM " + target.name +
           "\nORDER BY [" + col + "];\n";
  }
  const std::string& table = schema.set(f.domain).name;
  return "SELECT [" + table + "].[x], [" + table + "].[" + f.name + "] FROM " + table + "\nORDER BY [" + f.name +
         "];\n";
}

// ---------------------------------------------------------------------------
// event-handler dialect

// Composed value of one side as seen from the domain form: column 2 of the
// ladder combo box, or the bound value itself for single-function chains.
std::string form_value(const Schema& schema, const ChainSpec& chain) {
  const std::string& inner = fn_at(schema, chain, chain.length()).name;
  return chain.length() > 1 ? inner + ".Column(2)" : "CStr(" + inner + ")";
}

// Name (or x) of the current row of the common domain.
std::string form_witness(const Schema& schema, const DiagramConstraint& c) {
  const SetDef& d = schema.set(c.domain);
  return d.name_attribute ? schema.function(*d.name_attribute).name : "x";
}

// Name (or x) of the first row of the common domain matching `criteria`.
std::string witness_lookup(const Schema& schema, const DiagramConstraint& c, const std::string& criteria) {
  const SetDef& d = schema.set(c.domain);
  const std::string column = d.name_attribute ? schema.function(*d.name_attribute).name : "x";
  return "DLookup(" + vba_quote(column) + ", " + vba_quote(d.name) + ", " + vba_string(criteria) + ")";
}

std::string paper_message(const DiagramConstraint& c, const std::string& witness, const std::string& left,
                          const std::string& right) {
  std::string text = c.message;
  replace_all(text, "{constraint}", c.id);
  replace_all(text, "{witness}", splice(witness));
  replace_all(text, "{left}", splice(left));
  replace_all(text, "{right}", splice(right));
  return vba_string(text);
}

std::string paper_domain_section(const Schema& schema, const DiagramConstraint& c) {
  const std::string& fn = fn_at(schema, c.left, c.left.length()).name;
  const std::string& gm = fn_at(schema, c.right, c.right.length()).name;
  const std::string lv = form_value(schema, c.left);
  const std::string rv = form_value(schema, c.right);

  std::vector<std::string> composed_guards;
  if (c.left.length() > 1) composed_guards.push_back("Not IsNull(" + lv + ")");
  if (c.right.length() > 1) composed_guards.push_back("Not IsNull(" + rv + ")");
  std::string composed;
  for (std::size_t i = 0; i < composed_guards.size(); ++i) composed += (i ? " And " : "") + composed_guards[i];

  const std::string op = c.kind == ConstraintKind::Commutative ? " <> " : " = ";
  std::string s = "'enforces constraint " + constraint_text(schema, c) + "\n";
  s += "If Not Cancel And Not IsNull(" + fn + ") And Not IsNull(" + gm + ") Then\n";
  s += "  If " + composed + " Then\n";
  s += "    If " + lv + op + rv + " Then\n";
  s += "      Cancel = True\n";
  s += "      Beep\n";
  s += "      MsgBox " + paper_message(c, form_witness(schema, c), lv, rv) + " & Chr(13) & _\n";
  s += "        " + vba_quote("Please change accordingly the value(s) of either " + fn + " or/and " + gm + ".") +
       ", _\n";
  s += "        vbCritical, \"Request rejected...\"\n";
  s += "    End If\n";
  s += "  End If\n";
  s += "End If\n";
  return s;
}

// Criteria on D selecting the rows whose tail f(i+1) . ... . fn reaches the
// current record.
std::string tail_criteria(const Schema& schema, const ChainSpec& chain, std::size_t position,
                          std::string_view current) {
  std::string cond = access_column(fn_at(schema, chain, position + 1).name) + " =" + splice(current);
  for (std::size_t p = position + 2; p <= chain.length(); ++p) {
    cond = access_column(fn_at(schema, chain, p).name) + " IN (SELECT x FROM " + table_at(schema, chain, p - 1) +
           " WHERE " + cond + ")";
  }
  return cond;
}

// DLookup of the composed value of `chain` over the rows of D matching
// `criteria`.
std::string chain_lookup(const Schema& schema, const ChainSpec& chain, const std::string& criteria) {
  const std::size_t m = chain.length();
  const std::string not_null = " AND " + access_column(fn_at(schema, chain, 1).name) + " IS NOT NULL";
  if (m == 1) {
    return "DLookup(" + vba_quote(fn_at(schema, chain, 1).name) + ", " + vba_quote(table_at(schema, chain, 1)) +
           ", " + vba_string(criteria + not_null) + ")";
  }
  std::string inner = "SELECT " + access_column(fn_at(schema, chain, m).name) + " FROM " + table_at(schema, chain, m) +
                      " WHERE " + criteria;
  for (std::size_t j = m - 1; j >= 2; --j) {
    inner = "SELECT " + access_column(fn_at(schema, chain, j).name) + " FROM " + table_at(schema, chain, j) +
            " WHERE x IN (" + inner + ")";
  }
  return "DLookup(" + vba_quote(fn_at(schema, chain, 1).name) + ", " + vba_quote(table_at(schema, chain, 1)) + ", " +
         vba_string("x IN (" + inner + ")" + not_null) + ")";
}

// f1 . ... . f(i-1) applied to the new value of f_i.
std::string head_lookup(const Schema& schema, const ChainSpec& chain, std::size_t position) {
  const std::string& fi = fn_at(schema, chain, position).name;
  if (position == 1) return fi;
  std::string cond = "x =" + splice(fi);
  for (std::size_t p = position - 1; p >= 2; --p) {
    cond = "x IN (SELECT " + access_column(fn_at(schema, chain, p).name) + " FROM " + table_at(schema, chain, p) +
           " WHERE " + cond + ")";
  }
  return "DLookup(" + vba_quote(fn_at(schema, chain, 1).name) + ", " + vba_quote(table_at(schema, chain, 1)) + ", " +
         vba_string(cond) + ")";
}

// Criteria on D: the other chain's composed value equals w.
std::string other_equals_criteria(const Schema& schema, const ChainSpec& chain, const Codomain& codomain) {
  std::string cond = access_column(fn_at(schema, chain, 1).name) + " =" + criteria_value(codomain, "w");
  for (std::size_t j = 2; j <= chain.length(); ++j) {
    cond = access_column(fn_at(schema, chain, j).name) + " IN (SELECT x FROM " + table_at(schema, chain, j - 1) +
           " WHERE " + cond + ")";
  }
  return cond;
}

std::string paper_link_section(const Schema& schema, const DiagramConstraint& c, ChainSide side,
                               std::size_t position) {
  const ChainSpec& own = c.chain(side);
  const ChainSpec& other = c.other(side);
  const std::string& fi = fn_at(schema, own, position).name;
  const std::string& f1 = fn_at(schema, own, 1).name;
  const Codomain codomain = schema.chain_codomain(own, c.domain);
  const bool scalar_text =
      std::holds_alternative<ScalarType>(codomain) && std::get<ScalarType>(codomain) == ScalarType::Text;
  const std::string tail = tail_criteria(schema, own, position, "x");
  const std::string advice = vba_quote("You cannot change " + fi + "'s value but with one that leaves " + f1 +
                                       "'s unchanged.");

  std::string s = "'enforces constraint " + constraint_text(schema, c) + "\n";
  s += "If Not Cancel And Not NewRecord And " + fi + " <> " + fi + ".OldValue And Not IsNull(" + fi + ") Then\n";
  if (c.kind == ConstraintKind::Commutative) {
    const std::string vx = scalar_text ? "v" : "CLng(v)";
    const std::string wx = scalar_text ? "w" : "CLng(w)";
    s += "  v = " + chain_lookup(schema, other, tail) + "\n";
    s += "  If Not IsNull(v) Then\n";
    s += "    w = " + head_lookup(schema, own, position) + "\n";
    s += "    If Not IsNull(w) Then\n";
    s += "      If " + vx + " <> " + wx + " Then\n";
    s += "        Cancel = True\n";
    s += "        Beep\n";
    s += "        MsgBox " + paper_message(c, witness_lookup(schema, c, tail), side == ChainSide::Left ? "w" : "v",
                                     side == ChainSide::Left ? "v" : "w") +
         " & Chr(13) & _\n";
    s += "          " + advice + ", vbCritical, \"Request rejected...\"\n";
    s += "        Undo\n";
    s += "      End If\n";
    s += "    End If\n";
    s += "  End If\n";
  } else {
    const std::string key_col = "x";
    const std::string witness = schema.set(c.domain).name_attribute
                                    ? witness_lookup(schema, c, "x =" + splice("v"))
                                    : std::string("v");
    s += "  w = " + head_lookup(schema, own, position) + "\n";
    s += "  If Not IsNull(w) Then\n";
    s += "    v = DLookup(" + vba_quote(key_col) + ", " + vba_quote(schema.set(c.domain).name) + ", " +
         vba_string(tail + " AND " + other_equals_criteria(schema, other, codomain)) + ")\n";
    s += "    If Not IsNull(v) Then\n";
    s += "      Cancel = True\n";
    s += "      Beep\n";
    s += "      MsgBox " + paper_message(c, witness, "w", "w") + " & Chr(13) & _\n";
    s += "        " + advice + ", vbCritical, \"Request rejected...\"\n";
    s += "      Undo\n";
    s += "    End If\n";
    s += "  End If\n";
  }
  s += "End If\n";
  return s;
}

// ---------------------------------------------------------------------------
// trigger dialect

// Composed value of `chain` for the row `row` ("NEW", "d", ...) of D.
std::string sql_chain_value(const Schema& schema, const ChainSpec& chain, const std::string& row) {
  std::string value = row + "." + sql_ident(fn_at(schema, chain, chain.length()).name);
  for (std::size_t p = chain.length() - 1; p >= 1; --p) {
    value = "(SELECT " + sql_ident(fn_at(schema, chain, p).name) + " FROM " + sql_ident(table_at(schema, chain, p)) +
            " WHERE x = " + value + ")";
  }
  return value;
}

std::string sql_head(const Schema& schema, const ChainSpec& chain, std::size_t position) {
  std::string value = "NEW." + sql_ident(fn_at(schema, chain, position).name);
  for (std::size_t p = position - 1; p >= 1; --p) {
    value = "(SELECT " + sql_ident(fn_at(schema, chain, p).name) + " FROM " + sql_ident(table_at(schema, chain, p)) +
            " WHERE x = " + value + ")";
  }
  return value;
}

std::string sql_tail(const Schema& schema, const ChainSpec& chain, std::size_t position, const std::string& row) {
  const std::size_t n = chain.length();
  if (position + 1 == n) return row + "." + sql_ident(fn_at(schema, chain, n).name) + " = NEW.x";
  std::string cond = sql_ident(fn_at(schema, chain, position + 1).name) + " = NEW.x";
  for (std::size_t p = position + 2; p < n; ++p) {
    cond = sql_ident(fn_at(schema, chain, p).name) + " IN (SELECT x FROM " +
           sql_ident(table_at(schema, chain, p - 1)) + " WHERE " + cond + ")";
  }
  return row + "." + sql_ident(fn_at(schema, chain, n).name) + " IN (SELECT x FROM " +
         sql_ident(table_at(schema, chain, n - 1)) + " WHERE " + cond + ")";
}

std::string sql_message(const Schema& schema, const DiagramConstraint& c) {
  std::string text = c.message;
  replace_all(text, "{constraint}", c.id);
  replace_all(text, "{witness}", schema.set(c.domain).name + " row");
  replace_all(text, "{left}", schema.chain_text(c.left, c.domain));
  replace_all(text, "{right}", schema.chain_text(c.right, c.domain));
  return sql_literal(c.id + ": " + text);
}

std::string sql_domain_section(const Schema& schema, const DiagramConstraint& c) {
  const std::string& table = schema.set(c.domain).name;
  const std::string l = sql_chain_value(schema, c.left, "NEW");
  const std::string r = sql_chain_value(schema, c.right, "NEW");
  const std::string op = c.kind == ConstraintKind::Commutative ? " <> " : " = ";
  const std::string when = "WHEN " + l + " IS NOT NULL\n  AND " + r + " IS NOT NULL\n  AND " + l + op + r + "\n";
  const std::string action = "BEGIN\n  SELECT RAISE(ABORT, " + sql_message(schema, c) + ");\nEND;\n";

  const std::string& fn = fn_at(schema, c.left, c.left.length()).name;
  const std::string& gm = fn_at(schema, c.right, c.right.length()).name;
  std::string columns = sql_ident(fn);
  if (gm != fn) columns += ", " + sql_ident(gm);

  std::string s = "-- enforces constraint " + constraint_text(schema, c) + "\n";
  s += "CREATE TRIGGER " + sql_ident(c.id + "_" + table + "_insert") + " AFTER INSERT ON " + sql_ident(table) +
       "\nFOR EACH ROW\n" + when + action;
  s += "CREATE TRIGGER " + sql_ident(c.id + "_" + table + "_update") + " AFTER UPDATE OF " + columns + " ON " +
       sql_ident(table) + "\nFOR EACH ROW\n" + when + action;
  return s;
}

std::string sql_link_section(const Schema& schema, const DiagramConstraint& c, ChainSide side, std::size_t position) {
  const ChainSpec& own = c.chain(side);
  const ChainSpec& other = c.other(side);
  const std::string& fi = fn_at(schema, own, position).name;
  const std::string& table = table_at(schema, own, position);
  const std::string head = sql_head(schema, own, position);
  const std::string theirs = sql_chain_value(schema, other, "d");
  const std::string op = c.kind == ConstraintKind::Commutative ? " <> " : " = ";
  const std::string name =
      c.id + "_" + table + "_" + fi + "_" + std::string(to_string(side)) + std::to_string(position);

  std::string s = "-- enforces constraint " + constraint_text(schema, c) + "\n";
  s += "-- update triggers never fire for new rows\n";
  s += "CREATE TRIGGER " + sql_ident(name) + " AFTER UPDATE OF " + sql_ident(fi) + " ON " + sql_ident(table) + "\n";
  s += "FOR EACH ROW\n";
  s += "WHEN NEW." + sql_ident(fi) + " IS NOT OLD." + sql_ident(fi) + " AND NEW." + sql_ident(fi) + " IS NOT NULL\n";
  s += "BEGIN\n";
  s += "  SELECT RAISE(ABORT, " + sql_message(schema, c) + ")\n";
  s += "  WHERE " + head + " IS NOT NULL\n";
  s += "    AND EXISTS (SELECT 1 FROM " + sql_ident(schema.set(c.domain).name) + " AS d\n";
  s += "      WHERE " + sql_tail(schema, own, position, "d") + "\n";
  s += "        AND " + theirs + " IS NOT NULL\n";
  s += "        AND " + theirs + op + head + ");\n";
  s += "END;\n";
  return s;
}

EmittedUnit finish(EmittedUnit unit) {
  unit.body = wrap(unit);
  return unit;
}

}  // namespace

EmittedUnit gen_row_source(const Schema& schema, const DiagramConstraint& c, ChainSide side) {
  const ChainSpec& chain = c.chain(side);
  EmittedUnit unit;
  unit.set = c.domain;
  unit.function = fn_at(schema, chain, chain.length()).name;
  unit.kind = UnitKind::RowSource;
  unit.dialect = Dialect::PaperStyle;
  unit.constraint = c.id;
  unit.body = chain.length() > 1 ? row_source_ladder(schema, chain) : row_source_single(schema, chain);
  unit.sections = {unit.body};
  return unit;
}

EmittedUnit gen_domain_check(const Schema& schema, const DiagramConstraint& c, Dialect dialect) {
  EmittedUnit unit;
  unit.set = c.domain;
  unit.function = "Form";
  unit.kind = UnitKind::DomainCheck;
  unit.dialect = dialect;
  unit.constraint = c.id;
  unit.sections = {dialect == Dialect::PaperStyle ? paper_domain_section(schema, c) : sql_domain_section(schema, c)};
  return finish(std::move(unit));
}

std::vector<EmittedUnit> gen_link_checks(const Schema& schema, const DiagramConstraint& c, Dialect dialect) {
  std::vector<EmittedUnit> units;
  for (ChainSide side : {ChainSide::Left, ChainSide::Right}) {
    const ChainSpec& chain = c.chain(side);
    for (std::size_t p = 1; p < chain.length(); ++p) {
      const FunctionDef& f = fn_at(schema, chain, p);
      std::string section = dialect == Dialect::PaperStyle ? paper_link_section(schema, c, side, p)
                                                           : sql_link_section(schema, c, side, p);
      auto it = std::find_if(units.begin(), units.end(), [&](const EmittedUnit& u) {
        return u.set == f.domain && u.function == f.name;
      });
      if (it != units.end()) {
        it->sections.push_back(std::move(section));
        continue;
      }
      EmittedUnit unit;
      unit.set = f.domain;
      unit.function = f.name;
      unit.kind = UnitKind::LinkCheck;
      unit.dialect = dialect;
      unit.constraint = c.id;
      unit.sections.push_back(std::move(section));
      units.push_back(std::move(unit));
    }
  }
  for (EmittedUnit& u : units) u = finish(std::move(u));
  return units;
}

std::vector<EmittedUnit> merge_units(std::vector<EmittedUnit> units) {
  std::vector<EmittedUnit> out;
  for (EmittedUnit& u : units) {
    auto it = std::find_if(out.begin(), out.end(), [&](const EmittedUnit& o) {
      return o.set == u.set && o.function == u.function && o.kind == u.kind && o.dialect == u.dialect &&
             o.kind != UnitKind::RowSource;
    });
    if (it == out.end()) {
      out.push_back(std::move(u));
      continue;
    }
    it->constraint += "+" + u.constraint;
    it->sections.insert(it->sections.end(), u.sections.begin(), u.sections.end());
    it->body = wrap(*it);
  }
  return out;
}

}  // namespace fdc::codegen
