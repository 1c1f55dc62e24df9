#include <map>
#include <set>

#include "fdc/dsl.hpp"
#include "lexer.hpp"

namespace fdc::dsl {

std::string_view to_string(Expectation e) { return e == Expectation::Accept ? "accept" : "reject"; }

namespace {

struct SyntaxError {};

class TokenCursor {
 public:
  TokenCursor(std::vector<Token> tokens, std::vector<Diagnostic>& diags)
      : tokens_(std::move(tokens)), diags_(diags) {}

  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(i_ + ahead, tokens_.size() - 1)];
  }
  bool at_end() const { return peek().kind == TokenKind::End; }
  const Token& next() {
    const Token& t = peek();
    if (!at_end()) ++i_;
    return t;
  }

  bool accept(std::string_view punct) {
    if (!peek().is(punct)) return false;
    next();
    return true;
  }
  bool accept_word(std::string_view word) {
    if (!peek().is_word(word)) return false;
    next();
    return true;
  }

  [[noreturn]] void fail(const std::string& expected) {
    diags_.push_back(error(peek().pos, DiagCode::UnexpectedToken,
                           "expected " + expected + ", found " + describe(peek())));
    throw SyntaxError{};
  }

  const Token& expect(std::string_view punct) {
    if (!peek().is(punct)) fail("'" + std::string(punct) + "'");
    return next();
  }
  const Token& expect_word(std::string_view word) {
    if (!peek().is_word(word)) fail("'" + std::string(word) + "'");
    return next();
  }
  const Token& expect_ident(const std::string& what) {
    if (peek().kind != TokenKind::Ident) fail(what);
    return next();
  }

  /// Skips past the next `stop` token (or to the end).
  void recover(std::string_view stop) {
    while (!at_end() && !peek().is(stop)) next();
    accept(stop);
  }

 private:
  std::vector<Token> tokens_;
  std::vector<Diagnostic>& diags_;
  std::size_t i_ = 0;
};

// ---------------------------------------------------------------------------
// schema files

struct RawMember {
  std::string name;
  SourcePos pos;
  bool designated_name = false;
  bool link = false;
  std::string target;
  SourcePos target_pos;
  ScalarType scalar = ScalarType::Text;
  bool nullable = false;
};

struct RawSet {
  std::string name;
  SourcePos pos;
  std::vector<RawMember> members;
};

class SchemaParser {
 public:
  SchemaParser(std::string_view source, std::vector<Diagnostic>& diags)
      : diags_(diags), cur_(tokenize(source, diags), diags) {}

  ParsedSchema run() {
    parse_file();
    if (has_errors(diags_)) return ParsedSchema{nullptr, diags_};
    auto schema = std::make_shared<Schema>();
    build(*schema);
    if (has_errors(diags_)) return ParsedSchema{nullptr, diags_};
    return ParsedSchema{std::move(schema), diags_};
  }

 private:
  void parse_file() {
    if (cur_.at_end()) {
      diags_.push_back(error(cur_.peek().pos, DiagCode::NoSchema, "no schema declared"));
      return;
    }
    if (cur_.peek().is_word("schema")) {
      try {
        cur_.next();
        name_ = cur_.expect_ident("schema name").text;
        cur_.expect(";");
      } catch (const SyntaxError&) {
        cur_.recover(";");
      }
    } else {
      diags_.push_back(error(cur_.peek().pos, DiagCode::NoSchema, "no schema declared"));
    }

    while (!cur_.at_end()) {
      try {
        if (cur_.peek().is_word("set")) {
          parse_set();
        } else if (cur_.peek().is_word("constraint")) {
          parse_constraint();
        } else {
          cur_.fail("'set' or 'constraint'");
        }
      } catch (const SyntaxError&) {
        cur_.recover("}");
      }
    }
  }

  void parse_set() {
    cur_.next();
    const Token& name = cur_.expect_ident("set name");
    RawSet set{name.text, name.pos, {}};
    cur_.expect("{");
    while (!cur_.accept("}")) {
      RawMember m;
      if (cur_.peek().is_word("name") && cur_.peek(1).kind == TokenKind::Ident) {
        cur_.next();
        m.designated_name = true;
      }
      const Token& fn = cur_.expect_ident("function name");
      m.name = fn.text;
      m.pos = fn.pos;
      if (cur_.accept("->")) {
        if (m.designated_name) {
          diags_.push_back(error(fn.pos, DiagCode::InvalidNameAttribute,
                                 "name attribute '" + fn.text + "' must be a text or integer attribute"));
        }
        const Token& target = cur_.expect_ident("target set");
        m.link = true;
        m.target = target.text;
        m.target_pos = target.pos;
      } else {
        cur_.expect(":");
        if (cur_.accept_word("text")) {
          m.scalar = ScalarType::Text;
        } else if (cur_.accept_word("integer")) {
          m.scalar = ScalarType::Integer;
        } else {
          cur_.fail("'text' or 'integer'");
        }
      }
      m.nullable = cur_.accept("?");
      cur_.expect(";");
      set.members.push_back(std::move(m));
    }
    sets_.push_back(std::move(set));
  }

  RawChain parse_chain() {
    RawChain chain;
    chain.pos = cur_.peek().pos;
    if (cur_.accept_word("identity")) {
      chain.identity = true;
      return chain;
    }
    do {
      const Token& fn = cur_.expect_ident("function name");
      chain.entries.push_back(RawChain::Entry{fn.text, fn.pos});
    } while (cur_.accept("."));
    return chain;
  }

  void parse_constraint() {
    const SourcePos start = cur_.next().pos;
    RawConstraint c;
    c.pos = start;
    c.id = cur_.expect_ident("constraint name").text;
    if (cur_.accept_word("commutative")) {
      c.kind = ConstraintKind::Commutative;
    } else if (cur_.accept_word("anticommutative")) {
      c.kind = ConstraintKind::AntiCommutative;
    } else {
      cur_.fail("'commutative' or 'anticommutative'");
    }
    cur_.expect_word("on");
    const Token& domain = cur_.expect_ident("domain set");
    c.domain = domain.text;
    c.domain_pos = domain.pos;
    cur_.expect("{");
    cur_.expect_word("left");
    cur_.expect("=");
    c.left = parse_chain();
    cur_.expect(";");
    cur_.expect_word("right");
    cur_.expect("=");
    c.right = parse_chain();
    cur_.expect(";");
    if (cur_.accept_word("message")) {
      cur_.expect("=");
      if (cur_.peek().kind != TokenKind::String) cur_.fail("message string");
      c.message = cur_.next().text;
      cur_.expect(";");
    }
    cur_.expect("}");
    constraints_.push_back(std::move(c));
  }

  void build(Schema& schema) {
    schema.name = name_;
    std::vector<std::optional<SetId>> ids;
    for (const RawSet& s : sets_) {
      if (schema.find_set(s.name)) {
        diags_.push_back(error(s.pos, DiagCode::DuplicateSet, "set '" + s.name + "' is declared twice"));
        ids.emplace_back();
        continue;
      }
      ids.push_back(schema.add_set(s.name));
    }

    for (std::size_t k = 0; k < sets_.size(); ++k) {
      if (!ids[k]) continue;
      const SetId sid = *ids[k];
      for (const RawMember& m : sets_[k].members) {
        if (schema.find_function(sid, m.name)) {
          diags_.push_back(error(m.pos, DiagCode::DuplicateFunction,
                                 "function '" + m.name + "' is declared twice on " + sets_[k].name));
          continue;
        }
        Codomain codomain = m.scalar;
        if (m.link) {
          auto target = schema.find_set(m.target);
          if (!target) {
            diags_.push_back(error(m.target_pos, DiagCode::UnknownSet, "unknown set '" + m.target + "'"));
            continue;
          }
          codomain = *target;
        }
        const FunctionId fid = schema.add_function(sid, m.name, codomain, m.nullable);
        if (m.designated_name && !m.link) {
          if (schema.sets[sid.index].name_attribute) {
            diags_.push_back(error(m.pos, DiagCode::DuplicateNameAttribute,
                                   "set " + sets_[k].name + " already has a name attribute"));
          } else {
            schema.sets[sid.index].name_attribute = fid;
          }
        }
      }
    }
    if (has_errors(diags_)) return;

    std::set<std::string> seen;
    for (const RawConstraint& raw : constraints_) {
      if (!seen.insert(raw.id).second) {
        diags_.push_back(error(raw.pos, DiagCode::DuplicateConstraint,
                               "constraint '" + raw.id + "' is declared twice"));
        continue;
      }
      ResolvedDiagram resolved = validate_diagram(schema, raw);
      diags_.insert(diags_.end(), resolved.diagnostics.begin(), resolved.diagnostics.end());
      if (!resolved.ok()) continue;
      const ConstraintClass cls = classify_constraint(*resolved.constraint);
      if (cls != ConstraintClass::General) {
        diags_.push_back(refusal_diagnostic(*resolved.constraint, cls, raw.pos));
        continue;
      }
      schema.constraints.push_back(std::move(*resolved.constraint));
    }
  }

  std::vector<Diagnostic>& diags_;
  TokenCursor cur_;
  std::string name_;
  std::vector<RawSet> sets_;
  std::vector<RawConstraint> constraints_;
};

// ---------------------------------------------------------------------------
// mutation scripts

class ScriptParser {
 public:
  ScriptParser(std::string_view source, const Schema& schema, std::vector<Diagnostic>& diags)
      : schema_(schema), diags_(diags), cur_(tokenize(source, diags), diags) {}

  std::vector<Mutation> run() {
    std::vector<Mutation> out;
    while (!cur_.at_end()) {
      try {
        std::optional<Mutation> m = parse_statement();
        if (m) out.push_back(std::move(*m));
      } catch (const SyntaxError&) {
        cur_.recover(";");
      }
    }
    return out;
  }

 private:
  std::optional<Mutation> parse_statement() {
    Mutation m;
    m.pos = cur_.peek().pos;
    bool ok = true;
    std::optional<std::pair<std::string, SetId>> new_handle;

    if (cur_.accept_word("insert")) {
      m.action = RowChange::Action::Insert;
      const Token& set = cur_.expect_ident("set name");
      auto sid = schema_.find_set(set.text);
      if (!sid) {
        diags_.push_back(error(set.pos, DiagCode::UnknownSet, "unknown set '" + set.text + "'"));
        ok = false;
      } else {
        m.set = *sid;
      }
      cur_.expect("(");
      if (!cur_.peek().is(")")) {
        do {
          ok &= parse_binding(m, sid);
        } while (cur_.accept(","));
      }
      cur_.expect(")");
      if (cur_.accept_word("as")) {
        if (cur_.peek().kind != TokenKind::Ident) cur_.fail("handle name");
        const Token& h = cur_.next();
        if (handles_.count(h.text)) {
          diags_.push_back(error(h.pos, DiagCode::DuplicateHandle, "handle @" + h.text + " is already bound"));
          ok = false;
        }
        m.bind_as = h.text;
        if (sid) new_handle.emplace(h.text, *sid);
      }
    } else if (cur_.accept_word("update")) {
      m.action = RowChange::Action::Update;
      auto sid = parse_row_ref(m);
      ok &= sid.has_value();
      cur_.expect_word("set");
      do {
        ok &= parse_binding(m, sid);
      } while (cur_.accept(","));
    } else if (cur_.accept_word("delete")) {
      m.action = RowChange::Action::Delete;
      ok &= parse_row_ref(m).has_value();
    } else {
      cur_.fail("'insert', 'update' or 'delete'");
    }

    if (cur_.accept_word("expect")) {
      if (cur_.accept_word("accept")) {
        m.expectation = Expectation::Accept;
      } else if (cur_.accept_word("reject")) {
        m.expectation = Expectation::Reject;
      } else {
        cur_.fail("'accept' or 'reject'");
      }
    }
    cur_.expect(";");

    if (new_handle && ok) handles_.insert(*new_handle);
    if (!ok) return std::nullopt;
    return m;
  }

  std::optional<SetId> parse_row_ref(Mutation& m) {
    if (cur_.peek().kind != TokenKind::Handle) cur_.fail("row handle '@name'");
    const Token& h = cur_.next();
    m.row_ref = h.text;
    auto it = handles_.find(h.text);
    if (it == handles_.end()) {
      diags_.push_back(error(h.pos, DiagCode::UnboundHandle, "handle @" + h.text + " is not bound by an earlier insert"));
      return std::nullopt;
    }
    m.set = it->second;
    return it->second;
  }

  bool parse_binding(Mutation& m, std::optional<SetId> target) {
    const Token& fn = cur_.expect_ident("function name");
    cur_.expect("=");
    const Token& value = cur_.next();
    Operand operand;
    switch (value.kind) {
      case TokenKind::String: operand = value.text; break;
      case TokenKind::Integer: operand = value.integer; break;
      case TokenKind::Handle: operand = Handle{value.text}; break;
      case TokenKind::Ident:
        if (value.text == "null") break;
        [[fallthrough]];
      default:
        diags_.push_back(error(value.pos, DiagCode::UnexpectedToken,
                               "expected a literal, null or @handle, found " + describe(value)));
        throw SyntaxError{};
    }
    if (!target) return false;

    auto fid = schema_.find_function(*target, fn.text);
    if (!fid) {
      diags_.push_back(error(fn.pos, DiagCode::UnknownFunction,
                             "unknown function '" + fn.text + "' on " + schema_.set(*target).name));
      return false;
    }
    for (const MutationBinding& b : m.bindings) {
      if (b.function == *fid) {
        diags_.push_back(error(fn.pos, DiagCode::DuplicateBinding, "'" + fn.text + "' is bound twice"));
        return false;
      }
    }

    const FunctionDef& f = schema_.function(*fid);
    bool ok = true;
    if (const Handle* h = std::get_if<Handle>(&operand)) {
      auto it = handles_.find(h->name);
      if (it == handles_.end()) {
        diags_.push_back(error(value.pos, DiagCode::UnboundHandle,
                               "handle @" + h->name + " is not bound by an earlier insert"));
        ok = false;
      } else if (!f.is_link() || f.target() != it->second) {
        diags_.push_back(error(value.pos, DiagCode::TypeMismatch,
                               "@" + h->name + " is a row of " + schema_.set(it->second).name + " but " + fn.text +
                                   " expects " + schema_.codomain_name(f.codomain)));
        ok = false;
      }
    } else if (!std::holds_alternative<std::monostate>(operand)) {
      const bool text = std::holds_alternative<std::string>(operand);
      const bool matches = !f.is_link() && (std::get<ScalarType>(f.codomain) == ScalarType::Text) == text;
      if (!matches) {
        diags_.push_back(error(value.pos, DiagCode::TypeMismatch,
                               std::string(text ? "text" : "integer") + " literal given for " + fn.text +
                                   ", which expects " + schema_.codomain_name(f.codomain)));
        ok = false;
      }
    }
    if (ok) m.bindings.push_back(MutationBinding{*fid, std::move(operand)});
    return ok;
  }

  const Schema& schema_;
  std::vector<Diagnostic>& diags_;
  TokenCursor cur_;
  std::map<std::string, SetId> handles_;
};

}  // namespace

ParsedSchema parse_schema(std::string_view source) {
  std::vector<Diagnostic> diags;
  return SchemaParser(source, diags).run();
}

ParsedScript parse_script(std::string_view source, const Schema& schema) {
  ParsedScript out;
  out.mutations = ScriptParser(source, schema, out.diagnostics).run();
  if (has_errors(out.diagnostics)) out.mutations.clear();
  return out;
}

}  // namespace fdc::dsl
