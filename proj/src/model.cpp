#include "fdc/model.hpp"

#include <algorithm>

namespace fdc {

std::string_view to_string(ScalarType t) { return t == ScalarType::Text ? "text" : "integer"; }

std::string_view to_string(ConstraintKind k) {
  return k == ConstraintKind::Commutative ? "commutative" : "anticommutative";
}

std::string_view to_string(ChainSide s) { return s == ChainSide::Left ? "left" : "right"; }

std::string_view to_string(ConstraintClass c) {
  switch (c) {
    case ConstraintClass::General: return "GENERAL";
    case ConstraintClass::Hbfp: return "HBFP";
    case ConstraintClass::Local: return "LOCAL";
  }
  return "?";
}

std::optional<SetId> Schema::find_set(std::string_view set_name) const {
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (sets[i].name == set_name) return SetId{i};
  }
  return std::nullopt;
}

std::optional<FunctionId> Schema::find_function(SetId domain, std::string_view fn_name) const {
  for (FunctionId f : set(domain).functions) {
    if (function(f).name == fn_name) return f;
  }
  return std::nullopt;
}

const DiagramConstraint* Schema::find_constraint(std::string_view id) const {
  auto it = std::find_if(constraints.begin(), constraints.end(),
                         [&](const DiagramConstraint& c) { return c.id == id; });
  return it == constraints.end() ? nullptr : &*it;
}

SetId Schema::add_set(std::string set_name) {
  sets.push_back(SetDef{std::move(set_name), std::nullopt, {}});
  return SetId{sets.size() - 1};
}

FunctionId Schema::add_function(SetId domain, std::string fn_name, Codomain codomain, bool nullable) {
  functions.push_back(FunctionDef{std::move(fn_name), domain, codomain, nullable});
  FunctionId id{functions.size() - 1};
  sets.at(domain.index).functions.push_back(id);
  return id;
}

std::string Schema::qualified_name(FunctionId id) const {
  const FunctionDef& f = function(id);
  return set(f.domain).name + "." + f.name;
}

std::string Schema::codomain_name(const Codomain& c) const {
  if (const auto* s = std::get_if<SetId>(&c)) return set(*s).name;
  return std::string(to_string(std::get<ScalarType>(c)));
}

Codomain Schema::chain_codomain(const ChainSpec& chain, SetId domain) const {
  if (chain.identity || chain.functions.empty()) return domain;
  return function(chain.functions.front()).codomain;
}

std::string Schema::chain_text(const ChainSpec& chain, SetId domain) const {
  if (chain.identity) return "1_" + set(domain).name;
  std::string out;
  for (std::size_t i = 0; i < chain.functions.size(); ++i) {
    if (i > 0) out += " ∘ ";
    out += function(chain.functions[i]).name;
  }
  return out;
}

namespace {

std::string side_label(ChainSide side) { return side == ChainSide::Left ? "left" : "right"; }

struct ChainResolution {
  std::optional<ChainSpec> chain;
  std::optional<Codomain> codomain;
};

// Walks a raw chain from its innermost entry (which must be defined on the
// common domain) outward. After a failure the walk continues with a name-only
// guess so that later positions still get diagnosed.
ChainResolution resolve_chain(const Schema& schema, SetId domain, const RawChain& raw, ChainSide side,
                              std::vector<Diagnostic>& diags) {
  if (raw.identity) {
    ChainSpec spec;
    spec.identity = true;
    return {spec, Codomain{domain}};
  }

  const std::size_t n = raw.entries.size();
  std::vector<FunctionId> resolved(n);
  bool ok = true;
  std::optional<Codomain> expected = Codomain{domain};

  for (std::size_t p = n; p >= 1; --p) {
    const RawChain::Entry& entry = raw.entries[p - 1];
    std::vector<FunctionId> candidates;
    for (std::size_t i = 0; i < schema.functions.size(); ++i) {
      if (schema.functions[i].name == entry.name) candidates.push_back(FunctionId{i});
    }

    std::optional<FunctionId> hit;
    if (expected && std::holds_alternative<SetId>(*expected)) {
      hit = schema.find_function(std::get<SetId>(*expected), entry.name);
    }

    if (hit) {
      resolved[p - 1] = *hit;
      expected = schema.function(*hit).codomain;
      continue;
    }

    ok = false;
    const std::string where = side_label(side) + " chain position " + std::to_string(p);
    if (candidates.empty()) {
      diags.push_back(error(entry.pos, DiagCode::UnknownFunction,
                            "unknown function '" + entry.name + "' at " + where));
      expected.reset();
      continue;
    }

    if (expected) {
      std::string actual;
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (i > 0) actual += "|";
        actual += schema.set(schema.function(candidates[i]).domain).name;
      }
      diags.push_back(error(entry.pos, DiagCode::BrokenComposition,
                            "'" + entry.name + "' at " + where + " must be defined on " +
                                schema.codomain_name(*expected) + " but is defined on " + actual));
    }
    if (candidates.size() == 1) {
      expected = schema.function(candidates.front()).codomain;
    } else {
      expected.reset();
    }
  }

  if (!ok) return {};
  ChainSpec spec;
  spec.functions = std::move(resolved);
  return {spec, expected};
}

}  // namespace

ResolvedDiagram validate_diagram(const Schema& schema, const RawConstraint& raw) {
  ResolvedDiagram out;
  auto domain = schema.find_set(raw.domain);
  if (!domain) {
    out.diagnostics.push_back(
        error(raw.domain_pos, DiagCode::UnknownSet, "unknown set '" + raw.domain + "'"));
    return out;
  }

  if (raw.left.identity && raw.right.identity) {
    out.diagnostics.push_back(error(raw.pos, DiagCode::TrivialIdentity,
                                    "constraint '" + raw.id + "' equates the identity with itself"));
    return out;
  }

  auto left = resolve_chain(schema, *domain, raw.left, ChainSide::Left, out.diagnostics);
  auto right = resolve_chain(schema, *domain, raw.right, ChainSide::Right, out.diagnostics);
  if (!left.chain || !right.chain) return out;

  if (*left.codomain != *right.codomain) {
    const bool identity_side = raw.left.identity || raw.right.identity;
    const std::string msg = "left chain ends in " + schema.codomain_name(*left.codomain) +
                            " but right chain ends in " + schema.codomain_name(*right.codomain);
    out.diagnostics.push_back(error(raw.pos, identity_side ? DiagCode::DomainMismatch : DiagCode::CodomainMismatch,
                                    identity_side ? "identity of " + raw.domain + " needs the other chain to end in " +
                                                        raw.domain + ": " + msg
                                                  : msg));
    return out;
  }

  DiagramConstraint c;
  c.id = raw.id;
  c.kind = raw.kind;
  c.domain = *domain;
  c.left = std::move(*left.chain);
  c.right = std::move(*right.chain);
  c.message = raw.message ? *raw.message : default_message(schema, c);
  out.constraint = std::move(c);
  return out;
}

ConstraintClass classify_constraint(const DiagramConstraint& c) {
  if (c.left.identity != c.right.identity) return ConstraintClass::Local;
  if (c.left.length() == 1 && c.right.length() == 1) return ConstraintClass::Hbfp;
  return ConstraintClass::General;
}

Diagnostic refusal_diagnostic(const DiagramConstraint& c, ConstraintClass cls, SourcePos pos) {
  const std::string kind = c.kind == ConstraintKind::Commutative ? "reflexivity" : "irreflexivity";
  if (cls == ConstraintClass::Hbfp) {
    return error(pos, DiagCode::RefusedHbfp,
                 "constraint '" + c.id + "' is classified HBFP (n = m = 1): a homogeneous binary function product " +
                     kind + " constraint, enforced by the hbfp constraint family, not here");
  }
  return error(pos, DiagCode::RefusedLocal,
               "constraint '" + c.id + "' is classified LOCAL (one side is the identity): a self-map " + kind +
                   " constraint, enforced by the self-map constraint family, not here");
}

std::string default_message(const Schema& schema, const DiagramConstraint& c) {
  const std::string rel = c.kind == ConstraintKind::Commutative ? " must be equal to " : " must never be equal to ";
  return schema.chain_text(c.left, c.domain) + rel + schema.chain_text(c.right, c.domain) + "!";
}

std::optional<std::string> check_resolved(const Schema& schema, const DiagramConstraint& c) {
  Codomain ends[2];
  const ChainSpec* chains[2] = {&c.left, &c.right};
  for (int s = 0; s < 2; ++s) {
    const ChainSpec& chain = *chains[s];
    if (chain.identity) {
      ends[s] = c.domain;
      continue;
    }
    if (chain.functions.empty()) return "empty chain";
    Codomain at = c.domain;
    for (std::size_t p = chain.length(); p >= 1; --p) {
      const FunctionDef& f = schema.function(chain.at(p));
      if (!std::holds_alternative<SetId>(at) || f.domain != std::get<SetId>(at)) {
        return "position " + std::to_string(p) + " does not compose";
      }
      if (p > 1 && !f.is_link()) return "interior position " + std::to_string(p) + " is not a link";
      at = f.codomain;
    }
    ends[s] = at;
  }
  if (ends[0] != ends[1]) return "codomains differ";
  return std::nullopt;
}

}  // namespace fdc
