#pragma once

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lqs/formula.hpp"

namespace lqs {

// Boolean concept expression over concept names.
struct ConceptExpr {
  enum class Op { Name, Not, And, Or, Top, Bottom };

  Op op = Op::Top;
  std::string name;
  std::vector<ConceptExpr> args;

  static ConceptExpr named(std::string n) { return {Op::Name, std::move(n), {}}; }
  static ConceptExpr negation(ConceptExpr c) { return {Op::Not, {}, {std::move(c)}}; }
  static ConceptExpr conjunction(std::vector<ConceptExpr> cs) { return {Op::And, {}, std::move(cs)}; }
  static ConceptExpr disjunction(std::vector<ConceptExpr> cs) { return {Op::Or, {}, std::move(cs)}; }
  static ConceptExpr top() { return {Op::Top, {}, {}}; }
  static ConceptExpr bottom() { return {Op::Bottom, {}, {}}; }

  friend bool operator==(const ConceptExpr&, const ConceptExpr&) = default;
};

enum class DlKind {
  ConceptAssertion,    // names: a C          (negated: not a:C)
  RoleAssertion,       // names: a b R        (negated: not (a,b):R)
  Agreement,           // names: a b
  Disagreement,        // names: a b
  ConceptInclusion,    // lhs, rhs
  RoleInclusion,       // names: R S
  RoleChainInclusion,  // names: R1 .. Rn S
  Sym, Asym, Ref, Irref, Tra, Fun,  // names: R
  Dis,                 // names: R S
  ConceptProduct,      // names: R C1 C2
  ExistsLhsInclusion,  // names: R C D      (exists R.C below D)
  ValueRestriction,    // names: C R D      (C below forall R.D)
  Unsupported,         // names: construct keyword
};

struct DlAxiom {
  DlKind kind = DlKind::Unsupported;
  std::vector<std::string> names;
  ConceptExpr lhs;
  ConceptExpr rhs;
  bool negated = false;
};

using Conjunct = std::variant<Literal, UniversalClause>;

// Translates one axiom, registering its names in `symbols`.
std::vector<Conjunct> translate_axiom(const DlAxiom& ax, SymbolTable& symbols);

KnowledgeBase translate_kb(std::span<const DlAxiom> axioms);

// One axiom per line; keywords are listed in the README.
std::vector<DlAxiom> parse_dl(std::string_view text);

}  // namespace lqs
