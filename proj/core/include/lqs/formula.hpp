#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "lqs/symbols.hpp"

namespace lqs {

enum class AtomKind : std::uint8_t { Eq, Member1, Member3 };

// A sort-0 slot. Quantified placeholders (`bound`) index the quantifier
// prefix of their clause and never collide with free individuals.
struct Term {
  SymbolId id = 0;
  bool bound = false;

  static constexpr Term free(SymbolId id) { return Term{id, false}; }
  static constexpr Term quantified(SymbolId index) { return Term{index, true}; }

  friend auto operator<=>(const Term&, const Term&) = default;
};

// Signed level-0 atom: x = y, x in X1, or <x,y> in X3. Unused slots stay
// zero so literals compare and hash canonically.
struct Literal {
  AtomKind kind = AtomKind::Eq;
  bool positive = true;
  Term first;
  Term second;
  SymbolId set = 0;

  static Literal eq(Term x, Term y, bool positive = true);
  static Literal member1(Term x, SymbolId concept_id, bool positive = true);
  static Literal member3(Term x, Term y, SymbolId role_id, bool positive = true);

  bool is_ground() const;

  friend auto operator<=>(const Literal&, const Literal&) = default;
};

struct LiteralHash {
  std::size_t operator()(const Literal& lit) const noexcept;
};

Literal complement(const Literal& lit);

// (forall z1 ... zm)(b1 | ... | bn). Placeholder names are kept only for
// printing; identity of a bound variable is its prefix position.
struct UniversalClause {
  std::vector<std::string> quantified;
  std::vector<Literal> disjuncts;

  std::size_t arity() const { return quantified.size(); }

  friend bool operator==(const UniversalClause&, const UniversalClause&) = default;
};

// The conjunct set of a knowledge base. `symbols.individuals` doubles as
// the ordered list of free sort-0 variables.
struct KnowledgeBase {
  SymbolTable symbols;
  std::vector<Literal> literals;
  std::vector<UniversalClause> clauses;

  std::size_t individual_count() const { return symbols.individuals.size(); }

  // Appends unless an equal conjunct is already present.
  bool add_literal(const Literal& lit);
  bool add_clause(UniversalClause clause);
};

// Compares by names, not ids: same individual order, same concept and
// role name sets, same conjuncts in the same order.
bool structurally_equal(const KnowledgeBase& a, const KnowledgeBase& b);

struct FreeVars {
  std::set<SymbolId> sort0;
  std::set<SymbolId> sort1;
  std::set<SymbolId> sort3;

  friend bool operator==(const FreeVars&, const FreeVars&) = default;
};

FreeVars free_vars(const Literal& lit);
FreeVars free_vars(const UniversalClause& clause);
FreeVars free_vars(const KnowledgeBase& kb);

}  // namespace lqs
