#include "lqs/formula.hpp"

#include <algorithm>
#include <tuple>

namespace lqs {

Literal Literal::eq(Term x, Term y, bool positive) {
  return Literal{AtomKind::Eq, positive, x, y, 0};
}

Literal Literal::member1(Term x, SymbolId concept_id, bool positive) {
  return Literal{AtomKind::Member1, positive, x, Term{}, concept_id};
}

Literal Literal::member3(Term x, Term y, SymbolId role_id, bool positive) {
  return Literal{AtomKind::Member3, positive, x, y, role_id};
}

bool Literal::is_ground() const {
  if (first.bound) return false;
  return kind == AtomKind::Member1 || !second.bound;
}

std::size_t LiteralHash::operator()(const Literal& lit) const noexcept {
  std::uint64_t h = static_cast<std::uint64_t>(lit.kind) * 2 + (lit.positive ? 1 : 0);
  auto mix = [&h](std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  mix(lit.first.id * 2ULL + lit.first.bound);
  mix(lit.second.id * 2ULL + lit.second.bound);
  mix(lit.set);
  return static_cast<std::size_t>(h);
}

Literal complement(const Literal& lit) {
  Literal out = lit;
  out.positive = !lit.positive;
  return out;
}

bool KnowledgeBase::add_literal(const Literal& lit) {
  if (std::find(literals.begin(), literals.end(), lit) != literals.end()) return false;
  literals.push_back(lit);
  return true;
}

bool KnowledgeBase::add_clause(UniversalClause clause) {
  if (std::find(clauses.begin(), clauses.end(), clause) != clauses.end()) return false;
  clauses.push_back(std::move(clause));
  return true;
}

namespace {

// Literal with names in place of ids; bound slots keep their position.
using NamedTerm = std::tuple<bool, std::string>;
using NamedLiteral = std::tuple<AtomKind, bool, NamedTerm, NamedTerm, std::string>;

NamedTerm name_term(const Term& t, const SymbolTable& symbols, bool used) {
  if (!used) return {false, ""};
  if (t.bound) return {true, std::to_string(t.id)};
  return {false, symbols.individuals.name(t.id)};
}

NamedLiteral name_literal(const Literal& l, const SymbolTable& symbols) {
  std::string set;
  if (l.kind == AtomKind::Member1) set = symbols.concepts.name(l.set);
  if (l.kind == AtomKind::Member3) set = symbols.roles.name(l.set);
  return {l.kind, l.positive, name_term(l.first, symbols, true),
          name_term(l.second, symbols, l.kind != AtomKind::Member1), set};
}

std::vector<std::string> sorted_names(const SymbolSpace& space) {
  auto names = space.names();
  std::sort(names.begin(), names.end());
  return names;
}

}  // namespace

bool structurally_equal(const KnowledgeBase& a, const KnowledgeBase& b) {
  if (a.symbols.individuals.names() != b.symbols.individuals.names()) return false;
  if (sorted_names(a.symbols.concepts) != sorted_names(b.symbols.concepts)) return false;
  if (sorted_names(a.symbols.roles) != sorted_names(b.symbols.roles)) return false;
  if (a.literals.size() != b.literals.size() || a.clauses.size() != b.clauses.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.literals.size(); ++i) {
    if (name_literal(a.literals[i], a.symbols) != name_literal(b.literals[i], b.symbols)) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.clauses.size(); ++i) {
    const auto& ca = a.clauses[i];
    const auto& cb = b.clauses[i];
    if (ca.quantified != cb.quantified || ca.disjuncts.size() != cb.disjuncts.size()) {
      return false;
    }
    for (std::size_t j = 0; j < ca.disjuncts.size(); ++j) {
      if (name_literal(ca.disjuncts[j], a.symbols) != name_literal(cb.disjuncts[j], b.symbols)) {
        return false;
      }
    }
  }
  return true;
}

FreeVars free_vars(const Literal& lit) {
  FreeVars out;
  if (!lit.first.bound) out.sort0.insert(lit.first.id);
  switch (lit.kind) {
    case AtomKind::Eq:
      if (!lit.second.bound) out.sort0.insert(lit.second.id);
      break;
    case AtomKind::Member1:
      out.sort1.insert(lit.set);
      break;
    case AtomKind::Member3:
      if (!lit.second.bound) out.sort0.insert(lit.second.id);
      out.sort3.insert(lit.set);
      break;
  }
  return out;
}

namespace {
void merge_into(FreeVars& into, const FreeVars& from) {
  into.sort0.insert(from.sort0.begin(), from.sort0.end());
  into.sort1.insert(from.sort1.begin(), from.sort1.end());
  into.sort3.insert(from.sort3.begin(), from.sort3.end());
}
}  // namespace

FreeVars free_vars(const UniversalClause& clause) {
  FreeVars out;
  for (const auto& d : clause.disjuncts) merge_into(out, free_vars(d));
  return out;
}

FreeVars free_vars(const KnowledgeBase& kb) {
  FreeVars out;
  for (const auto& l : kb.literals) merge_into(out, free_vars(l));
  for (const auto& c : kb.clauses) merge_into(out, free_vars(c));
  return out;
}

}  // namespace lqs
