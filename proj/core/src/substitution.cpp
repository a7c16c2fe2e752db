#include "lqs/substitution.hpp"

#include <stdexcept>

#include "lqs/error.hpp"

namespace lqs {

Substitution::Map& Substitution::entries_mut(Sort sort) {
  switch (sort) {
    case Sort::Individual: return map0_;
    case Sort::Concept: return map1_;
    case Sort::Role: return map3_;
  }
  throw std::logic_error("bad sort");
}

const Substitution::Map& Substitution::entries(Sort sort) const {
  return const_cast<Substitution*>(this)->entries_mut(sort);
}

void Substitution::bind(Variable from, Variable to) {
  if (from.sort != to.sort) {
    throw SubstitutionError("malformed substitution: " + std::string(sort_name(from.sort)) +
                            " variable mapped to " + std::string(sort_name(to.sort)) +
                            " variable");
  }
  bind(from.sort, from.id, to.id);
}

void Substitution::bind(Sort sort, SymbolId from, SymbolId to) {
  auto& m = entries_mut(sort);
  if (from == to) {
    m.erase(from);
  } else {
    m[from] = to;
  }
}

std::optional<SymbolId> Substitution::lookup(Sort sort, SymbolId id) const {
  const auto& m = entries(sort);
  if (auto it = m.find(id); it != m.end()) return it->second;
  return std::nullopt;
}

SymbolId Substitution::image(Sort sort, SymbolId id) const {
  return lookup(sort, id).value_or(id);
}

namespace {
Term apply_term(const Term& t, const Substitution& s) {
  if (t.bound) return t;
  return Term::free(s.image(Sort::Individual, t.id));
}
}  // namespace

Literal apply(const Literal& lit, const Substitution& s) {
  Literal out = lit;
  out.first = apply_term(lit.first, s);
  switch (lit.kind) {
    case AtomKind::Eq:
      out.second = apply_term(lit.second, s);
      break;
    case AtomKind::Member1:
      out.set = s.image(Sort::Concept, lit.set);
      break;
    case AtomKind::Member3:
      out.second = apply_term(lit.second, s);
      out.set = s.image(Sort::Role, lit.set);
      break;
  }
  return out;
}

UniversalClause apply(const UniversalClause& clause, const Substitution& s) {
  UniversalClause out = clause;
  for (auto& d : out.disjuncts) d = apply(d, s);
  return out;
}

KnowledgeBase apply(const KnowledgeBase& kb, const Substitution& s) {
  KnowledgeBase out;
  out.symbols = kb.symbols;
  for (const auto& l : kb.literals) out.add_literal(apply(l, s));
  for (const auto& c : kb.clauses) out.add_clause(apply(c, s));
  return out;
}

Substitution compose(const Substitution& first, const Substitution& then) {
  Substitution out;
  for (Sort sort : {Sort::Individual, Sort::Concept, Sort::Role}) {
    const auto& a = first.entries(sort);
    for (const auto& [from, to] : a) out.bind(sort, from, then.image(sort, to));
    for (const auto& [from, to] : then.entries(sort)) {
      if (!a.contains(from)) out.bind(sort, from, to);
    }
  }
  return out;
}

}  // namespace lqs
