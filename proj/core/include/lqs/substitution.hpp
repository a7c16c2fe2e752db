#pragma once

#include <compare>
#include <map>
#include <optional>

#include "lqs/formula.hpp"
#include "lqs/symbols.hpp"

namespace lqs {

// Sort-preserving finite map on free variables of sorts 0, 1 and 3.
// Identity entries are never stored, so the empty substitution is the
// default-constructed value and equality is extensional.
class Substitution {
 public:
  using Map = std::map<SymbolId, SymbolId>;

  Substitution() = default;

  // Throws SubstitutionError when the sorts of `from` and `to` differ.
  void bind(Variable from, Variable to);
  void bind(Sort sort, SymbolId from, SymbolId to);

  SymbolId image(Sort sort, SymbolId id) const;
  std::optional<SymbolId> lookup(Sort sort, SymbolId id) const;

  const Map& entries(Sort sort) const;
  bool empty() const { return map0_.empty() && map1_.empty() && map3_.empty(); }
  std::size_t size() const { return map0_.size() + map1_.size() + map3_.size(); }

  friend auto operator<=>(const Substitution&, const Substitution&) = default;

 private:
  Map& entries_mut(Sort sort);

  Map map0_;
  Map map1_;
  Map map3_;
};

Literal apply(const Literal& lit, const Substitution& s);
UniversalClause apply(const UniversalClause& clause, const Substitution& s);
KnowledgeBase apply(const KnowledgeBase& kb, const Substitution& s);

// apply(f, compose(a, b)) == apply(apply(f, a), b).
Substitution compose(const Substitution& first, const Substitution& then);

}  // namespace lqs
