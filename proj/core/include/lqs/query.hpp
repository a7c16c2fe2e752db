#pragma once

#include <set>
#include <vector>

#include "lqs/formula.hpp"
#include "lqs/substitution.hpp"
#include "lqs/symbols.hpp"

namespace lqs {

// Conjunctive query q1 & ... & qd. `symbols` extends the knowledge base
// table it was parsed against: the KB symbols keep their ids, query
// variables and unknown constants are appended and flagged accordingly.
struct Query {
  SymbolTable symbols;
  std::vector<Literal> conjuncts;

  bool empty() const { return conjuncts.empty(); }
  std::vector<Variable> variables() const;
};

// Each answer composes the branch normalisation (individual merges) with
// the bindings of the query variables.
struct AnswerSet {
  std::set<Substitution> answers;

  std::size_t size() const { return answers.size(); }
  bool contains(const Substitution& s) const { return answers.contains(s); }

  friend bool operator==(const AnswerSet&, const AnswerSet&) = default;
};

}  // namespace lqs
