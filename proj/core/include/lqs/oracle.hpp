#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "lqs/branch.hpp"
#include "lqs/formula.hpp"
#include "lqs/interpretation.hpp"
#include "lqs/query.hpp"
#include "lqs/substitution.hpp"

namespace lqs {

// Brute-force semantics, kept deliberately independent of the tableau
// engines. Domains are quotients of the individuals; sets and relations
// range over every subset.
struct OracleBounds {
  std::size_t max_individuals = 4;
  std::uint64_t max_states = std::uint64_t{1} << 30;
};

bool model_check(const Interpretation& m, const Literal& lit);
bool model_check(const Interpretation& m, const UniversalClause& clause);
bool model_check(const Interpretation& m, const KnowledgeBase& kb);

// Model read off an open complete branch: the domain is the set of
// normalised individuals and extents are the positive literals.
Interpretation extract_model(const Branch& branch, const Substitution& sigma,
                             const KnowledgeBase& kb);

// Visits every model of `kb` (stop early by returning false). Throws
// BoundsExceededError instead of truncating the search.
void enumerate_models(const KnowledgeBase& kb, const OracleBounds& bounds,
                      const std::function<bool(const Interpretation&)>& visit);

std::vector<Interpretation> all_models(const KnowledgeBase& kb,
                                       const OracleBounds& bounds = {});
bool oracle_satisfiable(const KnowledgeBase& kb, const OracleBounds& bounds = {});

// Substitutions over exactly the query variables, mapping into symbols of
// the knowledge base, for which kb & q.sigma has a model.
AnswerSet brute_answers(const KnowledgeBase& kb, const Query& q,
                        const OracleBounds& bounds = {});

}  // namespace lqs
