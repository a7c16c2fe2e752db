#pragma once

#include <span>
#include <string>
#include <vector>

#include "lqs/branch.hpp"
#include "lqs/query.hpp"
#include "lqs/substitution.hpp"

namespace lqs {

// Answer set of `q` over the open complete branches of a saturation.
// Each branch is searched with an explicit stack of (bindings, remaining
// conjuncts) nodes; a conjunct without matches abandons the node.
AnswerSet answer(const Query& q, std::span<const CompleteBranch> branches);

// All rho over the query variables of `q` such that q.rho is on the branch.
std::vector<Substitution> match_literal(const Literal& q, const Branch& branch,
                                        const SymbolTable& symbols);

enum class TaskKind { RoleFiller, ConceptRetrieval, RoleInstance, Cqa };

TaskKind parse_task(std::string_view letter);

// A: (rel a ?x R)   B: (in a ?c)   C: (rel a b ?r)   D: args[0] is query text.
Query task_query(TaskKind kind, std::span<const std::string> args,
                 const SymbolTable& context);

// Drops the individual-merge entries, keeping only query-variable bindings.
Substitution query_bindings(const Substitution& answer, const SymbolTable& symbols);

}  // namespace lqs
