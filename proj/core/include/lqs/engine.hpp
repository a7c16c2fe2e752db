#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lqs/branch.hpp"
#include "lqs/error.hpp"
#include "lqs/formula.hpp"
#include "lqs/substitution.hpp"

namespace lqs {

// The three calculi: KE-gamma (fused instantiation and elimination), the
// KE system over a pre-grounded clause set, and first-order KE with a
// separate gamma rule.
enum class EngineKind { KeGamma, Ke, FoKe };

std::string_view engine_name(EngineKind kind);
EngineKind parse_engine(std::string_view name);

struct EngineOptions {
  std::uint64_t max_branches = 0;  // 0: unlimited
  double max_seconds = 0.0;        // 0: unlimited
  unsigned workers = 1;
  bool collect_models = true;      // keep the open complete branches
  bool strict_height_bound = true; // throw if a branch outgrows the bound
};

struct SaturationStats {
  std::uint64_t rule_apps = 0;  // E-gamma or E applications
  std::uint64_t pb_apps = 0;
  std::uint64_t gamma_apps = 0;  // FO KE only
  std::uint64_t peak_stack = 0;
  std::uint64_t peak_resident_formulae = 0;
  std::uint64_t max_branch_literals = 0;
  std::uint64_t height_bound = 0;
  std::uint64_t open_branches = 0;
  std::uint64_t closed_branches = 0;
  double wall_ms = 0.0;
};

class ResourceLimitError : public Error {
 public:
  ResourceLimitError(const std::string& what, SaturationStats partial)
      : Error(what), partial_(partial) {}
  const SaturationStats& partial() const { return partial_; }

 private:
  SaturationStats partial_;
};

struct SaturationResult {
  std::vector<CompleteBranch> open_complete;  // empty unless collect_models
  std::uint64_t open_count = 0;
  std::uint64_t closed_count = 0;
  bool consistent = false;
  SaturationStats stats;
};

// p + sum over clauses of (#disjuncts * k^#quantifiers): no branch can hold
// more literals than this.
std::uint64_t branch_height_bound(const KnowledgeBase& kb);

SaturationResult saturate(const KnowledgeBase& kb, const EngineOptions& opts = {});
SaturationResult saturate_ke(const KnowledgeBase& kb, const EngineOptions& opts = {});
SaturationResult saturate_foke(const KnowledgeBase& kb, const EngineOptions& opts = {});
SaturationResult saturate(const KnowledgeBase& kb, EngineKind kind,
                          const EngineOptions& opts = {});

// A clause together with the images of its quantified variables, in
// prefix order.
struct Instantiation {
  const UniversalClause* clause = nullptr;
  std::vector<SymbolId> tau;
};

Literal instantiate(const Literal& lit, std::span<const SymbolId> tau);

// Single-premise elimination: all complements but one are on the branch,
// the remaining instantiated disjunct is returned.
Literal egamma(const Instantiation& inst, const Branch& branch);

// Literal for the bivalence split when elimination does not apply: the
// complement of the lowest-index disjunct whose complement is missing.
Literal select_pb_literal(const Instantiation& inst, const Branch& branch);

// Collapses equated individuals to their least member under id order.
Substitution equality_normalize(const Branch& branch);

bool is_fulfilled(const UniversalClause& clause, const Branch& branch,
                  const KnowledgeBase& kb);

struct GroundClause {
  std::vector<Literal> disjuncts;
  std::size_t clause_index = 0;
  std::vector<SymbolId> tau;
};

// Every instance of every clause, in clause order then lexicographic tau
// order. Throws ResourceLimitError above `max_clauses` instances.
std::vector<GroundClause> ground_expand(const KnowledgeBase& kb,
                                        std::uint64_t max_clauses = 50'000'000);

}  // namespace lqs
