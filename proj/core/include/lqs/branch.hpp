#pragma once

#include <cstddef>
#include <span>
#include <unordered_set>
#include <vector>

#include "lqs/formula.hpp"
#include "lqs/substitution.hpp"

namespace lqs {

// Insertion-ordered set of ground literals with incremental closure
// detection: a branch closes on a complementary pair or on a literal
// not(x = x).
class Branch {
 public:
  Branch() = default;
  explicit Branch(std::span<const Literal> literals);

  // Returns false when the literal was already present.
  bool add(const Literal& lit);
  bool contains(const Literal& lit) const { return index_.contains(lit); }
  bool closed() const { return closed_; }

  std::span<const Literal> literals() const { return literals_; }
  std::size_t size() const { return literals_.size(); }

  friend bool operator==(const Branch& a, const Branch& b) {
    return a.literals_ == b.literals_;
  }

 private:
  std::vector<Literal> literals_;
  std::unordered_set<Literal, LiteralHash> index_;
  bool closed_ = false;
};

bool is_closed(const Branch& branch);

// An open complete branch (already rewritten by its normalisation) with
// the substitution that produced it.
struct CompleteBranch {
  Branch branch;
  Substitution sigma;
};

}  // namespace lqs
