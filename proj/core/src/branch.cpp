#include "lqs/branch.hpp"

namespace lqs {

Branch::Branch(std::span<const Literal> literals) {
  for (const auto& l : literals) add(l);
}

bool Branch::add(const Literal& lit) {
  if (!index_.insert(lit).second) return false;
  literals_.push_back(lit);
  if (index_.contains(complement(lit))) closed_ = true;
  if (lit.kind == AtomKind::Eq && !lit.positive && lit.first == lit.second) closed_ = true;
  return true;
}

bool is_closed(const Branch& branch) { return branch.closed(); }

}  // namespace lqs
