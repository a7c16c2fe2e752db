#pragma once

#include <cstddef>
#include <set>
#include <utility>
#include <vector>

#include "lqs/symbols.hpp"

namespace lqs {

// Finite interpretation over a domain of abstract elements. Element `e`
// is labelled by the individual `domain[e]`; role extents are kept as
// plain pair sets.
struct Interpretation {
  std::vector<SymbolId> domain;
  std::vector<std::size_t> assign0;
  std::vector<std::set<std::size_t>> assign1;
  std::vector<std::set<std::pair<std::size_t, std::size_t>>> assign3;

  friend bool operator==(const Interpretation&, const Interpretation&) = default;
};

}  // namespace lqs
