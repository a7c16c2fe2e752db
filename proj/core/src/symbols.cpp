#include "lqs/symbols.hpp"

#include <stdexcept>

namespace lqs {

std::string_view sort_name(Sort sort) {
  switch (sort) {
    case Sort::Individual: return "individual";
    case Sort::Concept: return "concept";
    case Sort::Role: return "role";
  }
  return "?";
}

SymbolId SymbolSpace::intern(std::string_view name, bool query_variable) {
  std::string key(name);
  if (auto it = index_.find(key); it != index_.end()) return it->second;
  const auto id = static_cast<SymbolId>(names_.size());
  names_.push_back(key);
  query_.push_back(query_variable);
  index_.emplace(std::move(key), id);
  return id;
}

std::optional<SymbolId> SymbolSpace::find(std::string_view name) const {
  if (auto it = index_.find(std::string(name)); it != index_.end()) return it->second;
  return std::nullopt;
}

SymbolSpace& SymbolTable::space(Sort sort) {
  switch (sort) {
    case Sort::Individual: return individuals;
    case Sort::Concept: return concepts;
    case Sort::Role: return roles;
  }
  throw std::logic_error("bad sort");
}

const SymbolSpace& SymbolTable::space(Sort sort) const {
  return const_cast<SymbolTable*>(this)->space(sort);
}

std::optional<Sort> SymbolTable::sort_of(std::string_view name) const {
  for (Sort s : {Sort::Individual, Sort::Concept, Sort::Role}) {
    if (space(s).find(name)) return s;
  }
  return std::nullopt;
}

bool SymbolTable::extends(const SymbolTable& prefix) const {
  for (Sort s : {Sort::Individual, Sort::Concept, Sort::Role}) {
    const auto& mine = space(s).names();
    const auto& theirs = prefix.space(s).names();
    if (theirs.size() > mine.size()) return false;
    for (std::size_t i = 0; i < theirs.size(); ++i) {
      if (mine[i] != theirs[i]) return false;
    }
  }
  return true;
}

}  // namespace lqs
