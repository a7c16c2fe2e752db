#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lqs {

// Sorts used by the fragment. Sort 2 never occurs.
enum class Sort : std::uint8_t { Individual = 0, Concept = 1, Role = 3 };

using SymbolId = std::uint32_t;

std::string_view sort_name(Sort sort);

struct Variable {
  Sort sort = Sort::Individual;
  SymbolId id = 0;

  friend bool operator==(const Variable&, const Variable&) = default;
};

// Interned names of a single sort. Ids are dense and follow first
// registration order, so for individuals the id order is the order of
// appearance in the knowledge base.
class SymbolSpace {
 public:
  SymbolId intern(std::string_view name, bool query_variable = false);
  std::optional<SymbolId> find(std::string_view name) const;

  const std::string& name(SymbolId id) const { return names_.at(id); }
  bool is_query_variable(SymbolId id) const { return query_.at(id); }
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

  friend bool operator==(const SymbolSpace& a, const SymbolSpace& b) {
    return a.names_ == b.names_ && a.query_ == b.query_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<bool> query_;
  std::unordered_map<std::string, SymbolId> index_;
};

// One symbol space per sort. A name belongs to at most one sort; the
// parsers enforce that, the table itself only stores.
struct SymbolTable {
  SymbolSpace individuals;
  SymbolSpace concepts;
  SymbolSpace roles;

  SymbolSpace& space(Sort sort);
  const SymbolSpace& space(Sort sort) const;

  // Sort under which `name` is registered, if any.
  std::optional<Sort> sort_of(std::string_view name) const;

  // True when every space of `prefix` is a prefix of the matching space here.
  bool extends(const SymbolTable& prefix) const;

  friend bool operator==(const SymbolTable&, const SymbolTable&) = default;
};

}  // namespace lqs
