#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lqs/bench.hpp"
#include "lqs/syntax.hpp"

namespace lqs::fixtures {

inline std::string read_data(const std::string& name) {
  std::ifstream in(std::string(LQS_TEST_DATA_DIR) + "/" + name);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Oracle-scale KB: at most 3 individuals, concepts C0..C2, roles R0..R1,
// up to 3 clauses of at most 2 quantifiers and 4 disjuncts.
inline KnowledgeBase small_random_kb(std::uint64_t seed) {
  std::mt19937_64 rng(seed * 7919 + 17);
  BenchConfig cfg;
  cfg.family = Family::Random;
  cfg.individuals = 1 + static_cast<unsigned>(rng() % 3);
  cfg.clauses = 1 + static_cast<unsigned>(rng() % 3);
  cfg.quantifiers = 2;
  cfg.disjuncts = 4;
  cfg.seed = seed;
  return parse_kb(gen_family(cfg));
}

// Query text over the symbols of `kb`: 1..3 conjuncts, at most 2 query
// variables, every declared variable occurring at least once.
inline std::string random_query_text(const KnowledgeBase& kb, std::uint64_t seed) {
  std::mt19937_64 rng(seed * 104729 + 3);
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  const auto& inds = kb.symbols.individuals.names();
  const auto& cons = kb.symbols.concepts.names();
  const auto& rols = kb.symbols.roles.names();

  while (true) {
    // Variable sorts: 0 individual, 1 concept, 3 role.
    std::vector<int> var_sorts;
    const std::size_t nvars = pick(3);
    // Only sorts the KB has symbols for, so every variable has candidates.
    std::vector<int> options{0};
    if (!cons.empty()) options.push_back(1);
    if (!rols.empty()) options.push_back(3);
    for (std::size_t i = 0; i < nvars; ++i) var_sorts.push_back(options[pick(options.size())]);
    std::vector<bool> used(nvars, false);
    auto slot = [&](int sort, const std::vector<std::string>& constants) -> std::string {
      std::vector<std::size_t> candidates;
      for (std::size_t v = 0; v < nvars; ++v) {
        if (var_sorts[v] == sort) candidates.push_back(v);
      }
      if (!candidates.empty() && (constants.empty() || pick(2) == 0)) {
        const std::size_t v = candidates[pick(candidates.size())];
        used[v] = true;
        return "?v" + std::to_string(v);
      }
      if (constants.empty()) return "";
      return constants[pick(constants.size())];
    };

    std::string text;
    const std::size_t n = 1 + pick(3);
    bool ok = true;
    for (std::size_t c = 0; c < n && ok; ++c) {
      std::string atom;
      const std::size_t kind = pick(3);
      if (kind == 0) {
        const std::string x = slot(0, inds);
        const std::string y = slot(0, inds);
        atom = "(eq " + x + " " + y + ")";
        ok = !x.empty() && !y.empty();
      } else if (kind == 1) {
        const std::string x = slot(0, inds);
        const std::string s = slot(1, cons);
        atom = "(in " + x + " " + s + ")";
        ok = !x.empty() && !s.empty();
      } else {
        const std::string x = slot(0, inds);
        const std::string y = slot(0, inds);
        const std::string s = slot(3, rols);
        atom = "(rel " + x + " " + y + " " + s + ")";
        ok = !x.empty() && !y.empty() && !s.empty();
      }
      if (pick(4) == 0) atom = "(not " + atom + ")";
      text += (c == 0 ? "" : " ") + atom;
    }
    bool all_used = true;
    for (bool u : used) all_used = all_used && u;
    if (ok && all_used) return text;
  }
}

}  // namespace lqs::fixtures
