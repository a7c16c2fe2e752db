#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lqs/engine.hpp"

namespace lqs {

enum class Family { ProductRule, Random };

struct BenchConfig {
  std::vector<EngineKind> engines{EngineKind::KeGamma, EngineKind::Ke, EngineKind::FoKe};
  Family family = Family::ProductRule;
  unsigned individuals = 4;
  unsigned clauses = 1;
  unsigned disjuncts = 5;
  unsigned quantifiers = 2;
  unsigned repetitions = 1;
  std::uint64_t seed = 1;
};

void validate(const BenchConfig& cfg);

// KB text of the benchmark family. Deterministic in (family, shape, seed).
std::string gen_family(const BenchConfig& cfg);

struct BenchRow {
  EngineKind engine = EngineKind::KeGamma;
  Family family = Family::ProductRule;
  unsigned individuals = 0;
  unsigned clauses = 0;
  unsigned run = 0;
  std::uint64_t open_branches = 0;
  std::uint64_t closed_branches = 0;
  double wall_ms = 0.0;
  std::uint64_t rule_apps = 0;
  std::uint64_t pb_apps = 0;
  std::uint64_t peak_formulae = 0;
};

struct BenchReport {
  std::vector<BenchRow> rows;

  std::string to_csv() const;
  std::string to_json() const;
};

inline constexpr const char* kBenchCsvHeader =
    "engine,family,individuals,clauses,run,open_branches,closed_branches,"
    "wall_ms,rule_apps,pb_apps,peak_formulae";

// Runs every engine `repetitions` times on the generated KB. Throws
// ParityViolation when the engines disagree on branch counts.
BenchReport run_bench(const BenchConfig& cfg, const EngineOptions& opts = {});

}  // namespace lqs
