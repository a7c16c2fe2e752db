#include "lqs/bench.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <random>
#include <sstream>

#include "lqs/syntax.hpp"

namespace lqs {

namespace {

std::string family_name(Family f) { return f == Family::ProductRule ? "product-rule" : "random"; }

std::string product_individual(unsigned i) {
  if (i < 26) return std::string(1, static_cast<char>('a' + i));
  return "x" + std::to_string(i);
}

std::string gen_product_rule(const BenchConfig& cfg) {
  std::string out;
  for (unsigned i = 0; i < cfg.individuals; ++i) {
    out += "lit (in " + product_individual(i) + " D)\n";
  }
  for (unsigned j = 0; j < cfg.clauses; ++j) {
    const std::string s = j == 0 ? "" : "_" + std::to_string(j);
    out += "clause (forall z z1) (or (not (in z A" + s + ")) (not (rel z z1 P" + s +
           ")) (not (in z1 B" + s + ")) (not (rel z z1 P1" + s + ")) (in z1 C" + s + "))\n";
  }
  return out;
}

class RandomFamily {
 public:
  explicit RandomFamily(const BenchConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {}

  std::string generate() {
    std::string out = "ind";
    for (unsigned i = 0; i < cfg_.individuals; ++i) out += " i" + std::to_string(i);
    out += "\n";
    const unsigned ground = 1 + pick(cfg_.individuals + 1);
    for (unsigned g = 0; g < ground; ++g) out += "lit " + literal({}) + "\n";
    for (unsigned c = 0; c < cfg_.clauses; ++c) {
      const unsigned m = 1 + pick(cfg_.quantifiers);
      const unsigned n = 1 + pick(cfg_.disjuncts);
      std::vector<std::string> zs;
      for (unsigned i = 0; i < m; ++i) zs.push_back("z" + std::to_string(i + 1));
      out += "clause (forall";
      for (const auto& z : zs) out += " " + z;
      out += ") (or";
      for (unsigned i = 0; i < n; ++i) out += " " + literal(zs);
      out += ")\n";
    }
    return out;
  }

 private:
  unsigned pick(unsigned n) { return static_cast<unsigned>(rng_() % n); }

  // A quantified variable three times out of four when any are in scope.
  std::string term(const std::vector<std::string>& zs) {
    if (!zs.empty() && pick(4) != 0) return zs[pick(static_cast<unsigned>(zs.size()))];
    return "i" + std::to_string(pick(cfg_.individuals));
  }

  std::string literal(const std::vector<std::string>& zs) {
    const unsigned kind = pick(7);
    std::string atom;
    if (kind == 0) {
      std::string x = term(zs);
      atom = "(eq " + x + " " + term(zs) + ")";
    } else if (kind <= 3) {
      std::string x = term(zs);
      atom = "(in " + x + " C" + std::to_string(pick(3)) + ")";
    } else {
      std::string x = term(zs);
      std::string y = term(zs);
      atom = "(rel " + x + " " + y + " R" + std::to_string(pick(2)) + ")";
    }
    return pick(2) == 0 ? atom : "(not " + atom + ")";
  }

  const BenchConfig& cfg_;
  std::mt19937_64 rng_;
};

}  // namespace

void validate(const BenchConfig& cfg) {
  if (cfg.engines.empty()) throw ConfigError("no engines selected");
  if (cfg.individuals < 1) throw ConfigError("individuals must be at least 1");
  if (cfg.clauses < 1) throw ConfigError("clauses must be at least 1");
  if (cfg.disjuncts < 1) throw ConfigError("disjuncts must be at least 1");
  if (cfg.quantifiers < 1) throw ConfigError("quantifiers must be at least 1");
  if (cfg.repetitions < 1) throw ConfigError("repetitions must be at least 1");
}

std::string gen_family(const BenchConfig& cfg) {
  validate(cfg);
  if (cfg.family == Family::ProductRule) return gen_product_rule(cfg);
  return RandomFamily(cfg).generate();
}

std::string BenchReport::to_csv() const {
  std::ostringstream os;
  os << kBenchCsvHeader << '\n';
  for (const auto& r : rows) {
    char ms[32];
    std::snprintf(ms, sizeof ms, "%.3f", r.wall_ms);
    os << engine_name(r.engine) << ',' << family_name(r.family) << ',' << r.individuals << ','
       << r.clauses << ',' << r.run << ',' << r.open_branches << ',' << r.closed_branches << ','
       << ms << ',' << r.rule_apps << ',' << r.pb_apps << ',' << r.peak_formulae << '\n';
  }
  return os.str();
}

std::string BenchReport::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"engine", engine_name(r.engine)},
                   {"family", family_name(r.family)},
                   {"individuals", r.individuals},
                   {"clauses", r.clauses},
                   {"run", r.run},
                   {"open_branches", r.open_branches},
                   {"closed_branches", r.closed_branches},
                   {"wall_ms", r.wall_ms},
                   {"rule_apps", r.rule_apps},
                   {"pb_apps", r.pb_apps},
                   {"peak_formulae", r.peak_formulae}});
  }
  return out.dump(2);
}

BenchReport run_bench(const BenchConfig& cfg, const EngineOptions& opts) {
  const KnowledgeBase kb = parse_kb(gen_family(cfg));
  EngineOptions run_opts = opts;
  run_opts.collect_models = false;

  BenchReport report;
  for (unsigned run = 0; run < cfg.repetitions; ++run) {
    const std::size_t first = report.rows.size();
    for (EngineKind engine : cfg.engines) {
      const auto res = saturate(kb, engine, run_opts);
      BenchRow row;
      row.engine = engine;
      row.family = cfg.family;
      row.individuals = cfg.individuals;
      row.clauses = cfg.clauses;
      row.run = run;
      row.open_branches = res.open_count;
      row.closed_branches = res.closed_count;
      row.wall_ms = res.stats.wall_ms;
      row.rule_apps = res.stats.rule_apps;
      row.pb_apps = res.stats.pb_apps;
      row.peak_formulae = res.stats.peak_resident_formulae;
      report.rows.push_back(row);
    }
    for (std::size_t i = first + 1; i < report.rows.size(); ++i) {
      const auto& a = report.rows[first];
      const auto& b = report.rows[i];
      if (a.open_branches != b.open_branches || a.closed_branches != b.closed_branches) {
        throw ParityViolation(
            "branch parity violated: " + std::string(engine_name(a.engine)) + " " +
            std::to_string(a.open_branches) + "/" + std::to_string(a.closed_branches) + " vs " +
            std::string(engine_name(b.engine)) + " " + std::to_string(b.open_branches) + "/" +
            std::to_string(b.closed_branches) + " (open/closed)");
      }
    }
  }
  return report;
}

}  // namespace lqs
