// lqsr: consistency checking, model extraction and query answering for
// 4LQS^R_DL knowledge bases, plus the oracle and the benchmark harness.
//
// Exit codes: 0 success or consistent, 1 inconsistent, 2 usage or input
// error, 3 resource limit.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "lqs/bench.hpp"
#include "lqs/dl.hpp"
#include "lqs/engine.hpp"
#include "lqs/hocqa.hpp"
#include "lqs/oracle.hpp"
#include "lqs/syntax.hpp"

namespace {

constexpr int kExitInconsistent = 1;
constexpr int kExitUsage = 2;
constexpr int kExitLimit = 3;

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw lqs::ConfigError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct KbInput {
  std::string path;
  bool dl = false;

  lqs::KnowledgeBase load() const {
    const std::string text = read_input(path);
    if (dl || ends_with(path, ".dl")) {
      auto axioms = lqs::parse_dl(text);
      return lqs::translate_kb(axioms);
    }
    return lqs::parse_kb(text);
  }
};

struct EngineFlags {
  std::string engine = "keg";
  std::uint64_t max_branches = 0;
  double max_seconds = 0;
  unsigned workers = 1;

  lqs::EngineOptions options() const {
    lqs::EngineOptions o;
    o.max_branches = max_branches;
    o.max_seconds = max_seconds;
    o.workers = std::max(1u, workers);
    if (const char* cap = std::getenv("REASONER_THREADS")) {
      const long n = std::strtol(cap, nullptr, 10);
      if (n >= 1) o.workers = std::min<unsigned>(o.workers, static_cast<unsigned>(n));
    }
    return o;
  }
};

void add_kb(CLI::App* cmd, KbInput& in) {
  cmd->add_option("kb", in.path, "KB file ('-' for stdin)")->required();
  cmd->add_flag("--dl", in.dl, "read a DL axiom file (implied by a .dl extension)");
}

void add_engine(CLI::App* cmd, EngineFlags& f) {
  cmd->add_option("--engine", f.engine, "keg, ke or foke")
      ->check(CLI::IsMember({"keg", "ke", "foke"}));
  cmd->add_option("--max-branches", f.max_branches, "stop after this many branches (0: no limit)");
  cmd->add_option("--max-seconds", f.max_seconds, "wall-clock limit (0: no limit)");
  cmd->add_option("--workers", f.workers, "parallel workers (capped by REASONER_THREADS)");
}

struct OracleFlags {
  std::size_t max_individuals = lqs::OracleBounds{}.max_individuals;
  unsigned max_state_bits = 30;

  lqs::OracleBounds bounds() const {
    if (max_state_bits > 62) throw lqs::ConfigError("--max-state-bits must be at most 62");
    return lqs::OracleBounds{max_individuals, std::uint64_t{1} << max_state_bits};
  }
};

void add_oracle(CLI::App* cmd, OracleFlags& f) {
  cmd->add_option("--max-individuals", f.max_individuals, "oracle bound on individuals");
  cmd->add_option("--max-state-bits", f.max_state_bits, "oracle bound: log2 of set assignments");
}

std::string literal_list(const lqs::Branch& b, const lqs::SymbolTable& symbols) {
  std::string out;
  for (const auto& l : b.literals()) {
    if (!out.empty()) out += " ";
    out += lqs::render(l, symbols);
  }
  return out;
}

std::string bindings_text(const lqs::Substitution& s, const lqs::SymbolTable& symbols) {
  std::string out;
  auto emit = [&](lqs::Sort sort, bool merges) {
    for (const auto& [from, to] : s.entries(sort)) {
      const auto& space = symbols.space(sort);
      if (space.is_query_variable(from) == merges) continue;
      if (!out.empty()) out += " ";
      out += (merges ? "merge " : "") + space.name(from) + "=" + space.name(to);
    }
  };
  for (bool merges : {false, true}) {
    emit(lqs::Sort::Individual, merges);
    if (!merges) {
      emit(lqs::Sort::Concept, false);
      emit(lqs::Sort::Role, false);
    }
  }
  return out.empty() ? "(empty substitution)" : out;
}

lqs::Query load_query(const std::string& file, const std::string& text,
                      const std::vector<std::string>& task, const lqs::SymbolTable& context) {
  if (!task.empty()) {
    const auto kind = lqs::parse_task(task.front());
    std::vector<std::string> args(task.begin() + 1, task.end());
    if (kind == lqs::TaskKind::Cqa && args.empty()) {
      if (!file.empty()) args.push_back(read_input(file));
      if (!text.empty()) args.push_back(text);
    }
    return lqs::task_query(kind, args, context);
  }
  if (!file.empty()) return lqs::parse_query(read_input(file), context);
  return lqs::parse_query(text, context);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lqsr: KE-gamma reasoner for 4LQS^R_DL knowledge bases"};
  app.require_subcommand(1);

  KbInput kb_in;
  EngineFlags eng;
  OracleFlags ora;
  bool json = false;
  std::string q_file;
  std::string q_text;
  std::vector<std::string> task;

  auto* check = app.add_subcommand("check", "decide consistency");
  add_kb(check, kb_in);
  add_engine(check, eng);

  auto* models = app.add_subcommand("models", "print the open complete branches and their models");
  add_kb(models, kb_in);
  add_engine(models, eng);
  models->add_flag("--json", json, "one model JSON object per line");

  auto* query = app.add_subcommand("query", "answer a higher-order conjunctive query");
  add_kb(query, kb_in);
  add_engine(query, eng);
  query->add_option("--q", q_file, "query file");
  query->add_option("--q-text", q_text, "query text");
  query->add_option("--task", task, "task letter A|B|C|D followed by its arguments")
      ->expected(1, 3);
  query->add_flag("--json", json, "print the answer set as JSON");

  auto* translate = app.add_subcommand("translate", "translate a DL axiom file to KB text");
  std::string dl_path;
  translate->add_option("dl", dl_path, "DL axiom file ('-' for stdin)")->required();

  auto* oracle = app.add_subcommand("oracle", "brute-force semantics");
  oracle->require_subcommand(1);
  auto* ocheck = oracle->add_subcommand("check", "satisfiability by model enumeration");
  add_kb(ocheck, kb_in);
  add_oracle(ocheck, ora);
  auto* oanswers = oracle->add_subcommand("answers", "answer set by model enumeration");
  add_kb(oanswers, kb_in);
  add_oracle(oanswers, ora);
  oanswers->add_option("--q", q_file, "query file");
  oanswers->add_option("--q-text", q_text, "query text");
  oanswers->add_flag("--json", json, "print the answer set as JSON");

  auto* bench = app.add_subcommand("bench", "compare the three engines on a generated family");
  lqs::BenchConfig cfg;
  std::string family = "product-rule";
  std::vector<std::string> engines{"keg", "ke", "foke"};
  bool emit_kb = false;
  bool parallel = false;
  bench->add_option("--family", family)->check(CLI::IsMember({"product-rule", "random"}));
  bench->add_option("--engines", engines)->delimiter(',')->check(CLI::IsMember({"keg", "ke", "foke"}));
  bench->add_option("--individuals", cfg.individuals);
  bench->add_option("--clauses", cfg.clauses);
  bench->add_option("--disjuncts", cfg.disjuncts);
  bench->add_option("--quantifiers", cfg.quantifiers);
  bench->add_option("--repetitions", cfg.repetitions);
  bench->add_option("--seed", cfg.seed);
  bench->add_option("--max-seconds", eng.max_seconds, "per-run wall-clock limit");
  bench->add_option("--max-branches", eng.max_branches, "per-run branch limit");
  bench->add_flag("--emit-kb", emit_kb, "print the generated KB and exit");
  bench->add_flag("--json", json, "JSON report instead of CSV");
  bench->add_flag("--parallel", parallel, "parallel saturation (timings not comparable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (check->parsed()) {
      const auto kb = kb_in.load();
      auto opts = eng.options();
      opts.collect_models = false;
      const auto res = lqs::saturate(kb, lqs::parse_engine(eng.engine), opts);
      if (res.consistent) {
        std::cout << "consistent, " << res.open_count << " open branches\n";
        return 0;
      }
      std::cout << "inconsistent, " << res.closed_count << " closed branches\n";
      return kExitInconsistent;
    }
    if (models->parsed()) {
      const auto kb = kb_in.load();
      const auto res = lqs::saturate(kb, lqs::parse_engine(eng.engine), eng.options());
      for (std::size_t i = 0; i < res.open_complete.size(); ++i) {
        const auto& cb = res.open_complete[i];
        const auto m = lqs::extract_model(cb.branch, cb.sigma, kb);
        if (json) {
          std::cout << lqs::render_json(m, kb.symbols) << '\n';
        } else {
          std::cout << "branch " << i + 1 << ": " << literal_list(cb.branch, kb.symbols) << '\n';
          std::cout << "  model: " << lqs::render_json(m, kb.symbols) << '\n';
        }
      }
      return res.consistent ? 0 : kExitInconsistent;
    }
    if (query->parsed()) {
      const auto kb = kb_in.load();
      const auto q = load_query(q_file, q_text, task, kb.symbols);
      const auto res = lqs::saturate(kb, lqs::parse_engine(eng.engine), eng.options());
      const auto answers = lqs::answer(q, res.open_complete);
      if (json) {
        std::cout << lqs::render_json(answers, q.symbols) << '\n';
      } else {
        for (const auto& a : answers.answers) std::cout << bindings_text(a, q.symbols) << '\n';
        std::cout << answers.size() << " answer(s)\n";
      }
      return 0;
    }
    if (translate->parsed()) {
      auto axioms = lqs::parse_dl(read_input(dl_path));
      std::cout << lqs::render(lqs::translate_kb(axioms));
      return 0;
    }
    if (ocheck->parsed()) {
      const auto kb = kb_in.load();
      if (lqs::oracle_satisfiable(kb, ora.bounds())) {
        std::cout << "satisfiable\n";
        return 0;
      }
      std::cout << "unsatisfiable\n";
      return kExitInconsistent;
    }
    if (oanswers->parsed()) {
      const auto kb = kb_in.load();
      const auto q = load_query(q_file, q_text, {}, kb.symbols);
      const auto answers = lqs::brute_answers(kb, q, ora.bounds());
      if (json) {
        std::cout << lqs::render_json(answers, q.symbols) << '\n';
      } else {
        for (const auto& a : answers.answers) std::cout << bindings_text(a, q.symbols) << '\n';
        std::cout << answers.size() << " answer(s)\n";
      }
      return 0;
    }
    if (bench->parsed()) {
      cfg.family = family == "random" ? lqs::Family::Random : lqs::Family::ProductRule;
      cfg.engines.clear();
      for (const auto& e : engines) cfg.engines.push_back(lqs::parse_engine(e));
      if (emit_kb) {
        std::cout << lqs::gen_family(cfg);
        return 0;
      }
      auto opts = eng.options();
      if (parallel) {
        EngineFlags p = eng;
        p.workers = std::max(1u, std::thread::hardware_concurrency());
        opts = p.options();
        std::cerr << "note: parallel saturation, timings are not comparable\n";
      }
      const auto report = lqs::run_bench(cfg, opts);
      std::cout << (json ? report.to_json() + "\n" : report.to_csv());
      return 0;
    }
  } catch (const lqs::ResourceLimitError& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kExitLimit;
  } catch (const lqs::BoundsExceededError& e) {
    std::cerr << e.what() << '\n';
    return kExitLimit;
  } catch (const lqs::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
