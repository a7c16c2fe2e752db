#include "lqs/hocqa.hpp"

#include <map>
#include <tuple>

#include "lqs/error.hpp"
#include "lqs/syntax.hpp"

namespace lqs {

std::vector<Variable> Query::variables() const {
  std::vector<Variable> out;
  for (Sort sort : {Sort::Individual, Sort::Concept, Sort::Role}) {
    const auto& space = symbols.space(sort);
    for (SymbolId id = 0; id < space.size(); ++id) {
      if (space.is_query_variable(id)) out.push_back(Variable{sort, id});
    }
  }
  return out;
}

namespace {

// Extends `rho` so that q.rho == lit, or reports failure.
bool unify_term(const Term& q, const Term& lit, const SymbolTable& symbols, Substitution& rho) {
  if (symbols.individuals.is_query_variable(q.id)) {
    if (auto bound = rho.lookup(Sort::Individual, q.id)) return *bound == lit.id;
    rho.bind(Sort::Individual, q.id, lit.id);
    return true;
  }
  return q.id == lit.id;
}

bool unify(const Literal& q, const Literal& lit, const SymbolTable& symbols, Substitution& rho) {
  if (q.kind != lit.kind || q.positive != lit.positive) return false;
  if (!unify_term(q.first, lit.first, symbols, rho)) return false;
  if (q.kind != AtomKind::Member1 && !unify_term(q.second, lit.second, symbols, rho)) {
    return false;
  }
  if (q.kind == AtomKind::Eq) return true;
  const Sort sort = q.kind == AtomKind::Member1 ? Sort::Concept : Sort::Role;
  if (symbols.space(sort).is_query_variable(q.set)) {
    rho.bind(sort, q.set, lit.set);
    return true;
  }
  return q.set == lit.set;
}

bool is_set_variable(const Literal& q, const SymbolTable& symbols) {
  if (q.kind == AtomKind::Member1) return symbols.concepts.is_query_variable(q.set);
  if (q.kind == AtomKind::Member3) return symbols.roles.is_query_variable(q.set);
  return false;
}

// Branch literals grouped by (shape, polarity, set symbol).
class BranchIndex {
 public:
  explicit BranchIndex(const Branch& b) {
    for (const auto& l : b.literals()) {
      by_set_[{l.kind, l.positive, l.set}].push_back(&l);
      by_shape_[{l.kind, l.positive}].push_back(&l);
    }
  }

  const std::vector<const Literal*>& candidates(const Literal& q, const SymbolTable& symbols) const {
    static const std::vector<const Literal*> none;
    if (q.kind == AtomKind::Eq || is_set_variable(q, symbols)) {
      auto it = by_shape_.find({q.kind, q.positive});
      return it == by_shape_.end() ? none : it->second;
    }
    auto it = by_set_.find({q.kind, q.positive, q.set});
    return it == by_set_.end() ? none : it->second;
  }

 private:
  std::map<std::tuple<AtomKind, bool, SymbolId>, std::vector<const Literal*>> by_set_;
  std::map<std::pair<AtomKind, bool>, std::vector<const Literal*>> by_shape_;
};

void check_fresh(const CompleteBranch& cb, const SymbolTable& symbols) {
  auto stale = [&](const Literal& l) {
    const auto k = symbols.individuals.size();
    if (l.first.id >= k) return true;
    if (l.kind != AtomKind::Member1 && l.second.id >= k) return true;
    if (l.kind == AtomKind::Member1) return l.set >= symbols.concepts.size();
    if (l.kind == AtomKind::Member3) return l.set >= symbols.roles.size();
    return false;
  };
  for (const auto& l : cb.branch.literals()) {
    if (stale(l)) throw StaleBranchError("branch literal refers to a symbol unknown to the query");
  }
  for (const auto& [from, to] : cb.sigma.entries(Sort::Individual)) {
    if (from >= symbols.individuals.size() || to >= symbols.individuals.size()) {
      throw StaleBranchError("branch merge refers to an individual unknown to the query");
    }
  }
}

}  // namespace

std::vector<Substitution> match_literal(const Literal& q, const Branch& branch,
                                        const SymbolTable& symbols) {
  std::vector<Substitution> out;
  for (const auto& l : branch.literals()) {
    Substitution rho;
    if (unify(q, l, symbols, rho)) out.push_back(std::move(rho));
  }
  return out;
}

AnswerSet answer(const Query& q, std::span<const CompleteBranch> branches) {
  AnswerSet result;
  struct Node {
    Substitution sigma_prime;
    std::size_t next = 0;
  };
  for (const auto& cb : branches) {
    check_fresh(cb, q.symbols);
    std::vector<Literal> conjuncts;
    conjuncts.reserve(q.conjuncts.size());
    for (const auto& c : q.conjuncts) conjuncts.push_back(apply(c, cb.sigma));

    const BranchIndex index(cb.branch);
    std::vector<Node> stack{Node{}};
    while (!stack.empty()) {
      Node node = std::move(stack.back());
      stack.pop_back();
      if (node.next == conjuncts.size()) {
        result.answers.insert(compose(cb.sigma, node.sigma_prime));
        continue;
      }
      const Literal qi = apply(conjuncts[node.next], node.sigma_prime);
      const auto& candidates = index.candidates(qi, q.symbols);
      // Reverse push keeps the leftmost match on top of the stack.
      for (auto it = candidates.rbegin(); it != candidates.rend(); ++it) {
        Substitution rho;
        if (!unify(qi, **it, q.symbols, rho)) continue;
        stack.push_back(Node{compose(node.sigma_prime, rho), node.next + 1});
      }
    }
  }
  return result;
}

TaskKind parse_task(std::string_view letter) {
  if (letter == "A" || letter == "a") return TaskKind::RoleFiller;
  if (letter == "B" || letter == "b") return TaskKind::ConceptRetrieval;
  if (letter == "C" || letter == "c") return TaskKind::RoleInstance;
  if (letter == "D" || letter == "d") return TaskKind::Cqa;
  throw ConfigError("unknown task '" + std::string(letter) + "' (expected A, B, C or D)");
}

Query task_query(TaskKind kind, std::span<const std::string> args, const SymbolTable& context) {
  auto need = [&](std::size_t n, const char* shape) {
    if (args.size() != n) {
      throw ParseError(ParseErrorKind::Arity, SourceSpan{},
                       std::string("task expects ") + shape);
    }
  };
  switch (kind) {
    case TaskKind::RoleFiller:
      need(2, "an individual and a role");
      return parse_query("(rel " + args[0] + " ?x " + args[1] + ")", context);
    case TaskKind::ConceptRetrieval:
      need(1, "an individual");
      return parse_query("(in " + args[0] + " ?c)", context);
    case TaskKind::RoleInstance:
      need(2, "two individuals");
      return parse_query("(rel " + args[0] + " " + args[1] + " ?r)", context);
    case TaskKind::Cqa:
      need(1, "a query text");
      return parse_query(args[0], context);
  }
  throw ConfigError("unknown task");
}

Substitution query_bindings(const Substitution& answer, const SymbolTable& symbols) {
  Substitution out;
  for (Sort sort : {Sort::Individual, Sort::Concept, Sort::Role}) {
    for (const auto& [from, to] : answer.entries(sort)) {
      if (from < symbols.space(sort).size() && symbols.space(sort).is_query_variable(from)) {
        out.bind(sort, from, to);
      }
    }
  }
  return out;
}

}  // namespace lqs
