#include "lqs/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>

#include "lqs/error.hpp"

namespace lqs {

namespace {

std::size_t element_of(const Interpretation& m, const Term& t, std::span<const std::size_t> bound) {
  if (t.bound) {
    if (t.id >= bound.size()) throw PreconditionError("quantified variable outside its clause");
    return bound[t.id];
  }
  if (t.id >= m.assign0.size()) {
    throw PreconditionError("individual " + std::to_string(t.id) + " is not assigned");
  }
  return m.assign0[t.id];
}

bool eval(const Interpretation& m, const Literal& l, std::span<const std::size_t> bound) {
  const std::size_t a = element_of(m, l.first, bound);
  bool holds = false;
  switch (l.kind) {
    case AtomKind::Eq:
      holds = a == element_of(m, l.second, bound);
      break;
    case AtomKind::Member1:
      if (l.set >= m.assign1.size()) throw PreconditionError("concept is not assigned");
      holds = m.assign1[l.set].contains(a);
      break;
    case AtomKind::Member3:
      if (l.set >= m.assign3.size()) throw PreconditionError("role is not assigned");
      holds = m.assign3[l.set].contains({a, element_of(m, l.second, bound)});
      break;
  }
  return holds == l.positive;
}

}  // namespace

bool model_check(const Interpretation& m, const Literal& lit) {
  if (!lit.is_ground()) throw PreconditionError("literal has quantified variables");
  return eval(m, lit, {});
}

bool model_check(const Interpretation& m, const UniversalClause& clause) {
  const std::size_t d = m.domain.size();
  const std::size_t arity = clause.arity();
  if (d == 0) return true;
  std::vector<std::size_t> tuple(arity, 0);
  while (true) {
    bool some = false;
    for (const auto& lit : clause.disjuncts) {
      if (eval(m, lit, tuple)) {
        some = true;
        break;
      }
    }
    if (!some) return false;
    std::size_t pos = arity;
    while (true) {
      if (pos == 0) return true;
      --pos;
      if (++tuple[pos] < d) break;
      tuple[pos] = 0;
    }
  }
}

bool model_check(const Interpretation& m, const KnowledgeBase& kb) {
  for (const auto& l : kb.literals) {
    if (!model_check(m, l)) return false;
  }
  for (const auto& c : kb.clauses) {
    if (!model_check(m, c)) return false;
  }
  return true;
}

Interpretation extract_model(const Branch& branch, const Substitution& sigma,
                             const KnowledgeBase& kb) {
  if (branch.closed()) throw PreconditionError("cannot extract a model from a closed branch");
  const std::size_t k = kb.individual_count();

  // Every instance over the individuals, read through sigma, must be
  // discharged on the branch.
  for (const auto& c : kb.clauses) {
    if (k == 0) break;
    std::vector<SymbolId> tau(c.arity(), 0);
    while (true) {
      bool some = false;
      for (const auto& d : c.disjuncts) {
        Literal inst = d;
        if (inst.first.bound) inst.first = Term::free(tau[inst.first.id]);
        if (inst.kind != AtomKind::Member1 && inst.second.bound) {
          inst.second = Term::free(tau[inst.second.id]);
        }
        if (branch.contains(apply(inst, sigma))) {
          some = true;
          break;
        }
      }
      if (!some) throw PreconditionError("branch does not fulfil every clause instance");
      std::size_t pos = tau.size();
      bool done = false;
      while (true) {
        if (pos == 0) {
          done = true;
          break;
        }
        --pos;
        if (++tau[pos] < k) break;
        tau[pos] = 0;
      }
      if (done) break;
    }
  }

  Interpretation m;
  std::vector<std::size_t> element_of_rep(k, SIZE_MAX);
  m.assign0.resize(k);
  for (SymbolId x = 0; x < k; ++x) {
    const SymbolId r = sigma.image(Sort::Individual, x);
    if (r >= k) throw PreconditionError("normalisation maps outside the individuals");
    if (element_of_rep[r] == SIZE_MAX) {
      element_of_rep[r] = m.domain.size();
      m.domain.push_back(r);
    }
    m.assign0[x] = element_of_rep[r];
  }
  m.assign1.resize(kb.symbols.concepts.size());
  m.assign3.resize(kb.symbols.roles.size());
  for (const auto& l : branch.literals()) {
    if (!l.positive || l.kind == AtomKind::Eq) continue;
    const std::size_t a = m.assign0.at(l.first.id);
    if (l.kind == AtomKind::Member1) {
      m.assign1.at(l.set).insert(a);
    } else {
      m.assign3.at(l.set).insert({a, m.assign0.at(l.second.id)});
    }
  }
  return m;
}

namespace {

// Ground constraint over membership atoms of a fixed domain; equality
// literals are already decided by the partition.
struct GroundConstraint {
  std::vector<std::pair<std::size_t, bool>> lits;  // (atom, positive)
};

class PartitionSearch {
 public:
  PartitionSearch(const KnowledgeBase& kb, std::vector<std::size_t> block, std::size_t d)
      : kb_(kb), block_(std::move(block)), d_(d),
        n1_(kb.symbols.concepts.size()), n3_(kb.symbols.roles.size()) {}

  // Returns false if the visitor asked to stop.
  bool run(const std::function<bool(const Interpretation&)>& visit) {
    atoms_ = d_ * n1_ + d_ * d_ * n3_;
    buckets_.assign(atoms_ + 1, {});
    if (!ground()) return true;
    value_.assign(atoms_, false);
    visit_ = &visit;
    return search(0);
  }

 private:
  std::size_t atom1(std::size_t e, std::size_t c) const { return c * d_ + e; }
  std::size_t atom3(std::size_t a, std::size_t b, std::size_t r) const {
    return d_ * n1_ + (r * d_ + a) * d_ + b;
  }

  // Adds the constraint for one literal list under element bindings.
  // Returns false if the constraint is violated outright.
  bool add(const std::vector<Literal>& lits, std::span<const std::size_t> bound) {
    GroundConstraint gc;
    std::size_t max_atom = 0;
    auto elem = [&](const Term& t) { return t.bound ? bound[t.id] : block_[t.id]; };
    for (const auto& l : lits) {
      const std::size_t a = elem(l.first);
      if (l.kind == AtomKind::Eq) {
        if ((a == elem(l.second)) == l.positive) return true;
        continue;
      }
      const std::size_t atom =
          l.kind == AtomKind::Member1 ? atom1(a, l.set) : atom3(a, elem(l.second), l.set);
      gc.lits.emplace_back(atom, l.positive);
      max_atom = std::max(max_atom, atom);
    }
    if (gc.lits.empty()) return false;
    buckets_[max_atom].push_back(std::move(gc));
    return true;
  }

  bool ground() {
    for (const auto& l : kb_.literals) {
      if (!add({l}, {})) return false;
    }
    for (const auto& c : kb_.clauses) {
      if (d_ == 0) continue;
      std::vector<std::size_t> tuple(c.arity(), 0);
      while (true) {
        if (!add(c.disjuncts, tuple)) return false;
        std::size_t pos = tuple.size();
        bool done = false;
        while (true) {
          if (pos == 0) {
            done = true;
            break;
          }
          --pos;
          if (++tuple[pos] < d_) break;
          tuple[pos] = 0;
        }
        if (done) break;
      }
    }
    return true;
  }

  bool consistent_at(std::size_t atom) const {
    for (const auto& gc : buckets_[atom]) {
      bool some = false;
      for (const auto& [a, positive] : gc.lits) {
        if (value_[a] == positive) {
          some = true;
          break;
        }
      }
      if (!some) return false;
    }
    return true;
  }

  bool search(std::size_t atom) {
    if (atom == atoms_) return (*visit_)(build());
    for (bool v : {false, true}) {
      value_[atom] = v;
      if (consistent_at(atom) && !search(atom + 1)) return false;
    }
    return true;
  }

  Interpretation build() const {
    Interpretation m;
    const std::size_t k = block_.size();
    m.domain.assign(d_, 0);
    std::vector<bool> seen(d_, false);
    for (std::size_t x = 0; x < k; ++x) {
      if (!seen[block_[x]]) {
        seen[block_[x]] = true;
        m.domain[block_[x]] = static_cast<SymbolId>(x);
      }
    }
    m.assign0 = block_;
    m.assign1.resize(n1_);
    m.assign3.resize(n3_);
    for (std::size_t c = 0; c < n1_; ++c) {
      for (std::size_t e = 0; e < d_; ++e) {
        if (value_[atom1(e, c)]) m.assign1[c].insert(e);
      }
    }
    for (std::size_t r = 0; r < n3_; ++r) {
      for (std::size_t a = 0; a < d_; ++a) {
        for (std::size_t b = 0; b < d_; ++b) {
          if (value_[atom3(a, b, r)]) m.assign3[r].insert({a, b});
        }
      }
    }
    return m;
  }

  const KnowledgeBase& kb_;
  std::vector<std::size_t> block_;
  std::size_t d_;
  std::size_t n1_;
  std::size_t n3_;
  std::size_t atoms_ = 0;
  std::vector<std::vector<GroundConstraint>> buckets_;
  std::vector<bool> value_;
  const std::function<bool(const Interpretation&)>* visit_ = nullptr;
};

void check_bounds(const KnowledgeBase& kb, const OracleBounds& bounds) {
  const std::size_t k = kb.individual_count();
  if (k > bounds.max_individuals) {
    throw BoundsExceededError("oracle bound: " + std::to_string(k) + " individuals (max " +
                              std::to_string(bounds.max_individuals) + ")");
  }
  const std::size_t bits = k * kb.symbols.concepts.size() + k * k * kb.symbols.roles.size();
  if (bits >= 64 || (std::uint64_t{1} << bits) > bounds.max_states) {
    throw BoundsExceededError("oracle bound: 2^" + std::to_string(bits) +
                              " set assignments exceed the state limit");
  }
}

}  // namespace

void enumerate_models(const KnowledgeBase& kb, const OracleBounds& bounds,
                      const std::function<bool(const Interpretation&)>& visit) {
  check_bounds(kb, bounds);
  const std::size_t k = kb.individual_count();
  auto checked = [&](const Interpretation& m) {
    if (!model_check(m, kb)) throw std::logic_error("oracle produced a non-model");
    return visit(m);
  };
  // Set partitions as restricted growth strings: block[x] <= 1 + max(block[..x)).
  std::vector<std::size_t> block(k, 0);
  while (true) {
    const std::size_t d = k == 0 ? 0 : *std::max_element(block.begin(), block.end()) + 1;
    PartitionSearch search(kb, block, d);
    if (!search.run(checked)) return;
    std::size_t pos = k;
    while (true) {
      if (pos <= 1) return;
      --pos;
      const std::size_t prefix_max = *std::max_element(block.begin(), block.begin() + pos);
      if (block[pos] <= prefix_max) {
        ++block[pos];
        std::fill(block.begin() + pos + 1, block.end(), 0);
        break;
      }
    }
  }
}

std::vector<Interpretation> all_models(const KnowledgeBase& kb, const OracleBounds& bounds) {
  std::vector<Interpretation> out;
  enumerate_models(kb, bounds, [&](const Interpretation& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

bool oracle_satisfiable(const KnowledgeBase& kb, const OracleBounds& bounds) {
  bool found = false;
  enumerate_models(kb, bounds, [&](const Interpretation&) {
    found = true;
    return false;
  });
  return found;
}

namespace {

// kb extended with the ground literals q.sigma, re-interned by name so that
// unknown constants of the query become ordinary symbols.
KnowledgeBase conjoin(const KnowledgeBase& kb, const Query& q, const Substitution& sigma) {
  KnowledgeBase out = kb;
  auto rename = [&](Sort sort, SymbolId id) {
    return out.symbols.space(sort).intern(q.symbols.space(sort).name(id));
  };
  for (const auto& c : q.conjuncts) {
    Literal l = apply(c, sigma);
    l.first.id = rename(Sort::Individual, l.first.id);
    if (l.kind != AtomKind::Member1) l.second.id = rename(Sort::Individual, l.second.id);
    if (l.kind == AtomKind::Member1) l.set = rename(Sort::Concept, l.set);
    if (l.kind == AtomKind::Member3) l.set = rename(Sort::Role, l.set);
    out.add_literal(l);
  }
  return out;
}

}  // namespace

AnswerSet brute_answers(const KnowledgeBase& kb, const Query& q, const OracleBounds& bounds) {
  AnswerSet result;
  if (!q.symbols.extends(kb.symbols)) {
    throw StaleBranchError("query was not parsed against this knowledge base");
  }
  check_bounds(kb, bounds);
  if (!oracle_satisfiable(kb, bounds)) return result;

  const auto vars = q.variables();
  std::vector<SymbolId> choice(vars.size(), 0);
  for (const auto& v : vars) {
    if (kb.symbols.space(v.sort).size() == 0) return result;
  }
  while (true) {
    Substitution sigma;
    for (std::size_t i = 0; i < vars.size(); ++i) sigma.bind(vars[i].sort, vars[i].id, choice[i]);
    if (oracle_satisfiable(conjoin(kb, q, sigma), bounds)) result.answers.insert(sigma);
    std::size_t pos = vars.size();
    while (true) {
      if (pos == 0) return result;
      --pos;
      if (++choice[pos] < kb.symbols.space(vars[pos].sort).size()) break;
      choice[pos] = 0;
    }
  }
}

}  // namespace lqs
