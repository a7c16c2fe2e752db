#include "lqs/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

namespace lqs {

std::string_view engine_name(EngineKind kind) {
  switch (kind) {
    case EngineKind::KeGamma: return "keg";
    case EngineKind::Ke: return "ke";
    case EngineKind::FoKe: return "foke";
  }
  return "?";
}

EngineKind parse_engine(std::string_view name) {
  if (name == "keg") return EngineKind::KeGamma;
  if (name == "ke") return EngineKind::Ke;
  if (name == "foke") return EngineKind::FoKe;
  throw ConfigError("unknown engine '" + std::string(name) + "' (expected keg, ke or foke)");
}

namespace {

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = a + b;
  return r < a ? std::numeric_limits<std::uint64_t>::max() : r;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

std::uint64_t sat_pow(std::uint64_t base, std::size_t exp) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r = sat_mul(r, base);
  return r;
}

}  // namespace

std::uint64_t branch_height_bound(const KnowledgeBase& kb) {
  std::uint64_t bound = kb.literals.size();
  const std::uint64_t k = kb.individual_count();
  for (const auto& c : kb.clauses) {
    bound = sat_add(bound, sat_mul(c.disjuncts.size(), sat_pow(k, c.arity())));
  }
  return bound;
}

Literal instantiate(const Literal& lit, std::span<const SymbolId> tau) {
  Literal out = lit;
  auto fix = [&](Term& t) {
    if (t.bound) t = Term::free(tau[t.id]);
  };
  fix(out.first);
  if (lit.kind != AtomKind::Member1) fix(out.second);
  return out;
}

namespace {

std::vector<Literal> instantiate_all(const Instantiation& inst) {
  if (inst.clause == nullptr || inst.tau.size() != inst.clause->arity()) {
    throw PreconditionError("instantiation does not cover the quantifier prefix");
  }
  std::vector<Literal> out;
  out.reserve(inst.clause->disjuncts.size());
  for (const auto& d : inst.clause->disjuncts) out.push_back(instantiate(d, inst.tau));
  return out;
}

}  // namespace

Literal egamma(const Instantiation& inst, const Branch& branch) {
  auto betas = instantiate_all(inst);
  std::size_t missing = 0;
  std::size_t index = 0;
  for (std::size_t i = 0; i < betas.size(); ++i) {
    if (!branch.contains(complement(betas[i]))) {
      if (missing++ == 0) index = i;
    }
  }
  if (missing > 1) {
    throw PreconditionError("E-gamma needs the complements of all disjuncts but one; " +
                            std::to_string(missing) + " are missing");
  }
  if (branch.contains(betas[index])) {
    throw PreconditionError("E-gamma conclusion is already on the branch");
  }
  return betas[index];
}

Literal select_pb_literal(const Instantiation& inst, const Branch& branch) {
  auto betas = instantiate_all(inst);
  std::size_t missing = 0;
  std::size_t h = 0;
  for (std::size_t i = 0; i < betas.size(); ++i) {
    if (branch.contains(betas[i])) {
      throw PreconditionError("instance already fulfilled on the branch");
    }
    if (!branch.contains(complement(betas[i]))) {
      if (missing++ == 0) h = i;
    }
  }
  if (missing <= 1) throw PreconditionError("E-gamma is applicable; PB is not");
  return complement(betas[h]);
}

namespace {

// Union-find where every class is represented by its least member.
class MinUnion {
 public:
  explicit MinUnion(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent_[a] = b;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

Substitution equality_normalize(const Branch& branch) {
  SymbolId max_id = 0;
  bool any = false;
  for (const auto& l : branch.literals()) {
    if (l.kind == AtomKind::Eq && l.positive && l.first != l.second) {
      max_id = std::max({max_id, l.first.id, l.second.id});
      any = true;
    }
  }
  Substitution sigma;
  if (!any) return sigma;
  MinUnion u(max_id + 1);
  for (const auto& l : branch.literals()) {
    if (l.kind == AtomKind::Eq && l.positive && l.first != l.second) {
      u.unite(l.first.id, l.second.id);
    }
  }
  for (SymbolId i = 0; i <= max_id; ++i) {
    sigma.bind(Sort::Individual, i, static_cast<SymbolId>(u.find(i)));
  }
  return sigma;
}

namespace {

// Visits every tau over k individuals for an m-ary prefix, lexicographic with
// the first quantified variable most significant.
template <typename F>
bool for_each_tau(std::size_t k, std::size_t m, F&& visit) {
  if (k == 0) return true;
  std::vector<SymbolId> tau(m, 0);
  while (true) {
    if (!visit(std::span<const SymbolId>(tau))) return false;
    std::size_t pos = m;
    while (pos > 0) {
      --pos;
      if (++tau[pos] < k) break;
      tau[pos] = 0;
      if (pos == 0) return true;
    }
    if (m == 0) return true;
  }
}

}  // namespace

bool is_fulfilled(const UniversalClause& clause, const Branch& branch,
                  const KnowledgeBase& kb) {
  return for_each_tau(kb.individual_count(), clause.arity(), [&](std::span<const SymbolId> tau) {
    for (const auto& d : clause.disjuncts) {
      if (branch.contains(instantiate(d, tau))) return true;
    }
    return false;
  });
}

std::vector<GroundClause> ground_expand(const KnowledgeBase& kb, std::uint64_t max_clauses) {
  const std::uint64_t k = kb.individual_count();
  std::uint64_t total = 0;
  for (const auto& c : kb.clauses) total = sat_add(total, sat_pow(k, c.arity()));
  if (total > max_clauses) {
    SaturationStats partial;
    throw ResourceLimitError("grounding would produce " + std::to_string(total) +
                                 " clauses (limit " + std::to_string(max_clauses) + ")",
                             partial);
  }
  std::vector<GroundClause> out;
  out.reserve(total);
  for (std::size_t ci = 0; ci < kb.clauses.size(); ++ci) {
    const auto& c = kb.clauses[ci];
    for_each_tau(k, c.arity(), [&](std::span<const SymbolId> tau) {
      GroundClause g;
      g.clause_index = ci;
      g.tau.assign(tau.begin(), tau.end());
      for (const auto& d : c.disjuncts) g.disjuncts.push_back(instantiate(d, tau));
      out.push_back(std::move(g));
      return true;
    });
  }
  return out;
}

namespace {

using Code = std::uint32_t;  // atom * 2 + (negative ? 1 : 0)

constexpr std::uint64_t kMaxAtoms = std::uint64_t{1} << 28;

// Dense numbering of every ground atom over the KB vocabulary.
class Encoding {
 public:
  explicit Encoding(const KnowledgeBase& kb)
      : k_(kb.individual_count()),
        n1_(kb.symbols.concepts.size()),
        n3_(kb.symbols.roles.size()) {
    std::uint64_t kk = sat_mul(k_, k_);
    atoms_ = sat_add(sat_add(kk, sat_mul(n1_, k_)), sat_mul(n3_, kk));
    if (atoms_ > kMaxAtoms) {
      throw ResourceLimitError("ground atom space of " + std::to_string(atoms_) +
                                   " atoms exceeds the engine limit",
                               SaturationStats{});
    }
  }

  std::uint64_t atoms() const { return atoms_; }
  std::uint64_t k() const { return k_; }

  // Constant part and per-slot multipliers of a literal's atom number.
  std::uint64_t base(const Literal& l) const {
    switch (l.kind) {
      case AtomKind::Eq: return 0;
      case AtomKind::Member1: return k_ * k_ + l.set * k_;
      case AtomKind::Member3: return k_ * k_ + n1_ * k_ + l.set * k_ * k_;
    }
    return 0;
  }
  std::uint64_t first_mul(const Literal& l) const { return l.kind == AtomKind::Member1 ? 1 : k_; }
  static std::uint64_t second_mul() { return 1; }

  Code code(const Literal& l) const {
    std::uint64_t atom = base(l) + l.first.id * first_mul(l);
    if (l.kind != AtomKind::Member1) atom += l.second.id;
    return static_cast<Code>(atom * 2 + (l.positive ? 0 : 1));
  }

  Literal decode(Code c) const {
    const std::uint64_t atom = c >> 1;
    const bool positive = (c & 1) == 0;
    const std::uint64_t kk = k_ * k_;
    if (atom < kk) {
      return Literal::eq(Term::free(static_cast<SymbolId>(atom / k_)),
                         Term::free(static_cast<SymbolId>(atom % k_)), positive);
    }
    if (atom < kk + n1_ * k_) {
      const std::uint64_t r = atom - kk;
      return Literal::member1(Term::free(static_cast<SymbolId>(r % k_)),
                              static_cast<SymbolId>(r / k_), positive);
    }
    const std::uint64_t r = atom - kk - n1_ * k_;
    const std::uint64_t rem = r % kk;
    return Literal::member3(Term::free(static_cast<SymbolId>(rem / k_)),
                            Term::free(static_cast<SymbolId>(rem % k_)),
                            static_cast<SymbolId>(r / kk), positive);
  }

  bool is_negated_reflexive_eq(Code c) const {
    const std::uint64_t atom = c >> 1;
    return (c & 1) && atom < k_ * k_ && atom / k_ == atom % k_;
  }

  // Positive x = y with x != y: writes both sides.
  bool proper_equality(Code c, std::size_t& a, std::size_t& b) const {
    const std::uint64_t atom = c >> 1;
    if ((c & 1) || atom >= k_ * k_) return false;
    a = atom / k_;
    b = atom % k_;
    return a != b;
  }

  Code remap(Code c, const std::vector<SymbolId>& rep) const {
    Literal l = decode(c);
    l.first.id = rep[l.first.id];
    if (l.kind != AtomKind::Member1) l.second.id = rep[l.second.id];
    return code(l);
  }

 private:
  std::uint64_t k_;
  std::uint64_t n1_;
  std::uint64_t n3_;
  std::uint64_t atoms_ = 0;
};

struct Slot {
  int index = -1;  // position in tau, -1 when unused
  std::uint64_t mul = 0;
};

struct CompiledDisjunct {
  std::uint64_t base = 0;  // already doubled, polarity bit included
  Slot s1;
  Slot s2;
};

struct CompiledClause {
  std::size_t arity = 0;
  std::uint64_t instances = 0;
  std::vector<CompiledDisjunct> disjuncts;
};

std::vector<CompiledClause> compile(const KnowledgeBase& kb, const Encoding& enc) {
  std::vector<CompiledClause> out;
  for (const auto& c : kb.clauses) {
    CompiledClause cc;
    cc.arity = c.arity();
    cc.instances = sat_pow(enc.k(), c.arity());
    for (const auto& d : c.disjuncts) {
      CompiledDisjunct cd;
      std::uint64_t atom = enc.base(d);
      auto slot = [&](const Term& t, std::uint64_t mul, Slot& s) {
        if (t.bound) {
          s.index = static_cast<int>(t.id);
          s.mul = 2 * mul;
        } else {
          atom += t.id * mul;
        }
      };
      slot(d.first, enc.first_mul(d), cd.s1);
      if (d.kind != AtomKind::Member1) slot(d.second, Encoding::second_mul(), cd.s2);
      cd.base = atom * 2 + (d.positive ? 0 : 1);
      cc.disjuncts.push_back(cd);
    }
    out.push_back(std::move(cc));
  }
  return out;
}

// Everything a branch owns. Copied by value when PB splits.
struct Frame {
  std::vector<Code> lits;
  std::vector<Code> store;     // branch-resident clause instances (KE, FO KE)
  std::uint32_t clause = 0;
  std::uint64_t tau = 0;       // linear tau index (KE: ground clause index)
  std::uint64_t stored = 0;    // FO KE: instance records on the branch
  bool instance_ready = false; // FO KE: gamma already applied at the cursor
};

struct Shared {
  const KnowledgeBase* kb = nullptr;
  Encoding enc;
  std::vector<CompiledClause> clauses;
  std::vector<std::size_t> ground_offsets;  // KE only
  std::uint64_t height_bound = 0;
  EngineOptions opts;
  std::chrono::steady_clock::time_point start;
  std::atomic<std::uint64_t> leaves{0};
  std::atomic<bool> stop{false};
};

// Tau digits for the frame cursor, kept as an odometer so that stepping
// through a clause costs no divisions.
class TauCursor {
 public:
  const std::vector<SymbolId>& at(const Frame& f, const CompiledClause& cc, std::uint64_t k) {
    if (f.clause != clause_ || f.tau != tau_ || !valid_) {
      digits_.assign(cc.arity, 0);
      std::uint64_t t = f.tau;
      for (std::size_t j = cc.arity; j-- > 0;) {
        digits_[j] = static_cast<SymbolId>(t % k);
        t /= k;
      }
      clause_ = f.clause;
      tau_ = f.tau;
      valid_ = true;
    }
    return digits_;
  }

  // Called after the frame cursor moved from (clause, tau) to tau + 1.
  void step(const Frame& f, std::uint64_t k) {
    if (!valid_ || f.clause != clause_ || f.tau != tau_ + 1) {
      valid_ = false;
      return;
    }
    for (std::size_t j = digits_.size(); j-- > 0;) {
      if (++digits_[j] < k) break;
      digits_[j] = 0;
    }
    tau_ = f.tau;
  }

 private:
  std::uint32_t clause_ = 0;
  std::uint64_t tau_ = 0;
  bool valid_ = false;
  std::vector<SymbolId> digits_;
};

std::span<const Code> instance_codes(const CompiledClause& cc, const std::vector<SymbolId>& digits,
                                     std::vector<Code>& out) {
  const std::size_t n = cc.disjuncts.size();
  if (out.size() < n) out.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& d = cc.disjuncts[i];
    std::uint64_t c = d.base;
    if (d.s1.index >= 0) c += d.s1.mul * digits[d.s1.index];
    if (d.s2.index >= 0) c += d.s2.mul * digits[d.s2.index];
    out[i] = static_cast<Code>(c);
  }
  return std::span<const Code>(out.data(), n);
}

// Clause cursor over (clause, tau) pairs, skipping clauses with no instances.
void settle(Frame& f, const std::vector<CompiledClause>& clauses) {
  while (f.clause < clauses.size() && f.tau >= clauses[f.clause].instances) {
    ++f.clause;
    f.tau = 0;
  }
}

// KE-gamma: instances are computed from the clause and tau on demand and
// never stored.
class KeGammaPolicy {
 public:
  explicit KeGammaPolicy(const Shared& s) : s_(s) {}

  void init_root(Frame& f) { settle(f, s_.clauses); }
  bool done(const Frame& f) const { return f.clause >= s_.clauses.size(); }
  std::span<const Code> current(Frame& f, SaturationStats&) {
    const auto& cc = s_.clauses[f.clause];
    return instance_codes(cc, cursor_.at(f, cc, s_.enc.k()), buf_);
  }
  void advance(Frame& f) {
    ++f.tau;
    settle(f, s_.clauses);
    cursor_.step(f, s_.enc.k());
  }
  std::uint64_t resident(const Frame& f) const { return s_.clauses.size() + f.lits.size(); }
  void rewrite_store(Frame&, const std::vector<SymbolId>&) {}

 private:
  const Shared& s_;
  TauCursor cursor_;
  std::vector<Code> buf_;
};

// KE: the fully grounded clause set sits on every branch.
class KePolicy {
 public:
  explicit KePolicy(const Shared& s) : s_(s) {}

  void init_root(Frame& f) {
    auto ground = ground_expand(*s_.kb);
    f.store.clear();
    for (const auto& g : ground) {
      for (const auto& l : g.disjuncts) f.store.push_back(s_.enc.code(l));
    }
  }
  bool done(const Frame& f) const { return f.tau + 1 >= s_.ground_offsets.size(); }
  std::span<const Code> current(Frame& f, SaturationStats&) {
    const auto b = s_.ground_offsets[f.tau];
    const auto e = s_.ground_offsets[f.tau + 1];
    return std::span<const Code>(f.store.data() + b, e - b);
  }
  void advance(Frame& f) { ++f.tau; }
  std::uint64_t resident(const Frame& f) const {
    return s_.ground_offsets.size() - 1 + f.lits.size();
  }
  void rewrite_store(Frame& f, const std::vector<SymbolId>& rep) {
    for (auto& c : f.store) c = s_.enc.remap(c, rep);
  }

 private:
  const Shared& s_;
};

// FO KE: the gamma rule places each instance on the branch as a stored
// disjunction before E or PB may use it.
class FoKePolicy {
 public:
  explicit FoKePolicy(const Shared& s) : s_(s) {}

  void init_root(Frame& f) { settle(f, s_.clauses); }
  bool done(const Frame& f) const { return f.clause >= s_.clauses.size(); }
  std::span<const Code> current(Frame& f, SaturationStats& stats) {
    const auto& cc = s_.clauses[f.clause];
    const std::size_t n = cc.disjuncts.size();
    if (!f.instance_ready) {
      auto codes = instance_codes(cc, cursor_.at(f, cc, s_.enc.k()), buf_);
      f.store.push_back(static_cast<Code>(n));
      f.store.insert(f.store.end(), codes.begin(), codes.end());
      ++f.stored;
      ++stats.gamma_apps;
      f.instance_ready = true;
    }
    return std::span<const Code>(f.store.data() + f.store.size() - n, n);
  }
  void advance(Frame& f) {
    ++f.tau;
    f.instance_ready = false;
    settle(f, s_.clauses);
    cursor_.step(f, s_.enc.k());
  }
  std::uint64_t resident(const Frame& f) const {
    return s_.clauses.size() + f.stored + f.lits.size();
  }
  void rewrite_store(Frame& f, const std::vector<SymbolId>& rep) {
    std::size_t i = 0;
    while (i < f.store.size()) {
      const std::size_t n = f.store[i++];
      for (std::size_t j = 0; j < n; ++j, ++i) f.store[i] = s_.enc.remap(f.store[i], rep);
    }
  }

 private:
  const Shared& s_;
  TauCursor cursor_;
  std::vector<Code> buf_;
};

struct Outcome {
  std::vector<CompleteBranch> open;
  std::uint64_t open_count = 0;
  std::uint64_t closed_count = 0;
  SaturationStats stats;
};

void merge_stats(SaturationStats& into, const SaturationStats& from) {
  into.rule_apps += from.rule_apps;
  into.pb_apps += from.pb_apps;
  into.gamma_apps += from.gamma_apps;
  into.peak_stack = std::max(into.peak_stack, from.peak_stack);
  into.peak_resident_formulae = std::max(into.peak_resident_formulae, from.peak_resident_formulae);
  into.max_branch_literals = std::max(into.max_branch_literals, from.max_branch_literals);
  into.open_branches += from.open_branches;
  into.closed_branches += from.closed_branches;
}

class LimitHit : public std::exception {};

template <typename Policy>
class Driver {
 public:
  explicit Driver(Shared& s) : s_(s), policy_(s), marks_(s.enc.atoms(), 0) {}

  // Root frame from the KB literals. Returns false if the root closes.
  bool make_root(Frame& root) {
    load(root);
    for (const auto& l : s_.kb->literals) {
      if (!add(root, s_.enc.code(l))) {
        unload(root);
        leaf_closed(root);
        return false;
      }
    }
    policy_.init_root(root);
    unload(root);
    return true;
  }

  // Depth-first exploration of `start`'s subtree. With split > 0, stops
  // once the frontier holds `split` frames and hands back the unexplored
  // work in exploration order.
  std::vector<Frame> explore(Frame start, std::size_t split = 0) {
    Frame cur = std::move(start);
    load(cur);
    while (true) {
      if (run(cur, split)) {
        std::vector<Frame> work;
        work.push_back(std::move(cur));
        for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) work.push_back(std::move(*it));
        stack_.clear();
        return work;
      }
      if (stack_.empty()) return {};
      recycle(std::move(cur));
      cur = std::move(stack_.back());
      stack_.pop_back();
      load(cur);
    }
  }

  Outcome& outcome() { return out_; }

 private:
  bool has(Code c) const { return marks_[c >> 1] == ((c & 1) ? 2 : 1); }

  void load(const Frame& f) {
    for (Code c : f.lits) marks_[c >> 1] = (c & 1) ? 2 : 1;
  }
  void unload(const Frame& f) {
    for (Code c : f.lits) marks_[c >> 1] = 0;
  }

  // Adds a literal; false when the branch closes.
  bool add(Frame& f, Code c) {
    if (has(c)) return true;
    if (has(c ^ 1) || s_.enc.is_negated_reflexive_eq(c)) return false;
    marks_[c >> 1] = (c & 1) ? 2 : 1;
    f.lits.push_back(c);
    if (f.lits.size() > s_.height_bound && s_.opts.strict_height_bound) {
      throw Error("branch of " + std::to_string(f.lits.size()) +
                  " literals exceeds the height bound " + std::to_string(s_.height_bound));
    }
    return true;
  }

  void check_limits() {
    const std::uint64_t leaves = ++s_.leaves;
    if (s_.opts.max_branches != 0 && leaves > s_.opts.max_branches) throw LimitHit();
    if (s_.stop.load(std::memory_order_relaxed)) throw LimitHit();
  }

  void check_time() {
    if (s_.opts.max_seconds <= 0) return;
    std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - s_.start;
    if (elapsed.count() > s_.opts.max_seconds) throw LimitHit();
  }

  void track(const Frame& f, std::size_t extra = 0) {
    out_.stats.max_branch_literals =
        std::max<std::uint64_t>(out_.stats.max_branch_literals, f.lits.size() + extra);
    out_.stats.peak_resident_formulae =
        std::max<std::uint64_t>(out_.stats.peak_resident_formulae, policy_.resident(f) + extra);
  }

  void leaf_closed(const Frame& f, std::size_t extra = 0) {
    track(f, extra);
    ++out_.closed_count;
    ++out_.stats.closed_branches;
    check_limits();
  }

  // Finished frames keep their buffers for reuse by later splits.
  void recycle(Frame&& f) {
    f.lits.clear();
    f.store.clear();
    pool_.push_back(std::move(f));
  }

  Frame split_child(const Frame& cur, Code alt) {
    Frame child;
    if (!pool_.empty()) {
      child = std::move(pool_.back());
      pool_.pop_back();
    }
    child.lits.reserve(cur.lits.size() + 1);
    child.lits.assign(cur.lits.begin(), cur.lits.end());
    child.lits.push_back(alt);
    child.store.assign(cur.store.begin(), cur.store.end());
    child.clause = cur.clause;
    child.tau = cur.tau;
    child.stored = cur.stored;
    child.instance_ready = cur.instance_ready;
    return child;
  }

  // Processes `cur` (already loaded) until it closes, completes, or the
  // split threshold is reached (returns true in that last case).
  bool run(Frame& cur, std::size_t split) {
    while (!policy_.done(cur)) {
      if ((++iterations_ & 1023) == 0) check_time();
      auto inst = policy_.current(cur, out_.stats);
      std::size_t missing = 0;
      std::size_t first_missing = 0;
      bool satisfied = false;
      for (std::size_t i = 0; i < inst.size(); ++i) {
        if (has(inst[i])) {
          satisfied = true;
          break;
        }
        if (!has(inst[i] ^ 1) && missing++ == 0) first_missing = i;
      }
      if (satisfied) {
        policy_.advance(cur);
        continue;
      }
      if (missing <= 1) {
        ++out_.stats.rule_apps;
        if (!add(cur, inst[first_missing])) {
          unload(cur);
          leaf_closed(cur, 1);
          return false;
        }
        policy_.advance(cur);
        continue;
      }
      ++out_.stats.pb_apps;
      const Code beta = inst[first_missing];
      const Code alt = beta ^ 1;
      if (s_.enc.is_negated_reflexive_eq(alt)) {
        leaf_closed(cur, 1);
      } else {
        stack_.push_back(split_child(cur, alt));
        out_.stats.peak_stack = std::max<std::uint64_t>(out_.stats.peak_stack, stack_.size());
      }
      if (!add(cur, beta)) {
        unload(cur);
        leaf_closed(cur, 1);
        return false;
      }
      policy_.advance(cur);
      if (split != 0 && stack_.size() >= split) {
        unload(cur);
        return true;
      }
    }
    unload(cur);
    finish(cur);
    return false;
  }

  // Equality phase on an open fulfilled branch.
  void finish(Frame& cur) {
    track(cur);
    const std::size_t k = s_.enc.k();
    MinUnion u(k);
    bool merged = false;
    for (Code c : cur.lits) {
      std::size_t a, b;
      if (s_.enc.proper_equality(c, a, b)) {
        u.unite(a, b);
        merged = true;
      }
    }
    std::vector<Code> lits;
    std::vector<SymbolId> rep;
    if (merged) {
      rep.resize(k);
      for (std::size_t i = 0; i < k; ++i) rep[i] = static_cast<SymbolId>(u.find(i));
      lits.reserve(cur.lits.size());
      for (Code c : cur.lits) lits.push_back(s_.enc.remap(c, rep));
      std::vector<Code> sorted = lits;
      std::sort(sorted.begin(), sorted.end());
      sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
      for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (s_.enc.is_negated_reflexive_eq(sorted[i]) ||
            (i + 1 < sorted.size() && (sorted[i] ^ 1) == sorted[i + 1])) {
          leaf_closed_after_merge();
          return;
        }
      }
      policy_.rewrite_store(cur, rep);
    }
    ++out_.open_count;
    ++out_.stats.open_branches;
    if (s_.opts.collect_models) {
      CompleteBranch cb;
      for (Code c : merged ? lits : cur.lits) cb.branch.add(s_.enc.decode(c));
      for (std::size_t i = 0; i < rep.size(); ++i) {
        cb.sigma.bind(Sort::Individual, static_cast<SymbolId>(i), rep[i]);
      }
      out_.open.push_back(std::move(cb));
    }
    check_limits();
  }

  void leaf_closed_after_merge() {
    ++out_.closed_count;
    ++out_.stats.closed_branches;
    check_limits();
  }

  Shared& s_;
  Policy policy_;
  std::vector<std::uint8_t> marks_;
  std::vector<Frame> stack_;
  std::vector<Frame> pool_;
  std::uint64_t iterations_ = 0;
  Outcome out_;
};

template <typename Policy>
SaturationResult run_engine(const KnowledgeBase& kb, const EngineOptions& opts) {
  Shared shared{&kb, Encoding(kb), {}, {}, branch_height_bound(kb), opts,
                std::chrono::steady_clock::now()};
  shared.clauses = compile(kb, shared.enc);
  if constexpr (std::is_same_v<Policy, KePolicy>) {
    shared.ground_offsets.push_back(0);
    for (const auto& cc : shared.clauses) {
      for (std::uint64_t t = 0; t < cc.instances; ++t) {
        shared.ground_offsets.push_back(shared.ground_offsets.back() + cc.disjuncts.size());
      }
    }
  }

  SaturationResult result;
  result.stats.height_bound = shared.height_bound;
  auto elapsed_ms = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                     shared.start)
        .count();
  };

  Driver<Policy> main(shared);
  Outcome total;
  try {
    Frame root;
    if (main.make_root(root)) {
      const unsigned workers = std::max(1u, opts.workers);
      auto work = main.explore(std::move(root), workers > 1 ? 4 * workers : 0);
      total = std::move(main.outcome());
      if (!work.empty()) {
        std::vector<Outcome> parts(work.size());
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mu;
        auto worker = [&] {
          try {
            while (true) {
              const std::size_t i = next++;
              if (i >= work.size()) return;
              Driver<Policy> d(shared);
              d.explore(std::move(work[i]));
              parts[i] = std::move(d.outcome());
            }
          } catch (...) {
            shared.stop = true;
            std::lock_guard lock(failure_mu);
            if (!failure) failure = std::current_exception();
          }
        };
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
        for (auto& p : parts) {
          total.open_count += p.open_count;
          total.closed_count += p.closed_count;
          merge_stats(total.stats, p.stats);
          for (auto& b : p.open) total.open.push_back(std::move(b));
        }
      }
    } else {
      total = std::move(main.outcome());
    }
  } catch (const LimitHit&) {
    SaturationStats partial = main.outcome().stats;
    partial.height_bound = shared.height_bound;
    partial.wall_ms = elapsed_ms();
    throw ResourceLimitError("resource limit reached after " +
                                 std::to_string(shared.leaves.load()) + " branches",
                             partial);
  }

  const std::uint64_t bound = result.stats.height_bound;
  result.stats = total.stats;
  result.stats.height_bound = bound;
  result.stats.wall_ms = elapsed_ms();
  result.open_complete = std::move(total.open);
  result.open_count = total.open_count;
  result.closed_count = total.closed_count;
  result.consistent = total.open_count > 0;
  return result;
}

}  // namespace

SaturationResult saturate(const KnowledgeBase& kb, const EngineOptions& opts) {
  return run_engine<KeGammaPolicy>(kb, opts);
}

SaturationResult saturate_ke(const KnowledgeBase& kb, const EngineOptions& opts) {
  return run_engine<KePolicy>(kb, opts);
}

SaturationResult saturate_foke(const KnowledgeBase& kb, const EngineOptions& opts) {
  return run_engine<FoKePolicy>(kb, opts);
}

SaturationResult saturate(const KnowledgeBase& kb, EngineKind kind, const EngineOptions& opts) {
  switch (kind) {
    case EngineKind::KeGamma: return saturate(kb, opts);
    case EngineKind::Ke: return saturate_ke(kb, opts);
    case EngineKind::FoKe: return saturate_foke(kb, opts);
  }
  throw ConfigError("unknown engine");
}

}  // namespace lqs
