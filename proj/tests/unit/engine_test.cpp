#include <gtest/gtest.h>

#include <random>

#include "lqs/engine.hpp"
#include "lqs/error.hpp"
#include "lqs/oracle.hpp"
#include "lqs/syntax.hpp"
#include "support.hpp"

using namespace lqs;

namespace {

Term f(SymbolId id) { return Term::free(id); }
Term q(SymbolId id) { return Term::quantified(id); }

const SymbolId kItaly = 0;
const SymbolId kRome = 1;
const SymbolId kLocatedIn = 0;
const SymbolId kIsPartOf = 1;

KnowledgeBase italy() { return parse_kb(fixtures::read_data("italy.4lqs")); }

bool has(const Branch& b, const Literal& l) { return b.contains(l); }

}  // namespace

TEST(Saturate, ImmediateContradiction) {
  const auto kb = parse_kb(fixtures::read_data("contradiction.4lqs"));
  const auto res = saturate(kb);
  EXPECT_FALSE(res.consistent);
  EXPECT_EQ(res.open_count, 0u);
  EXPECT_EQ(res.closed_count, 1u);
  EXPECT_TRUE(res.open_complete.empty());
}

TEST(Saturate, ItalyHasTwoOpenBranches) {
  const auto res = saturate(italy());
  ASSERT_TRUE(res.consistent);
  ASSERT_EQ(res.open_count, 2u);
  ASSERT_EQ(res.open_complete.size(), 2u);
  const auto loc = [](SymbolId a, SymbolId b, bool pos = true) {
    return Literal::member3(f(a), f(b), kLocatedIn, pos);
  };
  const auto ipo = [](SymbolId a, SymbolId b) { return Literal::member3(f(a), f(b), kIsPartOf); };
  int with_loc = 0;
  int without_loc = 0;
  for (const auto& cb : res.open_complete) {
    const auto& b = cb.branch;
    EXPECT_TRUE(cb.sigma.empty());
    EXPECT_TRUE(has(b, ipo(kItaly, kItaly)));
    EXPECT_TRUE(has(b, ipo(kRome, kRome)));
    EXPECT_TRUE(has(b, loc(kItaly, kRome, false)));
    if (has(b, loc(kRome, kItaly))) {
      EXPECT_TRUE(has(b, ipo(kRome, kItaly)));
      ++with_loc;
    }
    if (has(b, loc(kRome, kItaly, false))) ++without_loc;
  }
  EXPECT_EQ(with_loc, 1);
  EXPECT_EQ(without_loc, 1);
}

TEST(Saturate, EqualityPhaseExposesContradiction) {
  const auto kb = parse_kb("lit (eq x y)\nlit (in x A)\nlit (not (in y A))\n");
  EXPECT_FALSE(saturate(kb).consistent);
  EXPECT_FALSE(oracle_satisfiable(kb));
}

TEST(Saturate, SyntacticClosureOnlyAsymmetricEquality) {
  const auto kb = parse_kb("lit (eq x y)\nlit (not (eq y x))\n");
  Branch b(kb.literals);
  EXPECT_FALSE(is_closed(b));
  EXPECT_FALSE(saturate(kb).consistent);
  EXPECT_FALSE(oracle_satisfiable(kb));
}

TEST(Saturate, ReturnedBranchesAreNormalised) {
  const auto kb = parse_kb(
      "ind a b c\nlit (eq c b)\nlit (in b A)\n"
      "clause (forall z1 z2) (or (not (in z1 A)) (eq z1 z2) (rel z1 z2 R))\n");
  const auto res = saturate(kb);
  ASSERT_TRUE(res.consistent);
  for (const auto& cb : res.open_complete) {
    for (const auto& l : cb.branch.literals()) {
      if (l.kind == AtomKind::Eq && l.positive) {
        EXPECT_EQ(l.first, l.second);
      }
    }
    EXPECT_EQ(cb.sigma.image(Sort::Individual, 2), cb.sigma.image(Sort::Individual, 1));
  }
}

TEST(Egamma, ItalyLeftBranchStep) {
  const auto kb = italy();
  Branch b(kb.literals);
  b.add(Literal::member3(f(kRome), f(kItaly), kLocatedIn));
  const Instantiation inst{&kb.clauses[1], {kRome, kItaly}};
  EXPECT_EQ(egamma(inst, b), Literal::member3(f(kRome), f(kItaly), kIsPartOf));
}

TEST(Egamma, UnaryClauseNeedsNoComplements) {
  const auto kb = italy();
  const Instantiation inst{&kb.clauses[0], {kRome}};
  EXPECT_EQ(egamma(inst, Branch{}), Literal::member3(f(kRome), f(kRome), kIsPartOf));
}

TEST(Egamma, GuardRejectsTooFewComplements) {
  UniversalClause c{{"z1"},
                    {Literal::member1(q(0), 0), Literal::member1(q(0), 1), Literal::member1(q(0), 2)}};
  Branch b;
  b.add(Literal::member1(f(0), 0, false));
  EXPECT_THROW(egamma(Instantiation{&c, {0}}, b), PreconditionError);
  EXPECT_THROW(egamma(Instantiation{&c, {}}, b), PreconditionError);
}

TEST(SelectPb, LowestMissingComplement) {
  UniversalClause c{{"z1"}, {Literal::member1(q(0), 0), Literal::member1(q(0), 1)}};
  Branch b;
  b.add(Literal::member1(f(0), 5));
  EXPECT_EQ(select_pb_literal(Instantiation{&c, {0}}, b), Literal::member1(f(0), 0, false));
  UniversalClause c3{{"z1"},
                     {Literal::member1(q(0), 0), Literal::member1(q(0), 1), Literal::member1(q(0), 2)}};
  b.add(Literal::member1(f(0), 0, false));
  EXPECT_EQ(select_pb_literal(Instantiation{&c3, {0}}, b), Literal::member1(f(0), 1, false));
}

TEST(SelectPb, RejectsWhenEliminationApplies) {
  UniversalClause c{{"z1"}, {Literal::member1(q(0), 0), Literal::member1(q(0), 1)}};
  Branch b;
  b.add(Literal::member1(f(0), 0, false));
  EXPECT_THROW(select_pb_literal(Instantiation{&c, {0}}, b), PreconditionError);
  Branch fulfilled;
  fulfilled.add(Literal::member1(f(0), 1));
  EXPECT_THROW(select_pb_literal(Instantiation{&c, {0}}, fulfilled), PreconditionError);
}

TEST(SelectPb, BenchmarkClauseSplitsThenEliminates) {
  const auto kb = parse_kb(gen_family(BenchConfig{}));
  const Instantiation inst{&kb.clauses[0], {0, 1}};
  Branch b(kb.literals);
  for (std::size_t i = 0; i + 1 < kb.clauses[0].disjuncts.size(); ++i) {
    const Literal pb = select_pb_literal(inst, b);
    EXPECT_EQ(pb, complement(instantiate(kb.clauses[0].disjuncts[i], inst.tau)));
    b.add(pb);
  }
  EXPECT_THROW(select_pb_literal(inst, b), PreconditionError);
  EXPECT_EQ(egamma(inst, b), instantiate(kb.clauses[0].disjuncts.back(), inst.tau));
}

TEST(EqualityNormalize, NoEqualitiesGivesIdentity) {
  Branch b;
  b.add(Literal::member1(f(1), 0));
  b.add(Literal::eq(f(0), f(0)));
  EXPECT_TRUE(equality_normalize(b).empty());
}

TEST(EqualityNormalize, MapsToLeastIndividual) {
  Branch b;
  b.add(Literal::eq(f(1), f(0)));
  const auto s = equality_normalize(b);
  EXPECT_EQ(s.image(Sort::Individual, 1), 0u);
  EXPECT_EQ(s.size(), 1u);
}

TEST(EqualityNormalize, ChainsCollapse) {
  Branch b;
  const Literal l1 = Literal::eq(f(1), f(2));
  const Literal l2 = Literal::eq(f(2), f(0));
  b.add(l1);
  b.add(l2);
  const auto s = equality_normalize(b);
  EXPECT_EQ(s.image(Sort::Individual, 1), 0u);
  EXPECT_EQ(s.image(Sort::Individual, 2), 0u);
  for (const auto& l : {l1, l2}) {
    const auto m = apply(l, s);
    EXPECT_EQ(m.first, m.second);
  }
}

TEST(IsFulfilled, ReflexivityClause) {
  const auto kb = italy();
  Branch b;
  b.add(Literal::member3(f(kItaly), f(kItaly), kIsPartOf));
  EXPECT_FALSE(is_fulfilled(kb.clauses[0], b, kb));
  b.add(Literal::member3(f(kRome), f(kRome), kIsPartOf));
  EXPECT_TRUE(is_fulfilled(kb.clauses[0], b, kb));
}

TEST(IsFulfilled, EmptyIndividualsIsVacuous) {
  KnowledgeBase kb;
  UniversalClause c{{"z1"}, {Literal::member1(q(0), 0)}};
  kb.symbols.concepts.intern("A");
  kb.add_clause(c);
  EXPECT_TRUE(is_fulfilled(kb.clauses[0], Branch{}, kb));
  EXPECT_TRUE(saturate(kb).consistent);
}

TEST(HeightBound, Formula) {
  const auto kb = italy();
  EXPECT_EQ(branch_height_bound(kb), 1u + 1 * 2 + 2 * 4);
}

TEST(HeightBound, HoldsOnRandomKbs) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto kb = fixtures::small_random_kb(seed);
    for (EngineKind e : {EngineKind::KeGamma, EngineKind::Ke, EngineKind::FoKe}) {
      const auto res = saturate(kb, e);
      EXPECT_LE(res.stats.max_branch_literals, res.stats.height_bound);
      EXPECT_EQ(res.stats.height_bound, branch_height_bound(kb));
    }
  }
}

TEST(Soundness, ExtractedModelsSatisfyTheirBranches) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto kb = fixtures::small_random_kb(seed);
    const auto res = saturate(kb);
    for (const auto& cb : res.open_complete) {
      const auto m = extract_model(cb.branch, cb.sigma, kb);
      for (const auto& l : cb.branch.literals()) EXPECT_TRUE(model_check(m, l));
      EXPECT_TRUE(model_check(m, kb)) << render(kb);
    }
  }
}

TEST(Soundness, EgammaConclusionHoldsInEveryModelOfItsPremises) {
  std::mt19937_64 rng(21);
  int applications = 0;
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    const auto kb = fixtures::small_random_kb(seed);
    const std::size_t k = kb.individual_count();
    for (const auto& clause : kb.clauses) {
      Instantiation inst{&clause, {}};
      for (std::size_t i = 0; i < clause.arity(); ++i) {
        inst.tau.push_back(static_cast<SymbolId>(rng() % k));
      }
      const std::size_t keep = rng() % clause.disjuncts.size();
      Branch b(kb.literals);
      for (std::size_t i = 0; i < clause.disjuncts.size(); ++i) {
        if (i != keep) b.add(complement(instantiate(clause.disjuncts[i], inst.tau)));
      }
      Literal derived;
      try {
        derived = egamma(inst, b);
      } catch (const PreconditionError&) {
        continue;
      }
      KnowledgeBase premises;
      premises.symbols = kb.symbols;
      for (const auto& l : b.literals()) premises.add_literal(l);
      premises.add_clause(clause);
      // No model of the premises may falsify the conclusion.
      premises.add_literal(complement(derived));
      EXPECT_FALSE(oracle_satisfiable(premises)) << render(premises);
      ++applications;
    }
  }
  EXPECT_GT(applications, 20);
}

TEST(Determinism, RepeatedRunsAgree) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto kb = fixtures::small_random_kb(seed);
    const auto a = saturate(kb);
    const auto b = saturate(kb);
    ASSERT_EQ(a.open_complete.size(), b.open_complete.size());
    for (std::size_t i = 0; i < a.open_complete.size(); ++i) {
      EXPECT_EQ(a.open_complete[i].branch, b.open_complete[i].branch);
      EXPECT_EQ(a.open_complete[i].sigma, b.open_complete[i].sigma);
    }
    EXPECT_EQ(a.stats.rule_apps, b.stats.rule_apps);
    EXPECT_EQ(a.stats.pb_apps, b.stats.pb_apps);
  }
}

TEST(Parallel, MatchesSequentialExploration) {
  BenchConfig cfg;
  cfg.individuals = 3;
  const auto kb = parse_kb(gen_family(cfg));
  EngineOptions par;
  par.workers = 4;
  for (EngineKind e : {EngineKind::KeGamma, EngineKind::Ke, EngineKind::FoKe}) {
    const auto a = saturate(kb, e);
    const auto b = saturate(kb, e, par);
    EXPECT_EQ(a.open_count, b.open_count);
    EXPECT_EQ(a.closed_count, b.closed_count);
    ASSERT_EQ(a.open_complete.size(), b.open_complete.size());
    for (std::size_t i = 0; i < a.open_complete.size(); ++i) {
      ASSERT_EQ(a.open_complete[i].branch, b.open_complete[i].branch);
    }
  }
}

TEST(Limits, BranchCapThrowsWithPartialStats) {
  BenchConfig cfg;
  cfg.individuals = 3;
  const auto kb = parse_kb(gen_family(cfg));
  EngineOptions opts;
  opts.max_branches = 100;
  try {
    saturate(kb, opts);
    FAIL();
  } catch (const ResourceLimitError& e) {
    EXPECT_GE(e.partial().open_branches + e.partial().closed_branches, 100u);
    EXPECT_GT(e.partial().pb_apps, 0u);
  }
}

TEST(Limits, TimeCapThrows) {
  BenchConfig cfg;
  cfg.individuals = 4;
  const auto kb = parse_kb(gen_family(cfg));
  EngineOptions opts;
  opts.max_seconds = 0.01;
  opts.collect_models = false;
  EXPECT_THROW(saturate(kb, opts), ResourceLimitError);
}

TEST(Options, CollectModelsOffKeepsCounts) {
  const auto kb = italy();
  EngineOptions opts;
  opts.collect_models = false;
  const auto res = saturate(kb, opts);
  EXPECT_EQ(res.open_count, 2u);
  EXPECT_TRUE(res.open_complete.empty());
}

TEST(Engines, NamesRoundTrip) {
  for (EngineKind e : {EngineKind::KeGamma, EngineKind::Ke, EngineKind::FoKe}) {
    EXPECT_EQ(parse_engine(engine_name(e)), e);
  }
  EXPECT_THROW(parse_engine("tableau"), Error);
}
