#include <gtest/gtest.h>

#include "lqs/engine.hpp"
#include "lqs/hocqa.hpp"
#include "lqs/oracle.hpp"
#include "lqs/syntax.hpp"
#include "support.hpp"

using namespace lqs;

namespace {

KnowledgeBase italy() { return parse_kb(fixtures::read_data("italy.4lqs")); }

// Italy=0, Rome=1; locatedIn=0, isPartOf=1.
Interpretation italy_model(std::set<std::pair<std::size_t, std::size_t>> loc,
                           std::set<std::pair<std::size_t, std::size_t>> ipo) {
  Interpretation m;
  m.domain = {0, 1};
  m.assign0 = {0, 1};
  m.assign3 = {std::move(loc), std::move(ipo)};
  return m;
}

const CompleteBranch& branch_with_loc(const SaturationResult& res, bool with) {
  const Literal loc = Literal::member3(Term::free(1), Term::free(0), 0);
  for (const auto& cb : res.open_complete) {
    if (cb.branch.contains(loc) == with) return cb;
  }
  throw std::logic_error("branch not found");
}

}  // namespace

TEST(ModelCheck, ReflexivityOnDiagonal) {
  const auto kb = italy();
  EXPECT_TRUE(model_check(italy_model({}, {{0, 0}, {1, 1}}), kb.clauses[0]));
  EXPECT_FALSE(model_check(italy_model({}, {{0, 0}}), kb.clauses[0]));
}

TEST(ModelCheck, InclusionWitness) {
  const auto kb = italy();
  EXPECT_FALSE(model_check(italy_model({{1, 0}}, {}), kb.clauses[1]));
  EXPECT_TRUE(model_check(italy_model({{1, 0}}, {{1, 0}}), kb.clauses[1]));
}

TEST(ModelCheck, UnassignedVariableThrows) {
  Interpretation m;
  m.domain = {0};
  m.assign0 = {0};
  EXPECT_THROW(model_check(m, Literal::member1(Term::free(3), 0)), PreconditionError);
  EXPECT_THROW(model_check(m, Literal::member1(Term::free(0), 0)), PreconditionError);
}

TEST(ExtractModel, ItalyBranches) {
  const auto kb = italy();
  const auto res = saturate(kb);
  const auto m1 = extract_model(branch_with_loc(res, true).branch, {}, kb);
  EXPECT_EQ(m1.domain, (std::vector<SymbolId>{0, 1}));
  EXPECT_EQ(m1.assign3[0], (std::set<std::pair<std::size_t, std::size_t>>{{1, 0}}));
  EXPECT_EQ(m1.assign3[1], (std::set<std::pair<std::size_t, std::size_t>>{{0, 0}, {1, 1}, {1, 0}}));
  EXPECT_TRUE(model_check(m1, kb));
  const auto m2 = extract_model(branch_with_loc(res, false).branch, {}, kb);
  EXPECT_TRUE(m2.assign3[0].empty());
  EXPECT_EQ(m2.assign3[1], (std::set<std::pair<std::size_t, std::size_t>>{{0, 0}, {1, 1}}));
  EXPECT_TRUE(model_check(m2, kb));
}

TEST(ExtractModel, MergeCollapsesDomain) {
  const auto kb = parse_kb("lit (eq a b)\nlit (in a A)\n");
  const auto res = saturate(kb);
  ASSERT_EQ(res.open_complete.size(), 1u);
  const auto& cb = res.open_complete[0];
  const auto m = extract_model(cb.branch, cb.sigma, kb);
  EXPECT_EQ(m.domain, (std::vector<SymbolId>{0}));
  EXPECT_EQ(m.assign1[0], (std::set<std::size_t>{0}));
  EXPECT_TRUE(model_check(m, kb));
}

TEST(ExtractModel, RejectsClosedAndUnfulfilledBranches) {
  const auto kb = italy();
  Branch closed;
  closed.add(Literal::eq(Term::free(0), Term::free(0), false));
  EXPECT_THROW(extract_model(closed, {}, kb), PreconditionError);
  EXPECT_THROW(extract_model(Branch(kb.literals), {}, kb), PreconditionError);
}

TEST(Enumerate, SingleMembership) {
  const auto kb = parse_kb("lit (in a A)\n");
  const auto models = all_models(kb);
  ASSERT_EQ(models.size(), 1u);
  EXPECT_EQ(models[0].assign1[0], (std::set<std::size_t>{0}));
}

TEST(Enumerate, NegatedReflexiveEqualityHasNoModels) {
  EXPECT_TRUE(all_models(parse_kb("lit (not (eq a a))\n")).empty());
}

TEST(Enumerate, ItalyModelsSatisfyEveryConjunct) {
  const auto kb = italy();
  const auto models = all_models(kb);
  // Independent count over the two-element domain: isPartOf holds the
  // diagonal, locatedIn lies inside isPartOf and misses (Italy, Rome).
  std::size_t count = 0;
  for (unsigned loc = 0; loc < 16; ++loc) {
    for (unsigned ipo = 0; ipo < 16; ++ipo) {
      auto pairs = [](unsigned mask) {
        std::set<std::pair<std::size_t, std::size_t>> out;
        for (unsigned b = 0; b < 4; ++b) {
          if (mask >> b & 1) out.insert({b / 2, b % 2});
        }
        return out;
      };
      const auto l = pairs(loc);
      const auto p = pairs(ipo);
      bool ok = !l.contains({0, 1}) && p.contains({0, 0}) && p.contains({1, 1});
      for (const auto& pr : l) ok = ok && p.contains(pr);
      count += ok;
    }
  }
  // Merged domain: locatedIn must miss (0,0), isPartOf must hold it.
  count += 1;
  EXPECT_EQ(models.size(), count);
  for (const auto& m : models) {
    for (const auto& l : kb.literals) EXPECT_TRUE(model_check(m, l));
    for (const auto& c : kb.clauses) EXPECT_TRUE(model_check(m, c));
  }
}

TEST(Enumerate, BoundsAreEnforced) {
  const auto kb = parse_kb("ind a b c d e\n");
  EXPECT_THROW(all_models(kb), BoundsExceededError);
  OracleBounds tight;
  tight.max_states = 1 << 3;
  EXPECT_THROW(oracle_satisfiable(parse_kb("lit (rel a b R)\n"), tight), BoundsExceededError);
}

TEST(Enumerate, EmptyKbHasTheEmptyModel) {
  EXPECT_EQ(all_models(KnowledgeBase{}).size(), 1u);
}

TEST(BruteAnswers, ItalyRoleInstanceQuery) {
  const auto kb = italy();
  const auto q = parse_query("(rel Rome Italy ?r)", kb.symbols);
  const auto a = brute_answers(kb, q);
  ASSERT_EQ(a.size(), 2u);
  for (const char* role : {"locatedIn", "isPartOf"}) {
    Substitution s;
    s.bind(Sort::Role, *q.symbols.roles.find("?r"), *q.symbols.roles.find(role));
    EXPECT_TRUE(a.contains(s)) << role;
  }
}

TEST(BruteAnswers, LambdaQuery) {
  const auto kb = italy();
  const auto a = brute_answers(kb, parse_query("", kb.symbols));
  EXPECT_EQ(a.answers, (std::set<Substitution>{Substitution{}}));
}

TEST(BruteAnswers, InconsistentKb) {
  const auto kb = parse_kb(fixtures::read_data("contradiction.4lqs"));
  EXPECT_EQ(brute_answers(kb, parse_query("(in a ?c)", kb.symbols)).size(), 0u);
}

TEST(Agreement, ConsistencyOnRandomKbs) {
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    const auto kb = fixtures::small_random_kb(seed);
    EXPECT_EQ(saturate(kb).consistent, oracle_satisfiable(kb)) << render(kb);
  }
}
