#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "lqs/hocqa.hpp"
#include "lqs/syntax.hpp"
#include "support.hpp"

using namespace lqs;

namespace {

ParseErrorKind kind_of(std::string_view text, bool query = false) {
  try {
    if (query) {
      parse_query(text);
    } else {
      parse_kb(text);
    }
  } catch (const ParseError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no parse error for: " << text;
  return ParseErrorKind::Lex;
}

}  // namespace

TEST(ParseKb, ItalyExample) {
  const auto kb = parse_kb(fixtures::read_data("italy.4lqs"));
  ASSERT_EQ(kb.individual_count(), 2u);
  EXPECT_EQ(kb.symbols.individuals.name(0), "Italy");
  EXPECT_EQ(kb.symbols.individuals.name(1), "Rome");
  ASSERT_EQ(kb.literals.size(), 1u);
  EXPECT_EQ(kb.literals[0], Literal::member3(Term::free(0), Term::free(1), 0, false));
  ASSERT_EQ(kb.clauses.size(), 2u);
  EXPECT_EQ(kb.clauses[0].arity(), 1u);
  EXPECT_EQ(kb.clauses[1].arity(), 2u);
  EXPECT_EQ(kb.clauses[1].disjuncts[0],
            Literal::member3(Term::quantified(0), Term::quantified(1), 0, false));
}

TEST(ParseKb, IndividualOrderFollowsFirstAppearance) {
  const auto kb = parse_kb("ind c\nlit (rel b a R)\nlit (eq a c)\n");
  EXPECT_EQ(kb.symbols.individuals.names(), (std::vector<std::string>{"c", "b", "a"}));
}

TEST(ParseKb, CommentsAndBlankLines) {
  const auto kb = parse_kb("# header\n\n  lit (in a A)  # trailing\n");
  EXPECT_EQ(kb.literals.size(), 1u);
}

TEST(ParseKb, ErrorKinds) {
  EXPECT_EQ(kind_of("lit (in a A)\nlit (in A b)\n"), ParseErrorKind::Sort);
  EXPECT_EQ(kind_of("lit (in a A)\nlit (rel a a A)\n"), ParseErrorKind::Sort);
  EXPECT_EQ(kind_of("lit (in a)\n"), ParseErrorKind::Arity);
  EXPECT_EQ(kind_of("lit (rel a b)\n"), ParseErrorKind::Arity);
  EXPECT_EQ(kind_of("clause (forall z z) (or (in z A))\n"), ParseErrorKind::Duplicate);
  EXPECT_EQ(kind_of("lit (in z A)\nclause (forall z) (or (in z A))\n"), ParseErrorKind::Duplicate);
  EXPECT_EQ(kind_of("clause (forall z) (or (in a z))\n"), ParseErrorKind::Sort);
  EXPECT_EQ(kind_of("lit (in a A\n"), ParseErrorKind::Lex);
  EXPECT_EQ(kind_of("lit (in a A))\n"), ParseErrorKind::Lex);
  EXPECT_EQ(kind_of("lit (in ?x A)\n"), ParseErrorKind::Lex);
  EXPECT_EQ(kind_of("lit (in not A)\n"), ParseErrorKind::Lex);
  EXPECT_EQ(kind_of("lit (sub a A)\n"), ParseErrorKind::UnknownSymbol);
  EXPECT_EQ(kind_of("axiom (in a A)\n"), ParseErrorKind::UnknownSymbol);
}

TEST(ParseKb, ErrorSpanPointsAtOffendingLine) {
  try {
    parse_kb("lit (in a A)\n\nlit (in a)\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.span().line, 3);
    EXPECT_EQ(e.span().column, 5);
  }
}

TEST(ParseKb, DiagnosticsAreDeterministic) {
  std::string first;
  for (int i = 0; i < 3; ++i) {
    try {
      parse_kb("lit (in a A)\nlit (rel a a A)\n");
    } catch (const ParseError& e) {
      if (i == 0) first = e.what();
      EXPECT_EQ(first, e.what());
    }
  }
}

TEST(ParseQuery, VariablesAndConstants) {
  const auto kb = parse_kb(fixtures::read_data("italy.4lqs"));
  const auto q = parse_query("(rel Rome Italy ?r) (in ?x ?c)", kb.symbols);
  EXPECT_TRUE(q.symbols.extends(kb.symbols));
  ASSERT_EQ(q.conjuncts.size(), 2u);
  const auto vars = q.variables();
  ASSERT_EQ(vars.size(), 3u);
  const auto role = q.symbols.roles.find("?r");
  ASSERT_TRUE(role.has_value());
  EXPECT_TRUE(q.symbols.roles.is_query_variable(*role));
  EXPECT_FALSE(q.symbols.individuals.is_query_variable(*q.symbols.individuals.find("Rome")));
}

TEST(ParseQuery, EmptyQueryIsLambda) {
  const auto q = parse_query("");
  EXPECT_TRUE(q.empty());
  EXPECT_EQ(render(q), "");
}

TEST(ParseQuery, QueryVariableSortConflict) {
  EXPECT_EQ(kind_of("(in ?x A) (in a ?x)", true), ParseErrorKind::Sort);
}

TEST(Render, ItalyRoundTrip) {
  const auto kb = parse_kb(fixtures::read_data("italy.4lqs"));
  const std::string text = render(kb);
  EXPECT_EQ(text,
            "ind Italy Rome\n"
            "lit (not (rel Italy Rome locatedIn))\n"
            "clause (forall z1) (or (rel z1 z1 isPartOf))\n"
            "clause (forall z1 z2) (or (not (rel z1 z2 locatedIn)) (rel z1 z2 isPartOf))\n");
  EXPECT_TRUE(structurally_equal(parse_kb(text), kb));
}

TEST(Render, QueryRoundTrip) {
  const auto q = parse_query("(rel Rome Italy ?r) (not (eq ?x a))");
  EXPECT_EQ(render(q), "(rel Rome Italy ?r) (not (eq ?x a))");
}

TEST(Render, RoundTripOnGeneratedKbs) {
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    BenchConfig cfg;
    cfg.family = seed % 10 == 0 ? Family::ProductRule : Family::Random;
    cfg.individuals = 1 + static_cast<unsigned>(seed % 5);
    cfg.clauses = 1 + static_cast<unsigned>(seed % 4);
    cfg.quantifiers = 1 + static_cast<unsigned>(seed % 3);
    cfg.disjuncts = 1 + static_cast<unsigned>(seed % 6);
    cfg.seed = seed;
    const auto kb = parse_kb(gen_family(cfg));
    const std::string text = render(kb);
    const auto back = parse_kb(text);
    ASSERT_TRUE(structurally_equal(back, kb)) << text;
    ASSERT_EQ(render(back), text);
  }
}

TEST(RenderJson, AnswerSchema) {
  const auto kb = parse_kb(fixtures::read_data("italy.4lqs"));
  const auto q = parse_query("(rel Rome Italy ?r)", kb.symbols);
  AnswerSet answers;
  Substitution s;
  s.bind(Sort::Role, *q.symbols.roles.find("?r"), *q.symbols.roles.find("isPartOf"));
  s.bind(Sort::Individual, 1, 0);
  answers.answers.insert(s);
  const auto j = nlohmann::json::parse(render_json(answers, q.symbols));
  ASSERT_EQ(j["answers"].size(), 1u);
  EXPECT_EQ(j["answers"][0]["map3"]["?r"], "isPartOf");
  EXPECT_EQ(j["answers"][0]["merges"]["Rome"], "Italy");
  EXPECT_TRUE(j["answers"][0]["map1"].empty());
}

TEST(RenderJson, ModelSchema) {
  SymbolTable symbols;
  symbols.individuals.intern("a");
  symbols.individuals.intern("b");
  symbols.concepts.intern("C");
  symbols.roles.intern("R");
  Interpretation m;
  m.domain = {0, 1};
  m.assign0 = {0, 1};
  m.assign1 = {{1}};
  m.assign3 = {{{0, 1}}};
  const auto j = nlohmann::json::parse(render_json(m, symbols));
  EXPECT_EQ(j["domain"], nlohmann::json::parse(R"(["a","b"])"));
  EXPECT_EQ(j["sets1"]["C"], nlohmann::json::parse(R"(["b"])"));
  EXPECT_EQ(j["sets3"]["R"], nlohmann::json::parse(R"([["a","b"]])"));
}
