#include "lqs/dl.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "lqs/error.hpp"
#include "lqs/syntax.hpp"

namespace lqs {

namespace {

using Signed = std::pair<std::string, bool>;  // concept name, polarity
using Cnf = std::vector<std::vector<Signed>>;

// CNF of `c` (or of its negation) by negation normal form and distribution.
Cnf cnf(const ConceptExpr& c, bool positive) {
  using Op = ConceptExpr::Op;
  switch (c.op) {
    case Op::Name:
      return {{{c.name, positive}}};
    case Op::Top:
      return positive ? Cnf{} : Cnf{{}};
    case Op::Bottom:
      return positive ? Cnf{{}} : Cnf{};
    case Op::Not:
      if (c.args.size() != 1) throw UnsupportedAxiomError("'not' takes one concept");
      return cnf(c.args[0], !positive);
    case Op::And:
    case Op::Or: {
      const bool conjunctive = (c.op == Op::And) == positive;
      if (conjunctive) {
        Cnf out;
        for (const auto& a : c.args) {
          auto part = cnf(a, positive);
          out.insert(out.end(), part.begin(), part.end());
        }
        return out;
      }
      Cnf out{{}};
      for (const auto& a : c.args) {
        auto part = cnf(a, positive);
        Cnf next;
        for (const auto& left : out) {
          for (const auto& right : part) {
            auto merged = left;
            merged.insert(merged.end(), right.begin(), right.end());
            next.push_back(std::move(merged));
          }
        }
        out = std::move(next);
      }
      return out;
    }
  }
  return {};
}

class Namer {
 public:
  explicit Namer(SymbolTable& symbols) : symbols_(symbols) {}

  SymbolId get(const std::string& name, Sort sort) {
    if (name.empty() || name.front() == '?') {
      throw ParseError(ParseErrorKind::Lex, SourceSpan{}, "bad name '" + name + "'");
    }
    if (auto existing = symbols_.sort_of(name); existing && *existing != sort) {
      throw ParseError(ParseErrorKind::Sort, SourceSpan{},
                       "'" + name + "' used as " + std::string(sort_name(sort)) +
                           " but already a " + std::string(sort_name(*existing)));
    }
    return symbols_.space(sort).intern(name);
  }
  Term ind(const std::string& n) { return Term::free(get(n, Sort::Individual)); }
  SymbolId concept_id(const std::string& n) { return get(n, Sort::Concept); }
  SymbolId role(const std::string& n) { return get(n, Sort::Role); }

 private:
  SymbolTable& symbols_;
};

Term z(SymbolId i) { return Term::quantified(i); }

UniversalClause make_clause(std::size_t arity, std::vector<Literal> disjuncts) {
  UniversalClause c;
  for (std::size_t i = 0; i < arity; ++i) c.quantified.push_back("z" + std::to_string(i + 1));
  c.disjuncts = std::move(disjuncts);
  return c;
}

void need(const DlAxiom& ax, std::size_t n) {
  if (ax.names.size() != n) {
    throw ParseError(ParseErrorKind::Arity, SourceSpan{},
                     "axiom expects " + std::to_string(n) + " names, got " +
                         std::to_string(ax.names.size()));
  }
}

}  // namespace

std::vector<Conjunct> translate_axiom(const DlAxiom& ax, SymbolTable& symbols) {
  Namer n(symbols);
  std::vector<Conjunct> out;
  auto rel = [&](Term a, Term b, const std::string& r, bool pos = true) {
    return Literal::member3(a, b, n.role(r), pos);
  };
  switch (ax.kind) {
    case DlKind::ConceptAssertion:
      need(ax, 2);
      out.emplace_back(Literal::member1(n.ind(ax.names[0]), n.concept_id(ax.names[1]), !ax.negated));
      break;
    case DlKind::RoleAssertion: {
      need(ax, 3);
      Term a = n.ind(ax.names[0]);
      Term b = n.ind(ax.names[1]);
      out.emplace_back(rel(a, b, ax.names[2], !ax.negated));
      break;
    }
    case DlKind::Agreement:
    case DlKind::Disagreement: {
      need(ax, 2);
      Term a = n.ind(ax.names[0]);
      Term b = n.ind(ax.names[1]);
      out.emplace_back(Literal::eq(a, b, ax.kind == DlKind::Agreement));
      break;
    }
    case DlKind::ConceptInclusion: {
      auto clauses = cnf(ConceptExpr::disjunction({ConceptExpr::negation(ax.lhs), ax.rhs}), true);
      std::vector<std::vector<Signed>> seen;
      for (auto& cl : clauses) {
        std::sort(cl.begin(), cl.end());
        cl.erase(std::unique(cl.begin(), cl.end()), cl.end());
        bool tautology = false;
        for (std::size_t i = 0; i + 1 < cl.size(); ++i) {
          if (cl[i].first == cl[i + 1].first) tautology = true;
        }
        if (tautology || std::find(seen.begin(), seen.end(), cl) != seen.end()) continue;
        seen.push_back(cl);
      }
      for (const auto& cl : seen) {
        std::vector<Literal> ds;
        for (const auto& [name, pos] : cl) ds.push_back(Literal::member1(z(0), n.concept_id(name), pos));
        if (ds.empty()) ds.push_back(Literal::eq(z(0), z(0), false));
        out.emplace_back(make_clause(1, std::move(ds)));
      }
      break;
    }
    case DlKind::RoleInclusion:
      need(ax, 2);
      out.emplace_back(make_clause(2, {rel(z(0), z(1), ax.names[0], false),
                                       rel(z(0), z(1), ax.names[1])}));
      break;
    case DlKind::RoleChainInclusion: {
      if (ax.names.size() < 2) need(ax, 2);
      const std::size_t chain = ax.names.size() - 1;
      std::vector<Literal> ds;
      for (std::size_t i = 0; i < chain; ++i) {
        ds.push_back(rel(z(static_cast<SymbolId>(i)), z(static_cast<SymbolId>(i + 1)),
                         ax.names[i], false));
      }
      ds.push_back(rel(z(0), z(static_cast<SymbolId>(chain)), ax.names.back()));
      out.emplace_back(make_clause(chain + 1, std::move(ds)));
      break;
    }
    case DlKind::Sym:
      need(ax, 1);
      out.emplace_back(make_clause(2, {rel(z(0), z(1), ax.names[0], false),
                                       rel(z(1), z(0), ax.names[0])}));
      break;
    case DlKind::Asym:
      need(ax, 1);
      out.emplace_back(make_clause(2, {rel(z(0), z(1), ax.names[0], false),
                                       rel(z(1), z(0), ax.names[0], false)}));
      break;
    case DlKind::Ref:
      need(ax, 1);
      out.emplace_back(make_clause(1, {rel(z(0), z(0), ax.names[0])}));
      break;
    case DlKind::Irref:
      need(ax, 1);
      out.emplace_back(make_clause(1, {rel(z(0), z(0), ax.names[0], false)}));
      break;
    case DlKind::Tra:
      need(ax, 1);
      out.emplace_back(make_clause(3, {rel(z(0), z(1), ax.names[0], false),
                                       rel(z(1), z(2), ax.names[0], false),
                                       rel(z(0), z(2), ax.names[0])}));
      break;
    case DlKind::Fun:
      need(ax, 1);
      out.emplace_back(make_clause(3, {rel(z(0), z(1), ax.names[0], false),
                                       rel(z(0), z(2), ax.names[0], false),
                                       Literal::eq(z(1), z(2))}));
      break;
    case DlKind::Dis:
      need(ax, 2);
      out.emplace_back(make_clause(2, {rel(z(0), z(1), ax.names[0], false),
                                       rel(z(0), z(1), ax.names[1], false)}));
      break;
    case DlKind::ConceptProduct: {
      need(ax, 3);
      const auto& r = ax.names[0];
      SymbolId c1 = n.concept_id(ax.names[1]);
      SymbolId c2 = n.concept_id(ax.names[2]);
      out.emplace_back(make_clause(2, {rel(z(0), z(1), r, false), Literal::member1(z(0), c1)}));
      out.emplace_back(make_clause(2, {rel(z(0), z(1), r, false), Literal::member1(z(1), c2)}));
      out.emplace_back(make_clause(2, {Literal::member1(z(0), c1, false),
                                       Literal::member1(z(1), c2, false), rel(z(0), z(1), r)}));
      break;
    }
    case DlKind::ExistsLhsInclusion: {
      need(ax, 3);
      Literal r = rel(z(0), z(1), ax.names[0], false);
      Literal c = Literal::member1(z(1), n.concept_id(ax.names[1]), false);
      Literal d = Literal::member1(z(0), n.concept_id(ax.names[2]));
      out.emplace_back(make_clause(2, {r, c, d}));
      break;
    }
    case DlKind::ValueRestriction: {
      need(ax, 3);
      Literal c = Literal::member1(z(0), n.concept_id(ax.names[0]), false);
      Literal r = rel(z(0), z(1), ax.names[1], false);
      Literal d = Literal::member1(z(1), n.concept_id(ax.names[2]));
      out.emplace_back(make_clause(2, {c, r, d}));
      break;
    }
    case DlKind::Unsupported:
      throw UnsupportedAxiomError("unsupported construct '" +
                                  (ax.names.empty() ? std::string("?") : ax.names[0]) + "'");
  }
  return out;
}

KnowledgeBase translate_kb(std::span<const DlAxiom> axioms) {
  KnowledgeBase kb;
  for (const auto& ax : axioms) {
    for (auto& c : translate_axiom(ax, kb.symbols)) {
      if (auto* lit = std::get_if<Literal>(&c)) {
        kb.add_literal(*lit);
      } else {
        kb.add_clause(std::get<UniversalClause>(std::move(c)));
      }
    }
  }
  // Keep quantified names clear of every symbol so the KB prints and
  // re-parses unambiguously.
  for (auto& c : kb.clauses) {
    for (auto& q : c.quantified) {
      while (kb.symbols.sort_of(q)) q += "_";
    }
  }
  return kb;
}

namespace {

struct Token {
  std::string text;
  int column = 1;
};

std::vector<Token> tokenize(std::string_view line, int line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (c == '#') break;
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '(' || c == ')') {
      out.push_back({std::string(1, c), static_cast<int>(i) + 1});
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < line.size() && std::string_view(" \t\r()#").find(line[i]) == std::string_view::npos) {
      ++i;
    }
    out.push_back({std::string(line.substr(start, i - start)), static_cast<int>(start) + 1});
  }
  (void)line_no;
  return out;
}

class ExprParser {
 public:
  ExprParser(const std::vector<Token>& toks, std::size_t pos, int line)
      : toks_(toks), pos_(pos), line_(line) {}

  ConceptExpr parse() {
    if (pos_ >= toks_.size()) error(ParseErrorKind::Arity, "missing concept expression");
    const Token& t = toks_[pos_++];
    if (t.text == ")") error(ParseErrorKind::Lex, "unexpected ')'", t.column);
    if (t.text != "(") {
      if (t.text == "top") return ConceptExpr::top();
      if (t.text == "bottom") return ConceptExpr::bottom();
      return ConceptExpr::named(t.text);
    }
    if (pos_ >= toks_.size()) error(ParseErrorKind::Lex, "unbalanced '('", t.column);
    const Token& op = toks_[pos_++];
    std::vector<ConceptExpr> args;
    while (pos_ < toks_.size() && toks_[pos_].text != ")") args.push_back(parse());
    if (pos_ >= toks_.size()) error(ParseErrorKind::Lex, "unbalanced '('", t.column);
    ++pos_;
    if (op.text == "not") {
      if (args.size() != 1) error(ParseErrorKind::Arity, "'not' takes one concept", op.column);
      return ConceptExpr::negation(std::move(args[0]));
    }
    if (op.text == "and" || op.text == "or") {
      if (args.empty()) error(ParseErrorKind::Arity, "empty '" + op.text + "'", op.column);
      return op.text == "and" ? ConceptExpr::conjunction(std::move(args))
                              : ConceptExpr::disjunction(std::move(args));
    }
    error(ParseErrorKind::UnknownSymbol, "unknown concept constructor '" + op.text + "'",
          op.column);
  }

  std::size_t pos() const { return pos_; }

 private:
  [[noreturn]] void error(ParseErrorKind kind, const std::string& msg, int column = 1) const {
    throw ParseError(kind, SourceSpan{line_, column, 1}, msg);
  }

  const std::vector<Token>& toks_;
  std::size_t pos_;
  int line_;
};

const std::map<std::string, std::pair<DlKind, int>>& keywords() {
  // Keyword -> kind and exact name count (-1: two or more).
  static const std::map<std::string, std::pair<DlKind, int>> table{
      {"assert", {DlKind::ConceptAssertion, 2}},  {"nassert", {DlKind::ConceptAssertion, 2}},
      {"role", {DlKind::RoleAssertion, 3}},       {"nrole", {DlKind::RoleAssertion, 3}},
      {"same", {DlKind::Agreement, 2}},           {"diff", {DlKind::Disagreement, 2}},
      {"rsub", {DlKind::RoleInclusion, 2}},       {"chain", {DlKind::RoleChainInclusion, -1}},
      {"sym", {DlKind::Sym, 1}},                  {"asym", {DlKind::Asym, 1}},
      {"ref", {DlKind::Ref, 1}},                  {"irref", {DlKind::Irref, 1}},
      {"tra", {DlKind::Tra, 1}},                  {"fun", {DlKind::Fun, 1}},
      {"dis", {DlKind::Dis, 2}},                  {"product", {DlKind::ConceptProduct, 3}},
      {"exists", {DlKind::ExistsLhsInclusion, 3}}, {"forall", {DlKind::ValueRestriction, 3}},
  };
  return table;
}

const std::set<std::string> kUnsupported{"mincard", "maxcard", "datatype", "nominal", "self",
                                         "universal"};

}  // namespace

std::vector<DlAxiom> parse_dl(std::string_view text) {
  std::vector<DlAxiom> out;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    ++line_no;
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto toks = tokenize(text.substr(start, end - start), line_no);
    start = end + 1;
    if (toks.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const Token& head = toks.front();
    DlAxiom ax;
    if (head.text == "subsume") {
      ExprParser p(toks, 1, line_no);
      ax.kind = DlKind::ConceptInclusion;
      ax.lhs = p.parse();
      ax.rhs = p.parse();
      if (p.pos() != toks.size()) {
        throw ParseError(ParseErrorKind::Arity, SourceSpan{line_no, toks[p.pos()].column, 1},
                         "'subsume' takes two concept expressions");
      }
    } else if (kUnsupported.contains(head.text)) {
      ax.kind = DlKind::Unsupported;
      ax.names.push_back(head.text);
    } else if (auto it = keywords().find(head.text); it != keywords().end()) {
      ax.kind = it->second.first;
      ax.negated = head.text == "nassert" || head.text == "nrole";
      for (std::size_t i = 1; i < toks.size(); ++i) {
        if (toks[i].text == "(" || toks[i].text == ")") {
          throw ParseError(ParseErrorKind::Lex, SourceSpan{line_no, toks[i].column, 1},
                           "unexpected parenthesis");
        }
        ax.names.push_back(toks[i].text);
      }
      const int want = it->second.second;
      const bool ok = want < 0 ? ax.names.size() >= 2
                               : ax.names.size() == static_cast<std::size_t>(want);
      if (!ok) {
        throw ParseError(ParseErrorKind::Arity, SourceSpan{line_no, head.column,
                                                           static_cast<int>(head.text.size())},
                         "wrong number of names for '" + head.text + "'");
      }
    } else {
      throw ParseError(ParseErrorKind::UnknownSymbol,
                       SourceSpan{line_no, head.column, static_cast<int>(head.text.size())},
                       "unknown axiom keyword '" + head.text + "'");
    }
    out.push_back(std::move(ax));
    if (end == text.size()) break;
  }
  return out;
}

}  // namespace lqs
