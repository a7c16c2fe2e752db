#include "lqs/syntax.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>

namespace lqs {

std::string_view parse_error_kind_name(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::Lex: return "lex";
    case ParseErrorKind::Sort: return "sort";
    case ParseErrorKind::Arity: return "arity";
    case ParseErrorKind::Duplicate: return "duplicate";
    case ParseErrorKind::UnknownSymbol: return "unknown-symbol";
  }
  return "?";
}

namespace {

std::string format_error(ParseErrorKind kind, const SourceSpan& span, const std::string& msg) {
  std::ostringstream os;
  os << span.line << ':' << span.column << ": " << parse_error_kind_name(kind) << " error: "
     << msg;
  return os.str();
}

}  // namespace

ParseError::ParseError(ParseErrorKind kind, SourceSpan span, std::string message)
    : Error(format_error(kind, span, message)),
      kind_(kind),
      span_(span),
      message_(std::move(message)) {}

namespace {

struct Sexp {
  bool is_list = false;
  std::string atom;
  std::vector<Sexp> items;
  SourceSpan span;
};

[[noreturn]] void fail(ParseErrorKind kind, const SourceSpan& span, std::string msg) {
  throw ParseError(kind, span, std::move(msg));
}

// Reads every top-level s-expression of `text`. `line` is the line number
// of the first character. Comments run from `#` to end of line.
class Reader {
 public:
  Reader(std::string_view text, int line) : text_(text), line_(line) {}

  std::vector<Sexp> read_all() {
    std::vector<Sexp> out;
    while (true) {
      skip_blank();
      if (pos_ >= text_.size()) break;
      out.push_back(read_one());
    }
    return out;
  }

 private:
  SourceSpan here(int length = 1) const { return SourceSpan{line_, column(), length}; }
  int column() const { return static_cast<int>(pos_ - line_start_) + 1; }

  void skip_blank() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (c == '\n') {
        ++pos_;
        ++line_;
        line_start_ = pos_;
      } else if (c == ' ' || c == '\t' || c == '\r') {
        ++pos_;
      } else {
        break;
      }
    }
  }

  static bool delimiter(char c) {
    return c == '(' || c == ')' || c == '#' || c == ' ' || c == '\t' || c == '\r' ||
           c == '\n';
  }

  Sexp read_one() {
    Sexp node;
    node.span = here();
    char c = text_[pos_];
    if (c == ')') fail(ParseErrorKind::Lex, here(), "unexpected ')'");
    if (c == '(') {
      node.is_list = true;
      ++pos_;
      while (true) {
        skip_blank();
        if (pos_ >= text_.size()) fail(ParseErrorKind::Lex, node.span, "unbalanced '('");
        if (text_[pos_] == ')') {
          ++pos_;
          break;
        }
        node.items.push_back(read_one());
      }
      if (node.span.line == line_) node.span.length = column() - node.span.column;
      return node;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && !delimiter(text_[pos_])) {
      if (static_cast<unsigned char>(text_[pos_]) < 0x20) {
        fail(ParseErrorKind::Lex, here(), "control character in name");
      }
      ++pos_;
    }
    node.atom = std::string(text_.substr(start, pos_ - start));
    node.span.length = static_cast<int>(pos_ - start);
    return node;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_start_ = 0;
  int line_;
};

bool is_keyword(const std::string& s) {
  static const std::set<std::string> kw{"not", "eq", "in", "rel", "forall", "or",
                                        "lit", "clause", "ind"};
  return kw.contains(s);
}

const Sexp& expect_atom(const Sexp& node, const char* what) {
  if (node.is_list) fail(ParseErrorKind::Lex, node.span, std::string("expected ") + what);
  return node;
}

enum class Slot { Element, Concept, Role };

// Symbol resolution shared by the KB and query parsers.
class Resolver {
 public:
  Resolver(SymbolTable& symbols, bool allow_query_vars)
      : symbols_(symbols), allow_query_vars_(allow_query_vars) {}

  const std::vector<std::string>* quantified = nullptr;
  const std::set<std::string>* all_quantified = nullptr;

  Term element(const Sexp& node) {
    const std::string& name = checked_name(node);
    if (quantified) {
      auto it = std::find(quantified->begin(), quantified->end(), name);
      if (it != quantified->end()) {
        return Term::quantified(static_cast<SymbolId>(it - quantified->begin()));
      }
    }
    return Term::free(intern(node, name, Sort::Individual));
  }

  SymbolId set(const Sexp& node, Sort sort) {
    const std::string& name = checked_name(node);
    if (quantified &&
        std::find(quantified->begin(), quantified->end(), name) != quantified->end()) {
      fail(ParseErrorKind::Sort, node.span,
           "quantified variable '" + name + "' used in a set position");
    }
    return intern(node, name, sort);
  }

  SymbolId intern(const Sexp& node, const std::string& name, Sort sort) {
    if (auto existing = symbols_.sort_of(name); existing && *existing != sort) {
      fail(ParseErrorKind::Sort, node.span,
           "'" + name + "' used as " + std::string(sort_name(sort)) + " but already a " +
               std::string(sort_name(*existing)));
    }
    if (sort == Sort::Individual && all_quantified && all_quantified->contains(name)) {
      fail(ParseErrorKind::Duplicate, node.span,
           "'" + name + "' is both a quantified variable and an individual");
    }
    return symbols_.space(sort).intern(name, name.front() == '?');
  }

 private:
  const std::string& checked_name(const Sexp& node) {
    const std::string& name = expect_atom(node, "a name").atom;
    if (is_keyword(name)) {
      fail(ParseErrorKind::Lex, node.span, "keyword '" + name + "' used as a name");
    }
    if (name.front() == '?') {
      if (!allow_query_vars_) {
        fail(ParseErrorKind::Lex, node.span, "query variable '" + name + "' outside a query");
      }
      if (name.size() == 1) fail(ParseErrorKind::Lex, node.span, "empty query variable name");
    }
    return name;
  }

  SymbolTable& symbols_;
  bool allow_query_vars_;
};

void check_arity(const Sexp& node, std::size_t expected) {
  if (node.items.size() != expected) {
    fail(ParseErrorKind::Arity, node.span,
         "'" + node.items.front().atom + "' expects " + std::to_string(expected - 1) +
             " argument(s), got " + std::to_string(node.items.size() - 1));
  }
}

Literal parse_atom(const Sexp& node, Resolver& r, bool positive) {
  if (!node.is_list || node.items.empty() || node.items.front().is_list) {
    fail(ParseErrorKind::Lex, node.span, "expected an atom like (in x C)");
  }
  const std::string& head = node.items.front().atom;
  if (head == "eq") {
    check_arity(node, 3);
    Term x = r.element(node.items[1]);
    Term y = r.element(node.items[2]);
    return Literal::eq(x, y, positive);
  }
  if (head == "in") {
    check_arity(node, 3);
    Term x = r.element(node.items[1]);
    SymbolId c = r.set(node.items[2], Sort::Concept);
    return Literal::member1(x, c, positive);
  }
  if (head == "rel") {
    check_arity(node, 4);
    Term x = r.element(node.items[1]);
    Term y = r.element(node.items[2]);
    SymbolId role = r.set(node.items[3], Sort::Role);
    return Literal::member3(x, y, role, positive);
  }
  fail(ParseErrorKind::UnknownSymbol, node.items.front().span,
       "unknown atom '" + head + "'");
}

Literal parse_lit(const Sexp& node, Resolver& r) {
  if (node.is_list && !node.items.empty() && !node.items.front().is_list &&
      node.items.front().atom == "not") {
    check_arity(node, 2);
    return parse_atom(node.items[1], r, false);
  }
  return parse_atom(node, r, true);
}

bool is_head(const Sexp& node, const char* head) {
  return node.is_list && !node.items.empty() && !node.items.front().is_list &&
         node.items.front().atom == head;
}

// Splits `text` into lines, keeping 1-based line numbers.
std::vector<std::pair<int, std::string_view>> lines_of(std::string_view text) {
  std::vector<std::pair<int, std::string_view>> out;
  int line = 1;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    out.emplace_back(line, text.substr(start, end - start));
    if (end == text.size()) break;
    start = end + 1;
    ++line;
  }
  return out;
}

}  // namespace

KnowledgeBase parse_kb(std::string_view text) {
  KnowledgeBase kb;
  std::set<std::string> quantified_names;
  Resolver resolver(kb.symbols, false);
  resolver.all_quantified = &quantified_names;

  for (const auto& [line_no, line] : lines_of(text)) {
    auto forms = Reader(line, line_no).read_all();
    if (forms.empty()) continue;
    const Sexp& head = forms.front();
    if (head.is_list) fail(ParseErrorKind::Lex, head.span, "expected ind, lit or clause");
    if (head.atom == "ind") {
      if (forms.size() < 2) fail(ParseErrorKind::Arity, head.span, "'ind' needs a name");
      for (std::size_t i = 1; i < forms.size(); ++i) {
        const Sexp& n = expect_atom(forms[i], "an individual name");
        if (is_keyword(n.atom) || n.atom.front() == '?') {
          fail(ParseErrorKind::Lex, n.span, "bad individual name '" + n.atom + "'");
        }
        resolver.intern(n, n.atom, Sort::Individual);
      }
    } else if (head.atom == "lit") {
      if (forms.size() != 2) fail(ParseErrorKind::Arity, head.span, "'lit' takes one literal");
      resolver.quantified = nullptr;
      kb.add_literal(parse_lit(forms[1], resolver));
    } else if (head.atom == "clause") {
      if (forms.size() != 3 || !is_head(forms[1], "forall") || !is_head(forms[2], "or")) {
        fail(ParseErrorKind::Arity, head.span, "expected clause (forall z..) (or lit..)");
      }
      UniversalClause clause;
      const auto& prefix = forms[1].items;
      if (prefix.size() < 2) fail(ParseErrorKind::Arity, forms[1].span, "empty quantifier prefix");
      for (std::size_t i = 1; i < prefix.size(); ++i) {
        const Sexp& z = expect_atom(prefix[i], "a variable name");
        if (is_keyword(z.atom) || z.atom.front() == '?') {
          fail(ParseErrorKind::Lex, z.span, "bad variable name '" + z.atom + "'");
        }
        if (std::find(clause.quantified.begin(), clause.quantified.end(), z.atom) !=
            clause.quantified.end()) {
          fail(ParseErrorKind::Duplicate, z.span, "'" + z.atom + "' quantified twice");
        }
        if (auto s = kb.symbols.sort_of(z.atom)) {
          fail(ParseErrorKind::Duplicate, z.span,
               "quantified variable '" + z.atom + "' is already a " +
                   std::string(sort_name(*s)));
        }
        clause.quantified.push_back(z.atom);
        quantified_names.insert(z.atom);
      }
      const auto& body = forms[2].items;
      if (body.size() < 2) fail(ParseErrorKind::Arity, forms[2].span, "empty disjunction");
      resolver.quantified = &clause.quantified;
      for (std::size_t i = 1; i < body.size(); ++i) {
        clause.disjuncts.push_back(parse_lit(body[i], resolver));
      }
      resolver.quantified = nullptr;
      kb.add_clause(std::move(clause));
    } else {
      fail(ParseErrorKind::UnknownSymbol, head.span, "unknown form '" + head.atom + "'");
    }
  }
  return kb;
}

Query parse_query(std::string_view text, const SymbolTable& context) {
  Query q;
  q.symbols = context;
  Resolver resolver(q.symbols, true);
  for (const Sexp& form : Reader(text, 1).read_all()) {
    q.conjuncts.push_back(parse_lit(form, resolver));
  }
  return q;
}

namespace {

std::string term_name(const Term& t, const SymbolTable& symbols,
                      const std::vector<std::string>* quantified) {
  if (!t.bound) return symbols.individuals.name(t.id);
  if (quantified && t.id < quantified->size()) return (*quantified)[t.id];
  return "z" + std::to_string(t.id + 1);
}

}  // namespace

std::string render(const Literal& lit, const SymbolTable& symbols,
                   const std::vector<std::string>* quantified) {
  std::string atom;
  switch (lit.kind) {
    case AtomKind::Eq:
      atom = "(eq " + term_name(lit.first, symbols, quantified) + " " +
             term_name(lit.second, symbols, quantified) + ")";
      break;
    case AtomKind::Member1:
      atom = "(in " + term_name(lit.first, symbols, quantified) + " " +
             symbols.concepts.name(lit.set) + ")";
      break;
    case AtomKind::Member3:
      atom = "(rel " + term_name(lit.first, symbols, quantified) + " " +
             term_name(lit.second, symbols, quantified) + " " + symbols.roles.name(lit.set) +
             ")";
      break;
  }
  return lit.positive ? atom : "(not " + atom + ")";
}

std::string render(const KnowledgeBase& kb) {
  std::string out;
  const auto& inds = kb.symbols.individuals.names();
  if (!inds.empty()) {
    out += "ind";
    for (const auto& n : inds) out += " " + n;
    out += "\n";
  }
  for (const auto& l : kb.literals) out += "lit " + render(l, kb.symbols) + "\n";
  for (const auto& c : kb.clauses) {
    out += "clause (forall";
    for (const auto& z : c.quantified) out += " " + z;
    out += ") (or";
    for (const auto& d : c.disjuncts) out += " " + render(d, kb.symbols, &c.quantified);
    out += ")\n";
  }
  return out;
}

std::string render(const Query& q) {
  std::string out;
  for (const auto& l : q.conjuncts) {
    if (!out.empty()) out += " ";
    out += render(l, q.symbols);
  }
  return out;
}

std::string render_json(const AnswerSet& answers, const SymbolTable& symbols) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& s : answers.answers) {
    nlohmann::json map0 = nlohmann::json::object();
    nlohmann::json merges = nlohmann::json::object();
    for (const auto& [from, to] : s.entries(Sort::Individual)) {
      auto& target = symbols.individuals.is_query_variable(from) ? map0 : merges;
      target[symbols.individuals.name(from)] = symbols.individuals.name(to);
    }
    nlohmann::json map1 = nlohmann::json::object();
    for (const auto& [from, to] : s.entries(Sort::Concept)) {
      map1[symbols.concepts.name(from)] = symbols.concepts.name(to);
    }
    nlohmann::json map3 = nlohmann::json::object();
    for (const auto& [from, to] : s.entries(Sort::Role)) {
      map3[symbols.roles.name(from)] = symbols.roles.name(to);
    }
    list.push_back({{"map0", map0}, {"map1", map1}, {"map3", map3}, {"merges", merges}});
  }
  return nlohmann::json{{"answers", list}}.dump();
}

std::string render_json(const Interpretation& model, const SymbolTable& symbols) {
  auto element = [&](std::size_t e) { return symbols.individuals.name(model.domain.at(e)); };
  nlohmann::json domain = nlohmann::json::array();
  for (std::size_t e = 0; e < model.domain.size(); ++e) domain.push_back(element(e));
  nlohmann::json sets1 = nlohmann::json::object();
  for (std::size_t c = 0; c < model.assign1.size() && c < symbols.concepts.size(); ++c) {
    nlohmann::json members = nlohmann::json::array();
    for (std::size_t e : model.assign1[c]) members.push_back(element(e));
    sets1[symbols.concepts.name(static_cast<SymbolId>(c))] = members;
  }
  nlohmann::json sets3 = nlohmann::json::object();
  for (std::size_t r = 0; r < model.assign3.size() && r < symbols.roles.size(); ++r) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& [a, b] : model.assign3[r]) pairs.push_back({element(a), element(b)});
    sets3[symbols.roles.name(static_cast<SymbolId>(r))] = pairs;
  }
  return nlohmann::json{{"domain", domain}, {"sets1", sets1}, {"sets3", sets3}}.dump();
}

}  // namespace lqs
