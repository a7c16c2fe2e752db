#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lqs/error.hpp"
#include "lqs/formula.hpp"
#include "lqs/interpretation.hpp"
#include "lqs/query.hpp"

namespace lqs {

struct SourceSpan {
  int line = 1;
  int column = 1;
  int length = 0;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

enum class ParseErrorKind { Lex, Sort, Arity, Duplicate, UnknownSymbol };

std::string_view parse_error_kind_name(ParseErrorKind kind);

class ParseError : public Error {
 public:
  ParseError(ParseErrorKind kind, SourceSpan span, std::string message);

  ParseErrorKind kind() const { return kind_; }
  const SourceSpan& span() const { return span_; }
  const std::string& message() const { return message_; }

 private:
  ParseErrorKind kind_;
  SourceSpan span_;
  std::string message_;
};

// KB text: one form per line, `#` starts a comment.
//   ind a b c
//   lit (rel a b R) | lit (not (in a C)) | lit (eq a b)
//   clause (forall z1 z2) (or (not (rel z1 z2 R)) (rel z1 z2 S))
KnowledgeBase parse_kb(std::string_view text);

// Query text: a sequence of literals; `?name` marks a query variable.
Query parse_query(std::string_view text, const SymbolTable& context = {});

std::string render(const KnowledgeBase& kb);
std::string render(const Query& q);
std::string render(const Literal& lit, const SymbolTable& symbols,
                   const std::vector<std::string>* quantified = nullptr);

// {"answers":[{"map0":{..},"map1":{..},"map3":{..},"merges":{..}}, ...]}
std::string render_json(const AnswerSet& answers, const SymbolTable& symbols);

// {"domain":[..],"sets1":{"C":[..]},"sets3":{"R":[["a","b"],..]}}
std::string render_json(const Interpretation& model, const SymbolTable& symbols);

}  // namespace lqs
