// minimaple/parser.hpp - Recursive-descent parser for MiniMaple.
#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "minimaple/ast.hpp"
#include "minimaple/diagnostic.hpp"
#include "minimaple/lexer.hpp"

namespace minimaple {

// Where a specification expression occurs. Decides whether RESULT and OLD
// are admissible.
enum class SpecContext {
  Requires,
  Ensures,
  Exceptional,
  Invariant,
  Decreases,
  Assertion,
  Declaration,
};

template <class T>
struct Parsed {
  std::optional<T> value;
  std::vector<Diagnostic> errors;

  bool ok() const { return value.has_value() && errors.empty(); }
};

// Parses a whole token stream. Syntax errors are collected; the parser
// resynchronizes at the next `;` and keeps going.
Parsed<Program> parse_program(std::span<const Token> tokens);

// tokenize + parse_program. Lexical errors are reported alongside syntax errors.
Parsed<Program> parse_source(std::string_view source, const std::string &file = "<input>");

Parsed<TypeExpr> parse_type_expr(std::span<const Token> tokens);
Parsed<Expr> parse_spec_expr(std::span<const Token> tokens, SpecContext ctx);
Parsed<Expr> parse_expr(std::span<const Token> tokens);

// String conveniences, mostly for tests and tools.
Parsed<TypeExpr> parse_type_text(std::string_view text);
Parsed<Expr> parse_spec_text(std::string_view text, SpecContext ctx);
Parsed<Expr> parse_expr_text(std::string_view text);

} // namespace minimaple
