// minimaple/lexer.hpp - Tokenizer for MiniMaple source text.
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "minimaple/ast.hpp"
#include "minimaple/diagnostic.hpp"

namespace minimaple {

enum class Tok {
  End,
  Ident,
  Int,
  Float,
  String,
  TypeName,    // `type/I`
  SpecComment, // (*@ ... @*), inner tokens in Token::inner

  // punctuation
  Assign,  // :=
  DColon,  // ::
  DotDot,  // ..
  Semi,
  Comma,
  LParen,
  RParen,
  LBracket,
  RBracket,
  LBrace,
  RBrace,
  Plus,
  Minus,
  Star,
  Slash,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  Quote, // '

  // statement keywords
  KwProc,
  KwEnd,
  KwIf,
  KwThen,
  KwElif,
  KwElse,
  KwFor,
  KwFrom,
  KwBy,
  KwTo,
  KwWhile,
  KwDo,
  KwReturn,
  KwGlobal,
  KwLocal,
  KwError,
  KwType,
  KwAnd,
  KwOr,
  KwNot,
  KwMod,
  KwTrue,
  KwFalse,

  // specification keywords
  KwRequires,
  KwEnsures,
  KwInvariant,
  KwDecreases,
  KwAssert,
  KwDefine,
  KwAssume,
  KwImplies,
  KwEquivalent,
  KwForall,
  KwExists,
  KwAdd,
  KwMul,
  KwMin,
  KwMax,
  KwSeq,
  KwIn,
  KwResult,
  KwOld,

  // type keywords
  KwInteger,
  KwBoolean,
  KwStringT,
  KwFloatT,
  KwRational,
  KwAnything,
  KwList,
  KwOrType, // Or
  KwProcedure,
  KwSymbol,
  KwVoid,
  KwUneval,
};

struct Token {
  Tok kind = Tok::End;
  std::string text; // identifier name, literal text, or string contents
  SourceSpan span;
  std::vector<Token> inner; // only for SpecComment
};

struct LexResult {
  std::vector<Token> tokens; // always terminated by Tok::End
  std::vector<Diagnostic> errors;

  bool ok() const { return errors.empty(); }
};

// Splits `source` into tokens. `# ...` comments are dropped; spec comments
// become a single SpecComment token carrying their own token stream.
LexResult tokenize(std::string_view source, const std::string &file = "<input>");

const char *token_name(Tok kind);

} // namespace minimaple
