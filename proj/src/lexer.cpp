// lexer.cpp - MiniMaple tokenizer
#include "minimaple/lexer.hpp"

#include <cctype>
#include <optional>
#include <unordered_map>

namespace minimaple {

namespace {

const std::unordered_map<std::string_view, Tok> &keywords() {
  static const std::unordered_map<std::string_view, Tok> table = {
      {"proc", Tok::KwProc},
      {"end", Tok::KwEnd},
      {"if", Tok::KwIf},
      {"then", Tok::KwThen},
      {"elif", Tok::KwElif},
      {"else", Tok::KwElse},
      {"for", Tok::KwFor},
      {"from", Tok::KwFrom},
      {"by", Tok::KwBy},
      {"to", Tok::KwTo},
      {"while", Tok::KwWhile},
      {"do", Tok::KwDo},
      {"return", Tok::KwReturn},
      {"global", Tok::KwGlobal},
      {"local", Tok::KwLocal},
      {"error", Tok::KwError},
      {"type", Tok::KwType},
      {"and", Tok::KwAnd},
      {"or", Tok::KwOr},
      {"not", Tok::KwNot},
      {"mod", Tok::KwMod},
      {"true", Tok::KwTrue},
      {"false", Tok::KwFalse},
      {"requires", Tok::KwRequires},
      {"ensures", Tok::KwEnsures},
      {"invariant", Tok::KwInvariant},
      {"decreases", Tok::KwDecreases},
      {"ASSERT", Tok::KwAssert},
      {"define", Tok::KwDefine},
      {"assume", Tok::KwAssume},
      {"implies", Tok::KwImplies},
      {"equivalent", Tok::KwEquivalent},
      {"forall", Tok::KwForall},
      {"exists", Tok::KwExists},
      {"add", Tok::KwAdd},
      {"mul", Tok::KwMul},
      {"min", Tok::KwMin},
      {"max", Tok::KwMax},
      {"seq", Tok::KwSeq},
      {"in", Tok::KwIn},
      {"RESULT", Tok::KwResult},
      {"OLD", Tok::KwOld},
      {"integer", Tok::KwInteger},
      {"boolean", Tok::KwBoolean},
      {"string", Tok::KwStringT},
      {"float", Tok::KwFloatT},
      {"rational", Tok::KwRational},
      {"anything", Tok::KwAnything},
      {"list", Tok::KwList},
      {"Or", Tok::KwOrType},
      {"procedure", Tok::KwProcedure},
      {"symbol", Tok::KwSymbol},
      {"void", Tok::KwVoid},
      {"uneval", Tok::KwUneval},
  };
  return table;
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_continue(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class Lexer {
public:
  Lexer(std::string_view src, const std::string &file) : src_(src), file_(file) {}

  LexResult run() {
    LexResult out;
    out.tokens = lex_stream(false);
    out.errors = std::move(errors_);
    return out;
  }

private:
  std::string_view src_;
  const std::string &file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  std::vector<Diagnostic> errors_;

  bool eof() const { return pos_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }
  bool starts_with(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && !eof(); ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  SourceSpan here(int length = 0) const { return SourceSpan{file_, line_, col_, length}; }

  void error(std::string code, std::string msg, SourceSpan span) {
    errors_.push_back(Diagnostic{Severity::Error, std::move(code), std::move(msg), std::move(span)});
  }

  void skip_trivia() {
    while (!eof()) {
      char c = peek();
      if (c == '#') {
        while (!eof() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  // Lexes until EOF, or until `@*)` when inside a spec comment.
  std::vector<Token> lex_stream(bool in_spec) {
    std::vector<Token> toks;
    for (;;) {
      skip_trivia();
      if (eof()) {
        toks.push_back(Token{Tok::End, "", here(), {}});
        return toks;
      }
      if (in_spec && starts_with("@*)")) {
        Token end{Tok::End, "", here(3), {}};
        advance(3);
        toks.push_back(std::move(end));
        return toks;
      }
      if (starts_with("(*@")) {
        SourceSpan start = here(3);
        if (in_spec) {
          error("lex-nested-spec", "nested specification comment", start);
          advance(3);
          continue;
        }
        advance(3);
        std::size_t begin = pos_;
        Token spec{Tok::SpecComment, "", start, {}};
        spec.inner = lex_stream(true);
        if (eof() && !(pos_ >= 3 && src_.substr(pos_ - 3, 3) == "@*)")) {
          error("lex-unterminated-spec", "unterminated specification comment", start);
        }
        spec.span.length = static_cast<int>(pos_ - begin + 3);
        toks.push_back(std::move(spec));
        continue;
      }
      if (auto tok = lex_one()) toks.push_back(std::move(*tok));
    }
  }

  Token make(Tok k, std::size_t len, std::string text = {}) {
    Token t{k, std::move(text), here(static_cast<int>(len)), {}};
    advance(len);
    return t;
  }

  std::optional<Token> lex_one() {
    char c = peek();
    if (ident_start(c)) return lex_word();
    if (digit(c) || (c == '.' && digit(peek(1)))) return lex_number();
    switch (c) {
    case '"':
      return lex_string();
    case '`':
      return lex_backtick();
    case '\'':
      if (peek(1) == '\'' && peek(2) != '\'') {
        if (auto t = lex_tex_string("''", "``")) return *t;
      }
      return make(Tok::Quote, 1);
    case ':':
      if (peek(1) == '=') return make(Tok::Assign, 2);
      if (peek(1) == ':') return make(Tok::DColon, 2);
      return make(Tok::Semi, 1); // Maple's silent terminator
    case '.':
      if (peek(1) == '.') return make(Tok::DotDot, 2);
      break;
    case ';':
      return make(Tok::Semi, 1);
    case ',':
      return make(Tok::Comma, 1);
    case '(':
      return make(Tok::LParen, 1);
    case ')':
      return make(Tok::RParen, 1);
    case '[':
      return make(Tok::LBracket, 1);
    case ']':
      return make(Tok::RBracket, 1);
    case '{':
      return make(Tok::LBrace, 1);
    case '}':
      return make(Tok::RBrace, 1);
    case '+':
      return make(Tok::Plus, 1);
    case '-':
      return make(Tok::Minus, 1);
    case '*':
      return make(Tok::Star, 1);
    case '/':
      return make(Tok::Slash, 1);
    case '=':
      return make(Tok::Eq, 1);
    case '<':
      if (peek(1) == '>') return make(Tok::Ne, 2);
      if (peek(1) == '=') return make(Tok::Le, 2);
      return make(Tok::Lt, 1);
    case '>':
      if (peek(1) == '=') return make(Tok::Ge, 2);
      return make(Tok::Gt, 1);
    default:
      break;
    }
    error("lex-illegal-char", "illegal character '" + std::string(1, c) + "'", here(1));
    advance();
    return std::nullopt;
  }

  Token lex_word() {
    std::size_t start = pos_;
    SourceSpan span = here();
    while (!eof() && ident_continue(peek())) advance();
    std::string_view word = src_.substr(start, pos_ - start);
    span.length = static_cast<int>(word.size());
    auto it = keywords().find(word);
    Tok k = it == keywords().end() ? Tok::Ident : it->second;
    return Token{k, std::string(word), span, {}};
  }

  Token lex_number() {
    std::size_t start = pos_;
    SourceSpan span = here();
    bool is_float = false;
    while (digit(peek())) advance();
    if (peek() == '.' && peek(1) != '.') {
      is_float = true;
      advance();
      while (digit(peek())) advance();
    }
    if ((peek() == 'e' || peek() == 'E') &&
        (digit(peek(1)) || ((peek(1) == '+' || peek(1) == '-') && digit(peek(2))))) {
      is_float = true;
      advance(2);
      while (digit(peek())) advance();
    }
    std::string text(src_.substr(start, pos_ - start));
    span.length = static_cast<int>(text.size());
    return Token{is_float ? Tok::Float : Tok::Int, std::move(text), span, {}};
  }

  Token lex_string() {
    SourceSpan span = here();
    std::size_t start = pos_;
    advance();
    std::string value;
    for (;;) {
      if (eof() || peek() == '\n') {
        span.length = static_cast<int>(pos_ - start);
        error("lex-unterminated-string", "unterminated string literal", span);
        return Token{Tok::String, value, span, {}};
      }
      char c = peek();
      if (c == '"') {
        advance();
        break;
      }
      if (c == '\\' && pos_ + 1 < src_.size()) {
        char e = peek(1);
        value.push_back(e == 'n' ? '\n' : e == 't' ? '\t' : e);
        advance(2);
        continue;
      }
      value.push_back(c);
      advance();
    }
    span.length = static_cast<int>(pos_ - start);
    return Token{Tok::String, value, span, {}};
  }

  // TeX-style quoted label: ''text`` or ``text''. Returns nothing when the
  // closing delimiter is not on the same line.
  std::optional<Token> lex_tex_string(std::string_view open, std::string_view close) {
    std::size_t body = pos_ + open.size();
    std::size_t eol = src_.find('\n', body);
    std::size_t end = src_.find(close, body);
    if (end == std::string_view::npos || (eol != std::string_view::npos && end > eol)) {
      return std::nullopt;
    }
    SourceSpan span = here(static_cast<int>(end + close.size() - pos_));
    std::string value(src_.substr(body, end - body));
    advance(end + close.size() - pos_);
    return Token{Tok::String, value, span, {}};
  }

  Token lex_backtick() {
    if (peek(1) == '`') {
      if (auto t = lex_tex_string("``", "''")) return *t;
    }
    SourceSpan span = here();
    std::size_t start = pos_;
    std::size_t close = src_.find('`', pos_ + 1);
    std::size_t eol = src_.find('\n', pos_ + 1);
    if (close == std::string_view::npos || (eol != std::string_view::npos && close > eol)) {
      span.length = 1;
      error("lex-unterminated-name", "unterminated backquoted name", span);
      advance();
      return Token{Tok::Ident, "", span, {}};
    }
    std::string name(src_.substr(pos_ + 1, close - pos_ - 1));
    advance(close + 1 - start);
    span.length = static_cast<int>(pos_ - start);
    constexpr std::string_view prefix = "type/";
    if (name.rfind(prefix, 0) == 0) {
      return Token{Tok::TypeName, name.substr(prefix.size()), span, {}};
    }
    return Token{Tok::Ident, name, span, {}};
  }
};

} // namespace

LexResult tokenize(std::string_view source, const std::string &file) {
  return Lexer(source, file).run();
}

const char *token_name(Tok kind) {
  switch (kind) {
  case Tok::End: return "end of input";
  case Tok::Ident: return "identifier";
  case Tok::Int: return "integer literal";
  case Tok::Float: return "float literal";
  case Tok::String: return "string literal";
  case Tok::TypeName: return "`type/...` name";
  case Tok::SpecComment: return "specification comment";
  case Tok::Assign: return "':='";
  case Tok::DColon: return "'::'";
  case Tok::DotDot: return "'..'";
  case Tok::Semi: return "';'";
  case Tok::Comma: return "','";
  case Tok::LParen: return "'('";
  case Tok::RParen: return "')'";
  case Tok::LBracket: return "'['";
  case Tok::RBracket: return "']'";
  case Tok::LBrace: return "'{'";
  case Tok::RBrace: return "'}'";
  case Tok::Plus: return "'+'";
  case Tok::Minus: return "'-'";
  case Tok::Star: return "'*'";
  case Tok::Slash: return "'/'";
  case Tok::Eq: return "'='";
  case Tok::Ne: return "'<>'";
  case Tok::Lt: return "'<'";
  case Tok::Le: return "'<='";
  case Tok::Gt: return "'>'";
  case Tok::Ge: return "'>='";
  case Tok::Quote: return "quote";
  default: break;
  }
  for (const auto &[word, tok] : keywords()) {
    if (tok == kind) return word.data();
  }
  return "token";
}

} // namespace minimaple
