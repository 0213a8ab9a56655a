// parser.cpp - MiniMaple recursive-descent parser
#include "minimaple/parser.hpp"

#include <set>
#include <utility>

namespace minimaple {

namespace {

struct SyntaxError {
  Diagnostic diag;
};

using K = TypeExpr::Kind;

class Parser {
public:
  explicit Parser(std::span<const Token> toks) : toks_(toks) {
    if (toks_.empty()) {
      static const Token end{Tok::End, "", {}, {}};
      toks_ = std::span<const Token>(&end, 1);
    }
  }

  std::vector<Diagnostic> errors;

  Program program() {
    Program prog;
    while (at_declaration()) {
      try {
        prog.declarations.push_back(declaration());
      } catch (const SyntaxError &e) {
        errors.push_back(e.diag);
        synchronize();
      }
    }
    while (!at(Tok::End)) {
      try {
        prog.commands.push_back(command());
        end_of_command();
      } catch (const SyntaxError &e) {
        errors.push_back(e.diag);
        pending_spec_.reset();
        synchronize();
      }
    }
    return prog;
  }

  TypeExpr type_only() {
    TypeExpr t = type_expr();
    expect_end();
    return t;
  }

  Expr expr_only(std::optional<SpecContext> ctx) {
    spec_ = ctx;
    Expr e = expr();
    expect_end();
    return e;
  }

private:
  std::span<const Token> toks_;
  std::size_t pos_ = 0;
  std::optional<SpecContext> spec_;
  bool pattern_ = false;
  std::optional<ProcSpec> pending_spec_;

  // -- token helpers --------------------------------------------------------

  const Token &peek(std::size_t k = 0) const {
    std::size_t i = pos_ + k;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  bool at(Tok k) const { return peek().kind == k; }
  const Token &advance() {
    const Token &t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool accept(Tok k) {
    if (!at(k)) return false;
    advance();
    return true;
  }

  [[noreturn]] void fail(const Token &at_tok, std::string msg, std::string code = "syntax") const {
    throw SyntaxError{Diagnostic{Severity::Error, std::move(code), std::move(msg), at_tok.span}};
  }

  const Token &expect(Tok k, const char *context) {
    if (!at(k)) {
      fail(peek(), std::string("expected ") + token_name(k) + " " + context + ", found " +
                       describe(peek()));
    }
    return advance();
  }

  static std::string describe(const Token &t) {
    if (t.kind == Tok::Ident) return "identifier '" + t.text + "'";
    if (t.kind == Tok::Int || t.kind == Tok::Float) return "number " + t.text;
    return token_name(t.kind);
  }

  void expect_end() {
    if (!at(Tok::End)) fail(peek(), "unexpected " + describe(peek()));
  }

  std::string ident(const char *context) { return expect(Tok::Ident, context).text; }

  static Loc loc_of(const Token &t) { return Loc{t.span}; }

  void synchronize() {
    while (!at(Tok::End)) {
      if (advance().kind == Tok::Semi) return;
    }
  }

  bool at_body_end() const {
    Tok k = peek().kind;
    return k == Tok::KwEnd || k == Tok::KwElse || k == Tok::KwElif || k == Tok::End;
  }

  void end_of_command() {
    if (accept(Tok::Semi)) return;
    if (at_body_end()) return;
    fail(peek(), "expected ';' after command, found " + describe(peek()));
  }

  // -- declarations ---------------------------------------------------------

  bool at_declaration() const {
    switch (peek().kind) {
    case Tok::KwDefine:
    case Tok::KwAssume:
    case Tok::TypeName:
      return true;
    case Tok::Ident:
      return at_predicate_decl();
    default:
      return false;
    }
  }

  // I(I1,...,In);
  bool at_predicate_decl() const {
    if (peek(1).kind != Tok::LParen) return false;
    std::size_t k = 2;
    if (peek(k).kind == Tok::RParen) return peek(k + 1).kind == Tok::Semi;
    for (;;) {
      if (peek(k).kind != Tok::Ident) return false;
      ++k;
      if (peek(k).kind == Tok::RParen) return peek(k + 1).kind == Tok::Semi;
      if (peek(k).kind != Tok::Comma) return false;
      ++k;
    }
  }

  Decl declaration() {
    const Token &start = peek();
    Decl d{AbstractTypeDecl{}, loc_of(start)};
    switch (start.kind) {
    case Tok::KwDefine: {
      advance();
      expect(Tok::LParen, "after 'define'");
      Define def;
      def.name = ident("naming the defined function");
      while (accept(Tok::Comma)) def.rules.push_back(define_rule(def.name));
      if (def.rules.empty()) fail(peek(), "define needs at least one rule");
      expect(Tok::RParen, "closing define");
      d.node = std::move(def);
      break;
    }
    case Tok::TypeName: {
      std::string name = advance().text;
      if (accept(Tok::Assign)) {
        d.node = NamedTypeDecl{name, type_expr()};
      } else {
        d.node = AbstractTypeDecl{name};
      }
      break;
    }
    case Tok::KwAssume: {
      advance();
      expect(Tok::LParen, "after 'assume'");
      d.node = Assume{spec_expr(SpecContext::Declaration)};
      expect(Tok::RParen, "closing assume");
      break;
    }
    default: {
      PredicateDecl pred;
      pred.name = advance().text;
      expect(Tok::LParen, "in predicate declaration");
      if (!at(Tok::RParen)) {
        do {
          pred.params.push_back(ident("as predicate parameter"));
        } while (accept(Tok::Comma));
      }
      expect(Tok::RParen, "closing predicate declaration");
      d.node = std::move(pred);
      break;
    }
    }
    expect(Tok::Semi, "after declaration");
    return d;
  }

  DefineRule define_rule(const std::string &name) {
    const Token &head = peek();
    if (head.kind != Tok::Ident || head.text != name) {
      fail(head, "define rule must start with '" + name + "('");
    }
    auto saved_spec = spec_;
    spec_ = SpecContext::Declaration;
    pattern_ = true;
    Expr pattern = postfix();
    pattern_ = false;
    if (!pattern.as<Call>()) fail(head, "define rule pattern must be an application of " + name);
    expect(Tok::Eq, "between rule pattern and body");
    Expr body = expr();
    spec_ = saved_spec;
    return DefineRule{std::move(pattern), std::move(body)};
  }

  // -- specification comments -----------------------------------------------

  enum class SpecKind { Proc, Loop };

  SpecKind spec_comment_kind(const Token &tok) const {
    const auto &inner = tok.inner;
    Tok first = inner.empty() ? Tok::End : inner.front().kind;
    if (first == Tok::KwRequires) return SpecKind::Proc;
    if (first == Tok::KwInvariant) return SpecKind::Loop;
    fail(tok, "specification comment must start with 'requires' or 'invariant'", "spec-syntax");
  }

  ProcSpec proc_spec(const Token &tok) {
    Parser sub(tok.inner);
    ProcSpec spec;
    spec.loc = loc_of(tok);
    sub.expect(Tok::KwRequires, "in procedure specification");
    spec.precondition = sub.spec_expr(SpecContext::Requires);
    sub.expect(Tok::Semi, "after requires clause");
    if (sub.accept(Tok::KwGlobal)) {
      do {
        spec.globals.push_back(sub.ident("in global clause"));
      } while (sub.accept(Tok::Comma));
      sub.expect(Tok::Semi, "after global clause");
    }
    sub.expect(Tok::KwEnsures, "in procedure specification");
    spec.postcondition = sub.spec_expr(SpecContext::Ensures);
    sub.expect(Tok::Semi, "after ensures clause");
    if (sub.at(Tok::Ident) && sub.peek().text == "exception") {
      sub.advance();
      spec.exceptional = sub.spec_expr(SpecContext::Exceptional);
      sub.expect(Tok::Semi, "after exception clause");
    }
    sub.expect_end();
    errors.insert(errors.end(), sub.errors.begin(), sub.errors.end());
    return spec;
  }

  LoopSpec loop_spec(const Token &tok) {
    Parser sub(tok.inner);
    LoopSpec spec{Expr{BoolLit{true}, {}}, Expr{IntLit{"0"}, {}}, loc_of(tok)};
    sub.expect(Tok::KwInvariant, "in loop specification");
    spec.invariant = sub.spec_expr(SpecContext::Invariant);
    sub.expect(Tok::Semi, "after invariant clause");
    sub.expect(Tok::KwDecreases, "in loop specification");
    spec.decreases = sub.spec_expr(SpecContext::Decreases);
    sub.expect(Tok::Semi, "after decreases clause");
    sub.expect_end();
    return spec;
  }

  Expr spec_expr(SpecContext ctx) {
    auto saved = spec_;
    spec_ = ctx;
    Expr e = expr();
    spec_ = saved;
    return e;
  }

  // -- commands -------------------------------------------------------------

  Body body() {
    Body out;
    while (!at_body_end()) {
      try {
        out.push_back(command());
        end_of_command();
      } catch (const SyntaxError &e) {
        errors.push_back(e.diag);
        pending_spec_.reset();
        synchronize();
      }
    }
    return out;
  }

  Cmd command() {
    if (at(Tok::SpecComment)) {
      const Token &tok = advance();
      if (spec_comment_kind(tok) == SpecKind::Loop) {
        fail(tok, "loop specification must be the first element of a loop body", "spec-detached");
      }
      pending_spec_ = proc_spec(tok);
      Cmd c = command();
      if (pending_spec_) {
        pending_spec_.reset();
        fail(tok, "procedure specification is not followed by a procedure", "spec-detached");
      }
      return c;
    }

    const Token &start = peek();
    Loc loc = loc_of(start);
    switch (start.kind) {
    case Tok::KwIf:
      return Cmd{if_command(), loc};
    case Tok::KwFor:
    case Tok::KwWhile:
      return Cmd{loop_command(), loc};
    case Tok::KwReturn: {
      advance();
      Return r;
      if (!at(Tok::Semi) && !at_body_end()) r.value = expr();
      return Cmd{std::move(r), loc};
    }
    case Tok::KwError: {
      advance();
      return Cmd{ErrorCmd{expect(Tok::String, "after 'error'").text}, loc};
    }
    case Tok::KwAssert: {
      advance();
      expect(Tok::LParen, "after ASSERT");
      Assert a{spec_expr(SpecContext::Assertion), std::nullopt};
      if (accept(Tok::Comma)) a.label = expect(Tok::String, "as assertion label").text;
      expect(Tok::RParen, "closing ASSERT");
      return Cmd{std::move(a), loc};
    }
    case Tok::Ident:
      if (peek(1).kind == Tok::Assign || peek(1).kind == Tok::Comma) {
        return Cmd{assignment(), loc};
      }
      break;
    default:
      break;
    }

    Expr e = expr();
    if (!e.as<Call>()) fail(start, "expression used as a command must be a procedure call");
    return Cmd{ExprCmd{std::move(e)}, loc};
  }

  Assign assignment() {
    Assign a;
    const Token &first = peek();
    do {
      a.targets.push_back(ident("as assignment target"));
    } while (accept(Tok::Comma));
    expect(Tok::Assign, "in assignment");
    do {
      a.sources.push_back(expr());
    } while (accept(Tok::Comma));
    if (a.targets.size() != a.sources.size()) {
      fail(first, "assignment has " + std::to_string(a.targets.size()) + " targets but " +
                      std::to_string(a.sources.size()) + " values");
    }
    return a;
  }

  If if_command() {
    If node;
    expect(Tok::KwIf, "");
    Expr cond = expr();
    expect(Tok::KwThen, "after if condition");
    node.branches.push_back(Branch{std::move(cond), body()});
    while (accept(Tok::KwElif)) {
      Expr c = expr();
      expect(Tok::KwThen, "after elif condition");
      node.branches.push_back(Branch{std::move(c), body()});
    }
    if (accept(Tok::KwElse)) node.elseBody = body();
    expect(Tok::KwEnd, "closing if");
    expect(Tok::KwIf, "after 'end'");
    return node;
  }

  Loop loop_command() {
    Loop loop;
    if (accept(Tok::KwFor)) {
      loop.var = ident("as loop variable");
      for (bool progress = true; progress;) {
        progress = false;
        auto clause = [&](Tok kw, std::optional<Expr> &slot, const char *name) {
          if (!at(kw)) return;
          const Token &t = advance();
          if (slot) fail(t, std::string("duplicate '") + name + "' clause");
          slot = expr();
          progress = true;
        };
        clause(Tok::KwFrom, loop.from, "from");
        clause(Tok::KwBy, loop.by, "by");
        clause(Tok::KwTo, loop.to, "to");
      }
    }
    if (accept(Tok::KwWhile)) loop.whileCond = expr();
    expect(Tok::KwDo, "to open loop body");
    if (at(Tok::SpecComment)) {
      const Token &tok = advance();
      if (spec_comment_kind(tok) != SpecKind::Loop) {
        fail(tok, "procedure specification cannot annotate a loop", "spec-detached");
      }
      loop.spec = loop_spec(tok);
    }
    loop.body = body();
    expect(Tok::KwEnd, "closing loop");
    expect(Tok::KwDo, "after 'end'");
    return loop;
  }

  // -- procedures -----------------------------------------------------------

  ProcDef proc_def() {
    ProcDef p;
    if (pending_spec_) {
      p.spec = std::move(*pending_spec_);
      pending_spec_.reset();
    }
    expect(Tok::KwProc, "");
    expect(Tok::LParen, "after 'proc'");
    if (!at(Tok::RParen)) {
      do {
        const Token &name = expect(Tok::Ident, "as parameter name");
        expect(Tok::DColon, "after parameter name (parameters must be type annotated)");
        p.params.push_back(Param{name.text, type_expr(), loc_of(name)});
      } while (accept(Tok::Comma));
    }
    expect(Tok::RParen, "closing parameter list");
    expect(Tok::DColon, "before procedure return type");
    p.returnType = type_expr();
    accept(Tok::Semi);
    for (;;) {
      if (accept(Tok::KwGlobal)) {
        do {
          p.globals.push_back(ident("in global declaration"));
        } while (accept(Tok::Comma));
        expect(Tok::Semi, "after global declaration");
      } else if (accept(Tok::KwLocal)) {
        do {
          const Token &name = expect(Tok::Ident, "in local declaration");
          LocalDecl decl{name.text, std::nullopt, std::nullopt, loc_of(name)};
          if (accept(Tok::DColon)) decl.type = type_expr();
          if (accept(Tok::Assign)) decl.init = Box<Expr>(expr());
          p.locals.push_back(std::move(decl));
        } while (accept(Tok::Comma));
        expect(Tok::Semi, "after local declaration");
      } else {
        break;
      }
    }
    // Nested procedures do not inherit the enclosing pending spec.
    p.body = body();
    expect(Tok::KwEnd, "closing procedure");
    expect(Tok::KwProc, "after 'end'");
    return p;
  }

  // -- expressions ----------------------------------------------------------

  Expr make(Expr::Node node, const Token &at_tok) { return Expr{std::move(node), loc_of(at_tok)}; }

  static Expr binary(BinaryOp op, Expr lhs, Expr rhs) {
    Loc loc = lhs.loc;
    return Expr{Binary{op, Box<Expr>(std::move(lhs)), Box<Expr>(std::move(rhs))}, loc};
  }

  Expr expr() { return equivalent(); }

  Expr equivalent() {
    Expr lhs = implies();
    while (at(Tok::KwEquivalent)) {
      advance();
      lhs = binary(BinaryOp::Equivalent, std::move(lhs), implies());
    }
    return lhs;
  }

  Expr implies() {
    Expr lhs = disjunction();
    while (at(Tok::KwImplies)) {
      advance();
      lhs = binary(BinaryOp::Implies, std::move(lhs), disjunction());
    }
    return lhs;
  }

  Expr disjunction() {
    Expr lhs = conjunction();
    while (at(Tok::KwOr)) {
      advance();
      lhs = binary(BinaryOp::Or, std::move(lhs), conjunction());
    }
    return lhs;
  }

  Expr conjunction() {
    Expr lhs = negation();
    while (at(Tok::KwAnd)) {
      advance();
      lhs = binary(BinaryOp::And, std::move(lhs), negation());
    }
    return lhs;
  }

  Expr negation() {
    if (at(Tok::KwNot)) {
      const Token &op = advance();
      return make(Unary{UnaryOp::Not, Box<Expr>(negation())}, op);
    }
    return comparison();
  }

  static std::optional<BinaryOp> comparison_op(Tok k) {
    switch (k) {
    case Tok::Eq: return BinaryOp::Eq;
    case Tok::Ne: return BinaryOp::Ne;
    case Tok::Lt: return BinaryOp::Lt;
    case Tok::Le: return BinaryOp::Le;
    case Tok::Gt: return BinaryOp::Gt;
    case Tok::Ge: return BinaryOp::Ge;
    default: return std::nullopt;
    }
  }

  Expr comparison() {
    Expr lhs = additive();
    if (auto op = comparison_op(peek().kind)) {
      advance();
      lhs = binary(*op, std::move(lhs), additive());
      if (comparison_op(peek().kind)) fail(peek(), "comparison operators do not chain");
    }
    return lhs;
  }

  Expr additive() {
    Expr lhs = at(Tok::Minus) ? negated() : multiplicative();
    for (;;) {
      if (at(Tok::Plus)) {
        advance();
        lhs = binary(BinaryOp::Add, std::move(lhs), multiplicative());
      } else if (at(Tok::Minus)) {
        advance();
        lhs = binary(BinaryOp::Sub, std::move(lhs), multiplicative());
      } else {
        return lhs;
      }
    }
  }

  Expr negated() {
    const Token &op = advance();
    return make(Unary{UnaryOp::Neg, Box<Expr>(multiplicative())}, op);
  }

  Expr multiplicative() {
    Expr lhs = postfix();
    for (;;) {
      BinaryOp op;
      if (at(Tok::Star)) {
        op = BinaryOp::Mul;
      } else if (at(Tok::Slash)) {
        op = BinaryOp::Div;
      } else if (at(Tok::KwMod)) {
        op = BinaryOp::Mod;
      } else {
        return lhs;
      }
      advance();
      lhs = binary(op, std::move(lhs), postfix());
    }
  }

  Expr postfix() {
    Expr e = primary();
    while (at(Tok::LBracket)) {
      advance();
      Expr idx = expr();
      expect(Tok::RBracket, "closing index");
      Loc loc = e.loc;
      e = Expr{Index{Box<Expr>(std::move(e)), Box<Expr>(std::move(idx))}, loc};
    }
    return e;
  }

  std::vector<Expr> expr_list(Tok close, const char *context) {
    std::vector<Expr> items;
    if (!at(close)) {
      do {
        items.push_back(expr());
      } while (accept(Tok::Comma));
    }
    expect(close, context);
    return items;
  }

  void require_spec(const Token &t, const char *what) const {
    if (!spec_) fail(t, std::string(what) + " is only allowed in specifications", "spec-only");
  }

  Expr primary() {
    const Token &t = peek();
    switch (t.kind) {
    case Tok::Int:
      advance();
      return make(IntLit{t.text}, t);
    case Tok::Float:
      advance();
      return make(FloatLit{t.text}, t);
    case Tok::String:
      advance();
      return make(StringLit{t.text}, t);
    case Tok::KwTrue:
    case Tok::KwFalse:
      advance();
      return make(BoolLit{t.kind == Tok::KwTrue}, t);
    case Tok::Ident: {
      advance();
      if (pattern_ && at(Tok::DColon)) {
        advance();
        return make(TypedVar{t.text, type_expr()}, t);
      }
      if (accept(Tok::LParen)) {
        return make(Call{t.text, expr_list(Tok::RParen, "closing argument list")}, t);
      }
      return make(Ident{t.text}, t);
    }
    case Tok::KwType: {
      advance();
      expect(Tok::LParen, "after 'type'");
      Expr subject = expr();
      expect(Tok::Comma, "in type test");
      TypeExpr ty = type_expr();
      expect(Tok::RParen, "closing type test");
      return make(TypeTest{Box<Expr>(std::move(subject)), std::move(ty)}, t);
    }
    case Tok::LParen: {
      advance();
      Expr inner = expr();
      expect(Tok::RParen, "closing parenthesis");
      return inner;
    }
    case Tok::LBracket:
      advance();
      return make(ListLit{expr_list(Tok::RBracket, "closing list")}, t);
    case Tok::LBrace:
      advance();
      return make(SetLit{expr_list(Tok::RBrace, "closing set")}, t);
    case Tok::Quote: {
      advance();
      Expr inner = expr();
      expect(Tok::Quote, "closing unevaluation quote");
      return make(Uneval{Box<Expr>(std::move(inner))}, t);
    }
    case Tok::SpecComment: {
      // `name := (*@ ... @*) proc ...`
      advance();
      if (spec_comment_kind(t) != SpecKind::Proc || !at(Tok::KwProc)) {
        fail(t, "specification comment in an expression must precede 'proc'", "spec-detached");
      }
      pending_spec_ = proc_spec(t);
      return primary();
    }
    case Tok::KwProc: {
      // The body of a nested procedure is program text even inside specs.
      auto saved = spec_;
      spec_.reset();
      ProcDef p = proc_def();
      spec_ = saved;
      return make(std::move(p), t);
    }
    case Tok::KwForall:
    case Tok::KwExists: {
      require_spec(t, "quantifier");
      advance();
      expect(Tok::LParen, "after quantifier");
      std::string binder = ident("as quantifier variable");
      expect(Tok::DColon, "after quantifier variable (quantified variables are typed)");
      TypeExpr ty = type_expr();
      expect(Tok::Comma, "after quantifier binder");
      Expr body = expr();
      expect(Tok::RParen, "closing quantifier");
      QuantKind kind = t.kind == Tok::KwForall ? QuantKind::Forall : QuantKind::Exists;
      return make(Quantified{kind, binder, std::move(ty), Box<Expr>(std::move(body))}, t);
    }
    case Tok::KwAdd:
    case Tok::KwMul:
    case Tok::KwMin:
    case Tok::KwMax:
    case Tok::KwSeq:
      require_spec(t, "numerical quantifier");
      return num_quant();
    case Tok::KwResult:
      require_spec(t, "RESULT");
      if (spec_ != SpecContext::Ensures) {
        fail(t, "RESULT may only appear in an ensures clause", "spec-result");
      }
      advance();
      return make(ResultRef{}, t);
    case Tok::KwOld: {
      require_spec(t, "OLD");
      if (spec_ != SpecContext::Ensures && spec_ != SpecContext::Invariant) {
        fail(t, "OLD may only appear in ensures or invariant clauses", "spec-old");
      }
      advance();
      return make(OldRef{ident("after OLD")}, t);
    }
    default:
      fail(t, "expected expression, found " + describe(t));
    }
  }

  Expr num_quant() {
    const Token &t = advance();
    NumQuantKind kind = NumQuantKind::Add;
    switch (t.kind) {
    case Tok::KwMul: kind = NumQuantKind::Mul; break;
    case Tok::KwMin: kind = NumQuantKind::Min; break;
    case Tok::KwMax: kind = NumQuantKind::Max; break;
    case Tok::KwSeq: kind = NumQuantKind::Seq; break;
    default: break;
    }
    expect(Tok::LParen, "after numerical quantifier");
    Expr term = expr();
    expect(Tok::Comma, "after quantifier term");
    std::string var = ident("as range variable");
    std::variant<InRange, IntervalRange> range = InRange{Box<Expr>(Expr{BoolLit{}, {}})};
    if (accept(Tok::KwIn)) {
      range = InRange{Box<Expr>(expr())};
    } else if (accept(Tok::Eq)) {
      Expr lo = additive();
      expect(Tok::DotDot, "in range 'v = lo..hi'");
      Expr hi = additive();
      range = IntervalRange{Box<Expr>(std::move(lo)), Box<Expr>(std::move(hi))};
    } else {
      fail(peek(), "malformed range: expected 'in' or '=' after range variable", "spec-range");
    }
    std::optional<Box<Expr>> filter;
    if (accept(Tok::Comma)) filter = Box<Expr>(expr());
    expect(Tok::RParen, "closing numerical quantifier");
    return make(NumQuant{kind, Box<Expr>(std::move(term)), var, std::move(range), std::move(filter)}, t);
  }

  // -- types ----------------------------------------------------------------

  std::vector<TypeExpr> type_list(Tok close, const char *context) {
    std::vector<TypeExpr> args;
    if (!at(close)) {
      do {
        args.push_back(type_expr());
      } while (accept(Tok::Comma));
    }
    expect(close, context);
    return args;
  }

  TypeExpr type_expr() {
    const Token &t = peek();
    Loc loc = loc_of(t);
    auto leaf = [&](K k) {
      advance();
      TypeExpr ty = TypeExpr::leaf(k);
      ty.loc = loc;
      return ty;
    };
    switch (t.kind) {
    case Tok::KwInteger: return leaf(K::Integer);
    case Tok::KwBoolean: return leaf(K::Boolean);
    case Tok::KwStringT: return leaf(K::String);
    case Tok::KwFloatT: return leaf(K::Float);
    case Tok::KwRational: return leaf(K::Rational);
    case Tok::KwAnything: return leaf(K::Anything);
    case Tok::KwSymbol: return leaf(K::Symbol);
    case Tok::KwVoid: return leaf(K::Void);
    case Tok::KwUneval: return leaf(K::Uneval);
    case Tok::LBrace: {
      advance();
      auto args = type_list(Tok::RBrace, "closing set type");
      if (args.size() != 1) fail(t, "set type takes exactly one element type", "type-arity");
      return TypeExpr{K::Set, {}, std::move(args), loc};
    }
    case Tok::KwList: {
      advance();
      expect(Tok::LParen, "after 'list'");
      auto args = type_list(Tok::RParen, "closing list type");
      if (args.size() != 1) fail(t, "list type takes exactly one element type", "type-arity");
      return TypeExpr{K::List, {}, std::move(args), loc};
    }
    case Tok::LBracket: {
      advance();
      return TypeExpr{K::Record, {}, type_list(Tok::RBracket, "closing record type"), loc};
    }
    case Tok::KwProcedure: {
      advance();
      expect(Tok::LBracket, "after 'procedure'");
      TypeExpr ret = type_expr();
      expect(Tok::RBracket, "closing procedure return type");
      expect(Tok::LParen, "before procedure argument types");
      std::vector<TypeExpr> args{std::move(ret)};
      for (auto &a : type_list(Tok::RParen, "closing procedure argument types")) {
        args.push_back(std::move(a));
      }
      return TypeExpr{K::Procedure, {}, std::move(args), loc};
    }
    case Tok::KwOrType: {
      advance();
      expect(Tok::LParen, "after 'Or'");
      auto args = type_list(Tok::RParen, "closing Or");
      if (args.size() < 2) fail(t, "Or needs at least two alternatives", "type-arity");
      return TypeExpr{K::Or, {}, std::move(args), loc};
    }
    case Tok::Ident: {
      advance();
      if (accept(Tok::LParen)) {
        return TypeExpr{K::Tagged, t.text, type_list(Tok::RParen, "closing tagged type"), loc};
      }
      return TypeExpr{K::Named, t.text, {}, loc};
    }
    default:
      fail(t, "expected type, found " + describe(t));
    }
  }
};

template <class T, class F>
Parsed<T> run_parser(std::span<const Token> tokens, F &&body) {
  Parser p(tokens);
  Parsed<T> out;
  try {
    out.value = body(p);
  } catch (const SyntaxError &e) {
    out.errors.push_back(e.diag);
  }
  for (auto &d : p.errors) out.errors.push_back(std::move(d));
  sort_by_position(out.errors);
  return out;
}

template <class T>
Parsed<T> with_lex_errors(const LexResult &lexed, Parsed<T> parsed) {
  if (!lexed.errors.empty()) {
    parsed.errors.insert(parsed.errors.begin(), lexed.errors.begin(), lexed.errors.end());
    sort_by_position(parsed.errors);
  }
  return parsed;
}

} // namespace

Parsed<Program> parse_program(std::span<const Token> tokens) {
  return run_parser<Program>(tokens, [](Parser &p) { return p.program(); });
}

Parsed<Program> parse_source(std::string_view source, const std::string &file) {
  LexResult lexed = tokenize(source, file);
  return with_lex_errors(lexed, parse_program(lexed.tokens));
}

Parsed<TypeExpr> parse_type_expr(std::span<const Token> tokens) {
  return run_parser<TypeExpr>(tokens, [](Parser &p) { return p.type_only(); });
}

Parsed<Expr> parse_spec_expr(std::span<const Token> tokens, SpecContext ctx) {
  return run_parser<Expr>(tokens, [ctx](Parser &p) { return p.expr_only(ctx); });
}

Parsed<Expr> parse_expr(std::span<const Token> tokens) {
  return run_parser<Expr>(tokens, [](Parser &p) { return p.expr_only(std::nullopt); });
}

Parsed<TypeExpr> parse_type_text(std::string_view text) {
  LexResult lexed = tokenize(text);
  return with_lex_errors(lexed, parse_type_expr(lexed.tokens));
}

Parsed<Expr> parse_spec_text(std::string_view text, SpecContext ctx) {
  LexResult lexed = tokenize(text);
  return with_lex_errors(lexed, parse_spec_expr(lexed.tokens, ctx));
}

Parsed<Expr> parse_expr_text(std::string_view text) {
  LexResult lexed = tokenize(text);
  return with_lex_errors(lexed, parse_expr(lexed.tokens));
}

} // namespace minimaple
