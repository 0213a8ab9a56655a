// minimaple/ast.hpp - Syntax trees for MiniMaple programs and their
// embedded specifications.
//
// Nodes are plain values. Recursive edges go through Box<T>, which deep
// copies and compares by content, so every node supports structural ==.
// Source positions never take part in that comparison.
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace minimaple {

struct SourceSpan {
  std::string file;
  int line = 1;
  int column = 1;
  int length = 0;

  friend bool operator==(const SourceSpan &, const SourceSpan &) = default;
};

// Position slot embedded in AST nodes. Compares equal to any other Loc.
struct Loc {
  SourceSpan span;

  friend bool operator==(const Loc &, const Loc &) { return true; }
};

template <class T>
class Box {
public:
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}
  Box(const Box &other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Box(Box &&) noexcept = default;
  Box &operator=(const Box &other) {
    if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Box &operator=(Box &&) noexcept = default;

  const T &operator*() const { return *ptr_; }
  const T *operator->() const { return ptr_.get(); }
  T &operator*() { return *ptr_; }
  T *operator->() { return ptr_.get(); }

  friend bool operator==(const Box &a, const Box &b) { return *a.ptr_ == *b.ptr_; }

private:
  std::unique_ptr<T> ptr_;
};

// ---------------------------------------------------------------------------
// Type annotations

struct TypeExpr {
  enum class Kind {
    Integer,
    Boolean,
    String,
    Float,
    Rational,
    Anything,
    Symbol,
    Void,
    Uneval,
    Set,       // {T}
    List,      // list(T)
    Record,    // [T1,...,Tn]
    Procedure, // procedure[R](T1,...,Tn); args[0] is R
    Tagged,    // I(T1,...,Tn)
    Or,        // Or(T1,...,Tn)
    Named,     // I
  };

  Kind kind = Kind::Anything;
  std::string name;
  std::vector<TypeExpr> args;
  Loc loc;

  static TypeExpr leaf(Kind k) { return TypeExpr{k, {}, {}, {}}; }

  friend bool operator==(const TypeExpr &, const TypeExpr &) = default;
};

// ---------------------------------------------------------------------------
// Expressions (program and specification)

struct Expr;
struct Cmd;
struct ProcSpec;
using Body = std::vector<Cmd>;

enum class UnaryOp { Neg, Not };

enum class BinaryOp {
  Add,
  Sub,
  Mul,
  Div,
  Mod,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  And,
  Or,
  Implies,
  Equivalent,
};

struct IntLit {
  std::string digits;
  friend bool operator==(const IntLit &, const IntLit &) = default;
};

struct FloatLit {
  std::string text; // as written, e.g. "8.54"
  friend bool operator==(const FloatLit &, const FloatLit &) = default;
};

struct StringLit {
  std::string value;
  friend bool operator==(const StringLit &, const StringLit &) = default;
};

struct BoolLit {
  bool value = false;
  friend bool operator==(const BoolLit &, const BoolLit &) = default;
};

struct Ident {
  std::string name;
  friend bool operator==(const Ident &, const Ident &) = default;
};

// `[e1,...,en]`. Maple uses one bracket form for lists and records; the
// type checker decides which from context.
struct ListLit {
  std::vector<Expr> items;
  friend bool operator==(const ListLit &, const ListLit &) = default;
};

struct SetLit {
  std::vector<Expr> items;
  friend bool operator==(const SetLit &, const SetLit &) = default;
};

struct Index {
  Box<Expr> base;
  Box<Expr> index;
  friend bool operator==(const Index &, const Index &) = default;
};

struct Call {
  std::string callee;
  std::vector<Expr> args;
  friend bool operator==(const Call &, const Call &) = default;
};

struct TypeTest {
  Box<Expr> subject;
  TypeExpr type;
  friend bool operator==(const TypeTest &, const TypeTest &) = default;
};

struct Unary {
  UnaryOp op;
  Box<Expr> operand;
  friend bool operator==(const Unary &, const Unary &) = default;
};

struct Binary {
  BinaryOp op;
  Box<Expr> lhs;
  Box<Expr> rhs;
  friend bool operator==(const Binary &, const Binary &) = default;
};

struct Uneval {
  Box<Expr> quoted;
  friend bool operator==(const Uneval &, const Uneval &) = default;
};

struct Param {
  std::string name;
  TypeExpr type;
  Loc loc;
  friend bool operator==(const Param &, const Param &) = default;
};

struct LocalDecl {
  std::string name;
  std::optional<TypeExpr> type;
  std::optional<Box<Expr>> init;
  Loc loc;
  friend bool operator==(const LocalDecl &, const LocalDecl &) = default;
};

struct ProcDef {
  std::vector<Param> params;
  TypeExpr returnType;
  std::vector<std::string> globals;
  std::vector<LocalDecl> locals;
  std::optional<Box<ProcSpec>> spec;
  Body body;
  friend bool operator==(const ProcDef &, const ProcDef &) = default;
};

// `n::integer` inside a define rule pattern.
struct TypedVar {
  std::string name;
  TypeExpr type;
  friend bool operator==(const TypedVar &, const TypedVar &) = default;
};

enum class QuantKind { Forall, Exists };

struct Quantified {
  QuantKind kind;
  std::string binder;
  TypeExpr binderType;
  Box<Expr> body;
  friend bool operator==(const Quantified &, const Quantified &) = default;
};

enum class NumQuantKind { Add, Mul, Min, Max, Seq };

// `v in E`
struct InRange {
  Box<Expr> source;
  friend bool operator==(const InRange &, const InRange &) = default;
};

// `v = lo..hi`
struct IntervalRange {
  Box<Expr> low;
  Box<Expr> high;
  friend bool operator==(const IntervalRange &, const IntervalRange &) = default;
};

struct NumQuant {
  NumQuantKind kind;
  Box<Expr> term;
  std::string var;
  std::variant<InRange, IntervalRange> range;
  std::optional<Box<Expr>> filter;
  friend bool operator==(const NumQuant &, const NumQuant &) = default;
};

struct ResultRef {
  friend bool operator==(const ResultRef &, const ResultRef &) = default;
};

struct OldRef {
  std::string name;
  friend bool operator==(const OldRef &, const OldRef &) = default;
};

struct Expr {
  using Node = std::variant<IntLit, FloatLit, StringLit, BoolLit, Ident, ListLit, SetLit, Index,
                            Call, TypeTest, Unary, Binary, Uneval, ProcDef, TypedVar, Quantified,
                            NumQuant, ResultRef, OldRef>;
  Node node;
  Loc loc;

  template <class T>
  const T *as() const {
    return std::get_if<T>(&node);
  }

  friend bool operator==(const Expr &, const Expr &) = default;
};

// ---------------------------------------------------------------------------
// Specifications attached to code

struct ProcSpec {
  Expr precondition;  // requires
  std::vector<std::string> globals;
  Expr postcondition; // ensures
  std::optional<Expr> exceptional;
  Loc loc;
  friend bool operator==(const ProcSpec &, const ProcSpec &) = default;
};

struct LoopSpec {
  Expr invariant;
  Expr decreases;
  Loc loc;
  friend bool operator==(const LoopSpec &, const LoopSpec &) = default;
};

// ---------------------------------------------------------------------------
// Commands

struct Assign {
  std::vector<std::string> targets;
  std::vector<Expr> sources;
  friend bool operator==(const Assign &, const Assign &) = default;
};

struct Branch {
  Expr cond;
  Body body;
  friend bool operator==(const Branch &, const Branch &) = default;
};

struct If {
  std::vector<Branch> branches;
  std::optional<Body> elseBody;
  friend bool operator==(const If &, const If &) = default;
};

// for-from-by-to-while-do; a bare `while E do` loop has no variable.
struct Loop {
  std::optional<std::string> var;
  std::optional<Expr> from;
  std::optional<Expr> by;
  std::optional<Expr> to;
  std::optional<Expr> whileCond;
  std::optional<LoopSpec> spec;
  Body body;
  friend bool operator==(const Loop &, const Loop &) = default;
};

struct Return {
  std::optional<Expr> value;
  friend bool operator==(const Return &, const Return &) = default;
};

struct ErrorCmd {
  std::string message;
  friend bool operator==(const ErrorCmd &, const ErrorCmd &) = default;
};

struct ExprCmd {
  Expr expr;
  friend bool operator==(const ExprCmd &, const ExprCmd &) = default;
};

struct Assert {
  Expr cond;
  std::optional<std::string> label;
  friend bool operator==(const Assert &, const Assert &) = default;
};

struct Cmd {
  using Node = std::variant<Assign, If, Loop, Return, ErrorCmd, ExprCmd, Assert>;
  Node node;
  Loc loc;

  template <class T>
  const T *as() const {
    return std::get_if<T>(&node);
  }

  friend bool operator==(const Cmd &, const Cmd &) = default;
};

// ---------------------------------------------------------------------------
// Top-level declarations

struct DefineRule {
  Expr pattern; // a Call whose arguments are literals or TypedVars
  Expr body;
  friend bool operator==(const DefineRule &, const DefineRule &) = default;
};

struct Define {
  std::string name;
  std::vector<DefineRule> rules;
  friend bool operator==(const Define &, const Define &) = default;
};

struct NamedTypeDecl {
  std::string name;
  TypeExpr type;
  friend bool operator==(const NamedTypeDecl &, const NamedTypeDecl &) = default;
};

struct AbstractTypeDecl {
  std::string name;
  friend bool operator==(const AbstractTypeDecl &, const AbstractTypeDecl &) = default;
};

struct Assume {
  Expr fact;
  friend bool operator==(const Assume &, const Assume &) = default;
};

struct PredicateDecl {
  std::string name;
  std::vector<std::string> params;
  friend bool operator==(const PredicateDecl &, const PredicateDecl &) = default;
};

struct Decl {
  using Node = std::variant<Define, NamedTypeDecl, AbstractTypeDecl, Assume, PredicateDecl>;
  Node node;
  Loc loc;
  friend bool operator==(const Decl &, const Decl &) = default;
};

struct Program {
  std::vector<Decl> declarations;
  Body commands;
  friend bool operator==(const Program &, const Program &) = default;
};

const char *to_string(BinaryOp op);
const char *to_string(NumQuantKind kind);
const char *command_kind(const Cmd &cmd);
const char *expr_kind(const Expr &expr);

// Direct subexpressions in source order. Procedure bodies are not entered.
std::vector<const Expr *> subexpressions(const Expr &e);

} // namespace minimaple
