// minimaple/typechecker.hpp - Flow-sensitive checking of programs and specs.
//
// Commands are checked under (pi, context, asgnset) and produce a
// CommandInfo (pi1, tauset, epsset, rflag). Every command node is annotated
// with the environment it was checked under and the info it produced.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "minimaple/ast.hpp"
#include "minimaple/diagnostic.hpp"
#include "minimaple/types.hpp"

namespace minimaple {

enum class Context { Global, Local };

struct CommandInfo {
  TypeEnv envAfter;
  std::vector<Type> retTypes;        // sorted, deduplicated
  std::set<std::string> exceptions;  // messages of reachable `error` commands
  bool aret = false;

  friend bool operator==(const CommandInfo &, const CommandInfo &) = default;
};

struct Annotation {
  TypeEnv envBefore;
  CommandInfo info;
  Context context = Context::Global;
};

// A procedure body as checked: entry environment and the body's info.
struct ProcBlock {
  const ProcDef *proc = nullptr;
  std::string name; // binding name when assigned directly, else empty
  TypeEnv entryEnv;
  CommandInfo body;
};

// Signature of a `define`d function.
struct DefineSig {
  std::size_t arity = 0;
  Type result;
};

struct CheckResult {
  std::map<const Cmd *, Annotation> annotations;
  std::vector<ProcBlock> procedures;
  std::vector<Diagnostic> diagnostics; // in source order
  CommandInfo top;                     // the top-level command sequence
  NamedTypeTable types;
  std::map<std::string, DefineSig> defines;

  const Annotation *at(const Cmd &cmd) const;
  bool ok() const { return count_severity(diagnostics, Severity::Error) == 0; }
};

// Checks declarations, then the command sequence from the empty environment
// in global context. The result refers to nodes of `program`, which must
// outlive it.
CheckResult check_program(const Program &program);

// Expression-level entry points for tests and tools. Identifiers unbound in
// `pi` follow global-context rules.
Type check_expr(const TypeEnv &pi, const Expr &e, std::vector<Diagnostic> *diags = nullptr);

struct BoolCheck {
  TypeEnv thenEnv; // delta for the branch where the condition holds
  TypeEnv elseEnv; // delta for the branch where it fails
  bool thenUnreachable = false;
  bool elseUnreachable = false;
  std::vector<Diagnostic> diagnostics;
};

BoolCheck check_bool_expr(const TypeEnv &pi, const Expr &e);

// Environment order used by the top-level dump: procedure-typed bindings
// first, the rest after, each group in first-binding order.
std::vector<TypeEnv::Entry> dump_order(const TypeEnv &env);

// `{integer, float}`
std::string format_type_set(const std::vector<Type> &types);
std::string format_exception_set(const std::set<std::string> &names);

} // namespace minimaple
