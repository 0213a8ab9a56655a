// minimaple/interpreter.hpp - Reference interpreter with runtime contracts.
//
// Commands relate a pre-state to a post-state or to an error. Errors are
// absorbing: every entry point returns an error input unchanged.
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "minimaple/ast.hpp"
#include "minimaple/types.hpp"
#include "minimaple/value.hpp"

namespace minimaple {

struct RunOptions {
  bool checkAssertions = true;
  bool checkLoopSpecs = false;
  bool checkProcContracts = false;
  std::uint64_t stepLimit = 10'000'000;
  std::uint64_t quantifierBound = 1'000'000;
  bool traceAll = false; // also trace assignments inside procedures
};

struct TraceEvent {
  std::string event; // assign, call, return, assert, invariant, variant, requires, ensures, error
  SourceSpan span;
  std::string detail;
};

// One evaluation of an assertion or contract clause.
struct Outcome {
  std::string kind; // assert, invariant, variant, requires, ensures
  SourceSpan span;
  bool passed = false;
  std::string detail; // the variant's value, or the assertion label
};

struct EvalResult {
  StateU state;
  std::optional<Value> value; // empty when state is an error
};

struct ExecResult {
  StateU state;
  std::optional<Value> returned; // set when a `return` ended execution
};

// Context for evaluating specification expressions.
struct SpecBindings {
  std::map<std::string, Value> binders;
  std::optional<Value> result; // RESULT
  const State *old = nullptr;  // OLD; defaults to the evaluated state
};

class Interpreter {
public:
  // Registers the program's declarations (types, defines, predicates).
  explicit Interpreter(const Program &program, RunOptions options = {});
  ~Interpreter();
  Interpreter(const Interpreter &) = delete;
  Interpreter &operator=(const Interpreter &) = delete;

  EvalResult eval_expr(const StateU &s, const Expr &e);
  ExecResult exec_command(const StateU &s, const Cmd &cmd);
  ExecResult exec_body(const StateU &s, const Body &body);
  ExecResult exec_while(const StateU &s, const Loop &loop);
  EvalResult apply_procedure(const StateU &s, const Value &proc, std::vector<Value> args);

  // Never changes `s`.
  ValueU eval_spec_expr(const State &s, const Expr &e, const SpecBindings &bindings = {});

  const std::vector<TraceEvent> &trace() const;
  const std::vector<Outcome> &outcomes() const;
  std::uint64_t steps() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct RunResult {
  StateU final;
  std::vector<TraceEvent> trace;
  std::vector<Outcome> outcomes;

  bool ok() const { return !is_error(final); }
};

RunResult run_program(const Program &program, const RunOptions &options = {});

std::string format_trace_event(const TraceEvent &e);

} // namespace minimaple
