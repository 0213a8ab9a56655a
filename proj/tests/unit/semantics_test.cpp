#include <doctest.h>

#include <random>

#include "minimaple/interpreter.hpp"
#include "minimaple/parser.hpp"
#include "minimaple/printer.hpp"
#include "support.hpp"

using namespace minimaple;

namespace {

Program parse(const std::string &text) {
  auto p = parse_source(text, "t.mm");
  REQUIRE_MESSAGE(p.ok(), text);
  return std::move(*p.value);
}

const State &final_state(const RunResult &r) {
  if (auto *e = std::get_if<RuntimeError>(&r.final)) FAIL("unexpected runtime error: " << format_error(*e));
  return std::get<State>(r.final);
}

const RuntimeError &final_error(const RunResult &r) {
  REQUIRE(is_error(r.final));
  return std::get<RuntimeError>(r.final);
}

const Value &global(const State &s, const char *name) {
  auto it = s.globals.find(name);
  REQUIRE_MESSAGE(it != s.globals.end(), name);
  return it->second;
}

std::string run_error(const std::string &text, RunOptions opts = {}) {
  Program p = parse(text);
  return final_error(run_program(p, opts)).message;
}

const ProcDef &proc_of(const Program &p, std::size_t command) {
  auto *pd = p.commands.at(command).as<Assign>()->sources.at(0).as<ProcDef>();
  REQUIRE(pd);
  return *pd;
}

} // namespace

TEST_SUITE("semantics") {
  TEST_CASE("prod on the Listing 1 input matches the brute-force fold") {
    mmtest::ProdOracle oracle = mmtest::brute_force_prod({1LL, 8.54, 34.4, 6LL, 8.1, 10LL, 12LL, 5.4});
    for (const char *name : {"listing1_main.mm", "listing2.mm"}) {
      Program p = mmtest::load_corpus(name);
      RunResult r = run_program(p);
      const State &s = final_state(r);
      const Value &result = global(s, "result");
      REQUIRE(result.is<RecordVal>());
      const auto &items = result.as<RecordVal>()->items;
      REQUIRE(items.size() == 2);
      REQUIRE(items[0].is<IntVal>());
      CHECK(items[0].as<IntVal>()->v == oracle.integers);
      REQUIRE(items[1].is<FloatVal>());
      CHECK(items[1].as<FloatVal>()->v == doctest::Approx(oracle.floats).epsilon(1e-9));
      CHECK(to_string(result) == "[720, 12849.76224]");
      if (std::string(name) == "listing2.mm") CHECK(values_equal(global(s, "status"), make_int(oracle.status)));
    }
  }

  TEST_CASE("prod stops early and satisfies its contract") {
    Program p = mmtest::load_corpus("listing3.mm");
    RunOptions opts;
    opts.checkProcContracts = true;
    RunResult r = run_program(p, opts);
    const State &s = final_state(r);
    CHECK(to_string(global(s, "result")) == "[2, 1.0]");
    CHECK(values_equal(global(s, "status"), make_int(2)));
    int contracts = 0;
    for (const auto &o : r.outcomes) {
      CHECK(o.passed);
      ++contracts;
    }
    CHECK(contracts == 2);

    Interpreter interp(p);
    const Expr &ensures = (*proc_of(p, 1).spec)->postcondition;
    SpecBindings b;
    b.binders["l"] = make_list({make_int(2), make_int(0), make_int(3)});
    b.result = global(s, "result");
    ValueU ok = interp.eval_spec_expr(s, ensures, b);
    REQUIRE(std::holds_alternative<Value>(ok));
    CHECK(to_string(std::get<Value>(ok)) == "true");
    b.result = make_record({make_int(3), make_float(1.0)});
    ValueU mutated = interp.eval_spec_expr(s, ensures, b);
    REQUIRE(std::holds_alternative<Value>(mutated));
    CHECK(to_string(std::get<Value>(mutated)) == "false");
  }

  TEST_CASE("contract violations are runtime errors") {
    const char *text = "f := (*@ requires x > 0; ensures RESULT = x + 1; @*)\n"
                       "  proc(x::integer)::integer; return x + 2; end proc;\n";
    RunOptions opts;
    opts.checkProcContracts = true;
    CHECK(run_error(std::string(text) + "y := f(0);", opts) == "precondition violated");
    CHECK(run_error(std::string(text) + "y := f(1);", opts) == "postcondition violated");
    Program p = parse(std::string(text) + "y := f(1);");
    RunResult plain = run_program(p);
    CHECK(values_equal(global(final_state(plain), "y"), make_int(3)));
  }

  TEST_CASE("sum loop with invariant and variant") {
    Program p = mmtest::load_corpus("sum_loop.mm");
    RunOptions opts;
    opts.checkLoopSpecs = true;
    RunResult r = run_program(p, opts);
    const State &s = final_state(r);
    CHECK(global(s, "s").as<IntVal>()->v == mmtest::brute_force_sum(100));
    std::vector<long long> variants;
    int invariants = 0;
    for (const auto &o : r.outcomes) {
      CHECK(o.passed);
      if (o.kind == "invariant") ++invariants;
      if (o.kind == "variant") variants.push_back(std::stoll(o.detail));
    }
    CHECK(invariants == 101);
    REQUIRE(variants.size() == 100);
    CHECK(variants.front() == 99);
    CHECK(variants.back() == 0);
    for (std::size_t i = 1; i < variants.size(); ++i) CHECK(variants[i] < variants[i - 1]);
  }

  TEST_CASE("a corrupted loop body breaks the invariant on the second check") {
    Program p = mmtest::load_corpus("sum_loop_corrupted.mm");
    RunOptions opts;
    opts.checkLoopSpecs = true;
    RunResult r = run_program(p, opts);
    CHECK(final_error(r).message == "invariant violated");
    std::vector<bool> checks;
    for (const auto &o : r.outcomes) {
      if (o.kind == "invariant") checks.push_back(o.passed);
    }
    CHECK(checks == std::vector<bool>{true, false});
    // Without loop checking the program just runs.
    CHECK_FALSE(is_error(run_program(p).final));
  }

  TEST_CASE("a variant that does not decrease") {
    CHECK(run_error("i := 0; while i < 3 do (*@ invariant true; decreases 5; @*) i := i + 1; end do;",
                    RunOptions{true, true}) == "variant violated");
  }

  TEST_CASE("define") {
    Program p = mmtest::load_corpus("fac.mm");
    RunResult r = run_program(p);
    final_state(r);
    REQUIRE(r.outcomes.size() == 2);
    CHECK(r.outcomes[0].passed);
    CHECK(r.outcomes[1].passed);
    Interpreter interp(p);
    for (long long n : {0LL, 1LL, 5LL, 20LL}) {
      auto call = parse_expr_text("fac(" + std::to_string(n) + ")");
      EvalResult v = interp.eval_expr(State{}, *call.value);
      REQUIRE(v.value);
      CHECK(v.value->as<IntVal>()->v == mmtest::brute_force_fac(n));
    }
    EvalResult bad = interp.eval_expr(State{}, *parse_expr_text("fac(1.5)").value);
    REQUIRE(is_error(bad.state));
    CHECK(std::get<RuntimeError>(bad.state).message.find("no rule") != std::string::npos);
  }

  TEST_CASE("assertions") {
    Program p = mmtest::load_corpus("assert.mm");
    RunResult r = run_program(p);
    const State &s = final_state(r);
    CHECK(values_equal(global(s, "x"), make_int(2)));
    CHECK(values_equal(global(s, "y"), make_int(1)));
    REQUIRE(r.outcomes.size() == 1);
    CHECK(r.outcomes[0].passed);
    CHECK(r.outcomes[0].detail == "test failed");

    Program failing = parse("x := 1; ASSERT(x = 2, \"x is two\");");
    RunResult failed = run_program(failing);
    const RuntimeError &e = final_error(failed);
    CHECK(e.message == "assertion failed");
    CHECK(e.label == std::optional<std::string>("x is two"));
    CHECK_FALSE(is_error(run_program(failing, RunOptions{false}).final));
  }

  TEST_CASE("error command") {
    Program p = parse("error \"boom\";\nx := 1;");
    RunResult r = run_program(p);
    CHECK(final_error(r).message == "boom");
    CHECK(final_error(r).span.line == 1);
  }

  TEST_CASE("arithmetic") {
    Interpreter interp(parse(""));
    auto eval = [&](const char *text) {
      auto e = parse_spec_text(text, SpecContext::Assertion);
      REQUIRE_MESSAGE(e.ok(), text);
      EvalResult r = interp.eval_expr(State{}, *e.value);
      if (is_error(r.state)) return "error: " + std::get<RuntimeError>(r.state).message;
      return to_string(*r.value);
    };
    CHECK(eval("1/2 + 1/3") == "5/6");
    CHECK(eval("4/2") == "2");
    CHECK(eval("1 + 0.5") == "1.5");
    CHECK(eval("2.0 * 3") == "6.0");
    CHECK(eval("(-7) mod 3") == "2");
    CHECK(eval("-7 mod 3") == "-1");
    CHECK(eval("2 < 2.5") == "true");
    CHECK(eval("1 = 1.0") == "true");
    CHECK(eval("[1, 2] = [1, 2]") == "true");
    CHECK(eval("1 / 0") == "error: division by zero");
    CHECK(eval("1 + \"s\"").rfind("error: arithmetic on non-numeric", 0) == 0);
    CHECK(eval("[1, 2][3]").rfind("error: index out of bounds", 0) == 0);
    CHECK(eval("1 and true").rfind("error: operand of 'and' is not boolean", 0) == 0);
    CHECK(eval("false and 1") == "false");
    CHECK(eval("nops([1, 2, 3])") == "3");
    CHECK(eval("{3, 1, 3}") == "{1, 3}");
    CHECK(eval("type(1, rational)") == "true");
    CHECK(eval("type([1, 2.5], [integer, float])") == "true");
    CHECK(eval("add(i, i = 1..100)") == "5050");
    CHECK(eval("mul(e, e in [1, 2.5, 4], type(e, integer))") == "4");
    CHECK(eval("max(e, e in [3, 9, 2])") == "9");
    CHECK(eval("seq(i * i, i = 1..4)") == "[1, 4, 9, 16]");
    CHECK(eval("min(e, e in [])").rfind("error:", 0) == 0);
    CHECK(eval("forall(i::integer, 1 <= i and i <= 10 implies i * i >= i)") == "true");
    CHECK(eval("exists(i::integer, 1 <= i and i <= 10 and i * i = 49)") == "true");
    CHECK(eval("forall(i::integer, i * i >= 0)").rfind("error: unbounded quantifier", 0) == 0);
    CHECK(eval("f(1)").rfind("error: calling a non-procedure value", 0) == 0);
    CHECK(eval("100000000000 * 100000000000 * 100000000000") == "1000000000000000000000000000000000");
  }

  TEST_CASE("rational arithmetic agrees with integer cross-multiplication") {
    std::mt19937 rng(77);
    std::uniform_int_distribution<int> num(-50, 50), den(1, 40);
    Interpreter interp(parse(""));
    for (int i = 0; i < 300; ++i) {
      int a = num(rng), b = den(rng), c = num(rng), d = den(rng);
      std::string text = "(" + std::to_string(a) + "/" + std::to_string(b) + ") + (" + std::to_string(c) + "/" +
                         std::to_string(d) + ")";
      EvalResult r = interp.eval_expr(State{}, *parse_expr_text(text).value);
      REQUIRE(r.value);
      BigRational expect(BigInt(a * d + c * b), BigInt(b * d));
      REQUIRE(to_exact(*r.value));
      CHECK(*to_exact(*r.value) == expect);
    }
  }

  TEST_CASE("procedures use static scoping") {
    Program p = parse("make := proc(n::integer)::anything;\n"
                      "  local inc := proc(k::integer)::integer; return n + k; end proc;\n"
                      "  return inc;\n"
                      "end proc;\n"
                      "n := 100; f := make(5); y := f(1);\n");
    RunResult r = run_program(p);
    CHECK(values_equal(global(final_state(r), "y"), make_int(6)));
  }

  TEST_CASE("globals and locals") {
    Program p = parse("count := 0;\n"
                      "bump := proc()::integer; global count; local t := 1; count := count + t; return count; end proc;\n"
                      "a := bump(); b := bump(); t := \"outer\";\n");
    RunResult r = run_program(p);
    const State &s = final_state(r);
    CHECK(values_equal(global(s, "count"), make_int(2)));
    CHECK(values_equal(global(s, "b"), make_int(2)));
    CHECK(to_string(global(s, "t")) == "\"outer\"");
  }

  TEST_CASE("argument and return types are checked at run time") {
    const char *f = "f := proc(x::integer)::integer; return x; end proc;\n";
    CHECK(run_error(std::string(f) + "y := f(\"s\");").rfind("argument 1 of f has wrong type", 0) == 0);
    CHECK(run_error("g := proc()::integer; return 1.5; end proc; y := g();").find("expected integer") !=
          std::string::npos);
  }

  TEST_CASE("step limit") {
    RunOptions opts;
    opts.stepLimit = 1000;
    CHECK(run_error("while true do end do;", opts) == "step limit exceeded");
    CHECK(run_error("while 1 do end do;").rfind("loop guard is not boolean", 0) == 0);
  }

  TEST_CASE("spec evaluation does not change the state") {
    Program p = parse("count := 0;\n"
                      "bump := proc()::integer; global count; count := count + 1; return count; end proc;\n");
    Interpreter interp(p);
    ExecResult r = interp.exec_body(State{}, p.commands);
    const State &before = std::get<State>(r.state);
    State copy = before.snapshot();
    ValueU v = interp.eval_spec_expr(before, *parse_spec_text("bump() = 1", SpecContext::Assertion).value);
    REQUIRE(std::holds_alternative<Value>(v));
    CHECK(to_string(std::get<Value>(v)) == "true");
    CHECK(same_state(before, copy));
  }

  TEST_CASE("for loops equal their while desugaring") {
    std::mt19937 rng(4242);
    std::uniform_int_distribution<int> small(-3, 6), step(1, 3);
    for (int i = 0; i < 200; ++i) {
      int from = small(rng), by = step(rng), to = small(rng);
      std::string body = "s := s + k * (" + std::to_string(small(rng)) + "); c := c + 1;";
      std::string direct = "s := 0; c := 0; for k from " + std::to_string(from) + " by " + std::to_string(by) +
                           " to " + std::to_string(to) + " do " + body + " end do;";
      std::string desugared = "s := 0; c := 0; k := " + std::to_string(from) + "; while k <= " +
                              std::to_string(to) + " do " + body + " k := k + " + std::to_string(by) +
                              "; end do;";
      Program a = parse(direct), b = parse(desugared);
      RunResult ra = run_program(a), rb = run_program(b);
      CHECK_MESSAGE(same_state(final_state(ra), final_state(rb)), direct);
    }
    Program down = parse("s := 0; for k from 5 by -2 to 0 do s := s + k; end do;");
    RunResult rd = run_program(down);
    CHECK(values_equal(global(final_state(rd), "s"), make_int(9)));
  }

  TEST_CASE("type-checked corpus programs run without dynamic type errors") {
    for (const char *name : {"listing1_main.mm", "listing2.mm", "listing3.mm", "sum_loop.mm", "fac.mm", "assert.mm",
                             "global_assign.mm", "empty.mm"}) {
      Program p = mmtest::load_corpus(name);
      RunResult r = run_program(p, RunOptions{true, true, true});
      CHECK_MESSAGE(!is_error(r.final), name);
    }
  }

  TEST_CASE("trace") {
    Program p = parse("x := 1;\nf := proc()::integer; local y := 2; return y; end proc;\nz := f();\n");
    RunResult r = run_program(p);
    std::vector<std::string> lines;
    for (const auto &e : r.trace) lines.push_back(format_trace_event(e));
    CHECK(lines == std::vector<std::string>{"1:1: assign: x = 1", "2:1: assign: f = proc", "3:6: call: f()",
                                            "3:6: return: f returned 2", "3:1: assign: z = 2"});
  }
}
