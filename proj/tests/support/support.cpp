#include "support.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "minimaple/interpreter.hpp"
#include "minimaple/parser.hpp"
#include "minimaple/printer.hpp"
#include "minimaple/typechecker.hpp"

namespace mmtest {

using namespace minimaple;

std::string corpus_path(const std::string &name) { return std::string(MM_CORPUS_DIR) + "/" + name; }

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> corpus_files() {
  std::vector<std::string> out;
  for (const auto &e : std::filesystem::directory_iterator(MM_CORPUS_DIR)) {
    if (e.path().extension() == ".mm") out.push_back(e.path().filename().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

Program load_corpus(const std::string &name) {
  auto parsed = parse_source(read_file(corpus_path(name)), name);
  if (!parsed.ok()) throw std::runtime_error(name + " does not parse");
  return std::move(*parsed.value);
}

ProdOracle brute_force_prod(const std::vector<ProdItem> &items) {
  ProdOracle o;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (auto *n = std::get_if<long long>(&items[i])) {
      if (*n == 0) {
        o.status = static_cast<long long>(i) + 1;
        return o;
      }
      o.integers *= *n;
    } else {
      double f = std::get<double>(items[i]);
      if (f < 0.5) {
        o.status = static_cast<long long>(i) + 1;
        return o;
      }
      o.floats *= f;
    }
  }
  return o;
}

BigInt brute_force_sum(long long n) {
  BigInt s = 0;
  for (long long i = 1; i <= n; ++i) s += i;
  return s;
}

BigInt brute_force_fac(long long n) {
  BigInt r = 1;
  for (long long k = 2; k <= n; ++k) r *= k;
  return r;
}

// ---------------------------------------------------------------------------

namespace {

int pick(std::mt19937 &rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

Type base_type(std::mt19937 &rng) {
  switch (pick(rng, 8)) {
  case 0: return Type::integer();
  case 1: return Type::boolean();
  case 2: return Type::string();
  case 3: return Type::float_();
  case 4: return Type::rational();
  case 5: return Type::anything();
  case 6: return Type::symbol();
  default: return Type::void_();
  }
}

} // namespace

Type random_type(std::mt19937 &rng, int depth) {
  if (depth <= 0 || pick(rng, 5) < 2) return base_type(rng);
  auto several = [&](int lo, int hi) {
    std::vector<Type> out(static_cast<std::size_t>(lo + pick(rng, hi - lo + 1)));
    for (auto &t : out) t = random_type(rng, depth - 1);
    return out;
  };
  switch (pick(rng, 5)) {
  case 0: return Type::list(random_type(rng, depth - 1));
  case 1: return Type::set(random_type(rng, depth - 1));
  case 2: return Type::record(several(1, 3));
  case 3: return Type::union_of(several(2, 3));
  default: return Type::procedure(random_type(rng, depth - 1), several(0, 2));
  }
}

TypeEnv random_env(std::mt19937 &rng, int depth) {
  TypeEnv env;
  for (const char *name : {"a", "b", "c", "d", "e"}) {
    if (pick(rng, 3) > 0) env.bind(name, random_type(rng, depth));
  }
  return env;
}

namespace {

struct ProgramGen {
  std::mt19937 &rng;
  ProgramOptions opts;
  int loops = 0;

  std::string var() { return std::string(1, static_cast<char>('a' + pick(rng, 3))); }

  std::string literal() {
    switch (pick(rng, 4)) {
    case 0: return std::to_string(pick(rng, 10));
    case 1: return pick(rng, 2) ? "1.5" : "0.25";
    case 2: return "\"s\"";
    default: return "[1, 2]";
    }
  }

  std::string expr() {
    switch (pick(rng, 4)) {
    case 0: return var();
    case 1: return std::to_string(pick(rng, 5)) + " + " + std::to_string(pick(rng, 5));
    default: return literal();
    }
  }

  std::string type_name() {
    static const char *names[] = {"integer", "float", "string", "list(integer)"};
    return names[pick(rng, 4)];
  }

  std::string cond() {
    switch (pick(rng, 4)) {
    case 0: return "not type(" + var() + ", " + type_name() + ")";
    case 1: return "type(" + var() + ", " + type_name() + ") and type(" + var() + ", " + type_name() + ")";
    default: return "type(" + var() + ", " + type_name() + ")";
    }
  }

  std::string body(int depth) {
    std::string out;
    int n = 1 + pick(rng, 2);
    for (int i = 0; i < n; ++i) out += cmd(depth) + " ";
    return out;
  }

  std::string cmd(int depth) {
    int k = pick(rng, 10);
    if (opts.errors && k == 0) return "error \"boom\";";
    if (depth > 0 && k < 3) {
      std::string out = "if " + cond() + " then " + body(depth - 1);
      if (pick(rng, 3) == 0) out += "elif " + cond() + " then " + body(depth - 1);
      if (pick(rng, 2) == 0) out += "else " + body(depth - 1);
      return out + "end if;";
    }
    if (depth > 0 && k == 3) {
      std::string v = "k" + std::to_string(loops++);
      return "for " + v + " from 1 to " + std::to_string(pick(rng, 4)) + " do " + body(depth - 1) +
             "end do;";
    }
    return var() + " := " + expr() + ";";
  }
};

} // namespace

std::string random_program(std::mt19937 &rng, const ProgramOptions &opts) {
  ProgramGen gen{rng, opts};
  std::string out;
  for (const char *v : {"a", "b", "c"}) out += std::string(v) + " := " + gen.literal() + ";\n";
  for (int i = 0; i < opts.commands; ++i) out += gen.cmd(opts.depth) + "\n";
  return out;
}

// ---------------------------------------------------------------------------

namespace {

class Recorder {
public:
  explicit Recorder(std::string name) { report_.name = std::move(name); }

  void check(bool ok, const std::string &what) {
    if (ok) return;
    if (report_.failures++ == 0) report_.firstFailure = what;
  }
  void next_case() { ++report_.cases; }
  PropertyReport done() { return report_; }

private:
  PropertyReport report_;
};

std::string show(const Type &a) { return to_string(a); }
std::string show(const Type &a, const Type &b) { return to_string(a) + " / " + to_string(b); }

std::vector<Type> union_parts(const Type &t) {
  if (t.is(Type::Kind::Union)) return t.members();
  return {t};
}

Program parse_or_throw(const std::string &text) {
  auto parsed = parse_source(text, "<generated>");
  if (!parsed.ok()) {
    std::string msg = "generated program does not parse:\n" + text;
    for (const auto &d : parsed.errors) msg += "\n" + format_diagnostic(d);
    throw std::runtime_error(msg);
  }
  return std::move(*parsed.value);
}

} // namespace

PropertyReport prop_subtype_laws(std::uint32_t seed, int cases) {
  std::mt19937 rng(seed);
  Recorder r("subtype partial order");
  for (int i = 0; i < cases; ++i) {
    r.next_case();
    Type a = random_type(rng, 3), b = random_type(rng, 3), c = random_type(rng, 3);
    r.check(is_subtype(a, a), "reflexivity: " + show(a));
    r.check(is_subtype(a, Type::anything()), "anything is top: " + show(a));
    if (is_subtype(a, b) && is_subtype(b, a)) r.check(a == b, "antisymmetry: " + show(a, b));
    // Chains built from unions always compare, so transitivity gets exercised.
    Type ab = Type::union_of({a, b});
    Type abc = Type::union_of({ab, c});
    r.check(is_subtype(a, ab) && is_subtype(ab, abc), "union members below the union: " + show(a, abc));
    r.check(is_subtype(a, abc), "transitivity: " + show(a, abc));
    if (is_subtype(a, b) && is_subtype(b, c)) r.check(is_subtype(a, c), "transitivity: " + show(a, c));
    r.check(is_subtype(Type::list(a), Type::list(ab)), "list covariance: " + show(a, ab));
    r.check(is_subtype(Type::procedure(a, {ab}), Type::procedure(ab, {a})),
            "procedure variance: " + show(a, ab));
  }
  return r.done();
}

PropertyReport prop_super_type_upper_bound(std::uint32_t seed, int cases) {
  std::mt19937 rng(seed);
  Recorder r("super_type upper bound");
  for (int i = 0; i < cases; ++i) {
    r.next_case();
    Type a = random_type(rng, 3), b = random_type(rng, 3);
    Type s = super_type(a, b);
    r.check(is_subtype(a, s) && is_subtype(b, s), "upper bound: " + show(a, b) + " -> " + show(s));
    r.check(s == super_type(b, a), "commutative: " + show(a, b));
    r.check(super_type(a, a) == a, "idempotent: " + show(a));
    if (is_subtype(a, b)) r.check(s == b, "least for comparable types: " + show(a, b));
    r.check(super_type_pred(s, a), "super_type_pred agrees: " + show(a, s));
  }
  return r.done();
}

PropertyReport prop_union_normalization(std::uint32_t seed, int cases) {
  std::mt19937 rng(seed);
  Recorder r("union normalization");
  for (int i = 0; i < cases; ++i) {
    r.next_case();
    std::vector<Type> parts(static_cast<std::size_t>(1 + pick(rng, 4)));
    for (auto &t : parts) t = random_type(rng, 2);
    Type u = Type::union_of(parts);
    r.check(Type::union_of(union_parts(u)) == u, "idempotent: " + show(u));
    r.check(Type::union_of({u}) == u, "singleton: " + show(u));
    r.check(Type::union_of({u, u}) == u, "duplicate: " + show(u));
    std::vector<Type> shuffled = parts;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    r.check(Type::union_of(shuffled) == u, "order independent: " + show(u));
    for (const auto &p : parts) r.check(is_subtype(p, u), "member below union: " + show(p, u));
    if (u.is(Type::Kind::Union)) {
      const auto &m = u.members();
      for (std::size_t x = 0; x < m.size(); ++x) {
        r.check(!m[x].is(Type::Kind::Union), "flat: " + show(u));
        for (std::size_t y = 0; y < m.size(); ++y) {
          if (x != y) r.check(!is_subtype(m[x], m[y]), "no subsumed member: " + show(u));
        }
      }
    }
  }
  return r.done();
}

PropertyReport prop_combine_specialize(std::uint32_t seed, int cases) {
  std::mt19937 rng(seed);
  Recorder r("combine/specialize algebra");
  for (int i = 0; i < cases; ++i) {
    r.next_case();
    TypeEnv p1 = random_env(rng, 2), p2 = random_env(rng, 2);
    TypeEnv c = combine(p1, p2);
    r.check(combine(p1, p1) == p1, "combine idempotent: " + to_string(p1));
    r.check(c == combine(p2, p1), "combine commutative: " + to_string(p1) + " " + to_string(p2));
    for (const auto &[name, t] : p1) {
      const Type *j = c.find(name);
      r.check(j && is_subtype(t, *j), "combine bounds the left side: " + name);
    }
    for (const auto &[name, t] : p2) {
      const Type *j = c.find(name);
      r.check(j && is_subtype(t, *j), "combine bounds the right side: " + name);
    }
    r.check(c.size() <= p1.size() + p2.size(), "combine domain is the union");

    r.check(can_specialize(p1, p1) && specialize(p1, p1) == p1, "specialize by itself: " + to_string(p1));
    TypeEnv s = specialize(p1, p2);
    r.check(s.size() == p1.size(), "specialize keeps the domain");
    for (const auto &[name, t] : s) {
      r.check(is_subtype(t, *p1.find(name)), "specialize only narrows: " + name);
    }
    r.check(specialize(s, p2) == s, "specialize idempotent");

    // A delta made of subtypes of p1 is always admissible and wins.
    TypeEnv narrower;
    for (const auto &[name, t] : p1) {
      std::vector<Type> parts = union_parts(t);
      narrower.bind(name, parts[static_cast<std::size_t>(pick(rng, static_cast<int>(parts.size())))]);
    }
    r.check(can_specialize(p1, narrower), "subtype delta is admissible: " + to_string(narrower));
    r.check(specialize(p1, narrower) == narrower, "subtype delta wins: " + to_string(narrower));
  }
  return r.done();
}

PropertyReport prop_parser_round_trip(std::uint32_t seed, int cases) {
  std::mt19937 rng(seed);
  Recorder r("parser round trip");
  auto round_trip = [&](const std::string &name, const std::string &text) {
    r.next_case();
    auto first = parse_source(text, name);
    if (!first.ok()) {
      r.check(false, name + " does not parse");
      return;
    }
    std::string printed = pretty_print(*first.value);
    auto second = parse_source(printed, name);
    r.check(second.ok() && *second.value == *first.value, "parse(print(p)) == p for " + name);
    r.check(second.ok() && pretty_print(*second.value) == printed, "printing is stable for " + name);
  };
  for (const auto &f : corpus_files()) round_trip(f, read_file(corpus_path(f)));
  for (int i = 0; i < cases; ++i) round_trip("random #" + std::to_string(i), random_program(rng));
  return r.done();
}

PropertyReport prop_branch_merge(std::uint32_t seed, int cases) {
  std::mt19937 rng(seed);
  Recorder r("branch merge supertype");
  for (int i = 0; i < cases; ++i) {
    r.next_case();
    Program p = parse_or_throw(random_program(rng, {8, 2, false}));
    CheckResult cr = check_program(p);
    for (const auto &[cmd, ann] : cr.annotations) {
      auto *node = cmd->as<If>();
      if (!node || ann.info.aret) continue;
      std::vector<const Body *> bodies;
      for (const auto &b : node->branches) bodies.push_back(&b.body);
      if (node->elseBody) bodies.push_back(&*node->elseBody);
      for (const Body *b : bodies) {
        if (b->empty()) continue;
        const Annotation *last = cr.at(b->back());
        if (!last || last->info.aret) continue;
        for (const auto &[name, t] : ann.info.envAfter) {
          const Type *branch = last->info.envAfter.find(name);
          r.check(!branch || is_subtype(*branch, t),
                  "line " + std::to_string(cmd->loc.span.line) + ": " + name + " " +
                      (branch ? to_string(*branch) : "") + " not below " + to_string(t));
        }
      }
    }
  }
  return r.done();
}

PropertyReport prop_loop_fixed_point(std::uint32_t seed, int cases) {
  std::mt19937 rng(seed);
  Recorder r("loop fixed point");
  for (int i = 0; i < cases; ++i) {
    r.next_case();
    Program p = parse_or_throw(random_program(rng, {8, 3, false}));
    CheckResult cr = check_program(p);
    for (const auto &[cmd, ann] : cr.annotations) {
      if (!cmd->as<Loop>()) continue;
      r.check(ann.info.envAfter == ann.envBefore,
              "line " + std::to_string(cmd->loc.span.line) + ": " + to_string(ann.envBefore) + " became " +
                  to_string(ann.info.envAfter));
    }
  }
  return r.done();
}

PropertyReport prop_error_absorption(std::uint32_t seed, int cases) {
  std::mt19937 rng(seed);
  Recorder r("error absorption");
  for (int i = 0; i < cases; ++i) {
    r.next_case();
    Program p = parse_or_throw(random_program(rng, {6, 2, true}));
    Interpreter interp(p);
    RuntimeError injected{"injected #" + std::to_string(i), std::nullopt, SourceSpan{}};
    StateU err = injected;

    ExecResult whole = interp.exec_body(err, p.commands);
    r.check(std::get_if<RuntimeError>(&whole.state) && std::get<RuntimeError>(whole.state) == injected,
            "exec_body changed an error input");
    for (const auto &c : p.commands) {
      ExecResult one = interp.exec_command(err, c);
      r.check(is_error(one.state) && std::get<RuntimeError>(one.state) == injected,
              "exec_command changed an error input");
    }
    EvalResult ev = interp.eval_expr(err, p.commands.front().as<Assign>()->sources.front());
    r.check(is_error(ev.state) && !ev.value, "eval_expr produced a value from an error input");

    // Once a run fails, nothing after the failing command executes.
    RunResult run = run_program(p);
    if (auto *e = std::get_if<RuntimeError>(&run.final)) {
      for (const auto &t : run.trace) {
        r.check(t.span.line <= e->span.line, "event after the error at line " + std::to_string(t.span.line));
      }
      ExecResult again = interp.exec_body(run.final, p.commands);
      r.check(is_error(again.state) && std::get<RuntimeError>(again.state) == *e, "error not absorbed");
    }
  }
  return r.done();
}

std::vector<PropertyReport> all_properties(std::uint32_t seed, int cases) {
  return {
      prop_subtype_laws(seed, cases),          prop_super_type_upper_bound(seed + 1, cases),
      prop_union_normalization(seed + 2, cases), prop_combine_specialize(seed + 3, cases),
      prop_parser_round_trip(seed + 4, cases),   prop_branch_merge(seed + 5, cases),
      prop_loop_fixed_point(seed + 6, cases),    prop_error_absorption(seed + 7, cases),
  };
}

} // namespace mmtest
