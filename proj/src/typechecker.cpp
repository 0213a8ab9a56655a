// typechecker.cpp - typing judgments for commands, expressions and specs
#include "minimaple/typechecker.hpp"

#include <algorithm>
#include <functional>
#include <utility>

namespace minimaple {

namespace {

using K = Type::Kind;

bool boolish(const Type &t) {
  if (t.is(K::Boolean) || t.is(K::Anything)) return true;
  if (t.is(K::Union)) {
    return std::any_of(t.members().begin(), t.members().end(),
                       [](const Type &m) { return m.is(K::Boolean); });
  }
  return false;
}

bool numeric_ok(const Type &t) { return t.is(K::Anything) || is_numeric(t); }
bool integral_ok(const Type &t) { return t.is(K::Anything) || is_subtype(t, Type::integer()); }

Type arith(const Type &a, const Type &b) {
  if (a.is(K::Anything) || b.is(K::Anything)) return Type::anything();
  if (a.is(K::Float) && is_subtype(b, Type::rational())) return a;
  if (b.is(K::Float) && is_subtype(a, Type::rational())) return b;
  return super_type(a, b);
}

void add_types(std::vector<Type> &into, const std::vector<Type> &from) {
  for (const auto &t : from) {
    if (std::find(into.begin(), into.end(), t) == into.end()) into.push_back(t);
  }
  std::sort(into.begin(), into.end());
}

// Later bindings win.
TypeEnv overlay(TypeEnv base, const TypeEnv &delta) {
  for (const auto &[name, t] : delta) base.bind(name, t);
  return base;
}

bool calls(const Expr &e, const std::string &name) {
  if (auto *c = e.as<Call>(); c && c->callee == name) return true;
  for (const Expr *c : subexpressions(e)) {
    if (calls(*c, name)) return true;
  }
  return false;
}

struct Scope {
  Context ctx = Context::Global;
  bool inProc = false;
  std::set<std::string> assignable;
  std::optional<Type> declaredRet;
  std::set<std::string> *used = nullptr;
};

struct SpecMode {
  bool active = false;
  std::optional<Type> result;
  bool allowAbstract = false;
};

struct BoolResult {
  TypeEnv thenDelta;
  TypeEnv elseDelta;
  bool thenUnreachable = false;
  bool elseUnreachable = false;
};

class Checker {
public:
  explicit Checker(CheckResult &out, std::vector<Diagnostic> *sink = nullptr)
      : out_(out), sink_(sink ? sink : &out.diagnostics) {}

  // -- declarations ---------------------------------------------------------

  void declarations(const std::vector<Decl> &decls) {
    for (const auto &d : decls) {
      const SourceSpan &span = d.loc.span;
      if (auto *n = std::get_if<NamedTypeDecl>(&d.node)) {
        if (known_type(n->name)) {
          error("duplicate-type", "type '" + n->name + "' is declared twice", span);
        } else {
          out_.types.named.emplace(n->name, n->type);
        }
      } else if (auto *a = std::get_if<AbstractTypeDecl>(&d.node)) {
        if (known_type(a->name)) {
          error("duplicate-type", "type '" + a->name + "' is declared twice", span);
        } else {
          out_.types.abstract.insert(a->name);
        }
      }
    }
    for (const auto &d : decls) {
      if (auto *n = std::get_if<NamedTypeDecl>(&d.node)) {
        resolve_type(n->type);
      } else if (auto *p = std::get_if<PredicateDecl>(&d.node)) {
        predicates_[p->name] = p->params.size();
      } else if (auto *df = std::get_if<Define>(&d.node)) {
        define(*df, d.loc.span);
      } else if (auto *as = std::get_if<Assume>(&d.node)) {
        SpecMode saved = std::exchange(spec_, SpecMode{true, std::nullopt, true});
        spec_condition(TypeEnv{}, as->fact, "assumption");
        spec_ = saved;
      }
    }
  }

  // -- commands -------------------------------------------------------------

  CommandInfo seq(const TypeEnv &env, const Body &body) {
    CommandInfo info;
    info.envAfter = env;
    bool warned = false;
    for (const auto &cmd : body) {
      if (info.aret && !warned) {
        warn("unreachable", "command is unreachable: every path before it returns or raises an error",
             cmd.loc.span);
        warned = true;
      }
      CommandInfo c = command(info.envAfter, cmd);
      info.envAfter = std::move(c.envAfter);
      add_types(info.retTypes, c.retTypes);
      info.exceptions.insert(c.exceptions.begin(), c.exceptions.end());
      info.aret = info.aret || c.aret;
    }
    return info;
  }

  CommandInfo command(const TypeEnv &env, const Cmd &cmd) {
    auto savedExc = std::exchange(exprExceptions_, {});
    CommandInfo info;
    if (auto *a = cmd.as<Assign>()) {
      info = assign(env, *a);
    } else if (auto *i = cmd.as<If>()) {
      info = if_(env, *i);
    } else if (auto *l = cmd.as<Loop>()) {
      info = loop(env, *l);
    } else if (auto *r = cmd.as<Return>()) {
      info = return_(env, *r, cmd.loc.span);
    } else if (auto *e = cmd.as<ErrorCmd>()) {
      info.envAfter = env;
      info.exceptions.insert(e->message);
      info.aret = true;
    } else if (auto *x = cmd.as<ExprCmd>()) {
      expr(env, x->expr);
      info.envAfter = env;
    } else if (auto *as = cmd.as<Assert>()) {
      SpecMode saved = std::exchange(spec_, SpecMode{true, std::nullopt, false});
      spec_condition(env, as->cond, "assertion");
      spec_ = saved;
      info.envAfter = env;
    }
    info.exceptions.insert(exprExceptions_.begin(), exprExceptions_.end());
    exprExceptions_ = std::move(savedExc);
    if (!quiet_) out_.annotations[&cmd] = Annotation{env, info, scope_.ctx};
    return info;
  }

  CommandInfo assign(const TypeEnv &env, const Assign &a) {
    std::vector<Type> types;
    for (std::size_t i = 0; i < a.sources.size(); ++i) {
      const std::string &target = a.targets[i];
      const Type *current = env.find(target);
      if (auto *pd = a.sources[i].as<ProcDef>()) {
        types.push_back(procedure(*pd, target, a.sources[i].loc.span));
      } else {
        types.push_back(expr(env, a.sources[i], current));
      }
    }
    CommandInfo info;
    info.envAfter = env;
    for (std::size_t i = 0; i < a.targets.size(); ++i) {
      const std::string &target = a.targets[i];
      const Type &t = types[i];
      const SourceSpan &span = a.sources[i].loc.span;
      use(target);
      if (a.sources[i].as<ProcDef>()) procExceptions_[target] = lastProcExceptions_;
      if (scope_.ctx == Context::Global) {
        info.envAfter.bind(target, t);
        if (t.is(K::Procedure)) knownProcs_.bind(target, t);
        continue;
      }
      if (!scope_.assignable.count(target)) {
        error("not-assignable",
              "'" + target + "' is not assignable here; declare it local or global", span);
        continue;
      }
      const Type *current = env.find(target);
      if (!current || is_subtype(t, *current)) {
        info.envAfter.bind(target, t);
      } else {
        error("narrow-conflict-assign",
              "cannot assign a value of type " + to_string(t) + " to '" + target + "' of type " +
                  to_string(*current),
              span);
      }
    }
    return info;
  }

  CommandInfo if_(const TypeEnv &env, const If &cmd) {
    CommandInfo info;
    std::vector<TypeEnv> outs;
    bool allAret = true;
    auto take = [&](CommandInfo b) {
      add_types(info.retTypes, b.retTypes);
      info.exceptions.insert(b.exceptions.begin(), b.exceptions.end());
      allAret = allAret && b.aret;
      outs.push_back(std::move(b.envAfter));
    };

    for (const auto &branch : cmd.branches) {
      BoolResult r = cond(env, branch.cond);
      take(seq(narrow(env, r.thenDelta, branch.cond.loc.span), branch.body));
    }

    // The else part sees every guard refuted. Computed quietly: the guards
    // were already reported above.
    TypeEnv rest = env;
    bool restReachable = true;
    {
      bool savedQuiet = std::exchange(quiet_, true);
      for (const auto &branch : cmd.branches) {
        BoolResult r = cond(rest, branch.cond);
        if (r.elseUnreachable) {
          restReachable = false;
          break;
        }
        if (can_specialize(rest, r.elseDelta)) rest = specialize(rest, r.elseDelta);
      }
      quiet_ = savedQuiet;
    }
    if (cmd.elseBody) {
      take(seq(rest, *cmd.elseBody));
    } else {
      if (restReachable) outs.push_back(rest);
      allAret = false;
    }

    for (const auto &[name, t] : env) {
      std::optional<Type> joined;
      for (const auto &o : outs) {
        if (const Type *b = o.find(name)) joined = joined ? super_type(*joined, *b) : *b;
      }
      info.envAfter.bind(name, joined ? *joined : t);
    }
    info.aret = allAret;
    return info;
  }

  CommandInfo loop(const TypeEnv &env, const Loop &l) {
    // from and by default to 1, so the variable is at least an integer.
    Type varType = Type::integer();
    for (const auto *part : {&l.from, &l.by, &l.to}) {
      if (!*part) continue;
      Type t = expr(env, **part);
      if (!numeric_ok(t)) {
        error("non-numeric-range", "loop range expression has non-numeric type " + to_string(t),
              (*part)->loc.span);
        continue;
      }
      varType = arith(varType, t);
    }

    TypeEnv bodyEnv = env;
    if (l.var) {
      use(*l.var);
      if (scope_.ctx == Context::Local && !scope_.assignable.count(*l.var)) {
        error("not-assignable", "loop variable '" + *l.var + "' must be declared local or global",
              l.body.empty() ? SourceSpan{} : l.body.front().loc.span);
      }
      bodyEnv.bind(*l.var, varType);
    }
    if (l.whileCond) {
      BoolResult r = cond(bodyEnv, *l.whileCond);
      bodyEnv = narrow(bodyEnv, r.thenDelta, l.whileCond->loc.span);
    }
    if (l.spec) {
      SpecMode saved = std::exchange(spec_, SpecMode{true, std::nullopt, false});
      spec_condition(bodyEnv, l.spec->invariant, "loop invariant");
      Type d = expr(bodyEnv, l.spec->decreases);
      if (!integral_ok(d)) {
        error("decreases-type", "termination term must be an integer, found " + to_string(d),
              l.spec->decreases.loc.span);
      }
      spec_ = saved;
    }

    Scope saved = scope_;
    scope_.ctx = Context::Local;
    if (!saved.inProc) {
      for (const auto &[name, t] : env) scope_.assignable.insert(name);
    }
    if (l.var) scope_.assignable.insert(*l.var);
    CommandInfo body = seq(bodyEnv, l.body);
    scope_ = std::move(saved);

    CommandInfo info;
    info.envAfter = env;
    info.retTypes = std::move(body.retTypes);
    info.exceptions = std::move(body.exceptions);
    info.aret = false;
    return info;
  }

  CommandInfo return_(const TypeEnv &env, const Return &r, const SourceSpan &span) {
    CommandInfo info;
    info.envAfter = env;
    info.aret = true;
    const Type *expected = scope_.declaredRet ? &*scope_.declaredRet : nullptr;
    Type t = r.value ? expr(env, *r.value, expected) : Type::void_();
    info.retTypes.push_back(t);
    if (!scope_.inProc) {
      error("return-outside-proc", "return is only allowed inside a procedure body", span);
    } else if (expected && !is_subtype(t, *expected)) {
      error("return-mismatch",
            "returned type " + to_string(t) + " is not a subtype of the declared return type " +
                to_string(*expected),
            span);
    }
    return info;
  }

  // -- procedures -----------------------------------------------------------

  Type procedure(const ProcDef &pd, const std::string &name, const SourceSpan &span) {
    std::vector<Type> params;
    std::set<std::string> paramNames;
    for (const auto &p : pd.params) {
      if (!paramNames.insert(p.name).second) {
        error("duplicate-param", "parameter '" + p.name + "' is declared twice", p.loc.span);
      }
      params.push_back(resolve_type(p.type));
    }
    Type ret = resolve_type(pd.returnType);
    Type sig = Type::procedure(ret, params);
    if (!name.empty() && scope_.ctx == Context::Global) knownProcs_.bind(name, sig);

    Scope savedScope = scope_;
    SpecMode savedSpec = spec_;
    auto savedExc = std::exchange(exprExceptions_, {});
    std::set<std::string> used;
    scope_ = Scope{Context::Local, true, {}, ret, &used};

    TypeEnv entry;
    for (std::size_t i = 0; i < pd.params.size(); ++i) entry.bind(pd.params[i].name, params[i]);

    std::set<std::string> localNames;
    std::set<std::string> globalNames(pd.globals.begin(), pd.globals.end());
    for (const auto &local : pd.locals) {
      if (paramNames.count(local.name) || localNames.count(local.name) ||
          globalNames.count(local.name)) {
        warn("duplicate-decl", "'" + local.name + "' is declared more than once", local.loc.span);
      }
      localNames.insert(local.name);
      Type lt = local.type ? resolve_type(*local.type) : Type::symbol();
      if (local.init) {
        Type it = expr(entry, **local.init, local.type ? &lt : nullptr);
        if (!local.type) {
          lt = it;
        } else if (!is_subtype(it, lt)) {
          error("init-mismatch",
                "initializer of type " + to_string(it) + " does not fit local '" + local.name +
                    "' of type " + to_string(lt),
                (*local.init)->loc.span);
        }
      }
      if (!paramNames.count(local.name)) entry.bind(local.name, lt);
    }
    std::set<std::string> seenGlobals;
    for (const auto &g : pd.globals) {
      if (!seenGlobals.insert(g).second || paramNames.count(g)) {
        warn("duplicate-decl", "'" + g + "' is declared more than once", span);
      }
      if (!entry.contains(g)) entry.bind(g, Type::anything());
    }
    for (const auto &[n, t] : entry) scope_.assignable.insert(n);

    if (pd.spec) {
      const ProcSpec &ps = **pd.spec;
      for (const auto &g : ps.globals) {
        if (!globalNames.count(g)) {
          error("spec-global",
                "specification names '" + g + "' as global but the procedure does not declare it",
                ps.loc.span);
        }
      }
      spec_ = SpecMode{true, std::nullopt, false};
      spec_condition(entry, ps.precondition, "requires clause");
      spec_.result = ret;
      spec_condition(entry, ps.postcondition, "ensures clause");
      spec_.result.reset();
      if (ps.exceptional) spec_condition(entry, *ps.exceptional, "exception clause");
    }
    spec_ = SpecMode{};

    CommandInfo body = seq(entry, pd.body);
    if (!ret.is(K::Void) && !body.aret) {
      error("missing-return", "procedure with return type " + to_string(ret) +
                                  " may finish without returning a value",
            span);
    }
    for (const auto &local : pd.locals) {
      if (!used.count(local.name)) {
        warn("unused", "local '" + local.name + "' is declared but never used", local.loc.span);
      }
    }
    if (!quiet_) out_.procedures.push_back(ProcBlock{&pd, name, entry, body});
    lastProcExceptions_ = body.exceptions;

    scope_ = std::move(savedScope);
    spec_ = savedSpec;
    exprExceptions_ = std::move(savedExc);
    return sig;
  }

  // -- boolean conditions ---------------------------------------------------

  BoolResult cond(const TypeEnv &env, const Expr &e) {
    BoolResult r;
    if (auto *tt = e.as<TypeTest>()) {
      Type tested = resolve_type(tt->type);
      auto *id = tt->subject->as<Ident>();
      const Type *current = id ? env.find(id->name) : nullptr;
      if (!current) {
        expr(env, *tt->subject);
        if (!id && !spec_.active) {
          info("no-narrowing", "type test on a non-identifier does not narrow any variable",
               e.loc.span);
        }
        return r;
      }
      use(id->name);
      const bool report = !spec_.active;
      if (is_subtype(*current, tested)) {
        if (report) {
          warn("redundant-test",
               "type test is always true: '" + id->name + "' has type " + to_string(*current),
               e.loc.span);
        }
        r.elseUnreachable = true;
      } else if (!may_overlap(*current, tested)) {
        if (report) {
          warn("redundant-test",
               "type test is always false: '" + id->name + "' has type " + to_string(*current),
               e.loc.span);
        }
        r.thenUnreachable = true;
      } else if (is_subtype(tested, *current)) {
        r.thenDelta.bind(id->name, tested);
        if (auto rest = subtract(*current, tested)) r.elseDelta.bind(id->name, *rest);
      }
      return r;
    }
    if (auto *u = e.as<Unary>(); u && u->op == UnaryOp::Not) {
      BoolResult inner = cond(env, *u->operand);
      r.thenDelta = std::move(inner.elseDelta);
      r.elseDelta = std::move(inner.thenDelta);
      r.thenUnreachable = inner.elseUnreachable;
      r.elseUnreachable = inner.thenUnreachable;
      return r;
    }
    if (auto *b = e.as<Binary>()) {
      switch (b->op) {
      case BinaryOp::And: {
        BoolResult a = cond(env, *b->lhs);
        BoolResult c = cond(narrow(env, a.thenDelta, e.loc.span), *b->rhs);
        r.thenDelta = overlay(std::move(a.thenDelta), c.thenDelta);
        r.thenUnreachable = a.thenUnreachable || c.thenUnreachable;
        r.elseUnreachable = a.elseUnreachable && c.elseUnreachable;
        return r;
      }
      case BinaryOp::Or: {
        BoolResult a = cond(env, *b->lhs);
        BoolResult c = cond(narrow(env, a.elseDelta, e.loc.span), *b->rhs);
        r.elseDelta = overlay(std::move(a.elseDelta), c.elseDelta);
        r.elseUnreachable = a.elseUnreachable || c.elseUnreachable;
        r.thenUnreachable = a.thenUnreachable && c.thenUnreachable;
        return r;
      }
      case BinaryOp::Implies: {
        BoolResult a = cond(env, *b->lhs);
        cond(narrow(env, a.thenDelta, e.loc.span), *b->rhs);
        return r;
      }
      case BinaryOp::Equivalent:
        cond(env, *b->lhs);
        cond(env, *b->rhs);
        return r;
      default: break;
      }
    }
    Type t = expr(env, e);
    if (!boolish(t)) {
      error("non-boolean", "condition has type " + to_string(t) + ", expected boolean", e.loc.span);
    }
    return r;
  }

  TypeEnv narrow(const TypeEnv &env, const TypeEnv &delta, const SourceSpan &span) {
    if (!can_specialize(env, delta)) {
      error("narrow-conflict", "type of the condition conflicts with the type information " +
                                   to_string(env),
            span);
      return env;
    }
    return specialize(env, delta);
  }

  void spec_condition(const TypeEnv &env, const Expr &e, const char *what) {
    Type t = cond_type(env, e);
    if (!boolish(t)) {
      error("spec-non-boolean", std::string(what) + " has type " + to_string(t) + ", expected boolean",
            e.loc.span);
    }
  }

  // Types an expression that may be a condition; logical forms go through
  // cond so narrowing applies to their operands.
  Type cond_type(const TypeEnv &env, const Expr &e) {
    if (e.as<TypeTest>() || e.as<Quantified>()) return expr(env, e);
    if (auto *b = e.as<Binary>()) {
      switch (b->op) {
      case BinaryOp::And:
      case BinaryOp::Or:
      case BinaryOp::Implies:
      case BinaryOp::Equivalent: cond(env, e); return Type::boolean();
      default: break;
      }
    }
    if (auto *u = e.as<Unary>(); u && u->op == UnaryOp::Not) {
      cond(env, e);
      return Type::boolean();
    }
    return expr(env, e);
  }

  // -- expressions ----------------------------------------------------------

  Type expr(const TypeEnv &env, const Expr &e, const Type *expected = nullptr) {
    const SourceSpan &span = e.loc.span;
    if (e.as<IntLit>()) return Type::integer();
    if (e.as<FloatLit>()) return Type::float_();
    if (e.as<StringLit>()) return Type::string();
    if (e.as<BoolLit>()) return Type::boolean();
    if (auto *id = e.as<Ident>()) return ident(env, id->name);
    if (auto *l = e.as<ListLit>()) return list_lit(env, *l, expected);
    if (auto *s = e.as<SetLit>()) {
      const Type *elemExpected = expected && expected->is(K::Set) ? &expected->elem() : nullptr;
      if (s->items.empty()) return elemExpected ? *expected : Type::set(Type::anything());
      return Type::set(join_items(env, s->items, elemExpected));
    }
    if (auto *ix = e.as<Index>()) return index(env, *ix, span);
    if (auto *c = e.as<Call>()) return call(env, *c, span);
    if (e.as<TypeTest>()) {
      cond(env, e);
      return Type::boolean();
    }
    if (auto *u = e.as<Unary>()) {
      if (u->op == UnaryOp::Not) {
        cond(env, e);
        return Type::boolean();
      }
      Type t = expr(env, *u->operand);
      if (!numeric_ok(t)) {
        error("non-numeric", "negation of a value of type " + to_string(t), span);
        return Type::anything();
      }
      return t;
    }
    if (auto *b = e.as<Binary>()) return binary(env, *b, e);
    if (e.as<Uneval>()) return Type::uneval();
    if (auto *pd = e.as<ProcDef>()) return procedure(*pd, "", span);
    if (auto *q = e.as<Quantified>()) {
      TypeEnv inner = env;
      inner.bind(q->binder, resolve_type(q->binderType));
      spec_condition(inner, *q->body, "quantifier body");
      return Type::boolean();
    }
    if (auto *nq = e.as<NumQuant>()) return num_quant(env, *nq, span);
    if (e.as<ResultRef>()) {
      if (spec_.result) return *spec_.result;
      error("spec-result", "RESULT is only meaningful in a procedure's ensures clause", span);
      return Type::anything();
    }
    if (auto *o = e.as<OldRef>()) return ident(env, o->name);
    return Type::anything(); // TypedVar outside a define pattern
  }

  Type ident(const TypeEnv &env, const std::string &name) {
    use(name);
    if (const Type *t = env.find(name)) return *t;
    // Inside a procedure an undeclared name refers to a global whose type is
    // unknown here; at top level it is a symbol standing for itself.
    return scope_.inProc ? Type::anything() : Type::symbol();
  }

  Type join_items(const TypeEnv &env, const std::vector<Expr> &items, const Type *elemExpected) {
    std::optional<Type> joined;
    for (const auto &item : items) {
      Type t = expr(env, item, elemExpected);
      joined = joined ? super_type(*joined, t) : t;
    }
    return joined ? *joined : Type::anything();
  }

  Type list_lit(const TypeEnv &env, const ListLit &l, const Type *expected) {
    if (expected && expected->is(K::Record) && expected->fields().size() == l.items.size()) {
      std::vector<Type> fields;
      for (std::size_t i = 0; i < l.items.size(); ++i) {
        fields.push_back(expr(env, l.items[i], &expected->fields()[i]));
      }
      return Type::record(std::move(fields));
    }
    const Type *elemExpected = expected && expected->is(K::List) ? &expected->elem() : nullptr;
    if (l.items.empty()) return elemExpected ? *expected : Type::list(Type::anything());
    return Type::list(join_items(env, l.items, elemExpected));
  }

  Type index(const TypeEnv &env, const Index &ix, const SourceSpan &span) {
    Type base = expr(env, *ix.base);
    Type idx = expr(env, *ix.index);
    if (base.is(K::Anything)) return base;
    if (!integral_ok(idx)) {
      error("index-type", "index has type " + to_string(idx) + ", expected integer", ix.index->loc.span);
    }
    if (base.is(K::List) || base.is(K::Set)) return base.elem();
    if (base.is(K::Record)) {
      const auto &fields = base.fields();
      if (auto *lit = ix.index->as<IntLit>()) {
        std::size_t k = 0;
        try {
          k = std::stoul(lit->digits);
        } catch (...) {
        }
        if (k >= 1 && k <= fields.size()) return fields[k - 1];
        error("index-range", "record of " + std::to_string(fields.size()) +
                                 " fields indexed with " + lit->digits,
              span);
        return Type::anything();
      }
      if (fields.empty()) return Type::anything();
      return Type::union_of(fields);
    }
    error("not-indexable", "cannot index a value of type " + to_string(base), span);
    return Type::anything();
  }

  void check_args(const TypeEnv &env, const Call &c, const Type &sig, const SourceSpan &span) {
    auto params = sig.params();
    if (params.size() != c.args.size()) {
      error("arity", "'" + c.callee + "' expects " + std::to_string(params.size()) +
                         " arguments, got " + std::to_string(c.args.size()),
            span);
      for (const auto &a : c.args) expr(env, a);
      return;
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
      Type t = expr(env, c.args[i], &params[i]);
      if (!is_subtype(t, params[i])) {
        error("arg-mismatch", "argument " + std::to_string(i + 1) + " of '" + c.callee +
                                  "' has type " + to_string(t) + ", expected " + to_string(params[i]),
              c.args[i].loc.span);
      }
    }
  }

  Type call(const TypeEnv &env, const Call &c, const SourceSpan &span) {
    auto args_anything = [&] {
      for (const auto &a : c.args) expr(env, a);
    };
    if (c.callee == "nops") {
      if (c.args.size() != 1) {
        error("arity", "'nops' expects 1 argument", span);
        args_anything();
        return Type::integer();
      }
      Type t = expr(env, c.args[0]);
      if (!(t.is(K::Anything) || t.is(K::List) || t.is(K::Set) || t.is(K::Record))) {
        error("arg-mismatch", "'nops' needs a list, set or record, found " + to_string(t),
              c.args[0].loc.span);
      }
      return Type::integer();
    }
    if (c.callee == "print") {
      args_anything();
      return Type::void_();
    }
    const Type *callee = env.find(c.callee);
    if (callee) use(c.callee);
    if (!callee && spec_.active) {
      if (auto it = out_.defines.find(c.callee); it != out_.defines.end()) {
        if (it->second.arity != c.args.size()) {
          error("arity", "'" + c.callee + "' is defined with " + std::to_string(it->second.arity) +
                             " arguments",
                span);
        }
        args_anything();
        return it->second.result;
      }
      if (auto it = predicates_.find(c.callee); it != predicates_.end()) {
        if (it->second != c.args.size()) {
          error("arity", "predicate '" + c.callee + "' takes " + std::to_string(it->second) +
                             " arguments",
                span);
        }
        args_anything();
        return Type::boolean();
      }
      if (abstractFuncs_.count(c.callee) || spec_.allowAbstract) {
        abstractFuncs_.insert(c.callee);
        args_anything();
        return Type::anything();
      }
    }
    if (!callee) callee = knownProcs_.find(c.callee);
    if (!callee) {
      if (spec_.active) {
        error("unknown-predicate", "unknown function or predicate '" + c.callee + "'", span);
      } else {
        error("unknown-function", "call to unknown procedure '" + c.callee + "'", span);
      }
      args_anything();
      return Type::anything();
    }
    if (auto it = procExceptions_.find(c.callee); it != procExceptions_.end()) {
      exprExceptions_.insert(it->second.begin(), it->second.end());
    }
    if (callee->is(K::Procedure)) {
      Type sig = *callee;
      check_args(env, c, sig, span);
      return sig.ret();
    }
    if (callee->is(K::Anything)) {
      args_anything();
      return Type::anything();
    }
    error("not-callable", "'" + c.callee + "' has type " + to_string(*callee) + " and cannot be called",
          span);
    args_anything();
    return Type::anything();
  }

  Type binary(const TypeEnv &env, const Binary &b, const Expr &e) {
    const SourceSpan &span = e.loc.span;
    switch (b.op) {
    case BinaryOp::And:
    case BinaryOp::Or:
    case BinaryOp::Implies:
    case BinaryOp::Equivalent: cond(env, e); return Type::boolean();
    default: break;
    }
    Type l = expr(env, *b.lhs);
    Type r = expr(env, *b.rhs);
    auto need = [&](bool ok, const char *what) {
      if (!ok) {
        error("non-numeric", std::string("operator '") + to_string(b.op) + "' needs " + what +
                                 " operands, found " + to_string(l) + " and " + to_string(r),
              span);
      }
      return ok;
    };
    switch (b.op) {
    case BinaryOp::Add:
    case BinaryOp::Sub:
    case BinaryOp::Mul:
      if (!need(numeric_ok(l) && numeric_ok(r), "numeric")) return Type::anything();
      return arith(l, r);
    case BinaryOp::Div:
      if (!need(numeric_ok(l) && numeric_ok(r), "numeric")) return Type::anything();
      if (is_subtype(l, Type::integer()) && is_subtype(r, Type::integer())) return Type::rational();
      return arith(l, r);
    case BinaryOp::Mod:
      need(integral_ok(l) && integral_ok(r), "integer");
      return Type::integer();
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge:
      need(numeric_ok(l) && numeric_ok(r), "numeric");
      return Type::boolean();
    default: return Type::boolean(); // = and <>
    }
  }

  Type num_quant(const TypeEnv &env, const NumQuant &nq, const SourceSpan &span) {
    TypeEnv inner = env;
    Type varType = Type::anything();
    if (auto *in = std::get_if<InRange>(&nq.range)) {
      Type src = expr(env, *in->source);
      if (src.is(K::List) || src.is(K::Set)) {
        varType = src.elem();
      } else if (src.is(K::Record) && !src.fields().empty()) {
        varType = Type::union_of(src.fields());
      } else if (!src.is(K::Anything)) {
        error("range-type", "range source has type " + to_string(src) + ", expected a list or set",
              in->source->loc.span);
      }
    } else {
      const auto &iv = std::get<IntervalRange>(nq.range);
      for (const Expr *bound : {&*iv.low, &*iv.high}) {
        Type t = expr(env, *bound);
        if (!integral_ok(t)) {
          error("range-type", "range bound has type " + to_string(t) + ", expected integer",
                bound->loc.span);
        }
      }
      varType = Type::integer();
    }
    inner.bind(nq.var, varType);
    if (nq.filter) {
      Type ft = cond_type(inner, **nq.filter);
      if (!boolish(ft)) {
        error("spec-non-boolean", "quantifier filter has type " + to_string(ft) + ", expected boolean",
              (*nq.filter)->loc.span);
      }
      BoolResult r;
      {
        bool savedQuiet = std::exchange(quiet_, true);
        r = cond(inner, **nq.filter);
        quiet_ = savedQuiet;
      }
      if (can_specialize(inner, r.thenDelta)) inner = specialize(inner, r.thenDelta);
    }
    Type term = expr(inner, *nq.term);
    if (nq.kind == NumQuantKind::Seq) return Type::list(term);
    if (!numeric_ok(term)) {
      error("non-numeric", std::string("'") + to_string(nq.kind) + "' needs a numeric term, found " +
                               to_string(term),
            span);
      return Type::anything();
    }
    return term;
  }

  // -- define ---------------------------------------------------------------

  void define(const Define &d, const SourceSpan &span) {
    std::optional<std::size_t> arity;
    for (const auto &rule : d.rules) {
      auto *c = rule.pattern.as<Call>();
      if (!c || c->callee != d.name) {
        error("define-pattern", "rule pattern must apply '" + d.name + "'", rule.pattern.loc.span);
        continue;
      }
      if (arity && *arity != c->args.size()) {
        error("define-arity", "rules of '" + d.name + "' disagree on the number of arguments",
              rule.pattern.loc.span);
      }
      if (!arity) arity = c->args.size();
    }
    out_.defines[d.name] = DefineSig{arity.value_or(0), Type::anything()};

    SpecMode saved = std::exchange(spec_, SpecMode{true, std::nullopt, false});
    auto rule_type = [&](const DefineRule &rule) {
      TypeEnv env;
      if (auto *c = rule.pattern.as<Call>()) {
        for (const auto &a : c->args) {
          if (auto *tv = a.as<TypedVar>()) {
            env.bind(tv->name, resolve_type(tv->type));
          } else if (auto *id = a.as<Ident>()) {
            env.bind(id->name, Type::anything());
          }
        }
      }
      return expr(env, rule.body);
    };
    auto join_rules = [&](bool onlyBase) {
      std::optional<Type> joined;
      for (const auto &rule : d.rules) {
        if (onlyBase && calls(rule.body, d.name)) continue;
        Type t = rule_type(rule);
        joined = joined ? super_type(*joined, t) : t;
      }
      return joined;
    };

    // The result type is the least fixed point reached from the base rules.
    bool savedQuiet = std::exchange(quiet_, true);
    Type approx = join_rules(true).value_or(Type::anything());
    for (int round = 0; round < 8; ++round) {
      out_.defines[d.name].result = approx;
      Type next = join_rules(false).value_or(Type::anything());
      if (next == approx) break;
      approx = super_type(approx, next);
    }
    quiet_ = savedQuiet;
    out_.defines[d.name].result = approx;
    join_rules(false); // report diagnostics once
    spec_ = saved;
    (void)span;
  }

  // -- helpers --------------------------------------------------------------

  Type resolve_type(const TypeExpr &te) {
    Resolved r = resolve(te, out_.types);
    if (r.error) {
      if (!quiet_) sink_->push_back(*r.error);
      return Type::anything();
    }
    return r.type ? *r.type : Type::anything();
  }

  bool known_type(const std::string &name) const {
    return out_.types.named.count(name) || out_.types.abstract.count(name);
  }

  void use(const std::string &name) {
    if (scope_.used) scope_.used->insert(name);
  }

  void report(Severity sev, const char *code, std::string msg, const SourceSpan &span) {
    if (!quiet_) sink_->push_back(Diagnostic{sev, code, std::move(msg), span});
  }
  void error(const char *code, std::string msg, const SourceSpan &span) {
    report(Severity::Error, code, std::move(msg), span);
  }
  void warn(const char *code, std::string msg, const SourceSpan &span) {
    report(Severity::Warning, code, std::move(msg), span);
  }
  void info(const char *code, std::string msg, const SourceSpan &span) {
    report(Severity::Info, code, std::move(msg), span);
  }

private:
  CheckResult &out_;
  std::vector<Diagnostic> *sink_;
  bool quiet_ = false;
  Scope scope_;
  SpecMode spec_;
  TypeEnv knownProcs_;
  std::map<std::string, std::set<std::string>> procExceptions_;
  std::set<std::string> lastProcExceptions_;
  std::set<std::string> exprExceptions_;
  std::map<std::string, std::size_t> predicates_;
  std::set<std::string> abstractFuncs_;
};

} // namespace

const Annotation *CheckResult::at(const Cmd &cmd) const {
  auto it = annotations.find(&cmd);
  return it == annotations.end() ? nullptr : &it->second;
}

CheckResult check_program(const Program &program) {
  CheckResult out;
  Checker checker(out);
  checker.declarations(program.declarations);
  out.top = checker.seq(TypeEnv{}, program.commands);
  sort_by_position(out.diagnostics);
  return out;
}

Type check_expr(const TypeEnv &pi, const Expr &e, std::vector<Diagnostic> *diags) {
  CheckResult scratch;
  Checker checker(scratch, diags ? diags : &scratch.diagnostics);
  return checker.expr(pi, e);
}

BoolCheck check_bool_expr(const TypeEnv &pi, const Expr &e) {
  CheckResult scratch;
  BoolCheck out;
  Checker checker(scratch, &out.diagnostics);
  BoolResult r = checker.cond(pi, e);
  out.thenEnv = std::move(r.thenDelta);
  out.elseEnv = std::move(r.elseDelta);
  out.thenUnreachable = r.thenUnreachable;
  out.elseUnreachable = r.elseUnreachable;
  return out;
}

std::vector<TypeEnv::Entry> dump_order(const TypeEnv &env) {
  std::vector<TypeEnv::Entry> out(env.begin(), env.end());
  std::stable_partition(out.begin(), out.end(),
                        [](const TypeEnv::Entry &e) { return e.second.is(K::Procedure); });
  return out;
}

std::string format_type_set(const std::vector<Type> &types) {
  std::string out = "{";
  for (std::size_t i = 0; i < types.size(); ++i) out += (i ? ", " : "") + to_string(types[i]);
  return out + "}";
}

std::string format_exception_set(const std::set<std::string> &names) {
  std::string out = "{";
  bool first = true;
  for (const auto &n : names) {
    out += (first ? "\"" : ", \"") + n + "\"";
    first = false;
  }
  return out + "}";
}

} // namespace minimaple
