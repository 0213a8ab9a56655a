// interpreter.cpp - tree-walking evaluation with runtime contract checks
#include "minimaple/interpreter.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "minimaple/printer.hpp"

namespace minimaple {

namespace {

// Raised inside the evaluator; the public entry points turn it into the
// error element of StateU.
struct Fail {
  RuntimeError error;
};

[[noreturn]] void fail(std::string message, const SourceSpan &span,
                       std::optional<std::string> label = std::nullopt) {
  throw Fail{RuntimeError{std::move(message), std::move(label), span}};
}

constexpr int kMaxDepth = 2000;

bool mentions(const Expr &e, const std::string &name) {
  if (auto *id = e.as<Ident>(); id && id->name == name) return true;
  for (const Expr *c : subexpressions(e)) {
    if (mentions(*c, name)) return true;
  }
  return false;
}

void conjuncts(const Expr &e, std::vector<const Expr *> &out) {
  if (auto *b = e.as<Binary>(); b && b->op == BinaryOp::And) {
    conjuncts(*b->lhs, out);
    conjuncts(*b->rhs, out);
  } else {
    out.push_back(&e);
  }
}

template <class T>
class Restore {
public:
  Restore(T &slot, T value) : slot_(slot), saved_(std::exchange(slot, std::move(value))) {}
  ~Restore() { slot_ = std::move(saved_); }
  Restore(const Restore &) = delete;
  Restore &operator=(const Restore &) = delete;

private:
  T &slot_;
  T saved_;
};

} // namespace

struct Interpreter::Impl {
  struct SpecCtx {
    std::optional<Value> result;
    const State *old = nullptr;
  };

  const Program &program;
  RunOptions opts;
  NamedTypeTable table;
  std::map<std::string, const Define *> defines;
  std::set<std::string> abstractNames;
  std::vector<std::map<std::string, Value>> binders;
  std::vector<SpecCtx> specs;
  std::vector<TraceEvent> trace;
  std::vector<Outcome> outcomes;
  std::uint64_t steps = 0;
  int depth = 0;

  Impl(const Program &p, RunOptions o) : program(p), opts(o) {
    for (const auto &d : p.declarations) {
      if (auto *n = std::get_if<NamedTypeDecl>(&d.node)) {
        table.named.emplace(n->name, n->type);
      } else if (auto *a = std::get_if<AbstractTypeDecl>(&d.node)) {
        table.abstract.insert(a->name);
      } else if (auto *df = std::get_if<Define>(&d.node)) {
        defines[df->name] = df;
      } else if (auto *pr = std::get_if<PredicateDecl>(&d.node)) {
        abstractNames.insert(pr->name);
      } else if (auto *as = std::get_if<Assume>(&d.node)) {
        collect_heads(as->fact);
      }
    }
  }

  void collect_heads(const Expr &e) {
    if (auto *c = e.as<Call>(); c && !defines.count(c->callee)) abstractNames.insert(c->callee);
    for (const Expr *s : subexpressions(e)) collect_heads(*s);
  }

  void record(std::string event, const SourceSpan &span, std::string detail) {
    trace.push_back(TraceEvent{std::move(event), span, std::move(detail)});
  }

  Type resolve_type(const TypeExpr &te) {
    Resolved r = resolve(te, table);
    if (!r.type) fail(r.error ? r.error->message : "unresolvable type", te.loc.span);
    return *r.type;
  }

  // -- state access -----------------------------------------------------------

  Value lookup(const State &s, const std::string &name) {
    for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
      if (auto f = it->find(name); f != it->end()) return f->second;
    }
    if (!s.frames.empty()) {
      for (const Frame *f = s.frames.back().get(); f; f = f->parent.get()) {
        if (auto v = f->vars.find(name); v != f->vars.end()) return v->second;
        if (f->globals.count(name)) break;
      }
    }
    if (auto g = s.globals.find(name); g != s.globals.end()) return g->second;
    return make_symbol(name);
  }

  void assign(State &s, const std::string &name, Value v) {
    if (!s.frames.empty()) {
      for (Frame *f = s.frames.back().get(); f; f = f->parent.get()) {
        if (auto slot = f->vars.find(name); slot != f->vars.end()) {
          if (auto d = f->declared.find(name); d != f->declared.end()) v = coerce_to(std::move(v), d->second);
          slot->second = std::move(v);
          return;
        }
        if (f->globals.count(name)) break;
      }
    }
    s.globals[name] = std::move(v);
  }

  void tick(const SourceSpan &span) {
    if (++steps > opts.stepLimit) fail("step limit exceeded", span);
  }

  // -- expressions ------------------------------------------------------------

  bool truth(const Value &v, const char *what, const SourceSpan &span) {
    if (auto *b = v.as<BoolVal>()) return b->v;
    fail(std::string(what) + " is not boolean: " + to_string(v), span);
  }

  Value eval(State &s, const Expr &e) {
    const SourceSpan &span = e.loc.span;
    if (auto *i = e.as<IntLit>()) return make_int(BigInt(i->digits));
    if (auto *f = e.as<FloatLit>()) return make_float(std::stod(f->text));
    if (auto *st = e.as<StringLit>()) return make_string(st->value);
    if (auto *b = e.as<BoolLit>()) return make_bool(b->value);
    if (auto *id = e.as<Ident>()) return lookup(s, id->name);
    if (auto *l = e.as<ListLit>()) return make_list(eval_all(s, l->items));
    if (auto *st = e.as<SetLit>()) return make_set(eval_all(s, st->items));
    if (auto *ix = e.as<Index>()) {
      Value base = eval(s, *ix->base);
      Value idx = eval(s, *ix->index);
      return index(base, idx, span);
    }
    if (auto *c = e.as<Call>()) return call(s, *c, span);
    if (auto *tt = e.as<TypeTest>()) {
      Value v = eval(s, *tt->subject);
      return make_bool(has_type(v, resolve_type(tt->type)));
    }
    if (auto *u = e.as<Unary>()) {
      Value v = eval(s, *u->operand);
      if (u->op == UnaryOp::Not) return make_bool(!truth(v, "operand of 'not'", span));
      return arith(BinaryOp::Sub, make_int(0), v, span);
    }
    if (auto *b = e.as<Binary>()) return binary(s, *b, span);
    if (auto *u = e.as<Uneval>()) return Value{UnevalVal{&*u->quoted}};
    if (auto *pd = e.as<ProcDef>()) {
      return Value{ProcVal{pd, s.frames.empty() ? nullptr : s.frames.back()}};
    }
    if (auto *q = e.as<Quantified>()) return quantified(s, *q, span);
    if (auto *nq = e.as<NumQuant>()) return num_quant(s, *nq, span);
    if (e.as<ResultRef>()) {
      if (specs.empty() || !specs.back().result) fail("RESULT is not available here", span);
      return *specs.back().result;
    }
    if (auto *o = e.as<OldRef>()) {
      const State *old = specs.empty() ? nullptr : specs.back().old;
      return lookup(old ? *old : s, o->name);
    }
    fail("pattern variable outside a define rule", span);
  }

  std::vector<Value> eval_all(State &s, const std::vector<Expr> &items) {
    std::vector<Value> out;
    out.reserve(items.size());
    for (const auto &i : items) out.push_back(eval(s, i));
    return out;
  }

  static const std::vector<Value> *items_of(const Value &v) {
    if (auto *l = v.as<ListVal>()) return &l->items;
    if (auto *r = v.as<RecordVal>()) return &r->items;
    if (auto *st = v.as<SetVal>()) return &st->items;
    if (auto *t = v.as<TaggedVal>()) return &t->items;
    return nullptr;
  }

  Value index(const Value &base, const Value &idx, const SourceSpan &span) {
    const auto *items = items_of(base);
    if (!items) fail("cannot index " + to_string(base), span);
    auto *i = idx.as<IntVal>();
    if (!i) fail("index is not an integer: " + to_string(idx), span);
    if (i->v < 1 || i->v > items->size()) {
      fail("index out of bounds: " + i->v.str() + " not in 1.." + std::to_string(items->size()), span);
    }
    return (*items)[static_cast<std::size_t>(i->v) - 1];
  }

  Value arith(BinaryOp op, const Value &a, const Value &b, const SourceSpan &span) {
    if (!is_number(a) || !is_number(b)) {
      fail(std::string("arithmetic on non-numeric values: ") + to_string(a) + " " + to_string(op) +
               " " + to_string(b),
           span);
    }
    auto ea = to_exact(a);
    auto eb = to_exact(b);
    if (!ea || !eb) {
      double x = *to_double(a);
      double y = *to_double(b);
      switch (op) {
      case BinaryOp::Add: return make_float(x + y);
      case BinaryOp::Sub: return make_float(x - y);
      case BinaryOp::Mul: return make_float(x * y);
      case BinaryOp::Div:
        if (y == 0) fail("division by zero", span);
        return make_float(x / y);
      default: fail("'mod' needs integer operands", span);
      }
    }
    switch (op) {
    case BinaryOp::Add: return make_rational(*ea + *eb);
    case BinaryOp::Sub: return make_rational(*ea - *eb);
    case BinaryOp::Mul: return make_rational(*ea * *eb);
    case BinaryOp::Div:
      if (*eb == 0) fail("division by zero", span);
      return make_rational(*ea / *eb);
    default: {
      auto *x = a.as<IntVal>();
      auto *y = b.as<IntVal>();
      if (!x || !y) fail("'mod' needs integer operands", span);
      if (y->v == 0) fail("division by zero", span);
      BigInt m = abs(y->v);
      BigInt r = x->v % m;
      if (r < 0) r += m;
      return make_int(r);
    }
    }
  }

  int compare(const Value &a, const Value &b, BinaryOp op, const SourceSpan &span) {
    if (!is_number(a) || !is_number(b)) {
      fail(std::string("cannot compare ") + to_string(a) + " " + to_string(op) + " " + to_string(b),
           span);
    }
    auto ea = to_exact(a);
    auto eb = to_exact(b);
    if (ea && eb) return *ea < *eb ? -1 : (*ea > *eb ? 1 : 0);
    double x = *to_double(a);
    double y = *to_double(b);
    return x < y ? -1 : (x > y ? 1 : 0);
  }

  Value binary(State &s, const Binary &b, const SourceSpan &span) {
    switch (b.op) {
    case BinaryOp::And:
      if (!truth(eval(s, *b.lhs), "operand of 'and'", span)) return make_bool(false);
      return make_bool(truth(eval(s, *b.rhs), "operand of 'and'", span));
    case BinaryOp::Or:
      if (truth(eval(s, *b.lhs), "operand of 'or'", span)) return make_bool(true);
      return make_bool(truth(eval(s, *b.rhs), "operand of 'or'", span));
    case BinaryOp::Implies:
      if (!truth(eval(s, *b.lhs), "operand of 'implies'", span)) return make_bool(true);
      return make_bool(truth(eval(s, *b.rhs), "operand of 'implies'", span));
    case BinaryOp::Equivalent: {
      bool l = truth(eval(s, *b.lhs), "operand of 'equivalent'", span);
      return make_bool(l == truth(eval(s, *b.rhs), "operand of 'equivalent'", span));
    }
    default: break;
    }
    Value l = eval(s, *b.lhs);
    Value r = eval(s, *b.rhs);
    switch (b.op) {
    case BinaryOp::Eq: return make_bool(values_equal(l, r));
    case BinaryOp::Ne: return make_bool(!values_equal(l, r));
    case BinaryOp::Lt: return make_bool(compare(l, r, b.op, span) < 0);
    case BinaryOp::Le: return make_bool(compare(l, r, b.op, span) <= 0);
    case BinaryOp::Gt: return make_bool(compare(l, r, b.op, span) > 0);
    case BinaryOp::Ge: return make_bool(compare(l, r, b.op, span) >= 0);
    default: return arith(b.op, l, r, span);
    }
  }

  Value call(State &s, const Call &c, const SourceSpan &span) {
    if (c.callee == "nops") {
      if (c.args.size() != 1) fail("'nops' expects 1 argument", span);
      Value v = eval(s, c.args[0]);
      const auto *items = items_of(v);
      if (!items) fail("'nops' of a non-sequence: " + to_string(v), span);
      return make_int(BigInt(items->size()));
    }
    if (c.callee == "print") {
      std::vector<Value> args = eval_all(s, c.args);
      std::string text;
      for (std::size_t i = 0; i < args.size(); ++i) text += (i ? ", " : "") + to_string(args[i]);
      record("print", span, text);
      return Value{VoidVal{}};
    }
    Value f = lookup(s, c.callee);
    if (auto *pv = f.as<ProcVal>()) return apply(s, *pv, eval_all(s, c.args), c.callee, span);
    if (auto it = defines.find(c.callee); it != defines.end() && f.is<SymbolVal>()) {
      return apply_define(s, *it->second, eval_all(s, c.args), span);
    }
    if (abstractNames.count(c.callee)) fail("abstract predicate not executable: " + c.callee, span);
    fail("calling a non-procedure value: " + c.callee + " = " + to_string(f), span);
  }

  Value apply(State &s, const ProcVal &pv, std::vector<Value> args, const std::string &name,
              const SourceSpan &span) {
    const ProcDef &pd = *pv.def;
    if (++depth > kMaxDepth) {
      --depth;
      fail("recursion depth exceeded", span);
    }
    struct DepthGuard {
      int &d;
      ~DepthGuard() { --d; }
    } depthGuard{depth};
    // Procedure bodies see neither spec binders nor RESULT/OLD of a caller.
    Restore<std::vector<std::map<std::string, Value>>> hideBinders(binders, {});
    Restore<std::vector<SpecCtx>> hideSpecs(specs, {});

    if (args.size() != pd.params.size()) {
      fail("procedure " + name + " expects " + std::to_string(pd.params.size()) + " arguments, got " +
               std::to_string(args.size()),
           span);
    }
    auto frame = std::make_shared<Frame>();
    frame->parent = pv.scope;
    frame->globals.insert(pd.globals.begin(), pd.globals.end());
    for (std::size_t i = 0; i < args.size(); ++i) {
      Type t = resolve_type(pd.params[i].type);
      if (!has_type(args[i], t)) {
        fail("argument " + std::to_string(i + 1) + " of " + name + " has wrong type: expected " +
                 to_string(t) + ", got " + to_string(args[i]),
             span);
      }
      frame->vars[pd.params[i].name] = coerce_to(args[i], t);
      frame->declared.emplace(pd.params[i].name, t);
    }
    std::string shown;
    for (std::size_t i = 0; i < args.size(); ++i) shown += (i ? ", " : "") + to_string(args[i]);
    record("call", span, name + "(" + shown + ")");

    s.frames.push_back(frame);
    struct FrameGuard {
      State &s;
      ~FrameGuard() { s.frames.pop_back(); }
    } frameGuard{s};

    for (const auto &local : pd.locals) {
      std::optional<Type> lt;
      if (local.type) lt = resolve_type(*local.type);
      Value v = make_symbol(local.name);
      if (local.init) {
        v = eval(s, **local.init);
        if (lt) {
          v = coerce_to(std::move(v), *lt);
          if (!has_type(v, *lt)) {
            fail("initializer of local " + local.name + " has wrong type: expected " +
                     to_string(*lt) + ", got " + to_string(v),
                 (*local.init)->loc.span);
          }
        }
      }
      frame->vars[local.name] = std::move(v);
      if (lt) frame->declared.emplace(local.name, *lt);
    }

    std::optional<State> entry;
    if (opts.checkProcContracts && pd.spec) {
      entry = s.snapshot();
      const Expr &req = (*pd.spec)->precondition;
      bool ok = spec_truth(s, req, std::nullopt, &*entry);
      outcomes.push_back(Outcome{"requires", req.loc.span, ok, name});
      record("requires", req.loc.span, ok ? "holds" : "violated");
      if (!ok) fail("precondition violated", req.loc.span, name);
    }

    std::optional<Value> returned = exec_body(s, pd.body);
    Type rt = resolve_type(pd.returnType);
    Value result = returned ? coerce_to(std::move(*returned), rt) : Value{VoidVal{}};
    if (!has_type(result, rt)) {
      fail(name + " returned " + to_string(result) + ", expected " + to_string(rt), span);
    }

    if (entry) {
      const Expr &ens = (*pd.spec)->postcondition;
      bool ok = spec_truth(s, ens, result, &*entry);
      outcomes.push_back(Outcome{"ensures", ens.loc.span, ok, name});
      record("ensures", ens.loc.span, ok ? "holds" : "violated");
      if (!ok) fail("postcondition violated", ens.loc.span, name);
    }
    record("return", span, name + " returned " + to_string(result));
    return result;
  }

  Value apply_define(State &s, const Define &d, const std::vector<Value> &args, const SourceSpan &span) {
    if (++depth > kMaxDepth) {
      --depth;
      fail("recursion depth exceeded", span);
    }
    struct DepthGuard {
      int &d;
      ~DepthGuard() { --d; }
    } depthGuard{depth};
    for (const auto &rule : d.rules) {
      auto *pat = rule.pattern.as<Call>();
      if (!pat || pat->args.size() != args.size()) continue;
      std::map<std::string, Value> bound;
      bool match = true;
      for (std::size_t i = 0; i < args.size() && match; ++i) {
        const Expr &p = pat->args[i];
        if (auto *tv = p.as<TypedVar>()) {
          match = has_type(args[i], resolve_type(tv->type));
          if (match) bound[tv->name] = args[i];
        } else if (auto *id = p.as<Ident>()) {
          bound[id->name] = args[i];
        } else {
          State scratch;
          match = values_equal(eval(scratch, p), args[i]);
        }
      }
      if (!match) continue;
      Restore<std::vector<std::map<std::string, Value>>> scope(binders, {std::move(bound)});
      return eval(s, rule.body);
    }
    std::string shown;
    for (std::size_t i = 0; i < args.size(); ++i) shown += (i ? ", " : "") + to_string(args[i]);
    fail("no rule of " + d.name + " matches (" + shown + ")", span);
  }

  // -- specification constructs ----------------------------------------------

  // Integer bounds on `v` recovered from guard conjuncts such as
  // `1<=v and v<n`.
  std::pair<std::optional<BigInt>, std::optional<BigInt>> bounds(State &s, const Expr &guard,
                                                                const std::string &v) {
    std::vector<const Expr *> parts;
    conjuncts(guard, parts);
    std::optional<BigInt> lo, hi;
    auto as_int = [&](const Expr &e, int adjust) -> std::optional<BigInt> {
      Value x = eval(s, e);
      if (auto *i = x.as<IntVal>()) return i->v + adjust;
      return std::nullopt;
    };
    auto lower = [&](std::optional<BigInt> b) {
      if (b && (!lo || *b > *lo)) lo = b;
    };
    auto upper = [&](std::optional<BigInt> b) {
      if (b && (!hi || *b < *hi)) hi = b;
    };
    for (const Expr *p : parts) {
      auto *b = p->as<Binary>();
      if (!b) continue;
      auto *l = b->lhs->as<Ident>();
      auto *r = b->rhs->as<Ident>();
      bool varLeft = l && l->name == v && !mentions(*b->rhs, v);
      bool varRight = r && r->name == v && !mentions(*b->lhs, v);
      if (!varLeft && !varRight) continue;
      const Expr &other = varLeft ? *b->rhs : *b->lhs;
      switch (b->op) {
      case BinaryOp::Le: varLeft ? upper(as_int(other, 0)) : lower(as_int(other, 0)); break;
      case BinaryOp::Lt: varLeft ? upper(as_int(other, -1)) : lower(as_int(other, 1)); break;
      case BinaryOp::Ge: varLeft ? lower(as_int(other, 0)) : upper(as_int(other, 0)); break;
      case BinaryOp::Gt: varLeft ? lower(as_int(other, 1)) : upper(as_int(other, -1)); break;
      case BinaryOp::Eq: {
        auto x = as_int(other, 0);
        lower(x);
        upper(x);
        break;
      }
      default: break;
      }
    }
    return {lo, hi};
  }

  Value quantified(State &s, const Quantified &q, const SourceSpan &span) {
    Type bt = resolve_type(q.binderType);
    if (!bt.is(Type::Kind::Integer)) fail("unbounded quantifier over " + to_string(bt), span);
    const Expr *guard = &*q.body;
    if (q.kind == QuantKind::Forall) {
      auto *b = q.body->as<Binary>();
      guard = b && b->op == BinaryOp::Implies ? &*b->lhs : nullptr;
    }
    if (!guard) fail("unbounded quantifier: no range guard on " + q.binder, span);
    auto [lo, hi] = bounds(s, *guard, q.binder);
    if (!lo || !hi) fail("unbounded quantifier: no range guard on " + q.binder, span);
    if (*hi >= *lo && *hi - *lo + 1 > opts.quantifierBound) {
      fail("quantifier range exceeds the bound of " + std::to_string(opts.quantifierBound), span);
    }
    const bool forall = q.kind == QuantKind::Forall;
    for (BigInt k = *lo; k <= *hi; ++k) {
      binders.push_back({{q.binder, make_int(k)}});
      bool holds;
      try {
        holds = truth(eval(s, *q.body), "quantifier body", span);
      } catch (...) {
        binders.pop_back();
        throw;
      }
      binders.pop_back();
      if (forall && !holds) return make_bool(false);
      if (!forall && holds) return make_bool(true);
    }
    return make_bool(forall);
  }

  Value num_quant(State &s, const NumQuant &nq, const SourceSpan &span) {
    std::vector<Value> domain;
    if (auto *in = std::get_if<InRange>(&nq.range)) {
      Value src = eval(s, *in->source);
      const auto *items = items_of(src);
      if (!items) fail("range source is not a list or set: " + to_string(src), span);
      domain = *items;
    } else {
      const auto &iv = std::get<IntervalRange>(nq.range);
      Value lo = eval(s, *iv.low);
      Value hi = eval(s, *iv.high);
      auto *l = lo.as<IntVal>();
      auto *h = hi.as<IntVal>();
      if (!l || !h) fail("range bounds must be integers", span);
      if (h->v >= l->v && h->v - l->v + 1 > opts.quantifierBound) {
        fail("quantifier range exceeds the bound of " + std::to_string(opts.quantifierBound), span);
      }
      for (BigInt k = l->v; k <= h->v; ++k) domain.push_back(make_int(k));
    }
    std::vector<Value> kept;
    for (auto &d : domain) {
      binders.push_back({{nq.var, d}});
      try {
        if (!nq.filter || truth(eval(s, **nq.filter), "quantifier filter", span)) {
          kept.push_back(eval(s, *nq.term));
        }
      } catch (...) {
        binders.pop_back();
        throw;
      }
      binders.pop_back();
    }
    switch (nq.kind) {
    case NumQuantKind::Seq: return make_list(std::move(kept));
    case NumQuantKind::Add:
    case NumQuantKind::Mul: {
      const bool add = nq.kind == NumQuantKind::Add;
      Value acc = make_int(add ? 0 : 1);
      for (const auto &v : kept) acc = arith(add ? BinaryOp::Add : BinaryOp::Mul, acc, v, span);
      return acc;
    }
    default: {
      if (kept.empty()) fail(std::string(to_string(nq.kind)) + " of an empty range", span);
      Value best = kept.front();
      for (const auto &v : kept) {
        int c = compare(v, best, BinaryOp::Lt, span);
        if (nq.kind == NumQuantKind::Min ? c < 0 : c > 0) best = v;
      }
      return best;
    }
    }
  }

  // Evaluates against a snapshot so the caller's state is never touched.
  Value spec_eval(const State &s, const Expr &e, std::optional<Value> result, const State *old) {
    State snap = s.snapshot();
    specs.push_back(SpecCtx{std::move(result), old ? old : &s});
    try {
      Value v = eval(snap, e);
      specs.pop_back();
      return v;
    } catch (...) {
      specs.pop_back();
      throw;
    }
  }

  bool spec_truth(const State &s, const Expr &e, std::optional<Value> result, const State *old) {
    return truth(spec_eval(s, e, std::move(result), old), "specification", e.loc.span);
  }

  // -- commands ---------------------------------------------------------------

  std::optional<Value> exec_body(State &s, const Body &body) {
    for (const auto &cmd : body) {
      if (auto r = exec(s, cmd)) return r;
    }
    return std::nullopt;
  }

  std::optional<Value> exec(State &s, const Cmd &cmd) {
    const SourceSpan &span = cmd.loc.span;
    tick(span);
    if (auto *a = cmd.as<Assign>()) {
      std::vector<Value> values = eval_all(s, a->sources);
      for (std::size_t i = 0; i < a->targets.size(); ++i) {
        if (s.frames.empty() || opts.traceAll) {
          record("assign", span, a->targets[i] + " = " + to_string(values[i]));
        }
        assign(s, a->targets[i], std::move(values[i]));
      }
      return std::nullopt;
    }
    if (auto *i = cmd.as<If>()) {
      for (const auto &branch : i->branches) {
        if (truth(eval(s, branch.cond), "if condition", branch.cond.loc.span)) {
          return exec_body(s, branch.body);
        }
      }
      if (i->elseBody) return exec_body(s, *i->elseBody);
      return std::nullopt;
    }
    if (auto *l = cmd.as<Loop>()) return loop(s, *l, span);
    if (auto *r = cmd.as<Return>()) return r->value ? eval(s, *r->value) : Value{VoidVal{}};
    if (auto *e = cmd.as<ErrorCmd>()) fail(e->message, span);
    if (auto *x = cmd.as<ExprCmd>()) {
      eval(s, x->expr);
      return std::nullopt;
    }
    if (auto *as = cmd.as<Assert>()) {
      if (!opts.checkAssertions) return std::nullopt;
      bool ok = spec_truth(s, as->cond, std::nullopt, nullptr);
      outcomes.push_back(Outcome{"assert", span, ok, as->label.value_or("")});
      record("assert", span, std::string(ok ? "passed" : "failed") + (as->label ? ": " + *as->label : ""));
      if (!ok) fail("assertion failed", span, as->label);
      return std::nullopt;
    }
    return std::nullopt;
  }

  // The iterate chain: t(1) is the entry state; each round tests the guard in
  // t(k) and either exits with t(k) or runs the body to u(k) = t(k+1).
  std::optional<Value> loop(State &s, const Loop &l, const SourceSpan &span) {
    std::optional<Value> step, limit;
    if (l.var) {
      Value from = l.from ? eval(s, *l.from) : make_int(1);
      step = l.by ? eval(s, *l.by) : make_int(1);
      if (l.to) limit = eval(s, *l.to);
      if (!is_number(from) || !is_number(*step) || (limit && !is_number(*limit))) {
        fail("loop range is not numeric", span);
      }
      assign(s, *l.var, from);
    }
    const bool descending = step && compare(*step, make_int(0), BinaryOp::Lt, span) < 0;
    const bool checkSpec = opts.checkLoopSpecs && l.spec;
    std::optional<State> previous;
    if (checkSpec) previous = s.snapshot();
    std::optional<BigInt> lastVariant;

    for (;;) {
      tick(span);
      if (checkSpec) {
        const Expr &inv = l.spec->invariant;
        bool ok = spec_truth(s, inv, std::nullopt, &*previous);
        outcomes.push_back(Outcome{"invariant", inv.loc.span, ok, ""});
        if (!ok) {
          record("invariant", inv.loc.span, "violated");
          fail("invariant violated", inv.loc.span);
        }
        previous = s.snapshot();
      }
      bool go = true;
      if (l.var && limit) {
        int c = compare(lookup(s, *l.var), *limit, BinaryOp::Le, span);
        go = descending ? c >= 0 : c <= 0;
      }
      if (go && l.whileCond) go = truth(eval(s, *l.whileCond), "loop guard", l.whileCond->loc.span);
      if (!go) return std::nullopt;

      if (checkSpec) {
        const Expr &dec = l.spec->decreases;
        Value v = spec_eval(s, dec, std::nullopt, &*previous);
        auto *iv = v.as<IntVal>();
        bool ok = iv && iv->v >= 0 && (!lastVariant || iv->v < *lastVariant);
        outcomes.push_back(Outcome{"variant", dec.loc.span, ok, to_string(v)});
        if (!ok) {
          record("variant", dec.loc.span, "violated at " + to_string(v));
          fail("variant violated", dec.loc.span);
        }
        lastVariant = iv->v;
      }

      if (auto r = exec_body(s, l.body)) return r;
      if (l.var) assign(s, *l.var, arith(BinaryOp::Add, lookup(s, *l.var), *step, span));
    }
  }

  // -- public wrappers ----------------------------------------------------------

  template <class F>
  auto guarded(const StateU &in, F &&body) -> std::pair<StateU, std::optional<Value>> {
    if (is_error(in)) return {in, std::nullopt};
    State s = std::get<State>(in);
    try {
      std::optional<Value> v = body(s);
      return {std::move(s), std::move(v)};
    } catch (const Fail &f) {
      record("error", f.error.span, format_error(f.error));
      return {f.error, std::nullopt};
    }
  }
};

Interpreter::Interpreter(const Program &program, RunOptions options)
    : impl_(std::make_unique<Impl>(program, options)) {}

Interpreter::~Interpreter() = default;

EvalResult Interpreter::eval_expr(const StateU &s, const Expr &e) {
  auto [st, v] = impl_->guarded(s, [&](State &x) { return std::optional<Value>(impl_->eval(x, e)); });
  return EvalResult{std::move(st), std::move(v)};
}

ExecResult Interpreter::exec_command(const StateU &s, const Cmd &cmd) {
  auto [st, v] = impl_->guarded(s, [&](State &x) { return impl_->exec(x, cmd); });
  return ExecResult{std::move(st), std::move(v)};
}

ExecResult Interpreter::exec_body(const StateU &s, const Body &body) {
  auto [st, v] = impl_->guarded(s, [&](State &x) { return impl_->exec_body(x, body); });
  return ExecResult{std::move(st), std::move(v)};
}

ExecResult Interpreter::exec_while(const StateU &s, const Loop &loop) {
  auto [st, v] = impl_->guarded(s, [&](State &x) { return impl_->loop(x, loop, SourceSpan{}); });
  return ExecResult{std::move(st), std::move(v)};
}

EvalResult Interpreter::apply_procedure(const StateU &s, const Value &proc, std::vector<Value> args) {
  auto [st, v] = impl_->guarded(s, [&](State &x) -> std::optional<Value> {
    auto *pv = proc.as<ProcVal>();
    if (!pv) fail("calling a non-procedure value: " + to_string(proc), SourceSpan{});
    return impl_->apply(x, *pv, std::move(args), "procedure", SourceSpan{});
  });
  return EvalResult{std::move(st), std::move(v)};
}

ValueU Interpreter::eval_spec_expr(const State &s, const Expr &e, const SpecBindings &bindings) {
  Restore<std::vector<std::map<std::string, Value>>> scope(impl_->binders, {bindings.binders});
  try {
    return impl_->spec_eval(s, e, bindings.result, bindings.old);
  } catch (const Fail &f) {
    return f.error;
  }
}

const std::vector<TraceEvent> &Interpreter::trace() const { return impl_->trace; }
const std::vector<Outcome> &Interpreter::outcomes() const { return impl_->outcomes; }
std::uint64_t Interpreter::steps() const { return impl_->steps; }

RunResult run_program(const Program &program, const RunOptions &options) {
  Interpreter interp(program, options);
  ExecResult r = interp.exec_body(State{}, program.commands);
  return RunResult{std::move(r.state), interp.trace(), interp.outcomes()};
}

std::string format_trace_event(const TraceEvent &e) {
  return std::to_string(e.span.line) + ":" + std::to_string(e.span.column) + ": " + e.event + ": " +
         e.detail;
}

} // namespace minimaple
