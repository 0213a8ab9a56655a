// printer.cpp - AST to canonical MiniMaple text
#include "minimaple/printer.hpp"

#include <sstream>

namespace minimaple {

namespace {

// Binding strength, loosest first. Unary minus sits with the additive ops.
enum Prec : int {
  PEquivalent = 1,
  PImplies,
  POr,
  PAnd,
  PNot,
  PCompare,
  PAdd,
  PMul,
  PAtom,
};

int precedence(BinaryOp op) {
  switch (op) {
  case BinaryOp::Equivalent: return PEquivalent;
  case BinaryOp::Implies: return PImplies;
  case BinaryOp::Or: return POr;
  case BinaryOp::And: return PAnd;
  case BinaryOp::Eq:
  case BinaryOp::Ne:
  case BinaryOp::Lt:
  case BinaryOp::Le:
  case BinaryOp::Gt:
  case BinaryOp::Ge: return PCompare;
  case BinaryOp::Add:
  case BinaryOp::Sub: return PAdd;
  case BinaryOp::Mul:
  case BinaryOp::Div:
  case BinaryOp::Mod: return PMul;
  }
  return PAtom;
}

int precedence(const Expr &e) {
  if (const auto *b = e.as<Binary>()) return precedence(b->op);
  if (const auto *u = e.as<Unary>()) return u->op == UnaryOp::Not ? PNot : PAdd;
  return PAtom;
}

std::string quote(const std::string &s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
    case '"': out += "\\\""; break;
    case '\\': out += "\\\\"; break;
    case '\n': out += "\\n"; break;
    case '\t': out += "\\t"; break;
    default: out += c;
    }
  }
  return out + "\"";
}

class Printer {
public:
  std::string type(const TypeExpr &t) {
    using K = TypeExpr::Kind;
    switch (t.kind) {
    case K::Integer: return "integer";
    case K::Boolean: return "boolean";
    case K::String: return "string";
    case K::Float: return "float";
    case K::Rational: return "rational";
    case K::Anything: return "anything";
    case K::Symbol: return "symbol";
    case K::Void: return "void";
    case K::Uneval: return "uneval";
    case K::Set: return "{" + type(t.args.at(0)) + "}";
    case K::List: return "list(" + type(t.args.at(0)) + ")";
    case K::Record: return "[" + types(t.args, 0) + "]";
    case K::Procedure: return "procedure[" + type(t.args.at(0)) + "](" + types(t.args, 1) + ")";
    case K::Tagged: return t.name + "(" + types(t.args, 0) + ")";
    case K::Or: return "Or(" + types(t.args, 0) + ")";
    case K::Named: return t.name;
    }
    return "anything";
  }

  std::string expr(const Expr &e, int min_prec = 0) {
    std::string s = raw(e);
    return precedence(e) < min_prec ? "(" + s + ")" : s;
  }

  std::string command(const Cmd &c, int indent) {
    std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    std::ostringstream out;
    std::visit([&](const auto &node) { emit(out, node, pad, indent); }, c.node);
    return out.str();
  }

  std::string body(const Body &cmds, int indent) {
    std::string out;
    for (const auto &c : cmds) out += command(c, indent);
    return out;
  }

  std::string proc_spec(const ProcSpec &s, int indent) {
    std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    std::string out = "(*@\n";
    out += pad + "  requires " + expr(s.precondition) + ";\n";
    if (!s.globals.empty()) out += pad + "  global " + join(s.globals) + ";\n";
    out += pad + "  ensures " + expr(s.postcondition) + ";\n";
    if (s.exceptional) out += pad + "  exception " + expr(*s.exceptional) + ";\n";
    return out + pad + "@*)";
  }

  std::string loop_spec(const LoopSpec &s) {
    return "(*@ invariant " + expr(s.invariant) + "; decreases " + expr(s.decreases) + "; @*)";
  }

  std::string decl(const Decl &d) {
    return std::visit([&](const auto &node) { return decl_node(node); }, d.node) + ";\n";
  }

  int indent_ = 0; // indentation of the command enclosing the expression being printed

private:
  std::string types(const std::vector<TypeExpr> &ts, std::size_t from) {
    std::string out;
    for (std::size_t i = from; i < ts.size(); ++i) {
      if (i > from) out += ",";
      out += type(ts[i]);
    }
    return out;
  }

  static std::string join(const std::vector<std::string> &names) {
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) out += (i ? ", " : "") + names[i];
    return out;
  }

  std::string exprs(const std::vector<Expr> &es) {
    std::string out;
    for (std::size_t i = 0; i < es.size(); ++i) out += (i ? ", " : "") + expr(es[i]);
    return out;
  }

  std::string raw(const Expr &e) {
    return std::visit([&](const auto &node) { return render(node); }, e.node);
  }

  std::string render(const IntLit &n) { return n.digits; }
  std::string render(const FloatLit &n) { return n.text; }
  std::string render(const StringLit &n) { return quote(n.value); }
  std::string render(const BoolLit &n) { return n.value ? "true" : "false"; }
  std::string render(const Ident &n) { return n.name; }
  std::string render(const ListLit &n) { return "[" + exprs(n.items) + "]"; }
  std::string render(const SetLit &n) { return "{" + exprs(n.items) + "}"; }
  std::string render(const Index &n) { return expr(*n.base, PAtom) + "[" + expr(*n.index) + "]"; }
  std::string render(const Call &n) { return n.callee + "(" + exprs(n.args) + ")"; }
  std::string render(const TypeTest &n) {
    return "type(" + expr(*n.subject) + ", " + type(n.type) + ")";
  }
  std::string render(const Unary &n) {
    if (n.op == UnaryOp::Not) return "not " + expr(*n.operand, PNot);
    return "-" + expr(*n.operand, PMul);
  }
  std::string render(const Binary &n) {
    int p = precedence(n.op);
    int left = p == PCompare ? p + 1 : p;
    return expr(*n.lhs, left) + " " + to_string(n.op) + " " + expr(*n.rhs, p + 1);
  }
  std::string render(const Uneval &n) { return "'" + expr(*n.quoted) + "'"; }
  std::string render(const TypedVar &n) { return n.name + "::" + type(n.type); }
  std::string render(const Quantified &n) {
    return std::string(n.kind == QuantKind::Forall ? "forall" : "exists") + "(" + n.binder +
           "::" + type(n.binderType) + ", " + expr(*n.body) + ")";
  }
  std::string render(const NumQuant &n) {
    std::string out = std::string(to_string(n.kind)) + "(" + expr(*n.term) + ", " + n.var;
    if (const auto *in = std::get_if<InRange>(&n.range)) {
      out += " in " + expr(*in->source);
    } else {
      const auto &iv = std::get<IntervalRange>(n.range);
      out += " = " + expr(*iv.low, PAdd) + ".." + expr(*iv.high, PAdd);
    }
    if (n.filter) out += ", " + expr(**n.filter);
    return out + ")";
  }
  std::string render(const ResultRef &) { return "RESULT"; }
  std::string render(const OldRef &n) { return "OLD " + n.name; }

  std::string render(const ProcDef &p) {
    std::string pad(static_cast<std::size_t>(indent_) * 2, ' ');
    std::string out;
    if (p.spec) out += proc_spec(**p.spec, indent_) + "\n" + pad;
    out += "proc(";
    for (std::size_t i = 0; i < p.params.size(); ++i) {
      out += (i ? ", " : "") + p.params[i].name + "::" + type(p.params[i].type);
    }
    out += ")::" + type(p.returnType) + ";\n";
    if (!p.globals.empty()) out += pad + "  global " + join(p.globals) + ";\n";
    if (!p.locals.empty()) {
      out += pad + "  local ";
      for (std::size_t i = 0; i < p.locals.size(); ++i) {
        const auto &l = p.locals[i];
        out += (i ? ", " : "") + l.name;
        if (l.type) out += "::" + type(*l.type);
        if (l.init) out += " := " + expr(**l.init);
      }
      out += ";\n";
    }
    int saved = indent_;
    out += body(p.body, indent_ + 1);
    indent_ = saved;
    return out + pad + "end proc";
  }

  // Commands ---------------------------------------------------------------

  void emit(std::ostringstream &out, const Assign &a, const std::string &pad, int indent) {
    indent_ = indent;
    out << pad << join(a.targets) << " := " << exprs(a.sources) << ";\n";
  }

  void emit(std::ostringstream &out, const If &n, const std::string &pad, int indent) {
    indent_ = indent;
    for (std::size_t i = 0; i < n.branches.size(); ++i) {
      indent_ = indent;
      out << (i == 0 ? pad + "if " : pad + "elif ") << expr(n.branches[i].cond) << " then\n";
      out << body(n.branches[i].body, indent + 1);
    }
    if (n.elseBody) out << pad << "else\n" << body(*n.elseBody, indent + 1);
    out << pad << "end if;\n";
  }

  void emit(std::ostringstream &out, const Loop &n, const std::string &pad, int indent) {
    indent_ = indent;
    out << pad;
    if (n.var) {
      out << "for " << *n.var;
      if (n.from) out << " from " << expr(*n.from);
      if (n.by) out << " by " << expr(*n.by);
      if (n.to) out << " to " << expr(*n.to);
      if (n.whileCond) out << " ";
    }
    if (n.whileCond) out << "while " << expr(*n.whileCond);
    out << " do\n";
    if (n.spec) out << pad << "  " << loop_spec(*n.spec) << "\n";
    out << body(n.body, indent + 1) << pad << "end do;\n";
  }

  void emit(std::ostringstream &out, const Return &n, const std::string &pad, int indent) {
    indent_ = indent;
    out << pad << "return";
    if (n.value) out << " " << expr(*n.value);
    out << ";\n";
  }

  void emit(std::ostringstream &out, const ErrorCmd &n, const std::string &pad, int) {
    out << pad << "error " << quote(n.message) << ";\n";
  }

  void emit(std::ostringstream &out, const ExprCmd &n, const std::string &pad, int indent) {
    indent_ = indent;
    out << pad << expr(n.expr) << ";\n";
  }

  void emit(std::ostringstream &out, const Assert &n, const std::string &pad, int indent) {
    indent_ = indent;
    out << pad << "ASSERT(" << expr(n.cond);
    if (n.label) out << ", " << quote(*n.label);
    out << ");\n";
  }

  // Declarations -----------------------------------------------------------

  std::string decl_node(const Define &d) {
    std::string out = "define(" + d.name;
    for (const auto &r : d.rules) out += ", " + expr(r.pattern, PAdd) + " = " + expr(r.body, PAdd);
    return out + ")";
  }
  std::string decl_node(const NamedTypeDecl &d) { return "`type/" + d.name + "` := " + type(d.type); }
  std::string decl_node(const AbstractTypeDecl &d) { return "`type/" + d.name + "`"; }
  std::string decl_node(const Assume &d) { return "assume(" + expr(d.fact) + ")"; }
  std::string decl_node(const PredicateDecl &d) { return d.name + "(" + join(d.params) + ")"; }
};

} // namespace

const char *to_string(BinaryOp op) {
  switch (op) {
  case BinaryOp::Add: return "+";
  case BinaryOp::Sub: return "-";
  case BinaryOp::Mul: return "*";
  case BinaryOp::Div: return "/";
  case BinaryOp::Mod: return "mod";
  case BinaryOp::Eq: return "=";
  case BinaryOp::Ne: return "<>";
  case BinaryOp::Lt: return "<";
  case BinaryOp::Le: return "<=";
  case BinaryOp::Gt: return ">";
  case BinaryOp::Ge: return ">=";
  case BinaryOp::And: return "and";
  case BinaryOp::Or: return "or";
  case BinaryOp::Implies: return "implies";
  case BinaryOp::Equivalent: return "equivalent";
  }
  return "?";
}

const char *to_string(NumQuantKind kind) {
  switch (kind) {
  case NumQuantKind::Add: return "add";
  case NumQuantKind::Mul: return "mul";
  case NumQuantKind::Min: return "min";
  case NumQuantKind::Max: return "max";
  case NumQuantKind::Seq: return "seq";
  }
  return "add";
}

const char *command_kind(const Cmd &cmd) {
  static constexpr const char *names[] = {"assign", "if", "loop", "return", "error", "call", "assert"};
  return names[cmd.node.index()];
}

const char *expr_kind(const Expr &expr) {
  static constexpr const char *names[] = {
      "int",    "float",  "string", "bool",       "ident",   "list",   "set",
      "index",  "call",   "type-test", "unary",   "binary",  "uneval", "proc",
      "typed-var", "quantifier", "numeric-quantifier", "result", "old"};
  return names[expr.node.index()];
}

std::string pretty_print(const Program &program) {
  Printer p;
  std::string out;
  for (const auto &d : program.declarations) out += p.decl(d);
  out += p.body(program.commands, 0);
  return out;
}

std::string pretty_print(const Decl &decl) { return Printer{}.decl(decl); }

std::string pretty_print(const Cmd &cmd, int indent) { return Printer{}.command(cmd, indent); }

std::string pretty_print(const Expr &expr) { return Printer{}.expr(expr); }

std::string pretty_print(const TypeExpr &type) { return Printer{}.type(type); }

std::string pretty_print(const ProcSpec &spec) { return Printer{}.proc_spec(spec, 0); }

std::string pretty_print(const LoopSpec &spec) { return Printer{}.loop_spec(spec); }

} // namespace minimaple
