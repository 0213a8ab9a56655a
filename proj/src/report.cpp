// report.cpp
#include "minimaple/report.hpp"

#include "minimaple/printer.hpp"

namespace minimaple {

using nlohmann::json;

std::string annotation_block(const TypeEnv &env, const CommandInfo &info) {
  std::string out = "**********COMMAND-SEQUENCE-ANNOTATION START**********\n";
  out += "PI -> [\n";
  for (const auto &[name, type] : dump_order(env)) out += name + ":" + to_string(type) + "\n";
  out += "]\n";
  out += "RetTypeSet -> " + format_type_set(info.retTypes) + "\n";
  out += "ThrownExceptionSet -> " + format_exception_set(info.exceptions) + "\n";
  out += std::string("RetFlag -> ") + (info.aret ? "aret" : "not_aret") + "\n";
  out += "**********COMMAND-SEQUENCE-ANNOTATION END************\n";
  return out;
}

std::string check_report(const std::string &path, const CheckResult &result, bool verbose) {
  std::string out = path + " parsed with no errors.\n";
  out += "Generating Annotated AST...\n";
  for (const auto &d : result.diagnostics) out += format_diagnostic(d) + "\n";
  if (verbose) {
    for (const auto &p : result.procedures) {
      out += "Procedure " + (p.name.empty() ? std::string("<anonymous>") : p.name) + ":\n";
      out += annotation_block(p.entryEnv, p.body);
    }
  }
  out += annotation_block(result.top.envAfter, result.top);
  out += "Annotated AST generated.\n";
  out += std::string(result.ok() ? kVerdictOk : kVerdictFailed) + "\n";
  return out;
}

std::string syntax_report(const std::string &path, const std::vector<Diagnostic> &errors) {
  std::string out;
  for (const auto &d : errors) out += format_diagnostic(d) + "\n";
  out += path + " has " + std::to_string(errors.size()) + " syntax error" +
         (errors.size() == 1 ? "" : "s") + ".\n";
  return out;
}

json to_json(const SourceSpan &span) {
  return json{{"file", span.file}, {"line", span.line}, {"column", span.column}, {"length", span.length}};
}

json to_json(const Diagnostic &d) {
  return json{{"severity", to_string(d.severity)},
              {"code", d.code},
              {"message", d.message},
              {"span", to_json(d.span)}};
}

json to_json(const TypeEnv &env) {
  json out = json::array();
  for (const auto &[name, type] : dump_order(env)) out.push_back(json{{"name", name}, {"type", to_string(type)}});
  return out;
}

json to_json(const TraceEvent &e) {
  return json{{"event", e.event}, {"span", to_json(e.span)}, {"detail", e.detail}};
}

namespace {

json node(const char *kind, const SourceSpan &span, json children) {
  return json{{"kind", kind}, {"span", to_json(span)}, {"children", std::move(children)}};
}

json body_json(const Body &body) {
  json out = json::array();
  for (const auto &c : body) out.push_back(to_json(c));
  return out;
}

} // namespace

json to_json(const Expr &e) {
  json children = json::array();
  for (const Expr *c : subexpressions(e)) children.push_back(to_json(*c));
  if (auto *pd = e.as<ProcDef>()) {
    for (const auto &c : pd->body) children.push_back(to_json(c));
  }
  json out = node(expr_kind(e), e.loc.span, std::move(children));
  out["text"] = pretty_print(e);
  return out;
}

json to_json(const Cmd &c) {
  json children = json::array();
  if (auto *a = c.as<Assign>()) {
    for (const auto &s : a->sources) children.push_back(to_json(s));
    json out = node("assign", c.loc.span, std::move(children));
    out["targets"] = a->targets;
    return out;
  }
  if (auto *i = c.as<If>()) {
    for (const auto &b : i->branches) {
      children.push_back(to_json(b.cond));
      children.push_back(node("body", b.cond.loc.span, body_json(b.body)));
    }
    if (i->elseBody) children.push_back(node("else", c.loc.span, body_json(*i->elseBody)));
  } else if (auto *l = c.as<Loop>()) {
    for (const auto *e : {&l->from, &l->by, &l->to, &l->whileCond}) {
      if (*e) children.push_back(to_json(**e));
    }
    children.push_back(node("body", c.loc.span, body_json(l->body)));
  } else if (auto *r = c.as<Return>()) {
    if (r->value) children.push_back(to_json(*r->value));
  } else if (auto *x = c.as<ExprCmd>()) {
    children.push_back(to_json(x->expr));
  } else if (auto *as = c.as<Assert>()) {
    children.push_back(to_json(as->cond));
  }
  return node(command_kind(c), c.loc.span, std::move(children));
}

std::string ast_json_lines(const Program &program) {
  std::string out;
  for (const auto &c : program.commands) {
    json j = to_json(c);
    j["schema"] = kJsonSchema;
    out += j.dump() + "\n";
  }
  return out;
}

json check_json(const std::string &path, const std::vector<Diagnostic> &diagnostics,
                const CheckResult *result) {
  json diags = json::array();
  for (const auto &d : diagnostics) diags.push_back(to_json(d));
  json out{{"schema", kJsonSchema}, {"file", path}, {"diagnostics", std::move(diags)}};
  if (result) {
    out["env"] = to_json(result->top.envAfter);
    out["retTypes"] = format_type_set(result->top.retTypes);
    out["exceptions"] = result->top.exceptions;
    out["aret"] = result->top.aret;
  }
  bool ok = result && count_severity(diagnostics, Severity::Error) == 0;
  out["ok"] = ok;
  return out;
}

} // namespace minimaple
