#include <doctest.h>

#include "minimaple/lexer.hpp"
#include "minimaple/parser.hpp"
#include "minimaple/printer.hpp"
#include "support.hpp"

using namespace minimaple;

namespace {

std::string reprint(const char *text) {
  auto e = parse_spec_text(text, SpecContext::Assertion);
  REQUIRE_MESSAGE(e.ok(), text);
  return pretty_print(*e.value);
}

std::vector<Tok> kinds(const char *text) {
  std::vector<Tok> out;
  for (const auto &t : tokenize(text).tokens) out.push_back(t.kind);
  return out;
}

} // namespace

TEST_SUITE("frontend") {
  TEST_CASE("tokens carry line and column") {
    LexResult lx = tokenize("x := 1.5; # comment\ny := \"s\";", "f.mm");
    REQUIRE(lx.ok());
    REQUIRE(lx.tokens.size() == 9);
    CHECK(lx.tokens[0].kind == Tok::Ident);
    CHECK(lx.tokens[2].kind == Tok::Float);
    CHECK(lx.tokens[2].text == "1.5");
    CHECK(lx.tokens[4].span.line == 2);
    CHECK(lx.tokens[4].span.column == 1);
    CHECK(lx.tokens[6].kind == Tok::String);
    CHECK(lx.tokens[6].text == "s");
    CHECK(lx.tokens.back().kind == Tok::End);
  }

  TEST_CASE("spec comments become one token with an inner stream") {
    LexResult lx = tokenize("(*@ requires true; @*) x");
    REQUIRE(lx.ok());
    REQUIRE(lx.tokens[0].kind == Tok::SpecComment);
    CHECK(lx.tokens[0].inner.front().kind == Tok::KwRequires);
    CHECK(lx.tokens[1].kind == Tok::Ident);
  }

  TEST_CASE("type names and assertion labels") {
    CHECK(kinds("`type/T`;") == std::vector<Tok>{Tok::TypeName, Tok::Semi, Tok::End});
    LexResult lx = tokenize("''test failed``");
    REQUIRE(lx.ok());
    CHECK(lx.tokens[0].kind == Tok::String);
    CHECK(lx.tokens[0].text == "test failed");
  }

  TEST_CASE("unterminated string is a lexical error") {
    LexResult lx = tokenize("x := \"abc");
    REQUIRE(lx.errors.size() == 1);
    CHECK(lx.errors[0].code == "lex-unterminated-string");
  }

  TEST_CASE("operator precedence survives printing") {
    CHECK(reprint("1+2*3") == "1 + 2 * 3");
    CHECK(reprint("(1+2)*3") == "(1 + 2) * 3");
    CHECK(reprint("a - (b - c)") == "a - (b - c)");
    CHECK(reprint("forall(i::integer, 1<=i and i<=n implies l[i]<>0)") ==
          "forall(i::integer, 1 <= i and i <= n implies l[i] <> 0)");
    CHECK(reprint("mul(e, e in l, type(e,integer))") == "mul(e, e in l, type(e, integer))");
    CHECK(reprint("add(i, i=1..n)") == "add(i, i = 1..n)");
  }

  TEST_CASE("expression kinds") {
    auto e = parse_expr_text("l[i]");
    REQUIRE(e.ok());
    CHECK(e.value->as<Index>() != nullptr);
    auto q = parse_spec_text("'x+1'", SpecContext::Assertion);
    REQUIRE(q.ok());
    CHECK(q.value->as<Uneval>() != nullptr);
    auto b = parse_expr_text("a and b or c");
    REQUIRE(b.ok());
    REQUIRE(b.value->as<Binary>() != nullptr);
    CHECK(b.value->as<Binary>()->op == BinaryOp::Or);
  }

  TEST_CASE("type expressions") {
    auto t = parse_type_text("procedure[[integer,float]](list(Or(integer,float)))");
    REQUIRE(t.ok());
    CHECK(t.value->kind == TypeExpr::Kind::Procedure);
    CHECK(pretty_print(*t.value) == "procedure[[integer,float]](list(Or(integer,float)))");
    CHECK(parse_type_text("{string}").value->kind == TypeExpr::Kind::Set);
    CHECK(parse_type_text("[integer, float]").value->kind == TypeExpr::Kind::Record);
  }

  TEST_CASE("RESULT only in ensures") {
    CHECK(parse_spec_text("RESULT = 1", SpecContext::Ensures).ok());
    auto r = parse_spec_text("RESULT = 1", SpecContext::Requires);
    REQUIRE_FALSE(r.ok());
    CHECK(r.errors[0].code == "spec-result");
  }

  TEST_CASE("syntax errors recover at the next semicolon") {
    auto p = parse_source("x := ;\ny := 2;\nz := (;\n", "f.mm");
    REQUIRE(p.errors.size() == 2);
    CHECK(format_diagnostic(p.errors[0]) == "f.mm:1:6: error[syntax]: expected expression, found ';'");
    CHECK(p.errors[1].span.line == 3);
    REQUIRE(p.value);
    CHECK(p.value->commands.size() == 1);
  }

  TEST_CASE("Listing 2 structure") {
    Program p = mmtest::load_corpus("listing2.mm");
    REQUIRE(p.commands.size() == 3);
    auto *assign = p.commands[1].as<Assign>();
    REQUIRE(assign);
    auto *proc = assign->sources[0].as<ProcDef>();
    REQUIRE(proc);
    CHECK(proc->params.size() == 1);
    CHECK(proc->globals == std::vector<std::string>{"status"});
    CHECK(proc->locals.size() == 4);
    CHECK(proc->body.front().as<Loop>() != nullptr);
  }

  TEST_CASE("Listing 3 spec attaches to the procedure") {
    Program p = mmtest::load_corpus("listing3.mm");
    auto *proc = p.commands[1].as<Assign>()->sources[0].as<ProcDef>();
    REQUIRE(proc);
    REQUIRE(proc->spec);
    CHECK((*proc->spec)->globals == std::vector<std::string>{"status"});
    CHECK((*proc->spec)->postcondition.as<Binary>()->op == BinaryOp::Or);
  }

  TEST_CASE("declarations") {
    Program p = mmtest::load_corpus("declarations.mm");
    REQUIRE(p.declarations.size() == 3);
    CHECK(std::get_if<NamedTypeDecl>(&p.declarations[0].node) != nullptr);
    CHECK(std::get_if<AbstractTypeDecl>(&p.declarations[1].node) != nullptr);
    CHECK(std::get_if<Assume>(&p.declarations[2].node) != nullptr);
    Program fac = mmtest::load_corpus("fac.mm");
    auto *d = std::get_if<Define>(&fac.declarations[0].node);
    REQUIRE(d);
    CHECK(d->rules.size() == 2);
  }

  TEST_CASE("loop spec") {
    Program p = mmtest::load_corpus("sum_loop.mm");
    auto *loop = p.commands.back().as<Loop>();
    REQUIRE(loop);
    REQUIRE(loop->spec);
    CHECK(pretty_print(loop->spec->invariant) == "s = OLD s + i - 1");
    CHECK(pretty_print(loop->spec->decreases) == "n - i");
  }

  TEST_CASE("spans are ignored by equality") {
    auto a = parse_expr_text("x + 1");
    auto b = parse_expr_text("x   +\n1");
    REQUIRE(a.ok());
    REQUIRE(b.ok());
    CHECK(*a.value == *b.value);
    CHECK_FALSE(*a.value == *parse_expr_text("x + 2").value);
  }
}
