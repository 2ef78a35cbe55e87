#include "doctest.h"
#include "gat/corpus.hpp"
#include "gat/syntax.hpp"

using namespace gat;

namespace {

Expr v(const char* n) { return mk_var(atom(n)); }
Expr app(const char* h, std::vector<Expr> args) { return mk_app(atom(h), std::move(args)); }

}  // namespace

TEST_CASE("substitute replaces a single variable") {
  Expr e = app("A", {v("x"), v("y")});
  CHECK(substitute(e, Bindings{{v("f"), atom("x")}}) == app("A", {v("f"), v("y")}));
}

TEST_CASE("substitute is simultaneous") {
  Bindings b{{v("y"), atom("x")}, {v("x"), atom("y")}};
  CHECK(substitute(v("x"), b) == v("y"));
  CHECK(substitute(v("y"), b) == v("x"));
}

TEST_CASE("identity bindings leave an expression unchanged") {
  Expr e = app("A", {v("x"), v("z")});
  Bindings b;
  for (const char* n : {"x", "y", "z", "f", "g"}) b.emplace_back(v(n), atom(n));
  CHECK(substitute(e, b) == e);
}

TEST_CASE("substitute is homomorphic and sequential when variables do not clash") {
  Expr e = app("comp", {v("x"), v("y"), v("z"), v("f"), v("g")});
  Bindings both{{v("a"), atom("x")}, {v("b"), atom("y")}};
  Expr seq = substitute(substitute(e, Bindings{{v("a"), atom("x")}}), Bindings{{v("b"), atom("y")}});
  CHECK(substitute(e, both) == seq);
}

TEST_CASE("classify distinguishes terms, sorts and ill-formed expressions") {
  Pretheory cat = builtin("cat").theory;
  const Alphabet& s = *cat.alphabet;
  CHECK(classify(v("x"), s) == Classification::Term);
  CHECK(classify(app("A", {v("x"), app("id", {v("y")})}), s) == Classification::Sort);
  CHECK(classify(app("A", {app("O", {}), v("x")}), s) == Classification::IllFormed);
  CHECK(classify(app("id", {app("id", {v("x")})}), s) == Classification::Term);
}

TEST_CASE("truncate") {
  Pretheory g = builtin("graph").theory;
  Ctx X = parse_ctx("x : O, y : O, f : A(x, y)", g);
  CHECK(truncate(X, 0) == empty_ctx());
  CHECK(truncate(X, 2) == parse_ctx("x : O, y : O", g));
  CHECK(truncate(X, X->size()) == X);
}

TEST_CASE("alpha_equal") {
  Pretheory g = builtin("graph").theory;
  CHECK(alpha_equal(parse_judgment("x : O |- O sort", g), parse_judgment("a : O |- O sort", g)));
  CHECK_FALSE(alpha_equal(parse_judgment("x : O, y : O |- A(x, y) sort", g),
                          parse_judgment("x : O, y : O |- A(y, x) sort", g)));
  CHECK_FALSE(alpha_equal(parse_judgment("x : O, y : O |- A(x, y) sort", g),
                          parse_judgment("y : O, x : O |- A(x, y) sort", g)));
}

TEST_CASE("parse builtin theories") {
  Pretheory g = builtin("graph").theory;
  CHECK(g.alphabet->sorts().size() == 2);
  CHECK(g.alphabet->terms().empty());
  Pretheory c = builtin("cat").theory;
  CHECK(c.alphabet->sorts().size() == 2);
  CHECK(c.alphabet->terms().size() == 2);
  CHECK(std::count_if(c.axioms.begin(), c.axioms.end(), [](const Judgment& j) { return j.kind == JKind::TermEq; }) == 3);
  CHECK(c.axioms.size() == 7);
  Pretheory d = builtin("display").theory;
  REQUIRE(d.axioms.size() == 2);
  CHECK(d.axioms[1].ctx->size() == 1);
}

TEST_CASE("two introduction axioms for one symbol are rejected") {
  CHECK_THROWS_AS(parse_theory("theory bad\nsort O ()\nsort O (x : O)\n"), Error);
}

TEST_CASE("parse errors carry a position") {
  try {
    parse_theory("theory bad\nsort O (\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("printing round-trips through the parser") {
  for (const auto& id : builtin_ids()) {
    Pretheory t = builtin(id).theory;
    Pretheory back = parse_theory(print_theory(t));
    REQUIRE(back.axioms.size() == t.axioms.size());
    for (size_t i = 0; i < t.axioms.size(); ++i) CHECK(back.axioms[i] == t.axioms[i]);
  }
}

TEST_CASE("pair names print with dots and stars") {
  Name xy = pair(atom("x"), atom("y"));
  CHECK(name_str(xy, Role::Var) == "x.y");
  CHECK(name_str(pair(pair(atom("R"), atom("S")), atom("T")), Role::Symbol) == "R*S*T");
  CHECK(name_str(pair(atom("R"), pair(atom("S"), atom("T"))), Role::Symbol) == "R*(S*T)");
  CHECK(parse_name("R*(S*T)") == pair(atom("R"), pair(atom("S"), atom("T"))));
  CHECK(parse_name("x.y") == xy);
}
