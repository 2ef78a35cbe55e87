#include "doctest.h"
#include "gat/corpus.hpp"
#include "gat/tensor.hpp"

using namespace gat;

namespace {

Expr v(Name n) { return mk_var(n); }
Expr v(const char* n) { return mk_var(atom(n)); }
Name pr(const char* a, const char* b) { return pair(atom(a), atom(b)); }
Expr O() { return mk_app(atom("O"), {}); }

}  // namespace

TEST_CASE("product alphabets") {
  Pretheory c = builtin("cat").theory, g = builtin("graph").theory;
  Pretheory cc = tensor_theory(c, c), gg = tensor_theory(g, g);
  CHECK(cc.alphabet->sorts().size() == 4);
  CHECK(cc.alphabet->terms().size() == 8);
  CHECK(gg.alphabet->sorts().size() == 4);
  CHECK(gg.alphabet->terms().empty());
  for (const char* s : {"O*comp", "O*id", "A*comp", "A*id", "comp*O", "id*O", "comp*A", "id*A"})
    CHECK(cc.alphabet->is_term(parse_name(s)));
  Pretheory unit = parse_theory("theory unit\nsort U ()\n");
  Pretheory cu = tensor_theory(c, unit);
  CHECK(cu.alphabet->sorts().size() == 2);
  CHECK(cu.alphabet->terms().size() == 2);
}

TEST_CASE("variable operands pair up") {
  Pretheory g = builtin("graph").theory;
  TensorBuilder tb(g, g);
  Operand x = aug(empty_ctx(), atom("x"), O()), y = aug(empty_ctx(), atom("y"), O());
  CHECK(tb.tensor(x, y) == v(pr("x", "y")));
  CHECK(tb.dot(x, y) == tb.tensor(x, y));
}

TEST_CASE("a variable against a compound term") {
  Pretheory g = builtin("graph").theory, c = builtin("cat").theory;
  TensorBuilder gc(g, c), cg(c, g);
  Ctx Y = parse_ctx("y : O", c);
  Operand x = aug(empty_ctx(), atom("x"), O());
  Operand idy = gc.right_term(Y, parse_expr("id(y)", c, Y));
  CHECK(gc.tensor(x, idy) == mk_app(pr("O", "id"), {v(pr("x", "y"))}));
  CHECK(gc.dot(x, idy) == gc.tensor(x, idy));

  Ctx X = parse_ctx("x : O, y : O, z : O, f : A(x, y), g : A(y, z)", c);
  Operand comp = cg.left_term(X, parse_expr("comp(x, y, z, f, g)", c, X));
  Operand yp = aug(empty_ctx(), atom("w"), O());
  Expr want = mk_app(pr("comp", "O"), {v(pr("x", "w")), v(pr("y", "w")), v(pr("z", "w")), v(pr("f", "w")),
                                        v(pr("g", "w"))});
  CHECK(cg.tensor(comp, yp) == want);
  CHECK(cg.dot(comp, yp) == want);
}

TEST_CASE("sort products") {
  Pretheory g = builtin("graph").theory;
  TensorBuilder tb(g, g);
  Operand x = aug(empty_ctx(), atom("x"), O());
  CHECK(tb.sort(aug(empty_ctx(), atom("x"), O()), aug(empty_ctx(), atom("y"), O())) ==
        mk_app(pr("O", "O"), {}));
  Ctx XY = parse_ctx("x : O, y : O", g);
  Operand k = aug(XY, atom("k"), parse_expr("A(x, y)", g, XY));
  CHECK(tb.sort(k, x) == mk_app(pr("A", "O"), {v(pr("x", "x")), v(pr("y", "x"))}));
  Pretheory gg = tensor_theory(g, g);
  Expr aa = tb.sort(k, k);
  CHECK(alpha_equal(sort_j(tb.ctx_boundary(k, k), aa), gg.axioms[3]));
  CHECK(aa->args.size() == 8);
}

TEST_CASE("context products") {
  Pretheory g = builtin("graph").theory;
  TensorBuilder tb(g, g);
  Ctx X = parse_ctx("x : O, y : O, f : A(x, y)", g);
  CHECK(tb.ctx(X, empty_ctx()) == empty_ctx());
  CHECK(tb.ctx(empty_ctx(), X) == empty_ctx());
  Pretheory gg = tensor_theory(g, g);
  CHECK(tb.ctx(parse_ctx("x : O, y : O", g), parse_ctx("x : O", g)) == parse_ctx("x.x : O*O, y.x : O*O", gg));
  CHECK(tb.ctx(X, X)->size() == 9);
}

TEST_CASE("the multiplication table") {
  Pretheory c = builtin("cat").theory;
  TensorBuilder tb(c, c);
  auto oo = tb.judgment(c.axioms[0], c.axioms[0]);
  REQUIRE(oo);
  CHECK(*oo == sort_j(empty_ctx(), mk_app(pr("O", "O"), {})));
  CHECK_FALSE(tb.judgment(c.axioms[4], c.axioms[4]));
  CHECK_FALSE(tb.judgment(c.axioms[2], c.axioms[4]));
  CHECK_FALSE(tb.judgment(c.axioms[4], c.axioms[3]));
  CHECK(tb.judgment(c.axioms[2], c.axioms[3]));
  CHECK(tensor_theory(c, c).axioms.size() == 28);
  CHECK(tensor_axiom_origins(c, c).size() == 28);
}

TEST_CASE("builtin goldens match and a permuted context does not") {
  for (const auto& [l, r] : builtin_golden_pairs()) {
    CAPTURE(l);
    CAPTURE(r);
    auto g = builtin_golden(l, r);
    REQUIRE(g);
    auto diff = golden_compare(tensor_theory(builtin(l).theory, builtin(r).theory), *g);
    CHECK_MESSAGE(diff.ok(), diff.report());
  }
  Pretheory gg = tensor_theory(builtin("graph").theory, builtin("graph").theory);
  auto entries = gg.axioms[3].ctx->entries;
  std::swap(entries[0], entries[1]);
  Pretheory permuted = gg;
  permuted.axioms[3].ctx = mk_ctx(entries);
  auto diff = golden_compare(permuted, *builtin_golden("graph", "graph"));
  CHECK(diff.matched == 3);
  CHECK(diff.missing.size() == 1);
  CHECK(diff.unexpected.size() == 1);
}

TEST_CASE("morphism products") {
  Pretheory c = builtin("cat").theory, g = builtin("graph").theory;
  TensorBuilder tb(c, g);
  Ctx X = parse_ctx("x : O, y : O, f : A(x, y)", c), Y = parse_ctx("a : O, b : O", g);
  Premorphism m = tb.morphism(identity_morphism(X), identity_morphism(Y));
  CHECK(m.comps == identity_morphism(tb.ctx(X, Y)).comps);
  Premorphism to_empty{X, empty_ctx(), {}};
  CHECK(tb.morphism(to_empty, identity_morphism(Y)).comps.empty());
}

TEST_CASE("a section tensored with a context is a section of the projection") {
  Pretheory c = builtin("cat").theory, g = builtin("graph").theory;
  TensorBuilder tb(c, g);
  Pretheory cg = tensor_theory(c, g);
  Ctx X = parse_ctx("x : O", c), Xp = parse_ctx("x : O, f : A(x, x)", c), Y = parse_ctx("a : O, b : O", g);
  Premorphism s{X, Xp, {v("x"), parse_expr("id(x)", c, X)}};
  Premorphism p{Xp, X, {v("x")}};
  Premorphism sy = tb.morphism_left(s, Y), py = tb.morphism_left(p, Y);
  CHECK(compose(py, sy).comps == identity_morphism(tb.ctx(X, Y)).comps);
  CHECK(check_morphism(sy, cg).derivable);
}

TEST_CASE("alternative fresh variables give alpha-equal judgments") {
  Pretheory c = builtin("cat").theory;
  TensorBuilder std_tb(c, c), alt(c, c);
  int counter = 0;
  auto fresh = [&counter](Ctx X) {
    for (;;) {
      Name n = atom("q" + std::to_string(counter++));
      if (index_of(X, n) < 0) return n;
    }
  };
  alt.set_fresh(fresh, fresh);
  for (const auto& j : c.axioms)
    for (const auto& k : c.axioms) {
      auto a = std_tb.judgment(j, k), b = alt.judgment(j, k);
      REQUIRE(a.has_value() == b.has_value());
      if (a) CHECK(alpha_equal(*a, *b));
    }
}

TEST_CASE("the starred product agrees with the plain one on variable operands") {
  Pretheory c = builtin("cat").theory;
  TensorBuilder plain(c, c), star(c, c, TensorMode::Star);
  Ctx X = parse_ctx("x : O, y : O, f : A(x, y)", c);
  Operand f = plain.left_term(X, v("f"));
  Operand idx = plain.right_term(X, parse_expr("id(x)", c, X));
  CHECK(star.tensor(f, idx) == plain.tensor(f, idx));
  CHECK(star.tensor(idx, f) == plain.tensor(idx, f));
  Operand comp = plain.left_term(parse_ctx("x : O, y : O, z : O, f : A(x, y), g : A(y, z)", c),
                                 parse_expr("comp(x, y, z, f, g)", c,
                                            parse_ctx("x : O, y : O, z : O, f : A(x, y), g : A(y, z)", c)));
  CHECK(star.tensor(comp, idx) == plain.dot(comp, idx));
}
