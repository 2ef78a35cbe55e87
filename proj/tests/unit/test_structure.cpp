#include "doctest.h"
#include "gat/corpus.hpp"
#include "gat/structure.hpp"

using namespace gat;

namespace {

Name pr(Name a, Name b) { return pair(a, b); }
Name at(const char* s) { return atom(s); }

Operand term_operand(const Judgment& intro) { return Operand{intro.ctx, intro.lhs, intro.sort}; }

}  // namespace

TEST_CASE("reassociation of names") {
  Name x = at("x"), y = at("y"), z = at("z");
  CHECK(reassociate(pr(pr(x, y), z)) == pr(x, pr(y, z)));
  CHECK(unreassociate(pr(x, pr(y, z))) == pr(pr(x, y), z));
  CHECK(reassociate(parse_name("(R*S)*t")) == parse_name("R*(S*t)"));
  CHECK_THROWS_AS(reassociate(pr(x, y)), Error);
}

TEST_CASE("reassociation is an involution on triple-theory axioms") {
  Pretheory g = builtin("graph").theory, c = builtin("cat").theory;
  TripleTheories t(c, g, g);
  for (const auto& ax : t.left.axioms) CHECK(unreassociate(reassociate(ax)) == ax);
  for (const auto& ax : t.right.axioms) CHECK(reassociate(unreassociate(ax)) == ax);
}

TEST_CASE("swapping graph (x) graph sends axiom 3 to axiom 2") {
  Pretheory g = builtin("graph").theory;
  Pretheory gg = tensor_theory(g, g);
  Interpretation I = swap_interpretation(gg, gg);
  CHECK(alpha_equal(swap_judgment(I, gg.axioms[2]), gg.axioms[1]));
  CHECK(alpha_equal(swap_judgment(I, gg.axioms[1]), gg.axioms[2]));
}

TEST_CASE("the double swap is the identity") {
  Pretheory c = builtin("cat").theory, g = builtin("graph").theory;
  Pretheory cg = tensor_theory(c, g), gc = tensor_theory(g, c);
  Interpretation fwd = swap_interpretation(gc, cg), bwd = swap_interpretation(cg, gc);
  for (const auto& ax : gc.axioms) CHECK(swap_judgment(bwd, swap_judgment(fwd, ax)) == ax);
}

TEST_CASE("symmetry suite for cat and graph at budget 128") {
  auto rep = check_symmetry(builtin("cat").theory, builtin("graph").theory, Budget{128, 200}, 2);
  CHECK(rep.lines.size() == 28);
  CHECK(rep.unknown() == 0);
  CHECK(rep.tsv().find("cat*graph->graph*cat") != std::string::npos);
}

TEST_CASE("graph cubed reassociates both ways at budget 128") {
  Pretheory g = builtin("graph").theory;
  auto rep = check_associativity(g, g, g, Budget{128, 200}, 2);
  CHECK(rep.lines.size() == 16);
  CHECK(rep.unknown() == 0);
}

TEST_CASE("box product of labelled sorts is the labelled product sort") {
  Pretheory g = builtin("graph").theory;
  TensorBuilder tb(g, g);
  Ctx XY = parse_ctx("x : O, y : O", g);
  Operand k = aug(XY, at("k"), parse_expr("A(x, y)", g, XY));
  Operand o = aug(empty_ctx(), at("w"), mk_app(at("O"), {}));
  for (const auto& [a, b] : {std::pair{k, k}, std::pair{k, o}, std::pair{o, k}}) {
    Expr s = tb.sort(a, b);
    std::vector<Expr> args = s->args;
    args.push_back(mk_var(pr(a.e->head, b.e->head)));
    CHECK(box_product(tb, {a, true}, {b, true}, BoxVariant::Box) == mk_app(s->head, args));
  }
}

TEST_CASE("term times term in box notation") {
  Pretheory c = builtin("cat").theory;
  Pretheory cc = tensor_theory(c, c);
  TensorBuilder tb(c, c);
  for (size_t i : {2, 3})
    for (size_t j : {2, 3}) {
      Operand u = term_operand(c.axioms[i]), v = term_operand(c.axioms[j]);
      auto J = tb.judgment(c.axioms[i], c.axioms[j]);
      REQUIRE(J);
      CHECK(J->lhs == box_product(tb, {u, true}, {v, false}, BoxVariant::Box));
      CHECK(J->rhs == box_product(tb, {u, false}, {v, true}, BoxVariant::Black));
      Expr half = box_product(tb, {u, true}, {v, true}, BoxVariant::Half);
      CHECK(J->sort == boundary(half));
      Expr K = canonical_sort(J->ctx, tb.tensor(u, v), cc);
      std::vector<Expr> args = K->args;
      args.push_back(tb.tensor(u, v));
      CHECK(half == mk_app(K->head, args));
    }
}

TEST_CASE("starred and plain products are provably equal") {
  Pretheory c = builtin("cat").theory;
  Pretheory cc = tensor_theory(c, c);
  for (size_t i : {2, 3})
    for (size_t j : {2, 3}) {
      Judgment e = star_equality(c, c, cc, term_operand(c.axioms[i]), term_operand(c.axioms[j]));
      CHECK(derive(e, cc, Budget{128, 200}).derivable());
    }
}
