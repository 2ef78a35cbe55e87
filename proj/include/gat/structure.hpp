#pragma once

#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gat/tensor.hpp"

namespace gat {

// ((a.b).c) <-> (a.(b.c)) on variables and symbols; argument order is unchanged.
Name reassociate(Name n);
Name unreassociate(Name n);
Expr reassociate(Expr e);
Expr unreassociate(Expr e);
Ctx reassociate(Ctx X);
Ctx unreassociate(Ctx X);
Judgment reassociate(const Judgment& j);
Judgment unreassociate(const Judgment& j);

// A preinterpretation: variables are renamed and each symbol s(a_1..a_n) becomes body[I(a_k) | params_k].
struct Interpretation {
  struct Template {
    std::vector<Name> params;
    Expr body;
  };
  std::function<Name(Name)> var;
  std::unordered_map<Name, Template> symbols;
};

Expr apply_interpretation(const Interpretation& I, Expr e);
// Entry order of the context is kept.
Judgment apply_interpretation(const Interpretation& I, const Judgment& j);

Name swap_name(Name n);
// I_{A,B} from the theory A (x) B to B (x) A; both theories are needed for the introduction contexts.
Interpretation swap_interpretation(const Pretheory& ab, const Pretheory& ba);
// Reorders a context of pair variables to row-major order, ranking each component by first appearance,
// when dependencies allow it.
Ctx transpose_ctx(Ctx X);
// apply_interpretation followed by transpose_ctx on the context.
Judgment swap_judgment(const Interpretation& I, const Judgment& j);

enum class BoxVariant { Box, Black, Half };

// U{u} when full, else the bare compound term u.
struct BoxOperand {
  Operand op;
  bool full;
};

Expr box_product(TensorBuilder& tb, const BoxOperand& a, const BoxOperand& b, BoxVariant variant);
// Drops the final argument.
Expr boundary(Expr e);

struct StructureLine {
  std::string id;
  std::string direction;
  Judgment goal;
  DerivResult result;
};

struct StructureReport {
  std::vector<StructureLine> lines;
  size_t unknown() const;
  // One line per axiom: axiom-id, direction, verdict, height_ub separated by tabs.
  std::string tsv() const;
};

StructureReport check_symmetry(const Pretheory& a, const Pretheory& b, Budget budget = default_budget(),
                               int jobs = 1, Ruleset rs = Ruleset::Modified);
StructureReport check_associativity(const Pretheory& a, const Pretheory& b, const Pretheory& c,
                                    Budget budget = default_budget(), int jobs = 1, Ruleset rs = Ruleset::Modified);

struct TripleTheories {
  TripleTheories(const Pretheory& a, const Pretheory& b, const Pretheory& c);
  Pretheory a, b, c, ab, bc;
  // (A (x) B) (x) C and A (x) (B (x) C).
  Pretheory left, right;
};

// (X (x) Y) (x) Z reassociated == X (x) (Y (x) Z), read in the right-bracketed theory.
CtxEq assoc_ctx_eq(const TripleTheories& t, Ctx X, Ctx Y, Ctx Z);

// The eight bracketings of u, v, w with (x) or (.) at each step, reassociated into A (x) (B (x) C) over
// X (x) (Y (x) Z): the term judgment of the first, then its equality with each of the other seven, all at
// the canonical sort of the first.
std::vector<Judgment> assoc_term_equalities(const TripleTheories& t, const Operand& u, const Operand& v,
                                            const Operand& w);

// X (x) Y |- u (x)* v == u (x) v : S with S the canonical sort of u (x) v.
Judgment star_equality(const Pretheory& a, const Pretheory& b, const Pretheory& ab, const Operand& u,
                       const Operand& v);

}  // namespace gat
