#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <unordered_map>

#include "gat/kernel.hpp"

namespace gat {

using FreshFn = std::function<Name(Ctx)>;

// A term judgment ctx |- e : sort, or an augmented sort judgment (ctx |- sort, e) when
// e is a variable outside ctx.
struct Operand {
  Ctx ctx;
  Expr e;
  Expr sort;
  bool augmented() const { return e->var && index_of(ctx, e->head) < 0; }
  bool var_headed() const { return e->var; }
  bool operator==(const Operand&) const = default;
};

Operand aug(Ctx X, Name x, Expr U);
// Augmented entry i of X: (d_{i} X |- X_i sort, x_i).
Operand aug_entry(Ctx X, size_t i);

enum class TensorMode { Standard, Star };

class TensorBuilder {
public:
  TensorBuilder(const Pretheory& a, const Pretheory& b, TensorMode mode = TensorMode::Standard);

  void set_fresh(FreshFn left, FreshFn right);
  const Pretheory& left() const { return a_; }
  const Pretheory& right() const { return b_; }

  Operand left_term(Ctx X, Expr u) const;
  Operand right_term(Ctx Y, Expr v) const;

  Expr tensor(const Operand& a, const Operand& b);
  Expr dot(const Operand& a, const Operand& b);
  // Both operands augmented.
  Expr sort(const Operand& a, const Operand& b);
  Ctx ctx(Ctx X, Ctx Y);
  // d(X' (x) Y') for X' = (X, x:U), Y' = (Y, y:V).
  Ctx ctx_boundary(const Operand& a, const Operand& b);

  // The pair-judgment of the multiplication table; nullopt on undefined cells.
  std::optional<Judgment> judgment(const Judgment& j, const Judgment& k);

  // Components f_i (x) g_j in lexicographic order, from X (x) Y to A (x) B.
  Premorphism morphism(const Premorphism& f, const Premorphism& g);
  Premorphism morphism_left(const Premorphism& f, Ctx Y);
  Premorphism morphism_right(Ctx X, const Premorphism& g);

  Name left_fresh(Ctx X) const { return fresh_a_(X); }
  Name right_fresh(Ctx Y) const { return fresh_b_(Y); }

private:
  struct Key {
    Operand a, b;
    bool dot;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    size_t operator()(const Key& k) const;
  };

  Expr compute(const Operand& a, const Operand& b, bool dot);
  Expr lozenge(const Operand& a, const Operand& b);
  Expr blacklozenge(const Operand& a, const Operand& b);
  std::vector<Operand> arg_operands(const Pretheory& t, Ctx X, Expr e) const;
  Expr sort_with_left_term(const Operand& xa, const Operand& yb, const Operand& v);
  Expr sort_with_right_term(const Operand& xa, const Operand& yb, const Operand& u);

  const Pretheory& a_;
  const Pretheory& b_;
  TensorMode mode_;
  FreshFn fresh_a_, fresh_b_;
  std::unordered_map<Key, Expr, KeyHash> memo_;
};

std::string tensor_name(const std::string& a, const std::string& b);

Pretheory tensor_theory(const Pretheory& a, const Pretheory& b, TensorMode mode = TensorMode::Standard);
// Pairs (i, j) of factor axiom indices, one per axiom of tensor_theory(a, b), in order.
std::vector<std::pair<size_t, size_t>> tensor_axiom_origins(const Pretheory& a, const Pretheory& b);

// X' (x) Y' |- (u (x) v)[f (x) g] == u[f] (x) v[g] : S[f (x) g] for f: X' -> X, g: Y' -> Y, where S is the
// canonical sort of u (x) v in ab.
Judgment two_sided_substitution(TensorBuilder& tb, const Pretheory& ab, const Operand& u, const Operand& v,
                                const Premorphism& f, const Premorphism& g);

}  // namespace gat
