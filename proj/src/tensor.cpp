#include "gat/tensor.hpp"

namespace gat {

Operand aug(Ctx X, Name x, Expr U) { return Operand{X, mk_var(x), U}; }

Operand aug_entry(Ctx X, size_t i) { return aug(truncate(X, i), X->entries[i].var, X->entries[i].sort); }

size_t TensorBuilder::KeyHash::operator()(const Key& k) const {
  size_t h = k.dot ? 0x9e3779b97f4a7c15ULL : 0;
  for (const void* p : {static_cast<const void*>(k.a.ctx), static_cast<const void*>(k.a.e),
                        static_cast<const void*>(k.a.sort), static_cast<const void*>(k.b.ctx),
                        static_cast<const void*>(k.b.e), static_cast<const void*>(k.b.sort)})
    h = (h ^ std::hash<const void*>{}(p)) * 0x100000001b3ULL;
  return h;
}

TensorBuilder::TensorBuilder(const Pretheory& a, const Pretheory& b, TensorMode mode)
    : a_(a), b_(b), mode_(mode) {
  fresh_a_ = [this](Ctx X) { return a_.fresh(X); };
  fresh_b_ = [this](Ctx Y) { return b_.fresh(Y); };
}

void TensorBuilder::set_fresh(FreshFn left, FreshFn right) {
  if (left) fresh_a_ = std::move(left);
  if (right) fresh_b_ = std::move(right);
  memo_.clear();
}

Operand TensorBuilder::left_term(Ctx X, Expr u) const { return Operand{X, u, canonical_sort(X, u, a_)}; }
Operand TensorBuilder::right_term(Ctx Y, Expr v) const { return Operand{Y, v, canonical_sort(Y, v, b_)}; }

std::vector<Operand> TensorBuilder::arg_operands(const Pretheory& t, Ctx X, Expr e) const {
  std::vector<Operand> out;
  for (Expr s : e->args) out.push_back(Operand{X, s, canonical_sort(X, s, t)});
  return out;
}

Expr TensorBuilder::tensor(const Operand& a, const Operand& b) {
  Key k{a, b, false};
  if (auto it = memo_.find(k); it != memo_.end()) return it->second;
  Expr r = compute(a, b, false);
  memo_.emplace(k, r);
  return r;
}

Expr TensorBuilder::dot(const Operand& a, const Operand& b) {
  if (a.var_headed() || b.var_headed()) return tensor(a, b);
  Key k{a, b, true};
  if (auto it = memo_.find(k); it != memo_.end()) return it->second;
  Expr r = compute(a, b, true);
  memo_.emplace(k, r);
  return r;
}

Expr TensorBuilder::compute(const Operand& a, const Operand& b, bool dot) {
  if (a.var_headed() && b.var_headed()) return mk_var(pair(a.e->head, b.e->head));
  if (a.var_headed()) {
    // S t applied to (s_1..s_k, x^U) x (t_1..t_l)
    auto rows = arg_operands(a_, a.ctx, a.sort);
    rows.push_back(a);
    auto cols = arg_operands(b_, b.ctx, b.e);
    std::vector<Expr> args;
    for (const auto& r : rows)
      for (const auto& c : cols) args.push_back(tensor(r, c));
    return mk_app(pair(a.sort->head, b.e->head), std::move(args));
  }
  if (b.var_headed()) {
    // s T applied to (s_1..s_k) x (t_1..t_l, y^V)
    auto rows = arg_operands(a_, a.ctx, a.e);
    auto cols = arg_operands(b_, b.ctx, b.sort);
    cols.push_back(b);
    std::vector<Expr> args;
    for (const auto& r : rows)
      for (const auto& c : cols) args.push_back(tensor(r, c));
    return mk_app(pair(a.e->head, b.sort->head), std::move(args));
  }
  bool use_lozenge = (mode_ == TensorMode::Standard) != dot;
  return use_lozenge ? lozenge(a, b) : blacklozenge(a, b);
}

Expr TensorBuilder::lozenge(const Operand& a, const Operand& b) {
  Name x = fresh_a_(a.ctx);
  Expr base = tensor(aug(a.ctx, x, a.sort), b);
  std::unordered_map<Name, Expr> m;
  for (size_t j = 0; j < b.ctx->size(); ++j)
    m.emplace(pair(x, b.ctx->entries[j].var), tensor(a, aug_entry(b.ctx, j)));
  return substitute(base, m);
}

Expr TensorBuilder::blacklozenge(const Operand& a, const Operand& b) {
  Name y = fresh_b_(b.ctx);
  Expr base = tensor(a, aug(b.ctx, y, b.sort));
  std::unordered_map<Name, Expr> m;
  for (size_t i = 0; i < a.ctx->size(); ++i)
    m.emplace(pair(a.ctx->entries[i].var, y), tensor(aug_entry(a.ctx, i), b));
  return substitute(base, m);
}

Expr TensorBuilder::sort(const Operand& a, const Operand& b) {
  auto rows = arg_operands(a_, a.ctx, a.sort);
  rows.push_back(a);
  auto cols = arg_operands(b_, b.ctx, b.sort);
  cols.push_back(b);
  std::vector<Expr> args;
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j)
      if (i + 1 < rows.size() || j + 1 < cols.size()) args.push_back(tensor(rows[i], cols[j]));
  return mk_app(pair(a.sort->head, b.sort->head), std::move(args));
}

Ctx TensorBuilder::ctx(Ctx X, Ctx Y) {
  std::vector<Entry> es;
  for (size_t i = 0; i < X->size(); ++i)
    for (size_t j = 0; j < Y->size(); ++j)
      es.push_back({pair(X->entries[i].var, Y->entries[j].var), sort(aug_entry(X, i), aug_entry(Y, j))});
  return mk_ctx(std::move(es));
}

Ctx TensorBuilder::ctx_boundary(const Operand& a, const Operand& b) {
  Ctx full = ctx(extend(a.ctx, a.e->head, a.sort), extend(b.ctx, b.e->head, b.sort));
  return truncate(full, full->size() - 1);
}

Expr TensorBuilder::sort_with_left_term(const Operand& xa, const Operand& yb, const Operand& v) {
  std::unordered_map<Name, Expr> m;
  for (size_t i = 0; i < xa.ctx->size(); ++i)
    m.emplace(pair(xa.ctx->entries[i].var, yb.e->head), tensor(aug_entry(xa.ctx, i), v));
  return substitute(sort(xa, yb), m);
}

Expr TensorBuilder::sort_with_right_term(const Operand& xa, const Operand& yb, const Operand& u) {
  std::unordered_map<Name, Expr> m;
  for (size_t j = 0; j < yb.ctx->size(); ++j)
    m.emplace(pair(xa.e->head, yb.ctx->entries[j].var), tensor(u, aug_entry(yb.ctx, j)));
  return substitute(sort(xa, yb), m);
}

std::optional<Judgment> TensorBuilder::judgment(const Judgment& j, const Judgment& k) {
  Ctx X = j.ctx, Y = k.ctx;
  if (j.kind == JKind::Ctx || k.kind == JKind::Ctx) return std::nullopt;
  Name x = fresh_a_(X), y = fresh_b_(Y);
  // The sort U of j and V of k used to form the augmented operands.
  Expr U = j.kind == JKind::Sort || j.kind == JKind::SortEq ? j.lhs : j.sort;
  Expr V = k.kind == JKind::Sort || k.kind == JKind::SortEq ? k.lhs : k.sort;
  Operand xa = aug(X, x, U), yb = aug(Y, y, V);
  auto left_ext = [&] { return extend(X, x, U); };
  auto right_ext = [&] { return extend(Y, y, V); };

  switch (j.kind) {
    case JKind::Sort:
      switch (k.kind) {
        case JKind::Sort: return sort_j(ctx_boundary(xa, yb), sort(xa, yb));
        case JKind::Term: {
          Operand v{Y, k.lhs, V};
          return term_j(ctx(left_ext(), Y), tensor(xa, v), sort_with_left_term(xa, yb, v));
        }
        case JKind::SortEq:
          return sort_eq_j(ctx_boundary(xa, yb), sort(xa, yb), sort(xa, aug(Y, y, k.rhs)));
        case JKind::TermEq: {
          Operand v{Y, k.lhs, V}, v2{Y, k.rhs, V};
          return term_eq_j(ctx(left_ext(), Y), tensor(xa, v), tensor(xa, v2), sort_with_left_term(xa, yb, v));
        }
        default: return std::nullopt;
      }
    case JKind::Term: {
      Operand u{X, j.lhs, U};
      switch (k.kind) {
        case JKind::Sort: return term_j(ctx(X, right_ext()), tensor(u, yb), sort_with_right_term(xa, yb, u));
        case JKind::Term: {
          Operand v{Y, k.lhs, V};
          std::unordered_map<Name, Expr> m;
          for (size_t i = 0; i < X->size(); ++i) m.emplace(pair(X->entries[i].var, y), tensor(aug_entry(X, i), v));
          for (size_t jj = 0; jj < Y->size(); ++jj) m.emplace(pair(x, Y->entries[jj].var), tensor(u, aug_entry(Y, jj)));
          return term_eq_j(ctx(X, Y), tensor(u, v), dot(u, v), substitute(sort(xa, yb), m));
        }
        case JKind::SortEq:
          return term_eq_j(ctx(X, right_ext()), tensor(u, yb), tensor(u, aug(Y, y, k.rhs)),
                           sort_with_right_term(xa, yb, u));
        default: return std::nullopt;
      }
    }
    case JKind::SortEq:
      switch (k.kind) {
        case JKind::Sort: return sort_eq_j(ctx_boundary(xa, yb), sort(xa, yb), sort(aug(X, x, j.rhs), yb));
        case JKind::Term: {
          Operand v{Y, k.lhs, V};
          return term_eq_j(ctx(left_ext(), Y), tensor(xa, v), tensor(aug(X, x, j.rhs), v),
                           sort_with_left_term(xa, yb, v));
        }
        default: return std::nullopt;
      }
    case JKind::TermEq:
      if (k.kind != JKind::Sort) return std::nullopt;
      {
        Operand u{X, j.lhs, U}, u2{X, j.rhs, U};
        return term_eq_j(ctx(X, right_ext()), tensor(u, yb), tensor(u2, yb), sort_with_right_term(xa, yb, u));
      }
    default: return std::nullopt;
  }
}

Premorphism TensorBuilder::morphism(const Premorphism& f, const Premorphism& g) {
  Premorphism r{ctx(f.src, g.src), ctx(f.tgt, g.tgt), {}};
  for (Expr fi : f.comps)
    for (Expr gj : g.comps) r.comps.push_back(tensor(left_term(f.src, fi), right_term(g.src, gj)));
  return r;
}

Premorphism TensorBuilder::morphism_left(const Premorphism& f, Ctx Y) { return morphism(f, identity_morphism(Y)); }
Premorphism TensorBuilder::morphism_right(Ctx X, const Premorphism& g) { return morphism(identity_morphism(X), g); }

std::string tensor_name(const std::string& a, const std::string& b) {
  auto wrap = [](const std::string& s) { return s.find('*') == std::string::npos ? s : "(" + s + ")"; };
  return wrap(a) + "*" + wrap(b);
}

std::vector<std::pair<size_t, size_t>> tensor_axiom_origins(const Pretheory& a, const Pretheory& b) {
  std::vector<std::pair<size_t, size_t>> out;
  auto defined = [](JKind p, JKind q) {
    switch (p) {
      case JKind::Sort: return q != JKind::Ctx;
      case JKind::Term: return q == JKind::Sort || q == JKind::Term || q == JKind::SortEq;
      case JKind::SortEq: return q == JKind::Sort || q == JKind::Term;
      case JKind::TermEq: return q == JKind::Sort;
      default: return false;
    }
  };
  for (size_t i = 0; i < a.axioms.size(); ++i)
    for (size_t j = 0; j < b.axioms.size(); ++j)
      if (defined(a.axioms[i].kind, b.axioms[j].kind)) out.emplace_back(i, j);
  return out;
}

Pretheory tensor_theory(const Pretheory& a, const Pretheory& b, TensorMode mode) {
  TensorBuilder tb(a, b, mode);
  std::vector<Judgment> axioms;
  for (auto [i, j] : tensor_axiom_origins(a, b)) axioms.push_back(*tb.judgment(a.axioms[i], b.axioms[j]));
  return make_pretheory(tensor_name(a.name, b.name), Alphabet::tensor(a.alphabet, b.alphabet), std::move(axioms));
}

Judgment two_sided_substitution(TensorBuilder& tb, const Pretheory& ab, const Operand& u, const Operand& v,
                                const Premorphism& f, const Premorphism& g) {
  if (f.tgt != u.ctx || g.tgt != v.ctx) throw Error("two_sided_substitution: morphism targets differ from operand contexts");
  Ctx XY = tb.ctx(u.ctx, v.ctx);
  Expr uv = tb.tensor(u, v);
  Judgment lhs = substitute_along(term_j(XY, uv, canonical_sort(XY, uv, ab)), tb.morphism(f, g));
  auto bf = bind_ctx(f.tgt, f.comps, f.comps.size());
  auto bg = bind_ctx(g.tgt, g.comps, g.comps.size());
  Expr rhs = tb.tensor(tb.left_term(f.src, substitute(u.e, bf)), tb.right_term(g.src, substitute(v.e, bg)));
  return term_eq_j(lhs.ctx, lhs.lhs, rhs, lhs.sort);
}

}  // namespace gat
