#include <algorithm>
#include <atomic>
#include <thread>

#include "gat/kernel.hpp"

namespace gat {

namespace {

std::optional<int> ctx_ht(const DerivResult& r) {
  if (!r.tree) return std::nullopt;
  return r.tree->height - 1;
}

void fold(ComponentReport& rep, std::optional<int> h) {
  if (!h) {
    rep.derivable = false;
    rep.height_ub.reset();
    return;
  }
  if (rep.derivable) rep.height_ub = std::max(rep.height_ub.value_or(0), *h);
}

void start(ComponentReport& rep, Prover& p, Ctx src, Ctx tgt) {
  rep.derivable = true;
  rep.height_ub = 0;
  rep.src_ctx = p.derive(ctx_j(src));
  rep.tgt_ctx = p.derive(ctx_j(tgt));
  fold(rep, ctx_ht(rep.src_ctx));
  fold(rep, ctx_ht(rep.tgt_ctx));
}

}  // namespace

ComponentReport check_morphism(Prover& p, const Premorphism& f) {
  ComponentReport rep;
  start(rep, p, f.src, f.tgt);
  if (f.comps.size() != f.tgt->size()) {
    rep.derivable = false;
    rep.height_ub.reset();
    return rep;
  }
  for (size_t i = 0; i < f.comps.size(); ++i) {
    rep.components.push_back(p.derive(term_j(f.src, f.comps[i], prefix_sort(f.tgt, f.comps, i))));
    fold(rep, rep.components.back().height_ub());
  }
  return rep;
}

ComponentReport check_morphism(const Premorphism& f, const Pretheory& theory, Budget budget) {
  Prover p(theory, budget);
  return check_morphism(p, f);
}

ComponentReport check_ctx_eq(const CtxEq& e, const Pretheory& theory, Budget budget) {
  Prover p(theory, budget);
  ComponentReport rep;
  start(rep, p, e.lhs, e.rhs);
  if (e.lhs->size() != e.rhs->size()) {
    rep.derivable = false;
    rep.height_ub.reset();
    return rep;
  }
  std::vector<Expr> xs;
  for (const auto& en : e.lhs->entries) xs.push_back(mk_var(en.var));
  for (size_t i = 0; i < e.lhs->size(); ++i) {
    Expr Yi = prefix_sort(e.rhs, xs, i);
    rep.components.push_back(p.derive(sort_eq_j(truncate(e.lhs, i), e.lhs->entries[i].sort, Yi)));
    fold(rep, rep.components.back().height_ub());
  }
  return rep;
}

ComponentReport check_mor_eq(Prover& p, const MorEq& e) {
  ComponentReport rep;
  auto f = check_morphism(p, Premorphism{e.src, e.tgt, e.lhs});
  auto g = check_morphism(p, Premorphism{e.src, e.tgt, e.rhs});
  rep.src_ctx = f.src_ctx;
  rep.tgt_ctx = f.tgt_ctx;
  rep.derivable = true;
  rep.height_ub = 0;
  fold(rep, f.derivable ? f.height_ub : std::nullopt);
  fold(rep, g.derivable ? g.height_ub : std::nullopt);
  if (e.lhs.size() != e.tgt->size() || e.rhs.size() != e.tgt->size()) {
    rep.derivable = false;
    rep.height_ub.reset();
    return rep;
  }
  for (size_t i = 0; i < e.lhs.size(); ++i) {
    rep.components.push_back(p.derive(term_eq_j(e.src, e.lhs[i], e.rhs[i], prefix_sort(e.tgt, e.lhs, i))));
    fold(rep, rep.components.back().height_ub());
  }
  return rep;
}

ComponentReport check_mor_eq(const MorEq& e, const Pretheory& theory, Budget budget) {
  Prover p(theory, budget);
  return check_mor_eq(p, e);
}

std::optional<int> partial_term_height_ub(const PartialTerm& j, const Pretheory& theory, Budget budget) {
  Expr S = try_canonical_sort(j.ctx, j.term, theory);
  if (!S) return std::nullopt;
  return height_ub(term_j(j.ctx, j.term, S), theory, budget);
}

std::optional<int> partial_term_eq_height_ub(const PartialTermEq& j, const Pretheory& theory, Budget budget) {
  Prover p(theory, budget);
  std::optional<int> best;
  for (Expr side : {j.lhs, j.rhs}) {
    Expr S = try_canonical_sort(j.ctx, side, theory);
    if (!S) continue;
    auto h = p.derive(term_eq_j(j.ctx, j.lhs, j.rhs, S)).height_ub();
    if (h && (!best || *h < *best)) best = h;
  }
  return best;
}

Premorphism compose(const Premorphism& g, const Premorphism& f) {
  if (f.tgt != g.src) throw Error("compose: target of the first morphism differs from source of the second");
  auto b = bind_ctx(f.tgt, f.comps, f.comps.size());
  Premorphism r{f.src, g.tgt, {}};
  for (Expr c : g.comps) r.comps.push_back(substitute(c, b));
  return r;
}

Premorphism identity_morphism(Ctx X) {
  Premorphism r{X, X, {}};
  for (const auto& e : X->entries) r.comps.push_back(mk_var(e.var));
  return r;
}

Judgment substitute_along(const Judgment& j, const Premorphism& f) {
  if (j.ctx != f.tgt) throw Error("substitute_along: judgment context differs from the morphism target");
  std::unordered_map<Name, Expr> m;
  for (size_t i = 0; i < f.comps.size(); ++i) m.emplace(f.tgt->entries[i].var, f.comps[i]);
  Judgment r = substitute(j, m);
  r.ctx = f.src;
  return r;
}

size_t TheoryReport::unknown() const {
  return std::count_if(axioms.begin(), axioms.end(), [](const DerivResult& r) { return !r.derivable(); });
}

std::vector<DerivResult> derive_all(const Pretheory& theory, const std::vector<Judgment>& goals, Budget budget,
                                    int jobs, Ruleset rs) {
  std::vector<DerivResult> out(goals.size());
  int n = std::max(1, std::min<int>(jobs, static_cast<int>(goals.size())));
  if (n == 1) {
    Prover p(theory, budget, rs);
    for (size_t i = 0; i < goals.size(); ++i) out[i] = p.derive(goals[i]);
    return out;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < n; ++t)
    pool.emplace_back([&] {
      Prover p(theory, budget, rs);
      for (size_t i; (i = next++) < goals.size();) out[i] = p.derive(goals[i]);
    });
  for (auto& th : pool) th.join();
  return out;
}

TheoryReport is_theory(const Pretheory& theory, Budget budget, int jobs, Ruleset rs) {
  TheoryReport rep;
  rep.axioms = derive_all(theory, theory.axioms, budget, jobs, rs);
  rep.is_theory = rep.unknown() == 0;
  return rep;
}

}  // namespace gat
