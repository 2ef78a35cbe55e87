#include <algorithm>
#include <chrono>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "gat/kernel.hpp"

namespace gat {

namespace {

constexpr int kMaxRewriteDepth = 6;
constexpr size_t kMaxRewriteNodes = 3000;

using Subst = std::unordered_map<Name, Expr>;

bool match(Expr pat, Expr t, const std::unordered_set<Name>& pv, Subst& s) {
  if (pat->var && pv.count(pat->head)) {
    auto it = s.find(pat->head);
    if (it != s.end()) return it->second == t;
    s.emplace(pat->head, t);
    return true;
  }
  if (pat->var != t->var || pat->head != t->head || pat->args.size() != t->args.size()) return false;
  for (size_t i = 0; i < pat->args.size(); ++i)
    if (!match(pat->args[i], t->args[i], pv, s)) return false;
  return true;
}

std::unordered_set<Name> ctx_names(Ctx A) {
  std::unordered_set<Name> s;
  for (const auto& e : A->entries) s.insert(e.var);
  return s;
}

}  // namespace

struct Prover::Impl {
  const Pretheory& th;
  Budget budget;
  Ruleset rs;
  std::unordered_map<Judgment, DerivPtr, JudgmentHash> memo;
  std::unordered_set<Judgment, JudgmentHash> active;
  bool cut = false;
  std::vector<const Judgment*> teq_axioms, seq_axioms;

  Impl(const Pretheory& t, Budget b, Ruleset r) : th(t), budget(b), rs(r) {
    for (const auto& a : th.axioms) {
      if (a.kind == JKind::TermEq) teq_axioms.push_back(&a);
      if (a.kind == JKind::SortEq) seq_axioms.push_back(&a);
    }
  }

  bool modified() const { return rs == Ruleset::Modified; }

  static DerivPtr better(DerivPtr a, DerivPtr b) {
    if (!a) return b;
    if (!b) return a;
    return b->height < a->height ? b : a;
  }

  DerivPtr prove(const Judgment& j) {
    if (auto it = memo.find(j); it != memo.end()) return it->second;
    if (active.count(j)) {
      cut = true;
      return nullptr;
    }
    active.insert(j);
    bool outer = cut;
    cut = false;
    DerivPtr r;
    switch (j.kind) {
      case JKind::Ctx: r = prove_ctx(j); break;
      case JKind::Sort: r = prove_sort(j); break;
      case JKind::Term: r = prove_term(j); break;
      case JKind::SortEq: r = prove_seq(j); break;
      case JKind::TermEq: r = prove_teq(j, true); break;
    }
    active.erase(j);
    if (r || !cut) memo.emplace(j, r);
    cut = outer || cut;
    return r;
  }

  DerivPtr step(Rule rule, const Judgment& c, std::vector<DerivPtr> prems) {
    for (const auto& p : prems)
      if (!p) return nullptr;
    return make_derivation(rule, c, std::move(prems));
  }

  // Derivations of f_i : A_i[f<i] in X, appended to out; false if any fails.
  bool typing_family(Ctx X, Ctx A, const std::vector<Expr>& f, std::vector<DerivPtr>& out) {
    for (size_t i = 0; i < A->size(); ++i) {
      auto d = prove(term_j(X, f[i], prefix_sort(A, f, i)));
      if (!d) return false;
      out.push_back(d);
    }
    return true;
  }

  bool eq_family(Ctx X, Ctx A, const std::vector<Expr>& f, const std::vector<Expr>& g, std::vector<DerivPtr>& out) {
    for (size_t i = 0; i < A->size(); ++i) {
      auto d = prove(term_eq_j(X, f[i], g[i], prefix_sort(A, f, i)));
      if (!d) return false;
      out.push_back(d);
    }
    return true;
  }

  bool refl_family(Ctx X, Ctx A, const std::vector<Expr>& f, std::vector<DerivPtr>& out) {
    return eq_family(X, A, f, f, out);
  }

  DerivPtr prove_ctx(const Judgment& j) {
    Ctx X = j.ctx;
    if (X->size() == 0) return make_derivation(Rule::Ctx, j, {});
    Ctx D = truncate(X, X->size() - 1);
    if (index_of(D, X->entries.back().var) >= 0) return nullptr;
    return step(Rule::Ctx, j, {prove(sort_j(D, X->entries.back().sort))});
  }

  const Judgment* intro_for(Expr e, JKind k) {
    if (e->var) return nullptr;
    const Judgment* ax = th.intro(e->head);
    if (!ax || ax->kind != k || ax->ctx->size() != e->args.size()) return nullptr;
    return ax;
  }

  bool scoped(Ctx X, Expr e) {
    if (e->var) return index_of(X, e->head) >= 0;
    for (Expr a : e->args)
      if (!scoped(X, a)) return false;
    return true;
  }

  // Premises x_i : X_i for every entry of X.
  bool var_family(Ctx X, std::vector<DerivPtr>& out) {
    for (const auto& e : X->entries) {
      auto d = prove(term_j(X, mk_var(e.var), e.sort));
      if (!d) return false;
      out.push_back(d);
    }
    return true;
  }

  DerivPtr prove_sort(const Judgment& j) {
    const Judgment* ax = intro_for(j.lhs, JKind::Sort);
    if (!ax || !scoped(j.ctx, j.lhs)) return nullptr;
    auto cx = prove(ctx_j(j.ctx));
    if (!cx) return nullptr;
    std::vector<DerivPtr> prems;
    if (*ax == j) {
      prems.push_back(cx);
      if (!var_family(j.ctx, prems)) return nullptr;
      return make_derivation(Rule::SA, j, std::move(prems));
    }
    prems.push_back(prove(*ax));
    if (!prems[0]) return nullptr;
    prems.push_back(cx);
    if (!typing_family(j.ctx, ax->ctx, j.lhs->args, prems)) return nullptr;
    return make_derivation(Rule::SSub, j, std::move(prems));
  }

  DerivPtr prove_term(const Judgment& j) {
    Ctx X = j.ctx;
    if (!scoped(X, j.lhs)) return nullptr;
    Expr S = try_canonical_sort(X, j.lhs, th);
    if (!S) return nullptr;
    if (S != j.sort) return step(Rule::SeqT, j, {prove(sort_eq_j(X, S, j.sort)), prove(term_j(X, j.lhs, S))});
    if (j.lhs->var) {
      if (modified()) return step(Rule::Var, j, {prove(sort_j(X, S))});
      return step(Rule::CVar, j, {prove(ctx_j(X))});
    }
    const Judgment* ax = intro_for(j.lhs, JKind::Term);
    if (!ax) return nullptr;
    std::vector<DerivPtr> prems;
    if (*ax == j) {
      prems.push_back(prove(sort_j(X, S)));
      if (!prems[0] || !var_family(X, prems)) return nullptr;
      return make_derivation(Rule::TA, j, std::move(prems));
    }
    prems.push_back(prove(*ax));
    if (!prems[0]) return nullptr;
    if (modified()) {
      prems.push_back(prove(sort_j(X, S)));
      if (!prems[1]) return nullptr;
    }
    if (!typing_family(X, ax->ctx, j.lhs->args, prems)) return nullptr;
    return make_derivation(modified() ? Rule::TSub : Rule::CTSub, j, std::move(prems));
  }

  // Completes a partial instance of an axiom by matching the declared sorts of bound
  // variables against the canonical sorts of their values.
  bool complete(Ctx X, const Judgment& ax, const std::unordered_set<Name>& pv, Subst& s) {
    bool grew = true;
    while (grew && s.size() < ax.ctx->size()) {
      grew = false;
      for (const auto& e : ax.ctx->entries) {
        auto it = s.find(e.var);
        if (it == s.end()) continue;
        Expr S = try_canonical_sort(X, it->second, th);
        if (!S) return false;
        Subst trial = s;
        if (match(e.sort, S, pv, trial) && trial.size() > s.size()) {
          s = std::move(trial);
          grew = true;
        }
      }
    }
    return s.size() == ax.ctx->size();
  }

  std::vector<Expr> args_of(const Judgment& ax, const Subst& s) {
    std::vector<Expr> f;
    for (const auto& e : ax.ctx->entries) f.push_back(s.at(e.var));
    return f;
  }

  DerivPtr sort_refl_axiom(const Judgment& ax) {
    return step(Rule::S1, sort_eq_j(ax.ctx, ax.lhs, ax.lhs), {prove(ax)});
  }

  DerivPtr term_refl_axiom(const Judgment& ax) {
    return step(Rule::T1, term_eq_j(ax.ctx, ax.lhs, ax.lhs, ax.sort), {prove(ax)});
  }

  // Instance of a sort equality axiom at f: X |- U[f] == U'[f].
  DerivPtr seq_instance(Ctx X, const Judgment& ax, const std::vector<Expr>& f) {
    Expr l = substitute(ax.lhs, bind_ctx(ax.ctx, f, f.size()));
    Expr r = substitute(ax.rhs, bind_ctx(ax.ctx, f, f.size()));
    Judgment c = sort_eq_j(X, l, r);
    if (X == ax.ctx && l == ax.lhs && r == ax.rhs)
      return step(Rule::SeqA, c, {prove(sort_j(X, l)), prove(sort_j(X, r))});
    std::vector<DerivPtr> prems{prove(ax)};
    if (!prems[0]) return nullptr;
    if (modified()) {
      prems.push_back(prove(sort_j(X, l)));
      prems.push_back(prove(sort_j(X, r)));
      if (!prems[1] || !prems[2] || !typing_family(X, ax.ctx, f, prems)) return nullptr;
      return make_derivation(Rule::SeqSub1, c, std::move(prems));
    }
    if (!refl_family(X, ax.ctx, f, prems)) return nullptr;
    return make_derivation(Rule::CSeqSub, c, std::move(prems));
  }

  DerivPtr seq_congruence(const Judgment& j) {
    Expr U = j.lhs, V = j.rhs;
    if (U->var || V->var || U->head != V->head) return nullptr;
    const Judgment* ax = intro_for(U, JKind::Sort);
    if (!ax || V->args.size() != U->args.size()) return nullptr;
    std::vector<DerivPtr> prems;
    if (modified()) {
      prems = {prove(*ax), prove(sort_j(j.ctx, U)), prove(sort_j(j.ctx, V))};
      for (const auto& p : prems)
        if (!p) return nullptr;
      if (!eq_family(j.ctx, ax->ctx, U->args, V->args, prems)) return nullptr;
      return make_derivation(Rule::SeqSub2, j, std::move(prems));
    }
    prems.push_back(sort_refl_axiom(*ax));
    if (!prems[0] || !eq_family(j.ctx, ax->ctx, U->args, V->args, prems)) return nullptr;
    return make_derivation(Rule::CSeqSub, j, std::move(prems));
  }

  DerivPtr sort_sym(DerivPtr d) {
    if (!d) return nullptr;
    return make_derivation(Rule::S2, sort_eq_j(d->concl.ctx, d->concl.rhs, d->concl.lhs), {d});
  }

  template <class Trans>
  DerivPtr chain(std::vector<DerivPtr> steps, Trans trans) {
    if (steps.empty()) return nullptr;
    while (steps.size() > 1) {
      std::vector<DerivPtr> next;
      for (size_t i = 0; i + 1 < steps.size(); i += 2) next.push_back(trans(steps[i], steps[i + 1]));
      if (steps.size() % 2) next.push_back(steps.back());
      steps = std::move(next);
    }
    return steps[0];
  }

  // One root-level rewrite of a sort with a sort equality axiom, in either direction.
  struct SortEdge {
    Expr to;
    const Judgment* ax;
    std::vector<Expr> f;
    bool reversed;
  };

  std::vector<SortEdge> sort_edges(Ctx X, Expr U) {
    std::vector<SortEdge> out;
    for (const Judgment* ax : seq_axioms) {
      auto pv = ctx_names(ax->ctx);
      for (int dir = 0; dir < 2; ++dir) {
        Subst s;
        if (!match(dir ? ax->rhs : ax->lhs, U, pv, s) || !complete(X, *ax, pv, s)) continue;
        auto f = args_of(*ax, s);
        Expr to = substitute(dir ? ax->lhs : ax->rhs, bind_ctx(ax->ctx, f, f.size()));
        if (to->size > static_cast<uint32_t>(budget.universe)) continue;
        out.push_back({to, ax, std::move(f), dir == 1});
      }
    }
    return out;
  }

  DerivPtr edge_proof(Ctx X, const SortEdge& e) {
    auto d = seq_instance(X, *e.ax, e.f);
    return e.reversed ? sort_sym(d) : d;
  }

  DerivPtr prove_seq(const Judgment& j) {
    Ctx X = j.ctx;
    if (j.lhs == j.rhs) return step(Rule::S1, j, {prove(sort_j(X, j.lhs))});
    DerivPtr best = seq_congruence(j);
    if (seq_axioms.empty()) return best;
    for (const auto& e : sort_edges(X, j.lhs))
      if (e.to == j.rhs) best = better(best, edge_proof(X, e));
    if (best) return best;
    // Breadth-first search over root-level rewrites; the last leg is closed by congruence.
    struct Visit {
      Expr parent;
      SortEdge via;
    };
    std::unordered_map<Expr, Visit> seen{{j.lhs, {nullptr, {}}}};
    std::deque<std::pair<Expr, int>> queue{{j.lhs, 0}};
    auto trans = [&](DerivPtr a, DerivPtr b) -> DerivPtr {
      if (!a || !b) return nullptr;
      return make_derivation(Rule::S3, sort_eq_j(X, a->concl.lhs, b->concl.rhs), {a, b});
    };
    while (!queue.empty() && seen.size() < kMaxRewriteNodes) {
      auto [U, depth] = queue.front();
      queue.pop_front();
      if (U != j.lhs && !U->var && !j.rhs->var && U->head == j.rhs->head) {
        auto last = U == j.rhs ? nullptr : seq_congruence(sort_eq_j(X, U, j.rhs));
        if (U == j.rhs || last) {
          std::vector<DerivPtr> steps;
          if (last) steps.push_back(last);
          for (Expr cur = U; seen.at(cur).parent; cur = seen.at(cur).parent) steps.push_back(edge_proof(X, seen.at(cur).via));
          std::reverse(steps.begin(), steps.end());
          for (const auto& s : steps)
            if (!s) return nullptr;
          return chain(steps, trans);
        }
      }
      if (depth >= kMaxRewriteDepth) continue;
      for (auto& e : sort_edges(X, U)) {
        if (seen.count(e.to)) continue;
        seen.emplace(e.to, Visit{U, e});
        queue.emplace_back(e.to, depth + 1);
      }
    }
    return nullptr;
  }

  DerivPtr term_sym(DerivPtr d) {
    if (!d) return nullptr;
    const auto& c = d->concl;
    return make_derivation(Rule::T2, term_eq_j(c.ctx, c.rhs, c.lhs, c.sort), {d});
  }

  // Moves u == v : A to sort B.
  DerivPtr convert(DerivPtr d, Expr B) {
    if (!d) return nullptr;
    const auto& c = d->concl;
    if (c.sort == B) return d;
    Judgment goal = term_eq_j(c.ctx, c.lhs, c.rhs, B);
    auto e = prove(sort_eq_j(c.ctx, c.sort, B));
    if (modified()) return step(Rule::SeqTeq, goal, {e, d, prove(term_j(c.ctx, c.lhs, B)), prove(term_j(c.ctx, c.rhs, B))});
    return step(Rule::CSeqTeq, goal, {e, d});
  }

  // Instance of a term equality axiom at f: X |- u[f] == u'[f] : U[f].
  DerivPtr teq_instance(Ctx X, const Judgment& ax, const std::vector<Expr>& f) {
    auto b = bind_ctx(ax.ctx, f, f.size());
    Expr l = substitute(ax.lhs, b), r = substitute(ax.rhs, b), U = substitute(ax.sort, b);
    Judgment c = term_eq_j(X, l, r, U);
    if (X == ax.ctx && c == ax) return step(Rule::TeqA, c, {prove(term_j(X, l, U)), prove(term_j(X, r, U))});
    std::vector<DerivPtr> prems{prove(ax)};
    if (!prems[0]) return nullptr;
    if (modified()) {
      prems.push_back(prove(term_j(X, l, U)));
      prems.push_back(prove(term_j(X, r, U)));
      if (!prems[1] || !prems[2] || !typing_family(X, ax.ctx, f, prems)) return nullptr;
      return make_derivation(Rule::TeqSub1, c, std::move(prems));
    }
    if (!refl_family(X, ax.ctx, f, prems)) return nullptr;
    return make_derivation(Rule::CTeqSub, c, std::move(prems));
  }

  DerivPtr teq_congruence(const Judgment& j) {
    Expr u = j.lhs, v = j.rhs;
    if (u->var || v->var || u->head != v->head) return nullptr;
    const Judgment* ax = intro_for(u, JKind::Term);
    if (!ax || v->args.size() != u->args.size()) return nullptr;
    Expr Uf = substitute(ax->sort, bind_ctx(ax->ctx, u->args, u->args.size()));
    if (Uf != j.sort) return nullptr;
    std::vector<DerivPtr> prems;
    if (modified()) {
      prems = {prove(*ax), prove(term_j(j.ctx, u, Uf)), prove(term_j(j.ctx, v, Uf))};
      for (const auto& p : prems)
        if (!p) return nullptr;
      if (!eq_family(j.ctx, ax->ctx, u->args, v->args, prems)) return nullptr;
      return make_derivation(Rule::TeqSub2, j, std::move(prems));
    }
    prems.push_back(term_refl_axiom(*ax));
    if (!prems[0] || !eq_family(j.ctx, ax->ctx, u->args, v->args, prems)) return nullptr;
    return make_derivation(Rule::CTeqSub, j, std::move(prems));
  }

  void rewrites_at(Ctx X, Expr whole, Expr sub, std::vector<int>& path, std::vector<Expr>& out) {
    for (const Judgment* ax : teq_axioms) {
      auto pv = ctx_names(ax->ctx);
      for (int dir = 0; dir < 2; ++dir) {
        Subst s;
        if (!match(dir ? ax->rhs : ax->lhs, sub, pv, s) || !complete(X, *ax, pv, s)) continue;
        auto f = args_of(*ax, s);
        Expr to = substitute(dir ? ax->lhs : ax->rhs, bind_ctx(ax->ctx, f, f.size()));
        if (to == sub) continue;
        Expr next = replace_at(whole, path, to);
        if (next->size <= static_cast<uint32_t>(budget.universe)) out.push_back(next);
      }
    }
    if (sub->var) return;
    for (size_t i = 0; i < sub->args.size(); ++i) {
      path.push_back(static_cast<int>(i));
      rewrites_at(X, whole, sub->args[i], path, out);
      path.pop_back();
    }
  }

  std::vector<Expr> rewrites(Ctx X, Expr t) {
    std::vector<Expr> out;
    std::vector<int> path;
    rewrites_at(X, t, t, path, out);
    return out;
  }

  // Bidirectional breadth-first search for a chain of single rewrites joining u and v.
  DerivPtr teq_search(const Judgment& j) {
    Ctx X = j.ctx;
    std::unordered_map<Expr, Expr> from_u{{j.lhs, nullptr}}, from_v{{j.rhs, nullptr}};
    std::vector<Expr> front_u{j.lhs}, front_v{j.rhs};
    Expr meet = nullptr;
    for (int depth = 0; depth < kMaxRewriteDepth && !meet; ++depth) {
      bool side_u = front_u.size() <= front_v.size();
      auto& front = side_u ? front_u : front_v;
      auto& mine = side_u ? from_u : from_v;
      auto& other = side_u ? from_v : from_u;
      std::vector<Expr> next;
      for (Expr t : front) {
        for (Expr n : rewrites(X, t)) {
          if (mine.count(n)) continue;
          mine.emplace(n, t);
          if (other.count(n)) {
            meet = n;
            break;
          }
          next.push_back(n);
        }
        if (meet || from_u.size() + from_v.size() > kMaxRewriteNodes) break;
      }
      if (next.empty() && !meet) return nullptr;
      front = std::move(next);
    }
    if (!meet) return nullptr;
    std::vector<Expr> path;
    for (Expr t = meet; t; t = from_u.at(t)) path.push_back(t);
    std::reverse(path.begin(), path.end());
    for (Expr t = from_v.at(meet); t; t = from_v.at(t)) path.push_back(t);
    std::vector<DerivPtr> steps;
    for (size_t i = 0; i + 1 < path.size(); ++i) {
      auto d = prove_teq(term_eq_j(X, path[i], path[i + 1], j.sort), false);
      if (!d) return nullptr;
      steps.push_back(d);
    }
    return chain(steps, [&](DerivPtr a, DerivPtr b) -> DerivPtr {
      return make_derivation(Rule::T3, term_eq_j(X, a->concl.lhs, b->concl.rhs, j.sort), {a, b});
    });
  }

  DerivPtr prove_teq(const Judgment& j, bool search) {
    Ctx X = j.ctx;
    if (!scoped(X, j.lhs) || !scoped(X, j.rhs)) return nullptr;
    if (j.lhs == j.rhs) return step(Rule::T1, j, {prove(term_j(X, j.lhs, j.sort))});
    Expr S = try_canonical_sort(X, j.lhs, th);
    if (!S) return nullptr;
    if (S != j.sort) {
      Judgment at_s = term_eq_j(X, j.lhs, j.rhs, S);
      return convert(search ? prove(at_s) : prove_teq(at_s, false), j.sort);
    }
    DerivPtr best;
    for (const Judgment* ax : teq_axioms) {
      auto pv = ctx_names(ax->ctx);
      for (int dir = 0; dir < 2; ++dir) {
        Subst s;
        if (!match(dir ? ax->rhs : ax->lhs, j.lhs, pv, s) || !match(dir ? ax->lhs : ax->rhs, j.rhs, pv, s)) continue;
        if (!complete(X, *ax, pv, s)) continue;
        auto d = teq_instance(X, *ax, args_of(*ax, s));
        if (d && dir) d = term_sym(d);
        best = better(best, convert(d, S));
      }
    }
    best = better(best, teq_congruence(j));
    if (!best && search) best = teq_search(j);
    return best;
  }
};

Prover::Prover(const Pretheory& theory, Budget budget, Ruleset rs)
    : impl_(std::make_unique<Impl>(theory, budget, rs)) {}
Prover::~Prover() = default;

const Pretheory& Prover::theory() const { return impl_->th; }

DerivResult Prover::derive(const Judgment& goal) {
  auto t0 = std::chrono::steady_clock::now();
  DerivResult r;
  if (goal.ctx && is_precontext(goal.ctx)) {
    impl_->cut = false;
    auto d = impl_->prove(goal);
    if (d && d->height <= impl_->budget.max_height) r.tree = d;
  }
  r.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

DerivResult derive(const Judgment& goal, const Pretheory& theory, Budget budget, Ruleset rs) {
  Prover p(theory, budget, rs);
  return p.derive(goal);
}

std::optional<int> height_ub(const Judgment& goal, const Pretheory& theory, Budget budget) {
  return derive(goal, theory, budget).height_ub();
}

std::optional<int> ctx_height_ub(Ctx X, const Pretheory& theory, Budget budget) {
  if (X->size() == 0) return 0;
  return height_ub(sort_j(truncate(X, X->size() - 1), X->entries.back().sort), theory, budget);
}

}  // namespace gat
