#include "height_oracle.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <unordered_set>

namespace oracle {

using namespace gat;

namespace {

size_t esize(Expr e) { return e ? e->size : 0; }

struct KeyHash {
  size_t operator()(const std::pair<Ctx, Expr>& k) const {
    return std::hash<const void*>()(k.first) * 31 + std::hash<const void*>()(k.second);
  }
};

struct Index {
  std::vector<Ctx> ctxs;
  std::unordered_map<Ctx, std::vector<Expr>> sorts;
  std::unordered_map<std::pair<Ctx, Expr>, std::vector<Expr>, KeyHash> terms;
  std::unordered_map<std::pair<Ctx, Expr>, std::vector<std::pair<Expr, Expr>>, KeyHash> teqs;
  std::unordered_map<Ctx, std::vector<std::pair<Expr, Expr>>> seqs;
};

}  // namespace

size_t judgment_size(const Judgment& j) {
  size_t n = 0;
  for (const auto& e : j.ctx->entries) n += 1 + esize(e.sort);
  return n + esize(j.lhs) + esize(j.rhs) + esize(j.sort);
}

HeightOracle::HeightOracle(const Pretheory& t, size_t max_size, std::vector<Name> pool)
    : t_(t), max_size_(max_size), pool_(std::move(pool)) {
  for (const auto& ax : t.axioms)
    if (ax.kind == JKind::SortEq || ax.kind == JKind::TermEq)
      throw std::invalid_argument("height oracle: equality axioms are out of scope");
  for (int n = 1;; ++n) {
    size_t before = ht_.size();
    round(n);
    if (ht_.size() == before) break;
    rounds_ = n;
  }
}

std::optional<int> HeightOracle::height(const Judgment& j) const {
  auto it = ht_.find(j);
  if (it == ht_.end()) return std::nullopt;
  return it->second;
}

void HeightOracle::round(int n) {
  Index ix;
  for (const auto& [j, h] : ht_) {
    switch (j.kind) {
      case JKind::Ctx: ix.ctxs.push_back(j.ctx); break;
      case JKind::Sort: ix.sorts[j.ctx].push_back(j.lhs); break;
      case JKind::Term: ix.terms[{j.ctx, j.sort}].push_back(j.lhs); break;
      case JKind::TermEq: ix.teqs[{j.ctx, j.sort}].emplace_back(j.lhs, j.rhs); break;
      case JKind::SortEq: ix.seqs[j.ctx].emplace_back(j.lhs, j.rhs); break;
    }
  }
  auto has = [&](const Judgment& j) { return ht_.count(j) != 0; };
  std::vector<Judgment> out;
  auto emit = [&](const Judgment& c) {
    if (judgment_size(c) <= max_size_ && !has(c)) out.push_back(c);
  };

  emit(ctx_j(empty_ctx()));

  for (const auto& [X, us] : ix.sorts)
    for (Expr U : us) {
      for (Name v : pool_)
        if (index_of(X, v) < 0) emit(ctx_j(extend(X, v, U)));
      for (const auto& e : X->entries)
        if (e.sort == U) emit(term_j(X, mk_var(e.var), U));
      emit(sort_eq_j(X, U, U));
    }

  for (const auto& [X, eqs] : ix.seqs)
    for (const auto& [U, V] : eqs) {
      emit(sort_eq_j(X, V, U));
      for (const auto& [V2, W] : eqs)
        if (V2 == V) emit(sort_eq_j(X, U, W));
      if (auto it = ix.terms.find({X, U}); it != ix.terms.end())
        for (Expr u : it->second) emit(term_j(X, u, V));
      if (auto it = ix.teqs.find({X, U}); it != ix.teqs.end())
        for (const auto& [u, w] : it->second)
          if (has(term_j(X, u, V)) && has(term_j(X, w, V))) emit(term_eq_j(X, u, w, V));
    }

  for (const auto& [key, us] : ix.terms)
    for (Expr u : us) emit(term_eq_j(key.first, u, u, key.second));

  for (const auto& [key, eqs] : ix.teqs)
    for (const auto& [u, w] : eqs) {
      emit(term_eq_j(key.first, w, u, key.second));
      for (const auto& [w2, z] : eqs)
        if (w2 == w) emit(term_eq_j(key.first, u, z, key.second));
    }

  std::vector<Ctx> targets;
  for (const auto& [X, us] : ix.sorts) targets.push_back(X);

  for (const auto& ax : t_.axioms) {
    Ctx A = ax.ctx;
    Expr head = ax.lhs;
    bool vars_ok = true;
    for (const auto& e : A->entries) vars_ok = vars_ok && has(term_j(A, mk_var(e.var), e.sort));
    if (ax.kind == JKind::Sort && has(ctx_j(A)) && vars_ok) emit(ax);
    if (ax.kind == JKind::Term && has(sort_j(A, ax.sort)) && vars_ok) emit(ax);
    if (!has(ax)) continue;

    size_t k = A->size();
    auto substituted = [&](const std::vector<Expr>& f) { return mk_app(head->head, f); };

    std::function<void(Ctx, std::vector<Expr>&, size_t)> tuples = [&](Ctx Y, std::vector<Expr>& f, size_t budget) {
      size_t i = f.size();
      if (i == k) {
        Expr c = substituted(f);
        if (ax.kind == JKind::Sort) {
          emit(sort_j(Y, c));
        } else {
          Expr U = substitute(ax.sort, bind_ctx(A, f, k));
          if (has(sort_j(Y, U))) emit(term_j(Y, c, U));
        }
        return;
      }
      Expr need = substitute(A->entries[i].sort, bind_ctx(A, f, i));
      auto it = ix.terms.find({Y, need});
      if (it == ix.terms.end()) return;
      for (Expr u : it->second) {
        if (u->size > budget) continue;
        f.push_back(u);
        tuples(Y, f, budget - u->size);
        f.pop_back();
      }
    };

    std::function<void(Ctx, std::vector<Expr>&, std::vector<Expr>&, size_t)> eq_tuples =
        [&](Ctx Y, std::vector<Expr>& f, std::vector<Expr>& g, size_t budget) {
          size_t i = f.size();
          if (i == k) {
            Expr cf = substituted(f), cg = substituted(g);
            if (ax.kind == JKind::Sort) {
              if (has(sort_j(Y, cf)) && has(sort_j(Y, cg))) emit(sort_eq_j(Y, cf, cg));
            } else {
              Expr U = substitute(ax.sort, bind_ctx(A, f, k));
              if (has(term_j(Y, cf, U)) && has(term_j(Y, cg, U))) emit(term_eq_j(Y, cf, cg, U));
            }
            return;
          }
          Expr need = substitute(A->entries[i].sort, bind_ctx(A, f, i));
          auto it = ix.teqs.find({Y, need});
          if (it == ix.teqs.end()) return;
          for (const auto& [u, w] : it->second) {
            if (u->size > budget) continue;
            f.push_back(u);
            g.push_back(w);
            eq_tuples(Y, f, g, budget - u->size);
            f.pop_back();
            g.pop_back();
          }
        };

    const std::vector<Ctx>& ys = ax.kind == JKind::Sort ? ix.ctxs : targets;
    for (Ctx Y : ys) {
      size_t room = max_size_ > judgment_size(ctx_j(Y)) ? max_size_ - judgment_size(ctx_j(Y)) : 0;
      std::vector<Expr> f, g;
      tuples(Y, f, room);
      eq_tuples(Y, f, g, room);
    }
  }

  for (const auto& c : out) ht_.emplace(c, n);
}

}  // namespace oracle
