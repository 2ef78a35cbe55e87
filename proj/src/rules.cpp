#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "gat/kernel.hpp"

namespace gat {

namespace {

constexpr const char* kNames[kRuleCount] = {
    "ctx",       "s1",        "s2",        "s3",        "t1",        "t2",         "t3",
    "seq/t",     "seq/teq",   "var",       "s-a",       "t-a",       "seq-a",      "teq-a",
    "s-sub",     "t-sub",     "seq-sub-1", "seq-sub-2", "teq-sub-1", "teq-sub-2",  "seq/teq'",
    "var'",      "t-sub'",    "seq-sub'",  "teq-sub'",
};

}  // namespace

const char* rule_name(Rule r) { return kNames[static_cast<int>(r)]; }

std::optional<Rule> rule_from_name(std::string_view name) {
  std::string n;
  for (size_t i = 0; i < name.size(); ++i) {
    // U+2032 PRIME is accepted for the Cartmell variants
    if (name.compare(i, 3, "\xE2\x80\xB2") == 0) {
      n += '\'';
      i += 2;
      continue;
    }
    n += static_cast<char>(std::tolower(static_cast<unsigned char>(name[i])));
  }
  if (!n.empty() && n.front() == '(' && n.back() == ')') n = n.substr(1, n.size() - 2);
  static const std::unordered_map<std::string, std::string> aliases = {
      {"seq-sub", "seq-sub'"}, {"teq-sub", "teq-sub'"}, {"seqt", "seq/t"}, {"seqteq", "seq/teq"},
  };
  if (auto it = aliases.find(n); it != aliases.end()) n = it->second;
  for (int i = 0; i < kRuleCount; ++i)
    if (n == kNames[i]) return static_cast<Rule>(i);
  return std::nullopt;
}

bool in_ruleset(Rule r, Ruleset rs) {
  switch (r) {
    case Rule::SeqTeq:
    case Rule::Var:
    case Rule::TSub:
    case Rule::SeqSub1:
    case Rule::SeqSub2:
    case Rule::TeqSub1:
    case Rule::TeqSub2: return rs == Ruleset::Modified;
    case Rule::CSeqTeq:
    case Rule::CVar:
    case Rule::CTSub:
    case Rule::CSeqSub:
    case Rule::CTeqSub: return rs == Ruleset::Cartmell;
    default: return true;
  }
}

std::optional<Ruleset> ruleset_from_name(std::string_view name) {
  if (name == "modified") return Ruleset::Modified;
  if (name == "cartmell") return Ruleset::Cartmell;
  return std::nullopt;
}

Budget default_budget() { return Budget{}; }

DerivPtr make_derivation(Rule rule, const Judgment& concl, std::vector<DerivPtr> prems) {
  int h = 0;
  for (const auto& p : prems) h = std::max(h, p->height);
  return std::make_shared<const Derivation>(Derivation{concl, rule, std::move(prems), h + 1});
}

Expr try_canonical_sort(Ctx X, Expr u, const Pretheory& theory) {
  if (u->var) {
    int i = index_of(X, u->head);
    return i < 0 ? nullptr : X->entries[i].sort;
  }
  const Judgment* ax = theory.intro(u->head);
  if (!ax || ax->kind != JKind::Term || ax->ctx->size() != u->args.size()) return nullptr;
  return substitute(ax->sort, bind_ctx(ax->ctx, u->args, u->args.size()));
}

Expr canonical_sort(Ctx X, Expr u, const Pretheory& theory) {
  if (u->var) {
    int i = index_of(X, u->head);
    if (i < 0) throw Error("canonical_sort: variable " + name_str(u->head, Role::Var) + " not in context");
    return X->entries[i].sort;
  }
  const Judgment* ax = theory.intro(u->head);
  if (!ax || ax->kind != JKind::Term) throw Error("canonical_sort: unknown term symbol " + name_str(u->head, Role::Symbol));
  if (ax->ctx->size() != u->args.size()) throw Error("canonical_sort: arity mismatch at " + expr_str(u));
  return substitute(ax->sort, bind_ctx(ax->ctx, u->args, u->args.size()));
}

Expr prefix_sort(Ctx A, const std::vector<Expr>& f, size_t i) {
  return substitute(A->entries[i].sort, bind_ctx(A, f, i));
}

namespace {

using Js = std::vector<Judgment>;

bool is(const Judgment& j, JKind k) { return j.kind == k; }

// J_i : Y |- f_i : A_i[f<i]
bool term_family(const Js& p, size_t off, Ctx Y, Ctx A, const std::vector<Expr>& f) {
  if (p.size() != off + A->size() || f.size() != A->size()) return false;
  for (size_t i = 0; i < A->size(); ++i)
    if (p[off + i] != term_j(Y, f[i], prefix_sort(A, f, i))) return false;
  return true;
}

// J_i : Y |- f_i == g_i : A_i[f<i]
bool eq_family(const Js& p, size_t off, Ctx Y, Ctx A, const std::vector<Expr>& f, const std::vector<Expr>& g) {
  if (p.size() != off + A->size() || f.size() != A->size() || g.size() != A->size()) return false;
  for (size_t i = 0; i < A->size(); ++i)
    if (p[off + i] != term_eq_j(Y, f[i], g[i], prefix_sort(A, f, i))) return false;
  return true;
}

std::vector<Expr> lhs_of(const Js& p, size_t off) {
  std::vector<Expr> f;
  for (size_t i = off; i < p.size(); ++i) f.push_back(p[i].lhs);
  return f;
}
std::vector<Expr> rhs_of(const Js& p, size_t off) {
  std::vector<Expr> f;
  for (size_t i = off; i < p.size(); ++i) f.push_back(p[i].rhs);
  return f;
}

Expr inst(Expr e, Ctx A, const std::vector<Expr>& f) { return substitute(e, bind_ctx(A, f, A->size())); }

bool intro_of(const Pretheory& t, const Judgment& J, JKind k, Expr concl_head) {
  if (!t.is_axiom(J) || J.kind != k) return false;
  if (concl_head->var || J.lhs->head != concl_head->head) return false;
  return J.lhs->args.size() == concl_head->args.size();
}

}  // namespace

bool validate_step(Rule rule, const Js& p, const Judgment& c, const Pretheory& t) {
  Ctx X = c.ctx;
  if (!X) return false;
  switch (rule) {
    case Rule::Ctx: {
      if (!is(c, JKind::Ctx)) return false;
      if (X->size() == 0) return p.empty();
      if (p.size() != 1 || !is(p[0], JKind::Sort)) return false;
      Ctx D = truncate(X, X->size() - 1);
      if (index_of(D, X->entries.back().var) >= 0) return false;
      return p[0] == sort_j(D, X->entries.back().sort);
    }
    case Rule::S1:
      return is(c, JKind::SortEq) && c.lhs == c.rhs && p.size() == 1 && p[0] == sort_j(X, c.lhs);
    case Rule::S2:
      return is(c, JKind::SortEq) && p.size() == 1 && p[0] == sort_eq_j(X, c.rhs, c.lhs);
    case Rule::S3:
      return is(c, JKind::SortEq) && p.size() == 2 && is(p[0], JKind::SortEq) && p[0].ctx == X &&
             p[0].lhs == c.lhs && p[1] == sort_eq_j(X, p[0].rhs, c.rhs);
    case Rule::T1:
      return is(c, JKind::TermEq) && c.lhs == c.rhs && p.size() == 1 && p[0] == term_j(X, c.lhs, c.sort);
    case Rule::T2:
      return is(c, JKind::TermEq) && p.size() == 1 && p[0] == term_eq_j(X, c.rhs, c.lhs, c.sort);
    case Rule::T3:
      return is(c, JKind::TermEq) && p.size() == 2 && is(p[0], JKind::TermEq) && p[0].ctx == X &&
             p[0].lhs == c.lhs && p[0].sort == c.sort && p[1] == term_eq_j(X, p[0].rhs, c.rhs, c.sort);
    case Rule::SeqT:
      return is(c, JKind::Term) && p.size() == 2 && is(p[0], JKind::SortEq) && p[0].ctx == X &&
             p[0].rhs == c.sort && p[1] == term_j(X, c.lhs, p[0].lhs);
    case Rule::SeqTeq:
      return is(c, JKind::TermEq) && p.size() == 4 && is(p[0], JKind::SortEq) && p[0].ctx == X &&
             p[0].rhs == c.sort && p[1] == term_eq_j(X, c.lhs, c.rhs, p[0].lhs) && p[2] == term_j(X, c.lhs, c.sort) &&
             p[3] == term_j(X, c.rhs, c.sort);
    case Rule::CSeqTeq:
      return is(c, JKind::TermEq) && p.size() == 2 && is(p[0], JKind::SortEq) && p[0].ctx == X &&
             p[0].rhs == c.sort && p[1] == term_eq_j(X, c.lhs, c.rhs, p[0].lhs);
    case Rule::Var:
    case Rule::CVar: {
      if (!is(c, JKind::Term) || !c.lhs->var || X->size() == 0) return false;
      int i = index_of(X, c.lhs->head);
      if (i < 0 || X->entries[i].sort != c.sort || p.size() != 1) return false;
      return rule == Rule::Var ? p[0] == sort_j(X, c.sort) : p[0] == ctx_j(X);
    }
    case Rule::SA: {
      if (!is(c, JKind::Sort) || !t.is_axiom(c)) return false;
      if (p.size() != 1 + X->size() || p[0] != ctx_j(X)) return false;
      for (size_t i = 0; i < X->size(); ++i)
        if (p[1 + i] != term_j(X, mk_var(X->entries[i].var), X->entries[i].sort)) return false;
      return true;
    }
    case Rule::TA: {
      if (!is(c, JKind::Term) || !t.is_axiom(c)) return false;
      if (p.size() != 1 + X->size() || p[0] != sort_j(X, c.sort)) return false;
      for (size_t i = 0; i < X->size(); ++i)
        if (p[1 + i] != term_j(X, mk_var(X->entries[i].var), X->entries[i].sort)) return false;
      return true;
    }
    case Rule::SeqA:
      return is(c, JKind::SortEq) && t.is_axiom(c) && p.size() == 2 && p[0] == sort_j(X, c.lhs) &&
             p[1] == sort_j(X, c.rhs);
    case Rule::TeqA:
      return is(c, JKind::TermEq) && t.is_axiom(c) && p.size() == 2 && p[0] == term_j(X, c.lhs, c.sort) &&
             p[1] == term_j(X, c.rhs, c.sort);
    case Rule::SSub: {
      if (!is(c, JKind::Sort) || p.size() < 2 || !intro_of(t, p[0], JKind::Sort, c.lhs)) return false;
      const Judgment& J = p[0];
      return p[1] == ctx_j(X) && term_family(p, 2, X, J.ctx, c.lhs->args);
    }
    case Rule::TSub: {
      if (!is(c, JKind::Term) || p.size() < 2 || !intro_of(t, p[0], JKind::Term, c.lhs)) return false;
      const Judgment& J = p[0];
      const auto& f = c.lhs->args;
      Expr Uf = inst(J.sort, J.ctx, f);
      return c.sort == Uf && p[1] == sort_j(X, Uf) && term_family(p, 2, X, J.ctx, f);
    }
    case Rule::CTSub: {
      if (!is(c, JKind::Term) || p.empty() || !intro_of(t, p[0], JKind::Term, c.lhs)) return false;
      const Judgment& J = p[0];
      const auto& f = c.lhs->args;
      return c.sort == inst(J.sort, J.ctx, f) && term_family(p, 1, X, J.ctx, f);
    }
    case Rule::SeqSub1: {
      if (!is(c, JKind::SortEq) || p.size() < 3 || !t.is_axiom(p[0]) || !is(p[0], JKind::SortEq)) return false;
      const Judgment& J = p[0];
      if (p.size() != 3 + J.ctx->size()) return false;
      auto f = lhs_of(p, 3);
      Expr Uf = inst(J.lhs, J.ctx, f), Vf = inst(J.rhs, J.ctx, f);
      return c.lhs == Uf && c.rhs == Vf && p[1] == sort_j(X, Uf) && p[2] == sort_j(X, Vf) &&
             term_family(p, 3, X, J.ctx, f);
    }
    case Rule::SeqSub2: {
      if (!is(c, JKind::SortEq) || p.size() < 3 || !intro_of(t, p[0], JKind::Sort, c.lhs)) return false;
      if (c.rhs->var || c.rhs->head != c.lhs->head) return false;
      const Judgment& J = p[0];
      const auto& f = c.lhs->args;
      const auto& g = c.rhs->args;
      return p[1] == sort_j(X, c.lhs) && p[2] == sort_j(X, c.rhs) && eq_family(p, 3, X, J.ctx, f, g);
    }
    case Rule::TeqSub1: {
      if (!is(c, JKind::TermEq) || p.size() < 3 || !t.is_axiom(p[0]) || !is(p[0], JKind::TermEq)) return false;
      const Judgment& J = p[0];
      if (p.size() != 3 + J.ctx->size()) return false;
      auto f = lhs_of(p, 3);
      Expr uf = inst(J.lhs, J.ctx, f), vf = inst(J.rhs, J.ctx, f), Uf = inst(J.sort, J.ctx, f);
      return c.lhs == uf && c.rhs == vf && c.sort == Uf && p[1] == term_j(X, uf, Uf) && p[2] == term_j(X, vf, Uf) &&
             term_family(p, 3, X, J.ctx, f);
    }
    case Rule::TeqSub2: {
      if (!is(c, JKind::TermEq) || p.size() < 3 || !intro_of(t, p[0], JKind::Term, c.lhs)) return false;
      if (c.rhs->var || c.rhs->head != c.lhs->head) return false;
      const Judgment& J = p[0];
      const auto& f = c.lhs->args;
      const auto& g = c.rhs->args;
      Expr Uf = inst(J.sort, J.ctx, f);
      return c.sort == Uf && p[1] == term_j(X, c.lhs, Uf) && p[2] == term_j(X, c.rhs, Uf) &&
             eq_family(p, 3, X, J.ctx, f, g);
    }
    case Rule::CSeqSub: {
      if (!is(c, JKind::SortEq) || p.empty() || !is(p[0], JKind::SortEq)) return false;
      const Judgment& J = p[0];
      if (p.size() != 1 + J.ctx->size()) return false;
      for (size_t i = 1; i < p.size(); ++i)
        if (!is(p[i], JKind::TermEq)) return false;
      auto f = lhs_of(p, 1), g = rhs_of(p, 1);
      return c.lhs == inst(J.lhs, J.ctx, f) && c.rhs == inst(J.rhs, J.ctx, g) && eq_family(p, 1, X, J.ctx, f, g);
    }
    case Rule::CTeqSub: {
      if (!is(c, JKind::TermEq) || p.empty() || !is(p[0], JKind::TermEq)) return false;
      const Judgment& J = p[0];
      if (p.size() != 1 + J.ctx->size()) return false;
      for (size_t i = 1; i < p.size(); ++i)
        if (!is(p[i], JKind::TermEq)) return false;
      auto f = lhs_of(p, 1), g = rhs_of(p, 1);
      return c.lhs == inst(J.lhs, J.ctx, f) && c.rhs == inst(J.rhs, J.ctx, g) && c.sort == inst(J.sort, J.ctx, f) &&
             eq_family(p, 1, X, J.ctx, f, g);
    }
  }
  return false;
}

bool check_derivation(const DerivPtr& root, const Pretheory& t, std::string* why) {
  std::unordered_map<const Derivation*, bool> seen;
  std::function<bool(const DerivPtr&)> go = [&](const DerivPtr& d) -> bool {
    if (!d) {
      if (why) *why = "null node";
      return false;
    }
    auto it = seen.find(d.get());
    if (it != seen.end()) return it->second;
    bool ok = true;
    int h = 0;
    Js prems;
    for (const auto& c : d->prems) {
      if (!go(c)) {
        ok = false;
        break;
      }
      h = std::max(h, c->height);
      prems.push_back(c->concl);
    }
    if (ok && d->height != h + 1) {
      ok = false;
      if (why) *why = "height mismatch at " + judgment_str(d->concl);
    }
    if (ok && !validate_step(d->rule, prems, d->concl, t)) {
      ok = false;
      if (why) *why = std::string("invalid ") + rule_name(d->rule) + " step concluding " + judgment_str(d->concl);
    }
    seen[d.get()] = ok;
    return ok;
  };
  return go(root);
}

}  // namespace gat
