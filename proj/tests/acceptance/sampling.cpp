#include "sampling.hpp"

#include <functional>

namespace sampling {

using namespace gat;

size_t pick(Rng& rng, size_t n) { return std::uniform_int_distribution<size_t>(0, n - 1)(rng); }

namespace {

// Argument tuples for the introduction context A drawn from the candidate terms.
std::vector<std::vector<Expr>> instances(Ctx A, const std::vector<std::pair<Expr, Expr>>& cands) {
  std::vector<std::vector<Expr>> out;
  std::vector<Expr> f;
  std::function<void()> go = [&] {
    size_t i = f.size();
    if (i == A->size()) {
      out.push_back(f);
      return;
    }
    Expr need = substitute(A->entries[i].sort, bind_ctx(A, f, i));
    for (const auto& [u, U] : cands)
      if (U == need) {
        f.push_back(u);
        go();
        f.pop_back();
      }
  };
  go();
  return out;
}

std::vector<std::pair<Expr, Expr>> variables(Ctx X) {
  std::vector<std::pair<Expr, Expr>> out;
  for (const auto& e : X->entries) out.emplace_back(mk_var(e.var), e.sort);
  return out;
}

}  // namespace

std::vector<std::pair<Expr, Expr>> terms_over(const Pretheory& t, Ctx X) {
  auto vars = variables(X);
  auto out = vars;
  for (Name s : t.alphabet->terms()) {
    const Judgment* intro = t.intro(s);
    for (const auto& args : instances(intro->ctx, vars))
      out.emplace_back(mk_app(s, args), substitute(intro->sort, bind_ctx(intro->ctx, args, args.size())));
  }
  return out;
}

std::vector<Expr> sorts_over(const Pretheory& t, Ctx X) {
  auto cands = terms_over(t, X);
  std::vector<Expr> out;
  for (Name s : t.alphabet->sorts())
    for (const auto& args : instances(t.intro(s)->ctx, cands)) out.push_back(mk_app(s, args));
  return out;
}

std::optional<Ctx> random_ctx(const Pretheory& t, size_t len, const std::string& prefix, Rng& rng) {
  Ctx X = empty_ctx();
  for (size_t i = 0; i < len; ++i) {
    auto sorts = sorts_over(t, X);
    if (sorts.empty()) return std::nullopt;
    X = extend(X, atom(prefix + std::to_string(i)), sorts[pick(rng, sorts.size())]);
  }
  return X;
}

std::optional<Premorphism> random_morphism(const Pretheory& t, Ctx src, Ctx tgt, Rng& rng) {
  auto cands = terms_over(t, src);
  Premorphism f{src, tgt, {}};
  for (size_t i = 0; i < tgt->size(); ++i) {
    Expr need = substitute(tgt->entries[i].sort, bind_ctx(tgt, f.comps, i));
    std::vector<Expr> fit;
    for (const auto& [u, U] : cands)
      if (U == need) fit.push_back(u);
    if (fit.empty()) return std::nullopt;
    f.comps.push_back(fit[pick(rng, fit.size())]);
  }
  return f;
}

}  // namespace sampling
