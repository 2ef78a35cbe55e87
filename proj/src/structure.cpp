#include "gat/structure.hpp"

#include <algorithm>
#include <sstream>

namespace gat {

Name reassociate(Name n) {
  if (!n->is_pair() || !n->left->is_pair())
    throw Error("reassociate: " + name_str(n, Role::Symbol) + " is not in the triple alphabet");
  return pair(n->left->left, pair(n->left->right, n->right));
}

Name unreassociate(Name n) {
  if (!n->is_pair() || !n->right->is_pair())
    throw Error("unreassociate: " + name_str(n, Role::Symbol) + " is not in the triple alphabet");
  return pair(pair(n->left, n->right->left), n->right->right);
}

namespace {

Expr map_names(Expr e, Name (*f)(Name)) {
  if (e->var) return mk_var(f(e->head));
  std::vector<Expr> args;
  for (Expr a : e->args) args.push_back(map_names(a, f));
  return mk_app(f(e->head), std::move(args));
}

Ctx map_names(Ctx X, Name (*f)(Name)) {
  std::vector<Entry> es;
  for (const auto& e : X->entries) es.push_back({f(e.var), map_names(e.sort, f)});
  return mk_ctx(std::move(es));
}

Judgment map_names(const Judgment& j, Name (*f)(Name)) {
  Judgment r = j;
  r.ctx = map_names(j.ctx, f);
  if (j.lhs) r.lhs = map_names(j.lhs, f);
  if (j.rhs) r.rhs = map_names(j.rhs, f);
  if (j.sort) r.sort = map_names(j.sort, f);
  return r;
}

}  // namespace

Expr reassociate(Expr e) { return map_names(e, static_cast<Name (*)(Name)>(reassociate)); }
Expr unreassociate(Expr e) { return map_names(e, static_cast<Name (*)(Name)>(unreassociate)); }
Ctx reassociate(Ctx X) { return map_names(X, static_cast<Name (*)(Name)>(reassociate)); }
Ctx unreassociate(Ctx X) { return map_names(X, static_cast<Name (*)(Name)>(unreassociate)); }
Judgment reassociate(const Judgment& j) { return map_names(j, static_cast<Name (*)(Name)>(reassociate)); }
Judgment unreassociate(const Judgment& j) { return map_names(j, static_cast<Name (*)(Name)>(unreassociate)); }

Expr apply_interpretation(const Interpretation& I, Expr e) {
  if (e->var) return mk_var(I.var(e->head));
  auto it = I.symbols.find(e->head);
  if (it == I.symbols.end())
    throw Error("interpretation: no image for symbol " + name_str(e->head, Role::Symbol));
  const auto& t = it->second;
  if (t.params.size() != e->args.size())
    throw Error("interpretation: arity mismatch at " + name_str(e->head, Role::Symbol));
  Bindings b;
  for (size_t k = 0; k < e->args.size(); ++k) b.emplace_back(apply_interpretation(I, e->args[k]), t.params[k]);
  return substitute(t.body, b);
}

Judgment apply_interpretation(const Interpretation& I, const Judgment& j) {
  std::vector<Entry> es;
  for (const auto& e : j.ctx->entries) es.push_back({I.var(e.var), apply_interpretation(I, e.sort)});
  Judgment r = j;
  r.ctx = mk_ctx(std::move(es));
  if (j.lhs) r.lhs = apply_interpretation(I, j.lhs);
  if (j.rhs) r.rhs = apply_interpretation(I, j.rhs);
  if (j.sort) r.sort = apply_interpretation(I, j.sort);
  return r;
}

Name swap_name(Name n) {
  if (!n->is_pair()) throw Error("swap: " + name_str(n, Role::Symbol) + " is not a pair");
  return pair(n->right, n->left);
}

Interpretation swap_interpretation(const Pretheory& ab, const Pretheory& ba) {
  Interpretation I;
  I.var = swap_name;
  auto add = [&](Name s) {
    const Judgment* src = ab.intro(s);
    const Judgment* tgt = ba.intro(swap_name(s));
    if (!src || !tgt) throw Error("swap: missing introduction axiom for " + name_str(s, Role::Symbol));
    Interpretation::Template t;
    for (const auto& e : src->ctx->entries) t.params.push_back(e.var);
    std::vector<Expr> args;
    for (const auto& e : tgt->ctx->entries) {
      Name v = swap_name(e.var);
      if (index_of(src->ctx, v) < 0) throw Error("swap: introduction contexts do not correspond at " + name_str(s, Role::Symbol));
      args.push_back(mk_var(v));
    }
    t.body = mk_app(swap_name(s), std::move(args));
    I.symbols.emplace(s, std::move(t));
  };
  for (Name s : ab.alphabet->sorts()) add(s);
  for (Name s : ab.alphabet->terms()) add(s);
  return I;
}

Ctx transpose_ctx(Ctx X) {
  std::unordered_map<Name, size_t> first, second;
  for (const auto& e : X->entries) {
    if (!e.var->is_pair()) return X;
    first.emplace(e.var->left, first.size());
    second.emplace(e.var->right, second.size());
  }
  std::vector<Entry> es = X->entries;
  std::stable_sort(es.begin(), es.end(), [&](const Entry& p, const Entry& q) {
    return std::pair(first[p.var->left], second[p.var->right]) < std::pair(first[q.var->left], second[q.var->right]);
  });
  std::unordered_set<Name> seen;
  for (const auto& e : es) {
    std::vector<Name> fv;
    free_vars(e.sort, fv);
    for (Name v : fv)
      if (!seen.count(v)) return X;
    seen.insert(e.var);
  }
  return mk_ctx(std::move(es));
}

Judgment swap_judgment(const Interpretation& I, const Judgment& j) {
  Judgment r = apply_interpretation(I, j);
  r.ctx = transpose_ctx(r.ctx);
  return r;
}

namespace {

std::vector<Operand> box_side(const Pretheory& t, const BoxOperand& o) {
  std::vector<Operand> out;
  Expr src = o.full ? o.op.sort : o.op.e;
  if (src->var) throw Error("box product: bare operand must be compound");
  for (Expr s : src->args) out.push_back(Operand{o.op.ctx, s, canonical_sort(o.op.ctx, s, t)});
  if (o.full) out.push_back(o.op);
  return out;
}

}  // namespace

Expr box_product(TensorBuilder& tb, const BoxOperand& a, const BoxOperand& b, BoxVariant variant) {
  if (variant == BoxVariant::Half && !(a.full && b.full)) throw Error("box product: half variant needs two full operands");
  auto rows = box_side(tb.left(), a);
  auto cols = box_side(tb.right(), b);
  Name ha = (a.full ? a.op.sort : a.op.e)->head;
  Name hb = (b.full ? b.op.sort : b.op.e)->head;
  std::vector<Expr> args;
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j) {
      bool last_col = j + 1 == cols.size();
      bool corner = last_col && i + 1 == rows.size();
      bool black = variant != BoxVariant::Box && last_col && !(variant == BoxVariant::Half && corner);
      args.push_back(black ? tb.dot(rows[i], cols[j]) : tb.tensor(rows[i], cols[j]));
    }
  return mk_app(pair(ha, hb), std::move(args));
}

Expr boundary(Expr e) {
  if (e->var || e->args.empty()) throw Error("boundary: expression has no final argument");
  return mk_app(e->head, std::vector<Expr>(e->args.begin(), e->args.end() - 1));
}

size_t StructureReport::unknown() const {
  return std::count_if(lines.begin(), lines.end(), [](const StructureLine& l) { return !l.result.derivable(); });
}

std::string StructureReport::tsv() const {
  std::ostringstream out;
  for (const auto& l : lines) {
    auto h = l.result.height_ub();
    out << l.id << '\t' << l.direction << '\t' << (l.result.derivable() ? "Derivable" : "Unknown") << '\t'
        << (h ? std::to_string(*h) : "-") << '\n';
  }
  return out.str();
}

namespace {

void run_direction(StructureReport& rep, const Pretheory& from, const Pretheory& to,
                   const std::function<Judgment(const Judgment&)>& map, Budget budget, int jobs, Ruleset rs) {
  std::vector<Judgment> goals;
  for (const auto& ax : from.axioms) goals.push_back(map(ax));
  auto results = derive_all(to, goals, budget, jobs, rs);
  std::string dir = from.name + "->" + to.name;
  for (size_t i = 0; i < goals.size(); ++i)
    rep.lines.push_back({std::to_string(i + 1), dir, goals[i], std::move(results[i])});
}

}  // namespace

StructureReport check_symmetry(const Pretheory& a, const Pretheory& b, Budget budget, int jobs, Ruleset rs) {
  Pretheory ab = tensor_theory(a, b), ba = tensor_theory(b, a);
  Interpretation fwd = swap_interpretation(ab, ba), bwd = swap_interpretation(ba, ab);
  StructureReport rep;
  run_direction(rep, ab, ba, [&](const Judgment& j) { return swap_judgment(fwd, j); }, budget, jobs, rs);
  run_direction(rep, ba, ab, [&](const Judgment& j) { return swap_judgment(bwd, j); }, budget, jobs, rs);
  return rep;
}

TripleTheories::TripleTheories(const Pretheory& a_, const Pretheory& b_, const Pretheory& c_)
    : a(a_), b(b_), c(c_), ab(tensor_theory(a, b)), bc(tensor_theory(b, c)), left(tensor_theory(ab, c)),
      right(tensor_theory(a, bc)) {}

StructureReport check_associativity(const Pretheory& a, const Pretheory& b, const Pretheory& c, Budget budget,
                                    int jobs, Ruleset rs) {
  TripleTheories t(a, b, c);
  StructureReport rep;
  run_direction(rep, t.left, t.right, [](const Judgment& j) { return reassociate(j); }, budget, jobs, rs);
  run_direction(rep, t.right, t.left, [](const Judgment& j) { return unreassociate(j); }, budget, jobs, rs);
  return rep;
}

CtxEq assoc_ctx_eq(const TripleTheories& t, Ctx X, Ctx Y, Ctx Z) {
  TensorBuilder tab(t.a, t.b), tbc(t.b, t.c), tl(t.ab, t.c), tr(t.a, t.bc);
  return CtxEq{reassociate(tl.ctx(tab.ctx(X, Y), Z)), tr.ctx(X, tbc.ctx(Y, Z))};
}

std::vector<Judgment> assoc_term_equalities(const TripleTheories& t, const Operand& u, const Operand& v,
                                            const Operand& w) {
  TensorBuilder tab(t.a, t.b), tbc(t.b, t.c), tl(t.ab, t.c), tr(t.a, t.bc);
  Ctx XY = tab.ctx(u.ctx, v.ctx), YZ = tbc.ctx(v.ctx, w.ctx);
  std::vector<Expr> es;
  for (bool inner_dot : {false, true}) {
    Expr uv = inner_dot ? tab.dot(u, v) : tab.tensor(u, v);
    Operand o{XY, uv, canonical_sort(XY, uv, t.ab)};
    es.push_back(reassociate(tl.tensor(o, w)));
    es.push_back(reassociate(tl.dot(o, w)));
  }
  for (bool inner_dot : {false, true}) {
    Expr vw = inner_dot ? tbc.dot(v, w) : tbc.tensor(v, w);
    Operand o{YZ, vw, canonical_sort(YZ, vw, t.bc)};
    es.push_back(tr.tensor(u, o));
    es.push_back(tr.dot(u, o));
  }
  Ctx K = tr.ctx(u.ctx, YZ);
  Expr S = canonical_sort(K, es[0], t.right);
  std::vector<Judgment> out{term_j(K, es[0], S)};
  for (size_t i = 1; i < es.size(); ++i) out.push_back(term_eq_j(K, es[0], es[i], S));
  return out;
}

Judgment star_equality(const Pretheory& a, const Pretheory& b, const Pretheory& ab, const Operand& u,
                       const Operand& v) {
  TensorBuilder std_tb(a, b), star(a, b, TensorMode::Star);
  Ctx K = std_tb.ctx(u.ctx, v.ctx);
  Expr plain = std_tb.tensor(u, v);
  return term_eq_j(K, star.tensor(u, v), plain, canonical_sort(K, plain, ab));
}

}  // namespace gat
