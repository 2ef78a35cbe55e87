#include "gat/syntax.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace gat {

ParseError::ParseError(const std::string& msg, int line, int col)
    : Error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg), line(line), col(col) {}

namespace {

inline size_t mix(size_t h, size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

struct NameKeyHash {
  size_t operator()(const NameNode* n) const { return n->hash; }
};
struct NameKeyEq {
  bool operator()(const NameNode* a, const NameNode* b) const {
    return a->atom == b->atom && a->left == b->left && a->right == b->right;
  }
};

struct NodeKeyHash {
  size_t operator()(const Node* n) const { return n->hash; }
};
struct NodeKeyEq {
  bool operator()(const Node* a, const Node* b) const {
    return a->head == b->head && a->var == b->var && a->args == b->args;
  }
};

struct CtxKeyHash {
  size_t operator()(const CtxNode* c) const { return c->hash; }
};
struct CtxKeyEq {
  bool operator()(const CtxNode* a, const CtxNode* b) const { return a->entries == b->entries; }
};

template <class T, class H, class E>
struct Interner {
  std::mutex mu;
  std::unordered_set<const T*, H, E> table;
  std::deque<T> storage;

  const T* get(T&& probe) {
    std::lock_guard<std::mutex> lock(mu);
    auto it = table.find(&probe);
    if (it != table.end()) return *it;
    storage.push_back(std::move(probe));
    const T* p = &storage.back();
    table.insert(p);
    return p;
  }
};

Interner<NameNode, NameKeyHash, NameKeyEq>& names() {
  static auto* t = new Interner<NameNode, NameKeyHash, NameKeyEq>();
  return *t;
}
Interner<Node, NodeKeyHash, NodeKeyEq>& nodes() {
  static auto* t = new Interner<Node, NodeKeyHash, NodeKeyEq>();
  return *t;
}
Interner<CtxNode, CtxKeyHash, CtxKeyEq>& ctxs() {
  static auto* t = new Interner<CtxNode, CtxKeyHash, CtxKeyEq>();
  return *t;
}

}  // namespace

Name atom(std::string_view s) {
  NameNode n;
  n.atom = std::string(s);
  n.hash = std::hash<std::string_view>{}(s);
  return names().get(std::move(n));
}

Name pair(Name l, Name r) {
  NameNode n;
  n.left = l;
  n.right = r;
  n.hash = mix(mix(0x51ed27, l->hash), r->hash);
  return names().get(std::move(n));
}

std::string name_str(Name n, Role role) {
  if (!n->is_pair()) return n->atom;
  const char* sep = role == Role::Var ? "." : "*";
  std::string r = name_str(n->right, role);
  if (n->right->is_pair()) r = "(" + r + ")";
  return name_str(n->left, role) + sep + r;
}

Expr mk_var(Name v) {
  Node n{v, true, {}, mix(0x7a11, v->hash), 1};
  return nodes().get(std::move(n));
}

Expr mk_app(Name head, std::vector<Expr> args) {
  size_t h = mix(0xa99, head->hash);
  uint32_t size = 1;
  for (Expr a : args) {
    h = mix(h, a->hash);
    size += a->size;
  }
  Node n{head, false, std::move(args), h, size};
  return nodes().get(std::move(n));
}

Ctx mk_ctx(std::vector<Entry> entries) {
  size_t h = 0xc7;
  for (const auto& e : entries) h = mix(mix(h, e.var->hash), e.sort->hash);
  CtxNode c{std::move(entries), h};
  return ctxs().get(std::move(c));
}

Ctx empty_ctx() {
  static Ctx e = mk_ctx({});
  return e;
}

Ctx truncate(Ctx X, size_t i) {
  if (i > X->size()) throw Error("truncate: index " + std::to_string(i) + " out of range");
  if (i == X->size()) return X;
  return mk_ctx(std::vector<Entry>(X->entries.begin(), X->entries.begin() + i));
}

Ctx extend(Ctx X, Name v, Expr sort) {
  auto es = X->entries;
  es.push_back({v, sort});
  return mk_ctx(std::move(es));
}

Ctx concat(Ctx X, Ctx Y) {
  auto es = X->entries;
  es.insert(es.end(), Y->entries.begin(), Y->entries.end());
  return mk_ctx(std::move(es));
}

int index_of(Ctx X, Name v) {
  for (size_t i = 0; i < X->size(); ++i)
    if (X->entries[i].var == v) return static_cast<int>(i);
  return -1;
}

bool is_precontext(Ctx X) {
  std::unordered_set<Name> seen;
  for (const auto& e : X->entries) {
    std::vector<Name> fv;
    free_vars(e.sort, fv);
    for (Name v : fv)
      if (!seen.count(v)) return false;
    if (!seen.insert(e.var).second) return false;
  }
  return true;
}

Judgment ctx_j(Ctx X) { return {JKind::Ctx, X, nullptr, nullptr, nullptr}; }
Judgment sort_j(Ctx X, Expr U) { return {JKind::Sort, X, U, nullptr, nullptr}; }
Judgment term_j(Ctx X, Expr u, Expr U) { return {JKind::Term, X, u, nullptr, U}; }
Judgment sort_eq_j(Ctx X, Expr U, Expr V) { return {JKind::SortEq, X, U, V, nullptr}; }
Judgment term_eq_j(Ctx X, Expr u, Expr v, Expr U) { return {JKind::TermEq, X, u, v, U}; }

size_t judgment_hash(const Judgment& j) {
  size_t h = mix(static_cast<size_t>(j.kind), j.ctx ? j.ctx->hash : 0);
  h = mix(h, j.lhs ? j.lhs->hash : 1);
  h = mix(h, j.rhs ? j.rhs->hash : 2);
  return mix(h, j.sort ? j.sort->hash : 3);
}

Expr substitute(Expr e, const std::unordered_map<Name, Expr>& m) {
  if (m.empty()) return e;
  if (e->var) {
    auto it = m.find(e->head);
    return it == m.end() ? e : it->second;
  }
  if (e->args.empty()) return e;
  std::vector<Expr> args;
  args.reserve(e->args.size());
  bool changed = false;
  for (Expr a : e->args) {
    Expr b = substitute(a, m);
    changed |= b != a;
    args.push_back(b);
  }
  return changed ? mk_app(e->head, std::move(args)) : e;
}

Expr substitute(Expr e, const Bindings& b) {
  std::unordered_map<Name, Expr> m;
  for (const auto& [u, x] : b) m.emplace(x, u);
  return substitute(e, m);
}

Judgment substitute(const Judgment& j, const std::unordered_map<Name, Expr>& m) {
  Judgment r = j;
  if (j.lhs) r.lhs = substitute(j.lhs, m);
  if (j.rhs) r.rhs = substitute(j.rhs, m);
  if (j.sort) r.sort = substitute(j.sort, m);
  return r;
}

Bindings bind_ctx(Ctx X, const std::vector<Expr>& f, size_t upto) {
  Bindings b;
  for (size_t i = 0; i < upto && i < X->size() && i < f.size(); ++i) b.emplace_back(f[i], X->entries[i].var);
  return b;
}

Expr subterm_at(Expr e, const std::vector<int>& path) {
  for (int i : path) e = e->args.at(i);
  return e;
}

static Expr replace_rec(Expr e, const std::vector<int>& path, size_t k, Expr by) {
  if (k == path.size()) return by;
  std::vector<Expr> args = e->args;
  args.at(path[k]) = replace_rec(args[path[k]], path, k + 1, by);
  return mk_app(e->head, std::move(args));
}

Expr replace_at(Expr e, const std::vector<int>& path, Expr by) { return replace_rec(e, path, 0, by); }

bool occurs(Name v, Expr e) {
  if (e->var) return e->head == v;
  for (Expr a : e->args)
    if (occurs(v, a)) return true;
  return false;
}

void free_vars(Expr e, std::vector<Name>& out) {
  if (e->var) {
    if (std::find(out.begin(), out.end(), e->head) == out.end()) out.push_back(e->head);
    return;
  }
  for (Expr a : e->args) free_vars(a, out);
}

std::shared_ptr<const Alphabet> Alphabet::atomic(std::vector<Name> vars, std::vector<Name> sorts,
                                                 std::vector<Name> terms) {
  auto a = std::make_shared<Alphabet>();
  for (Name v : vars)
    if (a->declared_set_.insert(v).second) a->declared_.push_back(v);
  a->sorts_ = std::move(sorts);
  a->terms_ = std::move(terms);
  a->sort_set_.insert(a->sorts_.begin(), a->sorts_.end());
  a->term_set_.insert(a->terms_.begin(), a->terms_.end());
  for (Name s : a->sorts_)
    if (a->term_set_.count(s) || a->declared_set_.count(s))
      throw Error("alphabet: symbol classes overlap at " + name_str(s, Role::Symbol));
  for (Name t : a->terms_)
    if (a->declared_set_.count(t)) throw Error("alphabet: symbol classes overlap at " + name_str(t, Role::Symbol));
  return a;
}

std::shared_ptr<const Alphabet> Alphabet::tensor(std::shared_ptr<const Alphabet> l,
                                                 std::shared_ptr<const Alphabet> r) {
  auto a = std::make_shared<Alphabet>();
  for (Name s : l->sorts_)
    for (Name t : r->sorts_) a->sorts_.push_back(pair(s, t));
  for (Name s : l->sorts_)
    for (Name t : r->terms_) a->terms_.push_back(pair(s, t));
  for (Name s : l->terms_)
    for (Name t : r->sorts_) a->terms_.push_back(pair(s, t));
  a->sort_set_.insert(a->sorts_.begin(), a->sorts_.end());
  a->term_set_.insert(a->terms_.begin(), a->terms_.end());
  a->left_ = std::move(l);
  a->right_ = std::move(r);
  return a;
}

Name Alphabet::var_at(size_t i) const {
  if (left_) {
    // Cantor enumeration of pairs
    size_t w = 0;
    while ((w + 1) * (w + 2) / 2 <= i) ++w;
    size_t b = i - w * (w + 1) / 2;
    size_t a = w - b;
    return pair(left_->var_at(a), right_->var_at(b));
  }
  if (i < declared_.size()) return declared_[i];
  std::lock_guard<std::mutex> lock(mu_);
  size_t k = i - declared_.size();
  size_t next = 0;
  if (!generated_.empty()) {
    const std::string& last = generated_.back()->atom;
    next = std::stoul(last.substr(1)) + 1;
  }
  while (generated_.size() <= k) {
    Name v = atom("v" + std::to_string(next++));
    if (!declared_set_.count(v) && !sort_set_.count(v) && !term_set_.count(v)) generated_.push_back(v);
  }
  return generated_[k];
}

Name Alphabet::fresh(Ctx X) const {
  std::unordered_set<Name> used;
  for (const auto& e : X->entries) used.insert(e.var);
  for (size_t i = 0;; ++i) {
    Name v = var_at(i);
    if (!used.count(v)) return v;
  }
}

Classification classify(Expr e, const Alphabet& sigma) {
  std::function<bool(Expr)> is_term = [&](Expr x) {
    if (x->var) return true;
    if (sigma.is_sort(x->head)) return false;
    for (Expr a : x->args)
      if (!is_term(a)) return false;
    return true;
  };
  if (is_term(e)) return Classification::Term;
  if (!e->var && sigma.is_sort(e->head)) {
    for (Expr a : e->args)
      if (!is_term(a)) return Classification::IllFormed;
    return Classification::Sort;
  }
  return Classification::IllFormed;
}

const Judgment* Pretheory::intro(Name symbol) const {
  auto it = intro_index.find(symbol);
  return it == intro_index.end() ? nullptr : &axioms[it->second];
}

size_t Pretheory::arity(Name symbol) const {
  const Judgment* j = intro(symbol);
  if (!j) throw Error("unknown symbol " + name_str(symbol, Role::Symbol));
  return j->ctx->size();
}

static bool is_intro_shape(Ctx X, Expr head) {
  if (head->var || head->args.size() != X->size()) return false;
  for (size_t i = 0; i < X->size(); ++i)
    if (head->args[i] != mk_var(X->entries[i].var)) return false;
  return true;
}

static void check_expr_symbols(const Pretheory& t, Expr e, const std::string& where) {
  if (e->var) return;
  const Judgment* j = t.intro(e->head);
  if (!j) throw Error(where + ": symbol " + name_str(e->head, Role::Symbol) + " has no introduction axiom");
  if (j->ctx->size() != e->args.size())
    throw Error(where + ": arity mismatch for " + name_str(e->head, Role::Symbol) + " (expected " +
                std::to_string(j->ctx->size()) + ", got " + std::to_string(e->args.size()) + ")");
  for (Expr a : e->args) check_expr_symbols(t, a, where);
}

static void check_scope(Ctx X, Expr e, const std::string& where) {
  std::vector<Name> fv;
  free_vars(e, fv);
  for (Name v : fv)
    if (index_of(X, v) < 0) throw Error(where + ": variable " + name_str(v, Role::Var) + " not in context");
}

Pretheory make_pretheory(std::string name, std::shared_ptr<const Alphabet> sigma, std::vector<Judgment> axioms) {
  Pretheory t;
  t.name = std::move(name);
  t.alphabet = std::move(sigma);
  t.axioms = std::move(axioms);
  for (size_t i = 0; i < t.axioms.size(); ++i) {
    const Judgment& j = t.axioms[i];
    std::string where = "axiom " + std::to_string(i + 1);
    if (j.kind == JKind::Ctx) throw Error(where + ": context judgments cannot be axioms");
    if (j.kind == JKind::Sort || j.kind == JKind::Term) {
      if (!is_intro_shape(j.ctx, j.lhs))
        throw Error(where + ": not of introduction shape " + judgment_str(j));
      Name s = j.lhs->head;
      bool want_sort = j.kind == JKind::Sort;
      if (want_sort ? !t.alphabet->is_sort(s) : !t.alphabet->is_term(s))
        throw Error(where + ": symbol " + name_str(s, Role::Symbol) + " has the wrong kind");
      if (!t.intro_index.emplace(s, i).second)
        throw Error(where + ": duplicate introduction axiom for " + name_str(s, Role::Symbol));
    }
    if (j.kind == JKind::SortEq) ++t.n_seq;
    if (!t.axiom_set.insert(j).second) throw Error(where + ": duplicate axiom");
  }
  for (Name s : t.alphabet->sorts())
    if (!t.intro_index.count(s)) throw Error("sort symbol " + name_str(s, Role::Symbol) + " has no introduction axiom");
  for (Name s : t.alphabet->terms())
    if (!t.intro_index.count(s)) throw Error("term symbol " + name_str(s, Role::Symbol) + " has no introduction axiom");
  for (size_t i = 0; i < t.axioms.size(); ++i) {
    const Judgment& j = t.axioms[i];
    std::string where = "axiom " + std::to_string(i + 1);
    if (!is_precontext(j.ctx)) throw Error(where + ": context is not a precontext");
    for (const auto& e : j.ctx->entries) {
      check_expr_symbols(t, e.sort, where);
      if (classify(e.sort, *t.alphabet) != Classification::Sort) throw Error(where + ": context entry is not a sort");
    }
    auto need = [&](Expr e, Classification c) {
      if (!e) return;
      check_expr_symbols(t, e, where);
      check_scope(j.ctx, e, where);
      if (classify(e, *t.alphabet) != c)
        throw Error(where + ": expected a " + (c == Classification::Sort ? "sort" : "term") + " expression");
    };
    bool sorty = j.kind == JKind::Sort || j.kind == JKind::SortEq;
    need(j.lhs, sorty ? Classification::Sort : Classification::Term);
    need(j.rhs, sorty ? Classification::Sort : Classification::Term);
    need(j.sort, Classification::Sort);
  }
  return t;
}

Pretheory make_pretheory(std::string name, std::vector<Judgment> axioms) {
  std::vector<Name> vars, sorts, terms;
  std::unordered_set<Name> seen;
  std::function<void(Expr)> walk = [&](Expr e) {
    if (e->var) {
      if (seen.insert(e->head).second) vars.push_back(e->head);
      return;
    }
    for (Expr a : e->args) walk(a);
  };
  for (const auto& j : axioms) {
    for (const auto& e : j.ctx->entries) {
      if (seen.insert(e.var).second) vars.push_back(e.var);
      walk(e.sort);
    }
    for (Expr e : {j.lhs, j.rhs, j.sort})
      if (e) walk(e);
    if (j.kind == JKind::Sort && !j.lhs->var) sorts.push_back(j.lhs->head);
    if (j.kind == JKind::Term && !j.lhs->var) terms.push_back(j.lhs->head);
  }
  return make_pretheory(std::move(name), Alphabet::atomic(vars, sorts, terms), std::move(axioms));
}

namespace {

struct AlphaMatcher {
  std::unordered_map<Name, Name> fwd, bwd;

  bool bind(Name a, Name b) {
    auto f = fwd.find(a);
    auto g = bwd.find(b);
    if (f != fwd.end() || g != bwd.end()) return f != fwd.end() && g != bwd.end() && f->second == b && g->second == a;
    fwd.emplace(a, b);
    bwd.emplace(b, a);
    return true;
  }

  bool expr(Expr a, Expr b) {
    if (!a || !b) return a == b;
    if (a->var != b->var) return false;
    if (a->var) {
      auto f = fwd.find(a->head);
      if (f != fwd.end()) return f->second == b->head;
      return a->head == b->head && !bwd.count(b->head);
    }
    if (a->head != b->head || a->args.size() != b->args.size()) return false;
    for (size_t i = 0; i < a->args.size(); ++i)
      if (!expr(a->args[i], b->args[i])) return false;
    return true;
  }
};

}  // namespace

bool alpha_equal(const Judgment& a, const Judgment& b) {
  if (a.kind != b.kind || a.ctx->size() != b.ctx->size()) return false;
  AlphaMatcher m;
  for (size_t i = 0; i < a.ctx->size(); ++i) {
    if (!m.expr(a.ctx->entries[i].sort, b.ctx->entries[i].sort)) return false;
    if (!m.bind(a.ctx->entries[i].var, b.ctx->entries[i].var)) return false;
  }
  return m.expr(a.lhs, b.lhs) && m.expr(a.rhs, b.rhs) && m.expr(a.sort, b.sort);
}

Expr rename_symbols(Expr e, const std::unordered_map<Name, Name>& m) {
  if (e->var) return e;
  std::vector<Expr> args;
  for (Expr a : e->args) args.push_back(rename_symbols(a, m));
  auto it = m.find(e->head);
  return mk_app(it == m.end() ? e->head : it->second, std::move(args));
}

Judgment rename_symbols(const Judgment& j, const std::unordered_map<Name, Name>& m) {
  std::vector<Entry> es;
  for (const auto& e : j.ctx->entries) es.push_back({e.var, rename_symbols(e.sort, m)});
  Judgment r = j;
  r.ctx = mk_ctx(std::move(es));
  if (j.lhs) r.lhs = rename_symbols(j.lhs, m);
  if (j.rhs) r.rhs = rename_symbols(j.rhs, m);
  if (j.sort) r.sort = rename_symbols(j.sort, m);
  return r;
}

std::string expr_str(Expr e) {
  if (e->var) return name_str(e->head, Role::Var);
  std::string s = name_str(e->head, Role::Symbol);
  if (e->args.empty()) return s;
  s += '(';
  for (size_t i = 0; i < e->args.size(); ++i) {
    if (i) s += ',';
    s += expr_str(e->args[i]);
  }
  return s + ')';
}

std::string ctx_str(Ctx X) {
  std::string s;
  for (size_t i = 0; i < X->size(); ++i) {
    if (i) s += ", ";
    s += name_str(X->entries[i].var, Role::Var) + ":" + expr_str(X->entries[i].sort);
  }
  return s;
}

std::string judgment_str(const Judgment& j) {
  std::string s = ctx_str(j.ctx);
  s += s.empty() ? "|- " : " |- ";
  switch (j.kind) {
    case JKind::Ctx: return s + "ctx-ok";
    case JKind::Sort: return s + expr_str(j.lhs) + " sort";
    case JKind::Term: return s + expr_str(j.lhs) + " : " + expr_str(j.sort);
    case JKind::SortEq: return s + expr_str(j.lhs) + " == " + expr_str(j.rhs) + " sort";
    case JKind::TermEq: return s + expr_str(j.lhs) + " == " + expr_str(j.rhs) + " : " + expr_str(j.sort);
  }
  return s;
}

std::string print_theory(const Pretheory& t) {
  std::ostringstream os;
  os << "theory " << t.name << "\n";
  for (const auto& j : t.axioms) {
    std::string c = "(" + ctx_str(j.ctx) + ")";
    switch (j.kind) {
      case JKind::Sort: os << "sort " << name_str(j.lhs->head, Role::Symbol) << " " << c << "\n"; break;
      case JKind::Term:
        os << "term " << name_str(j.lhs->head, Role::Symbol) << " " << c << " : " << expr_str(j.sort) << "\n";
        break;
      case JKind::SortEq: os << "eqsort " << c << " : " << expr_str(j.lhs) << " == " << expr_str(j.rhs) << "\n"; break;
      case JKind::TermEq:
        os << "eqterm " << c << " : " << expr_str(j.lhs) << " == " << expr_str(j.rhs) << " : " << expr_str(j.sort)
           << "\n";
        break;
      case JKind::Ctx: break;
    }
  }
  return os.str();
}

}  // namespace gat
