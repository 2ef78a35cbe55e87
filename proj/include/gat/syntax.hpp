#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace gat {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error {
  int line, col;
  ParseError(const std::string& msg, int line, int col);
};

// Names are interned: either an atom or an ordered pair of names.
struct NameNode {
  std::string atom;
  const NameNode* left = nullptr;
  const NameNode* right = nullptr;
  size_t hash = 0;
  bool is_pair() const { return left != nullptr; }
};
using Name = const NameNode*;

Name atom(std::string_view s);
Name pair(Name l, Name r);

enum class Role { Var, Symbol };
std::string name_str(Name n, Role role);

struct Node;
using Expr = const Node*;

struct Node {
  Name head;
  bool var;
  std::vector<Expr> args;
  size_t hash;
  uint32_t size;
};

Expr mk_var(Name v);
Expr mk_app(Name head, std::vector<Expr> args);

struct Entry {
  Name var;
  Expr sort;
  bool operator==(const Entry&) const = default;
};

struct CtxNode {
  std::vector<Entry> entries;
  size_t hash;
  size_t size() const { return entries.size(); }
  const Entry& operator[](size_t i) const { return entries[i]; }
};
using Ctx = const CtxNode*;

Ctx mk_ctx(std::vector<Entry> entries);
Ctx empty_ctx();
Ctx truncate(Ctx X, size_t i);
Ctx extend(Ctx X, Name v, Expr sort);
Ctx concat(Ctx X, Ctx Y);
int index_of(Ctx X, Name v);
bool is_precontext(Ctx X);

enum class JKind { Ctx, Sort, Term, SortEq, TermEq };

// Ctx: ctx only. Sort: lhs. Term: lhs : sort. SortEq: lhs == rhs. TermEq: lhs == rhs : sort.
struct Judgment {
  JKind kind = JKind::Ctx;
  Ctx ctx = nullptr;
  Expr lhs = nullptr;
  Expr rhs = nullptr;
  Expr sort = nullptr;
  bool operator==(const Judgment&) const = default;
};

Judgment ctx_j(Ctx X);
Judgment sort_j(Ctx X, Expr U);
Judgment term_j(Ctx X, Expr u, Expr U);
Judgment sort_eq_j(Ctx X, Expr U, Expr V);
Judgment term_eq_j(Ctx X, Expr u, Expr v, Expr U);
size_t judgment_hash(const Judgment& j);

struct JudgmentHash {
  size_t operator()(const Judgment& j) const { return judgment_hash(j); }
};

struct PartialTerm {
  Ctx ctx;
  Expr term;
};
struct PartialTermEq {
  Ctx ctx;
  Expr lhs, rhs;
};
struct CtxEq {
  Ctx lhs, rhs;
};
struct Premorphism {
  Ctx src, tgt;
  std::vector<Expr> comps;
};
struct MorEq {
  Ctx src, tgt;
  std::vector<Expr> lhs, rhs;
};

// Binding (replacement, variable) as in e[u1|x1, ..., un|xn].
using Bindings = std::vector<std::pair<Expr, Name>>;

Expr substitute(Expr e, const Bindings& b);
Expr substitute(Expr e, const std::unordered_map<Name, Expr>& m);
Judgment substitute(const Judgment& j, const std::unordered_map<Name, Expr>& m);
Bindings bind_ctx(Ctx X, const std::vector<Expr>& f, size_t upto);
Expr replace_at(Expr e, const std::vector<int>& path, Expr by);
Expr subterm_at(Expr e, const std::vector<int>& path);
bool occurs(Name v, Expr e);
void free_vars(Expr e, std::vector<Name>& out);

class Alphabet {
public:
  static std::shared_ptr<const Alphabet> atomic(std::vector<Name> vars, std::vector<Name> sorts,
                                                std::vector<Name> terms);
  static std::shared_ptr<const Alphabet> tensor(std::shared_ptr<const Alphabet> a,
                                                std::shared_ptr<const Alphabet> b);

  Name var_at(size_t i) const;
  Name fresh(Ctx X) const;
  bool is_sort(Name n) const { return sort_set_.count(n) != 0; }
  bool is_term(Name n) const { return term_set_.count(n) != 0; }
  const std::vector<Name>& sorts() const { return sorts_; }
  const std::vector<Name>& terms() const { return terms_; }
  const std::shared_ptr<const Alphabet>& left() const { return left_; }
  const std::shared_ptr<const Alphabet>& right() const { return right_; }

private:
  std::vector<Name> declared_;
  std::unordered_set<Name> declared_set_;
  std::vector<Name> sorts_, terms_;
  std::unordered_set<Name> sort_set_, term_set_;
  std::shared_ptr<const Alphabet> left_, right_;
  mutable std::vector<Name> generated_;
  mutable std::mutex mu_;
};

enum class Classification { Term, Sort, IllFormed };
Classification classify(Expr e, const Alphabet& sigma);

struct Pretheory {
  std::string name;
  std::shared_ptr<const Alphabet> alphabet;
  std::vector<Judgment> axioms;

  const Judgment* intro(Name symbol) const;
  size_t arity(Name symbol) const;
  bool is_axiom(const Judgment& j) const { return axiom_set.count(j) != 0; }
  bool has_sort_eq_axioms() const { return n_seq > 0; }
  Name fresh(Ctx X) const { return alphabet->fresh(X); }

  std::unordered_map<Name, size_t> intro_index;
  std::unordered_set<Judgment, JudgmentHash> axiom_set;
  size_t n_seq = 0;
};

// Builds the pretheory, enforcing the one-introduction-axiom discipline.
Pretheory make_pretheory(std::string name, std::shared_ptr<const Alphabet> sigma,
                         std::vector<Judgment> axioms);
// Collects the alphabet from the axioms (declared variables in order of appearance).
Pretheory make_pretheory(std::string name, std::vector<Judgment> axioms);

bool alpha_equal(const Judgment& a, const Judgment& b);
Judgment rename_symbols(const Judgment& j, const std::unordered_map<Name, Name>& m);
Expr rename_symbols(Expr e, const std::unordered_map<Name, Name>& m);

std::string expr_str(Expr e);
std::string ctx_str(Ctx X);
std::string judgment_str(const Judgment& j);
std::string print_theory(const Pretheory& t);

Pretheory parse_theory(std::string_view text);
Judgment parse_judgment(std::string_view text, const Pretheory& t);
std::vector<Judgment> parse_judgments(std::string_view text, const Pretheory& t);
Name parse_name(std::string_view text);
Expr parse_expr(std::string_view text, const Pretheory& t, Ctx X);
Ctx parse_ctx(std::string_view text, const Pretheory& t);

}  // namespace gat

template <>
struct std::hash<gat::Judgment> {
  size_t operator()(const gat::Judgment& j) const { return gat::judgment_hash(j); }
};
