#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gat/syntax.hpp"

namespace gat {

enum class Rule {
  Ctx,
  S1,
  S2,
  S3,
  T1,
  T2,
  T3,
  SeqT,
  SeqTeq,
  Var,
  SA,
  TA,
  SeqA,
  TeqA,
  SSub,
  TSub,
  SeqSub1,
  SeqSub2,
  TeqSub1,
  TeqSub2,
  CSeqTeq,
  CVar,
  CTSub,
  CSeqSub,
  CTeqSub,
};

constexpr int kRuleCount = 25;

enum class Ruleset { Modified, Cartmell };

const char* rule_name(Rule r);
std::optional<Rule> rule_from_name(std::string_view name);
bool in_ruleset(Rule r, Ruleset rs);
std::optional<Ruleset> ruleset_from_name(std::string_view name);

struct Derivation;
using DerivPtr = std::shared_ptr<const Derivation>;

struct Derivation {
  Judgment concl;
  Rule rule;
  std::vector<DerivPtr> prems;
  int height;
};

DerivPtr make_derivation(Rule rule, const Judgment& concl, std::vector<DerivPtr> prems);

struct Budget {
  int max_height = 64;
  int universe = 200;
};

Budget default_budget();

struct DerivResult {
  DerivPtr tree;
  double millis = 0;
  bool derivable() const { return tree != nullptr; }
  std::optional<int> height_ub() const {
    if (!tree) return std::nullopt;
    return tree->height;
  }
};

bool validate_step(Rule rule, const std::vector<Judgment>& premises, const Judgment& conclusion,
                   const Pretheory& theory);
bool check_derivation(const DerivPtr& d, const Pretheory& theory, std::string* why = nullptr);

// Throws Error when u mentions a variable outside X or an unknown term symbol.
Expr canonical_sort(Ctx X, Expr u, const Pretheory& theory);
Expr try_canonical_sort(Ctx X, Expr u, const Pretheory& theory);
Expr prefix_sort(Ctx A, const std::vector<Expr>& f, size_t i);

// Goal-directed search; one instance memoizes across goals for a fixed theory and budget.
class Prover {
public:
  Prover(const Pretheory& theory, Budget budget, Ruleset rs = Ruleset::Modified);
  ~Prover();
  Prover(const Prover&) = delete;
  Prover& operator=(const Prover&) = delete;

  DerivResult derive(const Judgment& goal);
  const Pretheory& theory() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

DerivResult derive(const Judgment& goal, const Pretheory& theory, Budget budget = default_budget(),
                   Ruleset rs = Ruleset::Modified);

std::optional<int> height_ub(const Judgment& goal, const Pretheory& theory, Budget budget = default_budget());
std::optional<int> ctx_height_ub(Ctx X, const Pretheory& theory, Budget budget = default_budget());

struct ComponentReport {
  std::vector<DerivResult> components;
  DerivResult src_ctx, tgt_ctx;
  bool derivable = false;
  std::optional<int> height_ub;
};

ComponentReport check_morphism(const Premorphism& f, const Pretheory& theory, Budget budget = default_budget());
ComponentReport check_morphism(Prover& p, const Premorphism& f);
ComponentReport check_ctx_eq(const CtxEq& e, const Pretheory& theory, Budget budget = default_budget());
ComponentReport check_mor_eq(const MorEq& e, const Pretheory& theory, Budget budget = default_budget());
ComponentReport check_mor_eq(Prover& p, const MorEq& e);
std::optional<int> partial_term_height_ub(const PartialTerm& j, const Pretheory& theory,
                                          Budget budget = default_budget());
std::optional<int> partial_term_eq_height_ub(const PartialTermEq& j, const Pretheory& theory,
                                             Budget budget = default_budget());

// (g o f)_i = g_i[f]; requires f.tgt == g.src.
Premorphism compose(const Premorphism& g, const Premorphism& f);
Premorphism identity_morphism(Ctx X);
Judgment substitute_along(const Judgment& j, const Premorphism& f);

struct TheoryReport {
  std::vector<DerivResult> axioms;
  bool is_theory = false;
  size_t unknown() const;
};

// Derives each goal with one prover per worker thread; results follow input order.
std::vector<DerivResult> derive_all(const Pretheory& theory, const std::vector<Judgment>& goals,
                                    Budget budget = default_budget(), int jobs = 1, Ruleset rs = Ruleset::Modified);

TheoryReport is_theory(const Pretheory& theory, Budget budget = default_budget(), int jobs = 1,
                       Ruleset rs = Ruleset::Modified);

std::string write_cert(const DerivPtr& d);
DerivPtr read_cert(std::string_view text, const Pretheory& theory);
// A sequence of top-level certificates, as written by concatenating write_cert outputs.
std::vector<DerivPtr> read_certs(std::string_view text, const Pretheory& theory);

}  // namespace gat
