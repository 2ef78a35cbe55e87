#pragma once

#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gat/kernel.hpp"

namespace sampling {

using Rng = std::mt19937;

size_t pick(Rng& rng, size_t n);

// Variables of X and symbols applied to variables of X (one level), each with its canonical sort.
std::vector<std::pair<gat::Expr, gat::Expr>> terms_over(const gat::Pretheory& t, gat::Ctx X);

// Sort symbols applied to terms_over(X) with well-sorted arguments.
std::vector<gat::Expr> sorts_over(const gat::Pretheory& t, gat::Ctx X);

// A context of the given length whose variables are prefix0, prefix1, ...; nullopt if it gets stuck.
std::optional<gat::Ctx> random_ctx(const gat::Pretheory& t, size_t len, const std::string& prefix, Rng& rng);

// A premorphism from src to tgt whose components are drawn from terms_over(src) at the required sorts.
std::optional<gat::Premorphism> random_morphism(const gat::Pretheory& t, gat::Ctx src, gat::Ctx tgt, Rng& rng);

}  // namespace sampling
