#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "gat/syntax.hpp"

namespace oracle {

// Number of expression nodes plus one per context entry.
size_t judgment_size(const gat::Judgment& j);

// Forward closure of the stratified sets D_0 ⊆ D_1 ⊆ ... restricted to judgments of bounded size over a fixed
// variable pool. Only pretheories without equality axioms are accepted: there every derivable equality is an
// identity, no premise of an inference step is larger than its conclusion apart from the axiom premise, and the
// bounded closure therefore assigns each judgment in range its exact height.
class HeightOracle {
public:
  HeightOracle(const gat::Pretheory& t, size_t max_size, std::vector<gat::Name> pool);

  std::optional<int> height(const gat::Judgment& j) const;
  const std::unordered_map<gat::Judgment, int, gat::JudgmentHash>& table() const { return ht_; }
  int rounds() const { return rounds_; }

private:
  void round(int n);

  const gat::Pretheory& t_;
  size_t max_size_;
  std::vector<gat::Name> pool_;
  std::unordered_map<gat::Judgment, int, gat::JudgmentHash> ht_;
  int rounds_ = 0;
};

}  // namespace oracle
