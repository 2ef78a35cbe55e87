#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gat/syntax.hpp"

namespace gat {

struct NamedTheory {
  std::string id;
  Pretheory theory;
};

std::vector<std::string> builtin_ids();
// Throws Error on an unknown id.
NamedTheory builtin(std::string_view id);
std::string_view builtin_source(std::string_view id);

// Display-name to systematic-name symbol map.
using RenameMap = std::unordered_map<Name, Name>;
RenameMap parse_rename_map(std::string_view text);

struct Golden {
  std::string left, right;
  std::vector<Judgment> expected;
  RenameMap rename;
};

// `dir` is named <left>_x_<right> and holds expected.gat and optionally rename.map.
Golden load_golden(const std::filesystem::path& dir);
Golden parse_golden(std::string_view left, std::string_view right, std::string_view expected,
                    std::string_view rename);
// Goldens shipped with the library, by (left, right).
std::vector<std::pair<std::string, std::string>> builtin_golden_pairs();
std::optional<Golden> builtin_golden(std::string_view left, std::string_view right);

struct GoldenDiff {
  size_t matched = 0;
  // Expected axioms (after renaming) with no alpha-equal computed axiom, and computed axioms left over.
  std::vector<Judgment> missing, unexpected;
  bool ok() const { return missing.empty() && unexpected.empty(); }
  std::string report() const;
};

GoldenDiff golden_compare(const Pretheory& computed, const Golden& golden);

}  // namespace gat
