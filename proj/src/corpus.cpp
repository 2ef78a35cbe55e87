#include "gat/corpus.hpp"

#include <fstream>
#include <sstream>

#include "corpus_data.hpp"

namespace gat {

namespace {

std::string trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<std::string> read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::pair<std::string, std::string> split_pair_dir(std::string_view name) {
  size_t k = name.find("_x_");
  if (k == std::string_view::npos) throw Error("golden directory name must be <left>_x_<right>: " + std::string(name));
  return {std::string(name.substr(0, k)), std::string(name.substr(k + 3))};
}

}  // namespace

std::vector<std::string> builtin_ids() {
  std::vector<std::string> out;
  for (const auto& t : embedded::theories) out.push_back(t.id);
  return out;
}

std::string_view builtin_source(std::string_view id) {
  for (const auto& t : embedded::theories)
    if (id == t.id) return t.text;
  throw Error("unknown builtin theory: " + std::string(id));
}

NamedTheory builtin(std::string_view id) { return {std::string(id), parse_theory(builtin_source(id))}; }

RenameMap parse_rename_map(std::string_view text) {
  RenameMap m;
  int line = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line;
    std::string s = trim(raw.substr(0, raw.find('#')));
    if (s.empty()) continue;
    size_t eq = s.find('=');
    if (eq == std::string::npos) throw ParseError("rename map: expected 'display-name = systematic-name'", line, 1);
    std::string lhs = trim(s.substr(0, eq)), rhs = trim(s.substr(eq + 1));
    if (lhs.empty() || rhs.empty()) throw ParseError("rename map: empty name", line, 1);
    if (!m.emplace(parse_name(lhs), parse_name(rhs)).second)
      throw ParseError("rename map: duplicate entry for " + lhs, line, 1);
  }
  return m;
}

Golden parse_golden(std::string_view left, std::string_view right, std::string_view expected,
                    std::string_view rename) {
  Golden g{std::string(left), std::string(right), parse_theory(expected).axioms, parse_rename_map(rename)};
  return g;
}

Golden load_golden(const std::filesystem::path& dir) {
  auto [l, r] = split_pair_dir(dir.filename().string());
  auto expected = read_file(dir / "expected.gat");
  if (!expected) throw Error("cannot read " + (dir / "expected.gat").string());
  auto rename = read_file(dir / "rename.map");
  return parse_golden(l, r, *expected, rename.value_or(""));
}

std::vector<std::pair<std::string, std::string>> builtin_golden_pairs() {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& g : embedded::goldens) out.push_back(split_pair_dir(g.dir));
  return out;
}

std::optional<Golden> builtin_golden(std::string_view left, std::string_view right) {
  for (const auto& g : embedded::goldens) {
    auto [l, r] = split_pair_dir(g.dir);
    if (l == left && r == right) return parse_golden(l, r, g.expected, g.rename);
  }
  return std::nullopt;
}

GoldenDiff golden_compare(const Pretheory& computed, const Golden& golden) {
  GoldenDiff d;
  std::vector<bool> used(computed.axioms.size(), false);
  for (const auto& e : golden.expected) {
    Judgment want = rename_symbols(e, golden.rename);
    bool found = false;
    for (size_t i = 0; i < computed.axioms.size() && !found; ++i)
      if (!used[i] && alpha_equal(want, computed.axioms[i])) used[i] = found = true;
    if (found)
      ++d.matched;
    else
      d.missing.push_back(want);
  }
  for (size_t i = 0; i < computed.axioms.size(); ++i)
    if (!used[i]) d.unexpected.push_back(computed.axioms[i]);
  return d;
}

std::string GoldenDiff::report() const {
  std::ostringstream out;
  out << "matched " << matched << ", missing " << missing.size() << ", unexpected " << unexpected.size() << "\n";
  for (const auto& j : missing) out << "- " << judgment_str(j) << "\n";
  for (const auto& j : unexpected) out << "+ " << judgment_str(j) << "\n";
  return out.str();
}

}  // namespace gat
