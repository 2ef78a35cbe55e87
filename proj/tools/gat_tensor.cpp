#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gat/corpus.hpp"
#include "gat/kernel.hpp"
#include "gat/structure.hpp"
#include "gat/tensor.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace gat;

namespace {

enum class Format { Human, Tsv, JsonLines };

struct Options {
  std::optional<int> budget, universe;
  std::string ruleset = "modified";
  std::string format = "human";
  std::string emit_cert;
  int jobs = 1;
};

struct UsageError : Error {
  using Error::Error;
};

struct Row {
  std::string id;
  std::string direction;
  const DerivResult* result;
  std::string text;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

// A path to a theory file, or the id of a builtin theory when no such file exists.
Pretheory load_theory(const std::string& arg) {
  if (fs::exists(arg)) return parse_theory(read_text(arg));
  for (const auto& id : builtin_ids())
    if (id == arg) return builtin(id).theory;
  throw UsageError("no theory file or builtin named " + arg);
}

Budget resolve_budget(const Options& o) {
  Budget b = default_budget();
  if (const char* env = std::getenv("GAT_TENSOR_BUDGET"); env && *env) {
    try {
      size_t used = 0;
      b.max_height = std::stoi(env, &used);
      if (used != std::string(env).size() || b.max_height < 1) throw std::invalid_argument(env);
    } catch (const std::exception&) {
      throw UsageError(std::string("GAT_TENSOR_BUDGET must be a positive integer, got ") + env);
    }
  }
  if (o.budget) b.max_height = *o.budget;
  if (o.universe) b.universe = *o.universe;
  return b;
}

Ruleset resolve_ruleset(const Options& o) {
  auto rs = ruleset_from_name(o.ruleset);
  if (!rs) throw UsageError("unknown ruleset " + o.ruleset);
  return *rs;
}

Format resolve_format(const Options& o) {
  if (o.format == "human") return Format::Human;
  if (o.format == "tsv") return Format::Tsv;
  if (o.format == "json-lines") return Format::JsonLines;
  throw UsageError("unknown format " + o.format);
}

void print_rows(const std::vector<Row>& rows, Format f) {
  for (const auto& r : rows) {
    auto h = r.result->height_ub();
    std::string verdict = r.result->derivable() ? "Derivable" : "Unknown";
    std::string hs = h ? std::to_string(*h) : "-";
    switch (f) {
      case Format::Human:
        std::cout << r.id << (r.direction.empty() ? "" : " " + r.direction) << " " << verdict << " height_ub "
                  << hs << "  " << r.text << "\n";
        break;
      case Format::Tsv:
        std::cout << r.id << "\t" << (r.direction.empty() ? "" : r.direction + "\t") << verdict << "\t" << hs
                  << "\n";
        break;
      case Format::JsonLines: {
        nlohmann::ordered_json j;
        j["id"] = r.direction.empty() ? r.id : r.direction + "#" + r.id;
        j["verdict"] = verdict;
        j["height_ub"] = h ? nlohmann::ordered_json(*h) : nlohmann::ordered_json(nullptr);
        j["millis"] = r.result->millis;
        std::cout << j.dump() << "\n";
        break;
      }
    }
  }
}

size_t count_unknown(const std::vector<DerivResult>& rs) {
  return std::count_if(rs.begin(), rs.end(), [](const DerivResult& r) { return !r.derivable(); });
}

void print_summary(size_t total, size_t unknown, Format f, const std::string& what) {
  if (f != Format::Human) return;
  std::cout << total << " " << what << ", " << total - unknown << " Derivable, " << unknown << " Unknown\n";
}

void emit_certs(const Options& o, const std::vector<DerivResult>& rs) {
  if (o.emit_cert.empty()) return;
  std::string text;
  for (const auto& r : rs)
    if (r.tree) text += write_cert(r.tree);
  write_text(o.emit_cert, text);
}

int report_goals(const Options& o, const std::vector<Judgment>& goals, const std::vector<DerivResult>& rs,
                 const std::string& what) {
  Format f = resolve_format(o);
  std::vector<Row> rows;
  for (size_t i = 0; i < goals.size(); ++i) rows.push_back({std::to_string(i + 1), "", &rs[i], judgment_str(goals[i])});
  print_rows(rows, f);
  size_t unknown = count_unknown(rs);
  print_summary(rs.size(), unknown, f, what);
  emit_certs(o, rs);
  return unknown == 0 ? 0 : 1;
}

int report_structure(const Options& o, const StructureReport& rep) {
  Format f = resolve_format(o);
  std::vector<Row> rows;
  for (const auto& l : rep.lines) rows.push_back({l.id, l.direction, &l.result, judgment_str(l.goal)});
  print_rows(rows, f);
  print_summary(rep.lines.size(), rep.unknown(), f, "translated axioms");
  return rep.unknown() == 0 ? 0 : 1;
}

int run_parse(const std::string& path) {
  std::cout << print_theory(load_theory(path));
  return 0;
}

int run_check(const Options& o, const std::string& path) {
  Pretheory t = load_theory(path);
  auto rep = is_theory(t, resolve_budget(o), o.jobs, resolve_ruleset(o));
  return report_goals(o, t.axioms, rep.axioms, "axioms");
}

int run_derive(const Options& o, const std::string& theory, const std::string& goals_path) {
  Pretheory t = load_theory(theory);
  auto goals = parse_judgments(read_text(goals_path), t);
  auto rs = derive_all(t, goals, resolve_budget(o), o.jobs, resolve_ruleset(o));
  return report_goals(o, goals, rs, "goals");
}

int run_check_cert(const std::string& theory, const std::string& cert_path) {
  Pretheory t = load_theory(theory);
  auto certs = read_certs(read_text(cert_path), t);
  size_t bad = 0;
  for (size_t i = 0; i < certs.size(); ++i) {
    std::string why;
    bool ok = check_derivation(certs[i], t, &why);
    bad += !ok;
    std::cout << i + 1 << " " << (ok ? "valid" : "invalid") << " height " << certs[i]->height << "  "
              << judgment_str(certs[i]->concl) << (ok ? "" : "  (" + why + ")") << "\n";
  }
  std::cout << certs.size() << " certificates, " << bad << " invalid\n";
  return bad == 0 ? 0 : 1;
}

int compare_golden(const Pretheory& computed, const Golden& g) {
  auto diff = golden_compare(computed, g);
  std::cout << "golden " << g.left << "_x_" << g.right << ": " << diff.report();
  return diff.ok() ? 0 : 1;
}

int run_tensor(const Options& o, const std::string& a_path, const std::string& b_path, const std::string& out,
               bool check, const std::string& golden_dir) {
  Pretheory a = load_theory(a_path), b = load_theory(b_path);
  Pretheory ab = tensor_theory(a, b);
  if (out.empty())
    std::cout << print_theory(ab);
  else
    write_text(out, print_theory(ab));
  if (resolve_format(o) == Format::Human)
    std::cout << "# " << ab.name << ": " << ab.alphabet->sorts().size() << " sorts, " << ab.alphabet->terms().size()
              << " terms, " << ab.axioms.size() << " axioms\n";
  int code = 0;
  if (!golden_dir.empty()) code = std::max(code, compare_golden(ab, load_golden(golden_dir)));
  if (check) {
    auto rep = is_theory(ab, resolve_budget(o), o.jobs, resolve_ruleset(o));
    code = std::max(code, report_goals(o, ab.axioms, rep.axioms, "axioms"));
  }
  return code;
}

int run_golden(const std::vector<std::string>& args, const std::string& dir) {
  if (args.empty()) {
    if (!dir.empty()) throw UsageError("--dir needs the two factor theories");
    int code = 0;
    for (const auto& [l, r] : builtin_golden_pairs())
      code = std::max(code, compare_golden(tensor_theory(builtin(l).theory, builtin(r).theory), *builtin_golden(l, r)));
    return code;
  }
  if (args.size() != 2) throw UsageError("golden takes zero or two theories");
  Pretheory a = load_theory(args[0]), b = load_theory(args[1]);
  Pretheory ab = tensor_theory(a, b);
  if (!dir.empty()) return compare_golden(ab, load_golden(dir));
  auto g = builtin_golden(a.name, b.name);
  if (!g) throw UsageError("no builtin golden for " + a.name + " and " + b.name);
  return compare_golden(ab, *g);
}

int run_sym(const Options& o, const std::string& a, const std::string& b) {
  return report_structure(o, check_symmetry(load_theory(a), load_theory(b), resolve_budget(o), o.jobs,
                                            resolve_ruleset(o)));
}

int run_assoc(const Options& o, const std::string& a, const std::string& b, const std::string& c) {
  return report_structure(o, check_associativity(load_theory(a), load_theory(b), load_theory(c),
                                                 resolve_budget(o), o.jobs, resolve_ruleset(o)));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kernel for generalized algebraic theories and their tensor products", "gat-tensor"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--budget", o.budget, "maximum derivation height")->check(CLI::PositiveNumber);
  app.add_option("--universe", o.universe, "expression size bound for search")->check(CLI::PositiveNumber);
  app.add_option("--ruleset", o.ruleset, "modified or cartmell")->check(CLI::IsMember({"modified", "cartmell"}));
  app.add_option("--format", o.format, "human, tsv or json-lines")
      ->check(CLI::IsMember({"human", "tsv", "json-lines"}));
  app.add_option("--emit-cert", o.emit_cert, "write certificates of derived goals to this file");
  app.add_option("--jobs,-j", o.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.fallthrough();

  std::string p1, p2, p3, out, golden_dir, dir;
  bool check = false;
  std::vector<std::string> golden_args;

  auto* parse = app.add_subcommand("parse", "parse a theory and print it back");
  parse->add_option("theory", p1)->required();
  auto* chk = app.add_subcommand("check", "derive every axiom of a theory");
  chk->add_option("theory", p1)->required();
  auto* derive = app.add_subcommand("derive", "derive the judgments of a goals file");
  derive->add_option("theory", p1)->required();
  derive->add_option("goals", p2)->required();
  auto* cert = app.add_subcommand("check-cert", "validate certificates against a theory");
  cert->add_option("theory", p1)->required();
  cert->add_option("certificates", p2)->required();
  auto* tensor = app.add_subcommand("tensor", "print the tensor product of two theories");
  tensor->add_option("left", p1)->required();
  tensor->add_option("right", p2)->required();
  tensor->add_option("-o,--output", out, "write the product theory here");
  tensor->add_flag("--check,!--no-check", check, "derive every axiom of the product");
  tensor->add_option("--golden", golden_dir, "compare against a golden directory");
  auto* assoc = app.add_subcommand("assoc-check", "compare (A*B)*C with A*(B*C)");
  assoc->add_option("a", p1)->required();
  assoc->add_option("b", p2)->required();
  assoc->add_option("c", p3)->required();
  auto* sym = app.add_subcommand("sym-check", "compare A*B with B*A");
  sym->add_option("a", p1)->required();
  sym->add_option("b", p2)->required();
  auto* golden = app.add_subcommand("golden", "compare tensor products with golden files");
  golden->add_option("theories", golden_args, "left and right theory; all builtin goldens when omitted");
  golden->add_option("--dir", dir, "golden directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*parse) return run_parse(p1);
    if (*chk) return run_check(o, p1);
    if (*derive) return run_derive(o, p1, p2);
    if (*cert) return run_check_cert(p1, p2);
    if (*tensor) return run_tensor(o, p1, p2, out, check, golden_dir);
    if (*assoc) return run_assoc(o, p1, p2, p3);
    if (*sym) return run_sym(o, p1, p2);
    if (*golden) return run_golden(golden_args, dir);
  } catch (const ParseError& e) {
    std::cerr << "parse error at " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
