#include <cctype>
#include <unordered_map>

#include "gat/syntax.hpp"

namespace gat {

namespace {

enum class Tok { Ident, LParen, RParen, Comma, Colon, Dot, Star, EqEq, Turnstile, End };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '\'' || c >= 0x80; }

std::vector<Token> lex(std::string_view s, int line, int col0) {
  std::vector<Token> out;
  size_t i = 0;
  int col = col0;
  auto push = [&](Tok k, std::string t, int c) { out.push_back({k, std::move(t), line, c}); };
  while (i < s.size()) {
    unsigned char c = s[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(c)) {
      ++i;
      ++col;
      continue;
    }
    int start = col;
    if (s.substr(i, 2) == "==") {
      push(Tok::EqEq, "==", start);
      i += 2;
      col += 2;
      continue;
    }
    if (s.substr(i, 2) == "|-") {
      push(Tok::Turnstile, "|-", start);
      i += 2;
      col += 2;
      continue;
    }
    switch (c) {
      case '(': push(Tok::LParen, "(", start); break;
      case ')': push(Tok::RParen, ")", start); break;
      case ',': push(Tok::Comma, ",", start); break;
      case ':': push(Tok::Colon, ":", start); break;
      case '.': push(Tok::Dot, ".", start); break;
      case '*': push(Tok::Star, "*", start); break;
      default: {
        if (!ident_char(c)) throw ParseError(std::string("unexpected character '") + char(c) + "'", line, col);
        size_t j = i;
        while (j < s.size() && (ident_char(s[j]) || (s[j] == '-' && j > i && j + 1 < s.size() && ident_char(s[j + 1]))))
          ++j;
        push(Tok::Ident, std::string(s.substr(i, j - i)), start);
        col += static_cast<int>(j - i);
        i = j;
        continue;
      }
    }
    ++i;
    ++col;
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

struct Raw {
  Name name = nullptr;
  bool has_args = false;
  std::vector<Raw> args;
  int line = 0, col = 0;
};

struct RawEntry {
  Name var;
  Raw sort;
  int line, col;
};

class Parser {
public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  const Token& peek(size_t k = 0) const { return t_[std::min(p_ + k, t_.size() - 1)]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_word(std::string_view w) const { return at(Tok::Ident) && peek().text == w; }
  const Token& next() { return t_[p_ < t_.size() - 1 ? p_++ : p_]; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + (at(Tok::End) ? " at end of input" : " near '" + peek().text + "'"), peek().line, peek().col);
  }

  const Token& expect(Tok k, const char* what) {
    if (!at(k)) fail(std::string("expected ") + what);
    return next();
  }

  Name primary() {
    if (at(Tok::LParen)) {
      next();
      Name n = name();
      expect(Tok::RParen, "')'");
      return n;
    }
    return atom(expect(Tok::Ident, "identifier").text);
  }

  Name name() {
    Name n = primary();
    while (at(Tok::Dot) || at(Tok::Star)) {
      next();
      n = pair(n, primary());
    }
    return n;
  }

  Raw expr() {
    Raw r;
    r.line = peek().line;
    r.col = peek().col;
    r.name = name();
    if (at(Tok::LParen)) {
      next();
      r.has_args = true;
      if (!at(Tok::RParen)) {
        r.args.push_back(expr());
        while (at(Tok::Comma)) {
          next();
          r.args.push_back(expr());
        }
      }
      expect(Tok::RParen, "')'");
    }
    return r;
  }

  // entries up to (not including) the stop token
  std::vector<RawEntry> ctx(Tok stop) {
    std::vector<RawEntry> es;
    if (at(stop)) return es;
    for (;;) {
      RawEntry e;
      e.line = peek().line;
      e.col = peek().col;
      e.var = name();
      expect(Tok::Colon, "':' in context entry");
      e.sort = expr();
      es.push_back(std::move(e));
      if (!at(Tok::Comma)) break;
      next();
    }
    return es;
  }

  std::vector<RawEntry> paren_ctx() {
    if (!at(Tok::LParen)) return {};
    next();
    auto es = ctx(Tok::RParen);
    expect(Tok::RParen, "')' closing the context");
    return es;
  }

  size_t pos() const { return p_; }

private:
  std::vector<Token> t_;
  size_t p_ = 0;
};

struct Resolver {
  std::unordered_map<Name, int> symbols;  // 0 sort, 1 term

  Expr resolve(const Raw& r, const std::unordered_set<Name>& vars) const {
    if (!r.has_args && vars.count(r.name)) return mk_var(r.name);
    if (r.has_args && vars.count(r.name))
      throw ParseError("variable " + name_str(r.name, Role::Var) + " applied to arguments", r.line, r.col);
    if (!symbols.count(r.name))
      throw ParseError("unknown identifier " + name_str(r.name, Role::Symbol) + " (not a variable in scope or a declared symbol)",
                       r.line, r.col);
    std::vector<Expr> args;
    for (const auto& a : r.args) args.push_back(resolve(a, vars));
    return mk_app(r.name, std::move(args));
  }

  Ctx resolve_ctx(const std::vector<RawEntry>& es, std::unordered_set<Name>& vars) const {
    std::vector<Entry> out;
    for (const auto& e : es) {
      Expr s = resolve(e.sort, vars);
      if (!vars.insert(e.var).second)
        throw ParseError("variable " + name_str(e.var, Role::Var) + " repeated in context", e.line, e.col);
      out.push_back({e.var, s});
    }
    return mk_ctx(std::move(out));
  }
};

struct Statement {
  std::string text;
  int line;
};

std::vector<Statement> split_statements(std::string_view text) {
  std::vector<Statement> out;
  std::string cur;
  int depth = 0, start = 0, line = 0;
  size_t i = 0;
  while (i <= text.size()) {
    size_t j = text.find('\n', i);
    if (j == std::string_view::npos) j = text.size();
    ++line;
    std::string_view l = text.substr(i, j - i);
    size_t hash = l.find('#');
    if (hash != std::string_view::npos) l = l.substr(0, hash);
    bool blank = l.find_first_not_of(" \t\r") == std::string_view::npos;
    if (!blank || depth > 0) {
      if (cur.empty() && depth == 0) start = line;
      if (!cur.empty()) cur += '\n';
      cur += std::string(l);
      for (char c : l) depth += c == '(' ? 1 : c == ')' ? -1 : 0;
      if (depth <= 0) {
        out.push_back({cur, start});
        cur.clear();
        depth = 0;
      }
    }
    i = j + 1;
  }
  if (!cur.empty()) throw ParseError("unbalanced parentheses", start, 1);
  return out;
}

struct RawAxiom {
  JKind kind;
  Name symbol = nullptr;
  std::vector<RawEntry> ctx;
  Raw a, b, c;
  int line;
};

void check_arity(const Pretheory& shape, Expr e, const std::unordered_map<Name, size_t>& arity, int line) {
  if (e->var) return;
  auto it = arity.find(e->head);
  if (it != arity.end() && it->second != e->args.size())
    throw ParseError("arity mismatch for " + name_str(e->head, Role::Symbol) + ": expected " +
                         std::to_string(it->second) + " arguments, got " + std::to_string(e->args.size()),
                     line, 1);
  for (Expr a : e->args) check_arity(shape, a, arity, line);
}

}  // namespace

Pretheory parse_theory(std::string_view text) {
  std::string name = "unnamed";
  std::vector<RawAxiom> raws;
  Resolver res;
  bool saw_header = false;
  for (const auto& st : split_statements(text)) {
    Parser p(lex(st.text, st.line, 1));
    if (!p.at(Tok::Ident)) p.fail("expected a declaration keyword");
    std::string kw = p.next().text;
    RawAxiom ax;
    ax.line = st.line;
    if (kw == "theory") {
      if (saw_header) throw ParseError("second theory header", st.line, 1);
      saw_header = true;
      std::string_view rest = std::string_view(st.text).substr(st.text.find("theory") + 6);
      size_t b = rest.find_first_not_of(" \t\r\n"), e = rest.find_last_not_of(" \t\r\n");
      if (b == std::string_view::npos || rest.substr(b, e - b + 1).find_first_of(" \t\n") != std::string_view::npos)
        throw ParseError("expected a single theory name", st.line, 1);
      name = std::string(rest.substr(b, e - b + 1));
      continue;
    } else if (kw == "sort" || kw == "term") {
      ax.kind = kw == "sort" ? JKind::Sort : JKind::Term;
      int l = p.peek().line, c = p.peek().col;
      ax.symbol = p.name();
      ax.ctx = p.paren_ctx();
      if (ax.kind == JKind::Term) {
        p.expect(Tok::Colon, "':' before the sort of a term declaration");
        ax.c = p.expr();
      }
      int kind = ax.kind == JKind::Sort ? 0 : 1;
      if (res.symbols.count(ax.symbol))
        throw ParseError("duplicate introduction axiom for " + name_str(ax.symbol, Role::Symbol), l, c);
      res.symbols.emplace(ax.symbol, kind);
    } else if (kw == "eqsort") {
      ax.kind = JKind::SortEq;
      ax.ctx = p.paren_ctx();
      p.expect(Tok::Colon, "':'");
      ax.a = p.expr();
      p.expect(Tok::EqEq, "'=='");
      ax.b = p.expr();
    } else if (kw == "eqterm") {
      ax.kind = JKind::TermEq;
      ax.ctx = p.paren_ctx();
      p.expect(Tok::Colon, "':'");
      ax.a = p.expr();
      p.expect(Tok::EqEq, "'=='");
      ax.b = p.expr();
      p.expect(Tok::Colon, "':'");
      ax.c = p.expr();
    } else {
      throw ParseError("unknown declaration keyword '" + kw + "'", st.line, 1);
    }
    if (!p.at(Tok::End)) p.fail("unexpected trailing input");
    raws.push_back(std::move(ax));
  }

  std::vector<Judgment> axioms;
  std::vector<Name> vars_order, sorts, terms;
  std::unordered_set<Name> seen_vars;
  std::unordered_map<Name, size_t> arity;
  for (const auto& r : raws) {
    std::unordered_set<Name> vars;
    Ctx X = res.resolve_ctx(r.ctx, vars);
    for (const auto& e : X->entries)
      if (seen_vars.insert(e.var).second) vars_order.push_back(e.var);
    Judgment j;
    j.ctx = X;
    j.kind = r.kind;
    std::vector<Expr> xs;
    for (const auto& e : X->entries) xs.push_back(mk_var(e.var));
    switch (r.kind) {
      case JKind::Sort:
        j.lhs = mk_app(r.symbol, xs);
        sorts.push_back(r.symbol);
        arity[r.symbol] = xs.size();
        break;
      case JKind::Term:
        j.lhs = mk_app(r.symbol, xs);
        j.sort = res.resolve(r.c, vars);
        terms.push_back(r.symbol);
        arity[r.symbol] = xs.size();
        break;
      case JKind::SortEq:
        j.lhs = res.resolve(r.a, vars);
        j.rhs = res.resolve(r.b, vars);
        break;
      case JKind::TermEq:
        j.lhs = res.resolve(r.a, vars);
        j.rhs = res.resolve(r.b, vars);
        j.sort = res.resolve(r.c, vars);
        break;
      default: break;
    }
    axioms.push_back(j);
  }
  Pretheory shape;
  for (size_t i = 0; i < axioms.size(); ++i) {
    const auto& j = axioms[i];
    for (const auto& e : j.ctx->entries) check_arity(shape, e.sort, arity, raws[i].line);
    for (Expr e : {j.lhs, j.rhs, j.sort})
      if (e) check_arity(shape, e, arity, raws[i].line);
  }
  try {
    return make_pretheory(name, Alphabet::atomic(vars_order, sorts, terms), std::move(axioms));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    std::string msg = e.what();
    int line = 0;
    if (msg.rfind("axiom ", 0) == 0) {
      size_t k = std::stoul(msg.substr(6));
      if (k >= 1 && k <= raws.size()) line = raws[k - 1].line;
    }
    throw ParseError(msg, line, 1);
  }
}

namespace {

Resolver resolver_for(const Pretheory& t) {
  Resolver r;
  for (Name s : t.alphabet->sorts()) r.symbols.emplace(s, 0);
  for (Name s : t.alphabet->terms()) r.symbols.emplace(s, 1);
  return r;
}

Judgment parse_judgment_at(std::string_view text, const Pretheory& t, int line) {
  Parser p(lex(text, line, 1));
  Resolver res = resolver_for(t);
  auto raw_ctx = p.ctx(Tok::Turnstile);
  p.expect(Tok::Turnstile, "'|-'");
  std::unordered_set<Name> vars;
  Ctx X = res.resolve_ctx(raw_ctx, vars);
  Judgment j;
  j.ctx = X;
  if (p.at_word("ctx-ok")) {
    p.next();
    j.kind = JKind::Ctx;
  } else {
    Expr a = res.resolve(p.expr(), vars);
    if (p.at_word("sort")) {
      p.next();
      j = sort_j(X, a);
    } else if (p.at(Tok::Colon)) {
      p.next();
      j = term_j(X, a, res.resolve(p.expr(), vars));
    } else if (p.at(Tok::EqEq)) {
      p.next();
      Expr b = res.resolve(p.expr(), vars);
      if (p.at_word("sort")) {
        p.next();
        j = sort_eq_j(X, a, b);
      } else {
        p.expect(Tok::Colon, "':' or 'sort'");
        j = term_eq_j(X, a, b, res.resolve(p.expr(), vars));
      }
    } else {
      p.fail("expected 'sort', ':' or '=='");
    }
  }
  if (!p.at(Tok::End)) p.fail("unexpected trailing input");
  return j;
}

}  // namespace

Judgment parse_judgment(std::string_view text, const Pretheory& t) { return parse_judgment_at(text, t, 1); }

std::vector<Judgment> parse_judgments(std::string_view text, const Pretheory& t) {
  std::vector<Judgment> out;
  for (const auto& st : split_statements(text)) out.push_back(parse_judgment_at(st.text, t, st.line));
  return out;
}

Name parse_name(std::string_view text) {
  Parser p(lex(text, 1, 1));
  Name n = p.name();
  if (!p.at(Tok::End)) p.fail("unexpected trailing input");
  return n;
}

Expr parse_expr(std::string_view text, const Pretheory& t, Ctx X) {
  Parser p(lex(text, 1, 1));
  Resolver res = resolver_for(t);
  std::unordered_set<Name> vars;
  for (const auto& e : X->entries) vars.insert(e.var);
  Expr e = res.resolve(p.expr(), vars);
  if (!p.at(Tok::End)) p.fail("unexpected trailing input");
  return e;
}

Ctx parse_ctx(std::string_view text, const Pretheory& t) {
  Parser p(lex(text, 1, 1));
  Resolver res = resolver_for(t);
  std::unordered_set<Name> vars;
  Ctx X = res.resolve_ctx(p.ctx(Tok::End), vars);
  if (!p.at(Tok::End)) p.fail("unexpected trailing input");
  return X;
}

}  // namespace gat
