#include <sstream>
#include <unordered_map>

#include "gat/kernel.hpp"

namespace gat {

namespace {

void count_refs(const Derivation* d, std::unordered_map<const Derivation*, int>& refs) {
  if (refs[d]++ > 0) return;
  for (const auto& p : d->prems) count_refs(p.get(), refs);
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

struct Writer {
  std::unordered_map<const Derivation*, int> refs, ids;
  std::ostringstream out;

  void node(const Derivation* d, int indent) {
    std::string pad(indent, ' ');
    if (auto it = ids.find(d); it != ids.end()) {
      out << pad << "(ref " << it->second << ")";
      return;
    }
    out << pad << "(rule " << rule_name(d->rule);
    if (refs[d] > 1) {
      int id = static_cast<int>(ids.size()) + 1;
      ids.emplace(d, id);
      out << " (id " << id << ")";
    }
    out << " (concl " << quote(judgment_str(d->concl)) << ")";
    if (!d->prems.empty()) {
      out << "\n" << pad << " (prem";
      for (const auto& p : d->prems) {
        out << "\n";
        node(p.get(), indent + 2);
      }
      out << ")";
    }
    out << ")";
  }
};

struct Token {
  enum Kind { Open, Close, Atom, String, End } kind;
  std::string text;
};

class Reader {
public:
  Reader(std::string_view s, const Pretheory& t) : s_(s), th_(t) {}

  DerivPtr read() {
    auto d = node();
    if (next().kind != Token::End) fail("trailing input");
    return d;
  }

  std::vector<DerivPtr> read_all() {
    std::vector<DerivPtr> out;
    while (peek().kind != Token::End) {
      ids_.clear();
      out.push_back(node());
    }
    return out;
  }

private:
  std::string_view s_;
  size_t pos_ = 0;
  const Pretheory& th_;
  std::unordered_map<int, DerivPtr> ids_;
  std::optional<Token> peeked_;

  [[noreturn]] void fail(const std::string& m) { throw Error("certificate: " + m + " at offset " + std::to_string(pos_)); }

  Token lex() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ >= s_.size()) return {Token::End, ""};
    char c = s_[pos_];
    if (c == '(') return ++pos_, Token{Token::Open, "("};
    if (c == ')') return ++pos_, Token{Token::Close, ")"};
    if (c == '"') {
      std::string out;
      for (++pos_; pos_ < s_.size() && s_[pos_] != '"'; ++pos_) {
        if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
        out += s_[pos_];
      }
      if (pos_ >= s_.size()) fail("unterminated string");
      ++pos_;
      return {Token::String, out};
    }
    size_t b = pos_;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != '(' &&
           s_[pos_] != ')' && s_[pos_] != '"')
      ++pos_;
    return {Token::Atom, std::string(s_.substr(b, pos_ - b))};
  }

  Token next() {
    if (peeked_) {
      Token t = *peeked_;
      peeked_.reset();
      return t;
    }
    return lex();
  }
  const Token& peek() {
    if (!peeked_) peeked_ = lex();
    return *peeked_;
  }
  void expect(Token::Kind k, const char* what) {
    if (next().kind != k) fail(std::string("expected ") + what);
  }
  std::string atom(const char* what) {
    Token t = next();
    if (t.kind != Token::Atom) fail(std::string("expected ") + what);
    return t.text;
  }
  int number() {
    std::string a = atom("number");
    try {
      return std::stoi(a);
    } catch (const std::exception&) {
      fail("bad number " + a);
    }
  }

  DerivPtr node() {
    expect(Token::Open, "'('");
    std::string head = atom("rule or ref");
    if (head == "ref") {
      int id = number();
      expect(Token::Close, "')'");
      auto it = ids_.find(id);
      if (it == ids_.end()) fail("unknown ref " + std::to_string(id));
      return it->second;
    }
    if (head != "rule") fail("expected rule");
    std::string name = atom("rule name");
    auto rule = rule_from_name(name);
    if (!rule) fail("unknown rule " + name);
    std::optional<int> id;
    std::optional<Judgment> concl;
    std::vector<DerivPtr> prems;
    while (peek().kind == Token::Open) {
      next();
      std::string field = atom("field");
      if (field == "id") {
        id = number();
        expect(Token::Close, "')'");
      } else if (field == "concl") {
        Token t = next();
        if (t.kind != Token::String) fail("expected judgment string");
        concl = parse_judgment(t.text, th_);
        expect(Token::Close, "')'");
      } else if (field == "prem") {
        while (peek().kind == Token::Open) prems.push_back(node());
        expect(Token::Close, "')'");
      } else {
        fail("unknown field " + field);
      }
    }
    expect(Token::Close, "')'");
    if (!concl) fail("missing concl");
    auto d = make_derivation(*rule, *concl, std::move(prems));
    if (id) ids_[*id] = d;
    return d;
  }
};

}  // namespace

std::string write_cert(const DerivPtr& d) {
  Writer w;
  count_refs(d.get(), w.refs);
  w.node(d.get(), 0);
  w.out << "\n";
  return w.out.str();
}

DerivPtr read_cert(std::string_view text, const Pretheory& theory) { return Reader(text, theory).read(); }

std::vector<DerivPtr> read_certs(std::string_view text, const Pretheory& theory) {
  return Reader(text, theory).read_all();
}

}  // namespace gat
