#pragma once

// Text formats: formulas, bases, universes, proof scripts (Hilbert and
// natural deduction), derivation traces, simulation bases. Every parser
// reports byte spans on errors and round-trips the printers' output.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bes/atomic.hpp"
#include "bes/errors.hpp"
#include "bes/flatten.hpp"
#include "bes/hilbert.hpp"
#include "bes/natded.hpp"
#include "bes/support.hpp"
#include "bes/syntax.hpp"

namespace bes {

struct ParseOptions {
  bool allow_reserved = false;  // permit $-prefixed symbol names
};

// Arities are frozen at first use and must stay consistent.
struct Signature {
  std::map<std::string, int> pconsts;
  std::map<std::string, int> pvars;

  void freeze_pconst(const std::string& name, int ar, std::size_t b,
                     std::size_t e) {
    auto it = pconsts.find(name);
    if (it == pconsts.end())
      pconsts.emplace(name, ar);
    else if (it->second != ar)
      throw ArityMismatch("predicate " + name + " previously used with " +
                              std::to_string(it->second) + " arguments",
                          b, e);
  }
  void freeze_pvar(const std::string& name, int ar, std::size_t b,
                   std::size_t e) {
    auto it = pvars.find(name);
    if (it == pvars.end())
      pvars.emplace(name, ar);
    else if (it->second != ar)
      throw ArityMismatch("predicate variable ?" + name +
                              " previously used with " +
                              std::to_string(it->second) + " arguments",
                          b, e);
  }
};

namespace detail {

enum class Tok {
  End,
  Ident,   // bare name (constant or predicate or keyword)
  Var,     // ?name, text stored without the marker
  Num,
  Str,     // "…", text stored without the quotes
  LParen,
  RParen,
  LBrace,
  RBrace,
  LBrack,
  RBrack,
  Comma,
  Dot,
  Colon,
  Star,
  Tilde,
  Amp,
  Bar,
  Arrow,    // ->
  FatArrow, // =>
  Turnstile // |-
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t begin = 0, end = 0;
};

inline bool ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' ||
         c == '$';
}
inline bool ident_char(char c) {
  return ident_start(c) || (c >= '0' && c <= '9') || c == '\'';
}

struct Lexer {
  const std::string& src;
  std::size_t pos = 0;
  Token cur;

  explicit Lexer(const std::string& s) : src(s) { advance(); }

  [[noreturn]] void fail(const std::string& msg, std::size_t b,
                         std::size_t e) const {
    throw ParseError(msg, b, e);
  }

  bool starts_with(const char* s) const {
    std::size_t n = 0;
    while (s[n]) ++n;
    return src.compare(pos, n, s) == 0;
  }

  void advance() {
    // skip whitespace and # comments
    for (;;) {
      while (pos < src.size() &&
             (src[pos] == ' ' || src[pos] == '\t' || src[pos] == '\n' ||
              src[pos] == '\r'))
        ++pos;
      if (pos < src.size() && src[pos] == '#') {
        while (pos < src.size() && src[pos] != '\n') ++pos;
        continue;
      }
      break;
    }
    cur = Token{};
    cur.begin = pos;
    if (pos >= src.size()) {
      cur.kind = Tok::End;
      cur.end = pos;
      return;
    }
    char c = src[pos];
    auto punct = [&](Tok k, std::size_t n) {
      cur.kind = k;
      cur.text = src.substr(pos, n);
      pos += n;
      cur.end = pos;
    };
    // Unicode aliases.
    struct Alias {
      const char* seq;
      Tok kind;
      const char* text;
    };
    static const Alias aliases[] = {
        {"∀", Tok::Ident, "all"}, {"∃", Tok::Ident, "ex"},
        {"Π", Tok::Ident, "ALL"}, {"⊥", Tok::Ident, "bot"},
        {"→", Tok::Arrow, "->"},  {"¬", Tok::Tilde, "~"},
        {"∧", Tok::Amp, "&"},     {"∨", Tok::Bar, "|"},
    };
    for (auto& a : aliases)
      if (starts_with(a.seq)) {
        std::size_t n = 0;
        while (a.seq[n]) ++n;
        cur.kind = a.kind;
        cur.text = a.text;
        pos += n;
        cur.end = pos;
        return;
      }
    if (starts_with("->")) return punct(Tok::Arrow, 2);
    if (starts_with("=>")) return punct(Tok::FatArrow, 2);
    if (starts_with("|-")) return punct(Tok::Turnstile, 2);
    switch (c) {
      case '(': return punct(Tok::LParen, 1);
      case ')': return punct(Tok::RParen, 1);
      case '{': return punct(Tok::LBrace, 1);
      case '}': return punct(Tok::RBrace, 1);
      case '[': return punct(Tok::LBrack, 1);
      case ']': return punct(Tok::RBrack, 1);
      case ',': return punct(Tok::Comma, 1);
      case '.': return punct(Tok::Dot, 1);
      case ':': return punct(Tok::Colon, 1);
      case '*': return punct(Tok::Star, 1);
      case '~': return punct(Tok::Tilde, 1);
      case '&': return punct(Tok::Amp, 1);
      case '|': return punct(Tok::Bar, 1);
      default: break;
    }
    if (c == '"') {
      std::size_t e = pos + 1;
      while (e < src.size() && src[e] != '"') ++e;
      if (e >= src.size()) fail("unterminated string", pos, e);
      cur.kind = Tok::Str;
      cur.text = src.substr(pos + 1, e - pos - 1);
      pos = e + 1;
      cur.end = pos;
      return;
    }
    if (c == '?') {
      std::size_t e = pos + 1;
      while (e < src.size() && ident_char(src[e])) ++e;
      if (e == pos + 1) fail("bare ? is not a variable", pos, e);
      cur.kind = Tok::Var;
      cur.text = src.substr(pos + 1, e - pos - 1);
      pos = e;
      cur.end = pos;
      return;
    }
    if (c >= '0' && c <= '9') {
      std::size_t e = pos;
      while (e < src.size() && src[e] >= '0' && src[e] <= '9') ++e;
      cur.kind = Tok::Num;
      cur.text = src.substr(pos, e - pos);
      pos = e;
      cur.end = pos;
      return;
    }
    if (ident_start(c)) {
      std::size_t e = pos;
      while (e < src.size() && ident_char(src[e])) ++e;
      cur.kind = Tok::Ident;
      cur.text = src.substr(pos, e - pos);
      pos = e;
      cur.end = pos;
      return;
    }
    fail("unexpected character", pos, pos + 1);
  }

  Token take() {
    Token t = cur;
    advance();
    return t;
  }
  Token expect(Tok k, const std::string& what) {
    if (cur.kind != k) fail("expected " + what, cur.begin, cur.end);
    return take();
  }
  bool accept(Tok k) {
    if (cur.kind != k) return false;
    advance();
    return true;
  }
  bool at_ident(const char* s) const {
    return cur.kind == Tok::Ident && cur.text == s;
  }
  bool accept_ident(const char* s) {
    if (!at_ident(s)) return false;
    advance();
    return true;
  }
  void expect_ident(const char* s) {
    if (!accept_ident(s))
      fail(std::string("expected '") + s + "'", cur.begin, cur.end);
  }
  char peek_nonspace() const {
    std::size_t p = pos;
    for (;;) {
      while (p < src.size() &&
             (src[p] == ' ' || src[p] == '\t' || src[p] == '\n' ||
              src[p] == '\r'))
        ++p;
      if (p < src.size() && src[p] == '#') {
        while (p < src.size() && src[p] != '\n') ++p;
        continue;
      }
      break;
    }
    return p < src.size() ? src[p] : '\0';
  }
};

inline bool upperish(const std::string& name) {
  for (char c : name)
    if (c != '$' && c != '_') return c >= 'A' && c <= 'Z';
  return false;
}

struct FormulaParser {
  Lexer& lx;
  Signature& sig;
  ParseOptions opts;

  void check_name(const Token& t) {
    if (!opts.allow_reserved && is_reserved_name(t.text))
      lx.fail("reserved name " + t.text, t.begin, t.end);
  }
  static bool keyword(const std::string& s) {
    return s == "all" || s == "ex" || s == "ALL" || s == "EX" || s == "bot";
  }

  Term term() {
    if (lx.cur.kind == Tok::Var) {
      Token t = lx.take();
      if (upperish(t.text))
        lx.fail("predicate variable in term position", t.begin, t.end);
      return t_var(t.text);
    }
    Token t = lx.expect(Tok::Ident, "a term");
    if (keyword(t.text)) lx.fail("keyword in term position", t.begin, t.end);
    if (upperish(t.text))
      lx.fail("predicate name in term position", t.begin, t.end);
    check_name(t);
    return t_const(t.text);
  }

  std::vector<Term> arglist() {
    std::vector<Term> args;
    if (!lx.accept(Tok::LParen)) return args;
    if (!lx.accept(Tok::RParen)) {
      args.push_back(term());
      while (lx.accept(Tok::Comma)) args.push_back(term());
      lx.expect(Tok::RParen, ")");
    }
    return args;
  }

  FormulaRef primary() {
    if (lx.accept(Tok::LParen)) {
      FormulaRef f = imp();
      lx.expect(Tok::RParen, ")");
      return f;
    }
    if (lx.cur.kind == Tok::Var) {
      Token t = lx.take();
      if (!upperish(t.text))
        lx.fail("individual variable in formula position", t.begin, t.end);
      std::vector<Term> args = arglist();
      int ar = static_cast<int>(args.size());
      sig.freeze_pvar(t.text, ar, t.begin, t.end);
      return f_pvar_atom(t.text, ar, std::move(args));
    }
    Token t = lx.expect(Tok::Ident, "a formula");
    if (t.text == "bot") return f_bot();
    if (keyword(t.text))
      lx.fail("quantifier keyword in atom position", t.begin, t.end);
    if (!upperish(t.text))
      lx.fail("constant in formula position (predicates are capitalized)",
              t.begin, t.end);
    check_name(t);
    std::vector<Term> args = arglist();
    int ar = static_cast<int>(args.size());
    sig.freeze_pconst(t.text, ar, t.begin, t.end);
    return f_atom(PredSym{PredKind::Const, t.text, ar}, std::move(args));
  }

  FormulaRef unary() {
    if (lx.accept(Tok::Tilde)) return f_not(unary());
    if (lx.at_ident("all") || lx.at_ident("ex")) {
      bool ex = lx.cur.text == "ex";
      lx.advance();
      Token v = lx.expect(Tok::Var, "?variable");
      if (upperish(v.text))
        lx.fail("first-order quantifier needs an individual variable",
                v.begin, v.end);
      lx.expect(Tok::Dot, ".");
      FormulaRef body = imp();
      return ex ? f_ex(v.text, body) : f_all(v.text, body);
    }
    if (lx.at_ident("ALL") || lx.at_ident("EX")) {
      bool ex = lx.cur.text == "EX";
      lx.advance();
      Token v = lx.expect(Tok::Var, "?Variable");
      if (!upperish(v.text))
        lx.fail("second-order quantifier needs a predicate variable",
                v.begin, v.end);
      int ar;
      if (lx.accept(Tok::Colon)) {
        Token n = lx.expect(Tok::Num, "arity");
        ar = std::stoi(n.text);
      } else {
        auto it = sig.pvars.find(v.text);
        ar = it == sig.pvars.end() ? 0 : it->second;
      }
      sig.freeze_pvar(v.text, ar, v.begin, v.end);
      lx.expect(Tok::Dot, ".");
      FormulaRef body = imp();
      return ex ? f_ex2(v.text, ar, body) : f_pi(v.text, ar, body);
    }
    return primary();
  }

  FormulaRef conj() {
    FormulaRef f = unary();
    while (lx.accept(Tok::Amp)) f = f_and(f, unary());
    return f;
  }
  FormulaRef disj() {
    FormulaRef f = conj();
    while (lx.accept(Tok::Bar)) f = f_or(f, conj());
    return f;
  }
  FormulaRef imp() {
    FormulaRef f = disj();
    if (lx.accept(Tok::Arrow)) return f_imp(f, imp());
    return f;
  }
};

inline FormulaRef parse_formula_tokens(Lexer& lx, Signature& sig,
                                       ParseOptions opts) {
  FormulaParser p{lx, sig, opts};
  return p.imp();
}

inline FormulaRef parse_formula_str(const std::string& s, Signature& sig,
                                    ParseOptions opts) {
  Lexer lx(s);
  FormulaRef f = parse_formula_tokens(lx, sig, opts);
  if (lx.cur.kind != Tok::End)
    lx.fail("trailing input after formula", lx.cur.begin, lx.cur.end);
  return f;
}

// Ground atom inside base/trace syntax.
inline GroundAtom parse_atom_tokens(Lexer& lx, Signature& sig,
                                    ParseOptions opts) {
  Token t = lx.expect(Tok::Ident, "an atom");
  if (FormulaParser::keyword(t.text))
    lx.fail("keyword in atom position", t.begin, t.end);
  if (is_reserved_name(t.text)) {
    if (!opts.allow_reserved)
      lx.fail("reserved name " + t.text, t.begin, t.end);
  } else if (!upperish(t.text)) {
    lx.fail("atoms are named by capitalized predicates", t.begin, t.end);
  }
  GroundAtom a{t.text, {}};
  // "P" then "([" is the start of the next rule, not an argument list
  if (lx.cur.kind == Tok::LParen && lx.peek_nonspace() != '[' &&
      lx.accept(Tok::LParen)) {
    if (!lx.accept(Tok::RParen)) {
      for (;;) {
        Token c = lx.expect(Tok::Ident, "a constant");
        if (!opts.allow_reserved && is_reserved_name(c.text))
          lx.fail("reserved name " + c.text, c.begin, c.end);
        if (upperish(c.text))
          lx.fail("arguments are individual constants", c.begin, c.end);
        a.args.push_back(c.text);
        if (!lx.accept(Tok::Comma)) break;
      }
      lx.expect(Tok::RParen, ")");
    }
  }
  sig.freeze_pconst(a.pred, static_cast<int>(a.args.size()), t.begin, t.end);
  return a;
}

// One rule: "prem, prem => concl-or-*" where prem is an atom or
// "([atoms] => atom)". Returns nullopt for a template (wildcard conclusion).
struct ParsedRule {
  std::vector<Premise> premises;
  std::optional<GroundAtom> concl;  // nullopt: template
};

inline ParsedRule parse_rule_tokens(Lexer& lx, Signature& sig,
                                    ParseOptions opts) {
  ParsedRule out;
  while (!lx.accept(Tok::FatArrow)) {
    Premise p;
    if (lx.accept(Tok::LParen)) {
      lx.expect(Tok::LBrack, "[");
      if (!lx.accept(Tok::RBrack)) {
        for (;;) {
          p.hyps.insert(parse_atom_tokens(lx, sig, opts));
          if (!lx.accept(Tok::Comma)) break;
        }
        lx.expect(Tok::RBrack, "]");
      }
      lx.expect(Tok::FatArrow, "=>");
      p.concl = parse_atom_tokens(lx, sig, opts);
      lx.expect(Tok::RParen, ")");
    } else {
      p.concl = parse_atom_tokens(lx, sig, opts);
    }
    out.premises.push_back(std::move(p));
    if (lx.cur.kind == Tok::Comma) {
      lx.advance();
      continue;
    }
    lx.expect(Tok::FatArrow, "=>");
    break;
  }
  if (lx.accept(Tok::Star)) return out;
  out.concl = parse_atom_tokens(lx, sig, opts);
  return out;
}

// Rules are separated by layout only; a "(" that opens "([" begins a new
// rule rather than an argument list, which the atom parser already respects
// because argument lists never start with "[".
inline void parse_rules_into(Lexer& lx, Signature& sig, ParseOptions opts,
                             std::vector<AtomicRule>& rules,
                             std::vector<TemplateRule>& templates) {
  while (lx.cur.kind != Tok::RBrace && lx.cur.kind != Tok::End) {
    ParsedRule r = parse_rule_tokens(lx, sig, opts);
    if (r.concl)
      rules.push_back(AtomicRule{std::move(r.premises), std::move(*r.concl)});
    else
      templates.push_back(TemplateRule{std::move(r.premises)});
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Public entry points.

inline FormulaRef parse_formula(const std::string& s, Signature& sig,
                                ParseOptions opts = {}) {
  return detail::parse_formula_str(s, sig, opts);
}
inline FormulaRef parse_formula(const std::string& s) {
  Signature sig;
  return parse_formula(s, sig);
}

inline std::vector<FormulaRef> parse_formula_list(const std::string& s,
                                                  Signature& sig,
                                                  ParseOptions opts = {}) {
  std::vector<FormulaRef> out;
  detail::Lexer lx(s);
  if (lx.cur.kind == detail::Tok::End) return out;
  out.push_back(detail::parse_formula_tokens(lx, sig, opts));
  while (lx.accept(detail::Tok::Comma))
    out.push_back(detail::parse_formula_tokens(lx, sig, opts));
  if (lx.cur.kind != detail::Tok::End)
    lx.fail("trailing input after formula list", lx.cur.begin, lx.cur.end);
  return out;
}

inline Base parse_base(const std::string& s, Signature& sig,
                       ParseOptions opts = {}) {
  detail::Lexer lx(s);
  lx.expect_ident("base");
  Base b;
  b.name = lx.expect(detail::Tok::Ident, "a base name").text;
  lx.expect(detail::Tok::LBrace, "{");
  detail::parse_rules_into(lx, sig, opts, b.rules, b.templates);
  lx.expect(detail::Tok::RBrace, "}");
  if (lx.cur.kind != detail::Tok::End)
    lx.fail("trailing input after base", lx.cur.begin, lx.cur.end);
  return b;
}

inline SupportUniverse parse_universe(const std::string& s, Signature& sig,
                                      ParseOptions opts = {}) {
  detail::Lexer lx(s);
  lx.expect_ident("universe");
  SupportUniverse u;
  u.name = lx.expect(detail::Tok::Ident, "a universe name").text;
  u.pool.name = u.name;
  lx.expect(detail::Tok::LBrace, "{");
  while (!lx.accept(detail::Tok::RBrace)) {
    if (lx.accept_ident("rules")) {
      lx.expect(detail::Tok::LBrace, "{");
      detail::parse_rules_into(lx, sig, opts, u.pool.rules,
                               u.pool.templates);
      lx.expect(detail::Tok::RBrace, "}");
    } else if (lx.accept_ident("slice_consts")) {
      lx.expect(detail::Tok::LBrace, "{");
      if (!lx.accept(detail::Tok::RBrace)) {
        for (;;) {
          detail::Token t = lx.expect(detail::Tok::Ident, "a constant");
          if (!opts.allow_reserved && is_reserved_name(t.text))
            lx.fail("reserved name " + t.text, t.begin, t.end);
          u.slice_consts.insert(t.text);
          if (!lx.accept(detail::Tok::Comma)) break;
        }
        lx.expect(detail::Tok::RBrace, "}");
      }
    } else if (lx.accept_ident("slice_preds")) {
      lx.expect(detail::Tok::LBrace, "{");
      if (!lx.accept(detail::Tok::RBrace)) {
        for (;;) {
          detail::Token t = lx.expect(detail::Tok::Ident, "a predicate");
          if (!opts.allow_reserved && is_reserved_name(t.text))
            lx.fail("reserved name " + t.text, t.begin, t.end);
          int ar = 0;
          if (lx.accept(detail::Tok::Colon))
            ar = std::stoi(lx.expect(detail::Tok::Num, "arity").text);
          sig.freeze_pconst(t.text, ar, t.begin, t.end);
          u.slice_preds.emplace(t.text, ar);
          if (!lx.accept(detail::Tok::Comma)) break;
        }
        lx.expect(detail::Tok::RBrace, "}");
      }
    } else if (lx.accept_ident("budget")) {
      u.budget = std::stoi(lx.expect(detail::Tok::Num, "budget").text);
    } else if (lx.accept_ident("policy")) {
      detail::Token t = lx.expect(detail::Tok::Ident, "I or C");
      if (t.text == "I")
        u.policy = BasisPolicy::I;
      else if (t.text == "C")
        u.policy = BasisPolicy::C;
      else
        lx.fail("policy must be I or C", t.begin, t.end);
    } else if (lx.accept_ident("depth")) {
      u.depth = std::stoi(lx.expect(detail::Tok::Num, "depth").text);
    } else {
      lx.fail("unknown universe section", lx.cur.begin, lx.cur.end);
    }
  }
  if (lx.cur.kind != detail::Tok::End)
    lx.fail("trailing input after universe", lx.cur.begin, lx.cur.end);
  return u;
}

inline std::string print_universe(const SupportUniverse& u) {
  std::string s = "universe " + (u.name.empty() ? std::string("u") : u.name) +
                  " {\n  rules {\n";
  for (auto& r : u.pool.rules) s += "    " + print_rule(r) + "\n";
  for (auto& t : u.pool.templates) s += "    " + print_template(t) + "\n";
  s += "  }\n  slice_consts {";
  bool first = true;
  for (auto& c : u.slice_consts) {
    s += first ? " " : ", ";
    s += c;
    first = false;
  }
  s += first ? "}\n" : " }\n";
  s += "  slice_preds {";
  first = true;
  for (auto& [p, ar] : u.slice_preds) {
    s += first ? " " : ", ";
    s += p + ":" + std::to_string(ar);
    first = false;
  }
  s += first ? "}\n" : " }\n";
  s += "  budget " + std::to_string(u.budget) + "\n";
  s += "  policy " + policy_name(u.policy) + "\n";
  s += "  depth " + std::to_string(u.depth) + "\n}\n";
  return s;
}

// --- Hilbert proof scripts ---------------------------------------------------

inline HilbertProof parse_hilbert(const std::string& s, Signature& sig,
                                  ParseOptions opts = {}) {
  detail::Lexer lx(s);
  lx.expect_ident("hilbert");
  HilbertProof p;
  detail::Token sys = lx.expect(detail::Tok::Ident, "HI or HC");
  if (sys.text == "HI")
    p.system = SystemId::HI;
  else if (sys.text == "HC")
    p.system = SystemId::HC;
  else
    lx.fail("system must be HI or HC", sys.begin, sys.end);
  lx.expect_ident("proof");
  lx.expect_ident("of");
  detail::Token concl_tok = lx.expect(detail::Tok::Str, "\"conclusion\"");
  FormulaRef concl = expand(parse_formula(concl_tok.text, sig, opts));
  if (lx.accept_ident("from")) {
    detail::Token hs = lx.expect(detail::Tok::Str, "\"hypotheses\"");
    for (auto& h : parse_formula_list(hs.text, sig, opts))
      p.hyps.push_back(expand(h));
  }

  auto ref_index = [&](const detail::Token& t) -> std::size_t {
    long v = std::stol(t.text);
    if (v < 1 || static_cast<std::size_t>(v) > p.steps.size())
      throw DanglingReference("step " + t.text + " is not an earlier step");
    return static_cast<std::size_t>(v - 1);
  };

  while (lx.cur.kind != detail::Tok::End) {
    detail::Token num = lx.expect(detail::Tok::Num, "a step number");
    if (std::stoul(num.text) != p.steps.size() + 1)
      lx.fail("steps must be numbered consecutively", num.begin, num.end);
    lx.expect(detail::Tok::Dot, ".");
    if (lx.accept_ident("axiom")) {
      detail::Token tag = lx.expect(detail::Tok::Ident, "an axiom tag");
      AxTag at;
      if (tag.text == "K") at = AxTag::K;
      else if (tag.text == "S") at = AxTag::S;
      else if (tag.text == "AllE") at = AxTag::AllE;
      else if (tag.text == "PiE") at = AxTag::PiE;
      else if (tag.text == "NegI") at = AxTag::NegI;
      else if (tag.text == "EFQ") at = AxTag::EFQ;
      else if (tag.text == "DNE") at = AxTag::DNE;
      else { lx.fail("unknown axiom tag " + tag.text, tag.begin, tag.end); }
      detail::Token ft = lx.expect(detail::Tok::Str, "\"instance\"");
      FormulaRef f = expand(parse_formula(ft.text, sig, opts));
      auto ai = match_axiom(at, f);
      if (!ai)
        lx.fail("formula is not an instance of axiom " + tag.text, ft.begin,
                ft.end);
      p.steps.push_back({f, *ai});
    } else if (lx.accept_ident("hyp")) {
      detail::Token ft = lx.expect(detail::Tok::Str, "\"formula\"");
      FormulaRef f = expand(parse_formula(ft.text, sig, opts));
      p.steps.push_back({f, JHyp{}});
    } else if (lx.accept_ident("mp")) {
      detail::Token ti = lx.expect(detail::Tok::Num, "a step number");
      detail::Token tj = lx.expect(detail::Tok::Num, "a step number");
      std::size_t i = ref_index(ti), j = ref_index(tj);
      const FormulaRef& fi = p.steps[i].formula;
      if (fi->kind != Fk::Imp)
        lx.fail("mp major premise is not an implication", ti.begin, ti.end);
      if (!eq(p.steps[j].formula, fi->lhs))
        lx.fail("mp minor premise does not match", tj.begin, tj.end);
      p.steps.push_back({fi->rhs, JMP{i, j}});
    } else if (lx.accept_ident("gen1")) {
      detail::Token ti = lx.expect(detail::Tok::Num, "a step number");
      std::size_t i = ref_index(ti);
      detail::Token v = lx.expect(detail::Tok::Var, "?variable");
      if (detail::upperish(v.text))
        lx.fail("gen1 takes an individual variable", v.begin, v.end);
      const FormulaRef& fi = p.steps[i].formula;
      if (fi->kind != Fk::Imp)
        lx.fail("gen1 premise is not an implication", ti.begin, ti.end);
      p.steps.push_back(
          {f_imp(fi->lhs, f_all(v.text, fi->rhs)), JGen1{i, v.text}});
    } else if (lx.accept_ident("gen2")) {
      detail::Token ti = lx.expect(detail::Tok::Num, "a step number");
      std::size_t i = ref_index(ti);
      detail::Token v = lx.expect(detail::Tok::Var, "?Variable");
      if (!detail::upperish(v.text))
        lx.fail("gen2 takes a predicate variable", v.begin, v.end);
      int ar;
      if (lx.accept(detail::Tok::Colon))
        ar = std::stoi(lx.expect(detail::Tok::Num, "arity").text);
      else {
        auto it = sig.pvars.find(v.text);
        ar = it == sig.pvars.end() ? 0 : it->second;
      }
      sig.freeze_pvar(v.text, ar, v.begin, v.end);
      const FormulaRef& fi = p.steps[i].formula;
      if (fi->kind != Fk::Imp)
        lx.fail("gen2 premise is not an implication", ti.begin, ti.end);
      p.steps.push_back(
          {f_imp(fi->lhs, f_pi(v.text, ar, fi->rhs)), JGen2{i, v.text, ar}});
    } else {
      lx.fail("expected a proof step", lx.cur.begin, lx.cur.end);
    }
  }
  if (p.steps.empty())
    lx.fail("proof has no steps", lx.cur.begin, lx.cur.end);
  if (!eq(p.conclusion(), concl))
    throw ParseError("final step does not prove the declared conclusion",
                     concl_tok.begin, concl_tok.end);
  return p;
}

// --- natural deduction scripts ----------------------------------------------

namespace detail {

inline NDRef parse_nd_node(Lexer& lx, Signature& sig, ParseOptions opts) {
  lx.expect(Tok::LParen, "(");
  Token head = lx.expect(Tok::Ident, "a rule name");
  auto formula_arg = [&]() {
    Token t = lx.expect(Tok::Str, "\"formula\"");
    FormulaRef f;
    try {
      f = expand(parse_formula(t.text, sig, opts));
    } catch (ParseError& e) {
      throw ParseError(std::string(e.what()), t.begin, t.end);
    }
    return f;
  };
  NDRef out;
  if (head.text == "hyp") {
    std::string label;
    if (lx.cur.kind == Tok::Ident) label = lx.take().text;
    out = nd_hyp(label, formula_arg());
  } else if (head.text == "impI") {
    std::string label;
    if (lx.cur.kind == Tok::Ident) label = lx.take().text;
    Token t = lx.expect(Tok::Str, "\"conclusion\"");
    FormulaRef concl = expand(parse_formula(t.text, sig, opts));
    if (concl->kind != Fk::Imp)
      lx.fail("impI conclusion must be an implication", t.begin, t.end);
    NDRef kid = parse_nd_node(lx, sig, opts);
    if (!eq(kid->concl, concl->rhs))
      lx.fail("impI premise does not match the consequent", t.begin, t.end);
    out = nd_impi(label, concl->lhs, kid);
  } else if (head.text == "impE") {
    NDRef maj = parse_nd_node(lx, sig, opts);
    NDRef min = parse_nd_node(lx, sig, opts);
    try {
      out = nd_impe(maj, min);
    } catch (const TransformError& e) {
      lx.fail(e.what(), head.begin, head.end);
    }
  } else if (head.text == "allI") {
    Token v = lx.expect(Tok::Var, "?variable");
    out = nd_alli(v.text, parse_nd_node(lx, sig, opts));
  } else if (head.text == "allE") {
    FormulaParser fp{lx, sig, opts};
    Term t = fp.term();
    NDRef kid = parse_nd_node(lx, sig, opts);
    try {
      out = nd_alle(t, kid);
    } catch (const Error& e) {
      lx.fail(e.what(), head.begin, head.end);
    }
  } else if (head.text == "piI") {
    Token v = lx.expect(Tok::Var, "?Variable");
    int ar;
    if (lx.accept(Tok::Colon))
      ar = std::stoi(lx.expect(Tok::Num, "arity").text);
    else {
      auto it = sig.pvars.find(v.text);
      ar = it == sig.pvars.end() ? 0 : it->second;
    }
    sig.freeze_pvar(v.text, ar, v.begin, v.end);
    out = nd_pii(v.text, ar, parse_nd_node(lx, sig, opts));
  } else if (head.text == "piE") {
    Token w = lx.expect(Tok::Ident, "a predicate constant");
    if (!opts.allow_reserved && is_reserved_name(w.text))
      lx.fail("reserved name " + w.text, w.begin, w.end);
    NDRef kid = parse_nd_node(lx, sig, opts);
    if (kid->concl->kind == Fk::Pi)
      sig.freeze_pconst(w.text, kid->concl->parity, w.begin, w.end);
    try {
      out = nd_pie(w.text, kid);
    } catch (const Error& e) {
      lx.fail(e.what(), head.begin, head.end);
    }
  } else if (head.text == "efq") {
    FormulaRef f = formula_arg();
    out = nd_efq(f, parse_nd_node(lx, sig, opts));
  } else if (head.text == "dne") {
    NDRef kid = parse_nd_node(lx, sig, opts);
    try {
      out = nd_dne(kid);
    } catch (const Error& e) {
      lx.fail(e.what(), head.begin, head.end);
    }
  } else {
    lx.fail("unknown rule " + head.text, head.begin, head.end);
  }
  lx.expect(Tok::RParen, ")");
  return out;
}

}  // namespace detail

inline NDProof parse_nd(const std::string& s, Signature& sig,
                        ParseOptions opts = {}) {
  detail::Lexer lx(s);
  lx.expect_ident("nd");
  NDProof p;
  detail::Token sys = lx.expect(detail::Tok::Ident, "NI or NC");
  if (sys.text == "NI")
    p.system = NDSystem::NI;
  else if (sys.text == "NC")
    p.system = NDSystem::NC;
  else
    lx.fail("system must be NI or NC", sys.begin, sys.end);
  p.root = detail::parse_nd_node(lx, sig, opts);
  if (lx.cur.kind != detail::Tok::End)
    lx.fail("trailing input after proof", lx.cur.begin, lx.cur.end);
  return p;
}

// --- derivation traces --------------------------------------------------------

namespace detail {

struct TraceLine {
  int indent = 0;
  std::set<GroundAtom> hyps;
  GroundAtom goal;
  bool is_ref = false;
  AtomicRule rule;
};

inline TraceRef build_trace_tree(const std::vector<TraceLine>& lines,
                                 std::size_t& i, int indent) {
  if (i >= lines.size() || lines[i].indent != indent)
    throw ParseError("trace indentation does not form a tree", 0, 0);
  const TraceLine& L = lines[i++];
  auto node = std::make_shared<TraceNode>();
  node->hyps = L.hyps;
  node->goal = L.goal;
  node->is_ref = L.is_ref;
  node->rule = L.rule;
  if (!L.is_ref) {
    std::size_t want = L.rule.premises.size();
    for (std::size_t k = 0; k < want; ++k)
      node->kids.push_back(build_trace_tree(lines, i, indent + 1));
  }
  return node;
}

}  // namespace detail

inline TraceRef parse_trace(const std::string& s, Signature& sig,
                            ParseOptions opts = {}) {
  std::vector<detail::TraceLine> lines;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t eol = s.find('\n', pos);
    if (eol == std::string::npos) eol = s.size();
    std::string line = s.substr(pos, eol - pos);
    pos = eol + 1;
    std::size_t sp = 0;
    while (sp < line.size() && line[sp] == ' ') ++sp;
    if (sp >= line.size()) continue;
    detail::TraceLine tl;
    tl.indent = static_cast<int>(sp / 2);
    detail::Lexer lx(line);
    lx.expect(detail::Tok::LBrack, "[");
    if (!lx.accept(detail::Tok::RBrack)) {
      for (;;) {
        tl.hyps.insert(detail::parse_atom_tokens(lx, sig, opts));
        if (!lx.accept(detail::Tok::Comma)) break;
      }
      lx.expect(detail::Tok::RBrack, "]");
    }
    lx.expect(detail::Tok::Turnstile, "|-");
    tl.goal = detail::parse_atom_tokens(lx, sig, opts);
    lx.expect_ident("by");
    if (lx.accept_ident("ref")) {
      tl.is_ref = true;
    } else {
      lx.expect_ident("rule");
      detail::ParsedRule r = detail::parse_rule_tokens(lx, sig, opts);
      if (!r.concl)
        lx.fail("trace rules are concrete", lx.cur.begin, lx.cur.end);
      tl.rule = AtomicRule{std::move(r.premises), std::move(*r.concl)};
    }
    lines.push_back(std::move(tl));
  }
  if (lines.empty()) throw ParseError("empty trace", 0, 0);
  std::size_t i = 0;
  TraceRef t = detail::build_trace_tree(lines, i, 0);
  if (i != lines.size())
    throw ParseError("trailing trace lines outside the tree", 0, 0);
  return t;
}

// --- simulation bases ---------------------------------------------------------

inline SimulationBase parse_simbase(const std::string& s) {
  ParseOptions opts;
  opts.allow_reserved = true;
  Signature sig;
  detail::Lexer lx(s);
  lx.expect_ident("sim");
  detail::Token st = lx.expect(detail::Tok::Ident, "J or K");
  SystemId sys;
  if (st.text == "J")
    sys = SystemId::HI;
  else if (st.text == "K")
    sys = SystemId::HC;
  else {
    lx.fail("simulation base is J or K", st.begin, st.end);
  }

  lx.expect_ident("base");
  Base base;
  base.name = lx.expect(detail::Tok::Ident, "a base name").text;
  lx.expect(detail::Tok::LBrace, "{");
  detail::parse_rules_into(lx, sig, opts, base.rules, base.templates);
  lx.expect(detail::Tok::RBrace, "}");

  struct RawRow {
    std::string tag;
    std::vector<FormulaRef> formulas;
    std::string var;
    int parity = -1;
    Term term{TermKind::Const, ""};
    std::string witness;
  };
  std::vector<RawRow> raw;
  lx.expect_ident("rows");
  lx.expect(detail::Tok::LBrace, "{");
  while (!lx.accept(detail::Tok::RBrace)) {
    RawRow r;
    r.tag = lx.expect(detail::Tok::Ident, "a row tag").text;
    while (lx.cur.kind == detail::Tok::Str)
      r.formulas.push_back(
          expand(parse_formula(lx.take().text, sig, opts)));
    if (lx.cur.kind == detail::Tok::Var) {
      r.var = lx.take().text;
      if (lx.accept(detail::Tok::Colon))
        r.parity = std::stoi(lx.expect(detail::Tok::Num, "arity").text);
      detail::FormulaParser fp{lx, sig, opts};
      if (r.tag == "AllE")
        r.term = fp.term();
      else
        r.witness = lx.expect(detail::Tok::Ident, "a witness symbol").text;
    }
    raw.push_back(std::move(r));
  }

  std::vector<std::pair<GroundAtom, FormulaRef>> entries;
  lx.expect_ident("flatmap");
  lx.expect(detail::Tok::LBrace, "{");
  while (!lx.accept(detail::Tok::RBrace)) {
    GroundAtom a = detail::parse_atom_tokens(lx, sig, opts);
    detail::Token ft = lx.expect(detail::Tok::Str, "\"formula\"");
    entries.emplace_back(a, expand(parse_formula(ft.text, sig, opts)));
  }
  if (lx.cur.kind != detail::Tok::End)
    lx.fail("trailing input after simulation base", lx.cur.begin, lx.cur.end);

  if (raw.size() != base.rules.size())
    throw ParseError("row metadata does not cover the base rules", 0, 0);

  Fragment fr;
  for (auto& [a, f] : entries) fr.harvest(f);
  for (auto& r : raw)
    for (auto& f : r.formulas) fr.harvest(f);
  // reserved names move into the eigen pools
  for (auto it = fr.preds.begin(); it != fr.preds.end();) {
    if (is_reserved_name(it->first) && it->first.rfind("$f", 0) != 0) {
      fr.eigen_preds.emplace(it->first, it->second);
      it = fr.preds.erase(it);
    } else {
      ++it;
    }
  }
  for (auto it = fr.consts.begin(); it != fr.consts.end();) {
    if (is_reserved_name(*it)) {
      fr.eigen_consts.insert(*it);
      it = fr.consts.erase(it);
    } else {
      ++it;
    }
  }
  for (auto& r : raw) {
    if (!r.witness.empty() && is_reserved_name(r.witness)) {
      if (r.tag == "PiI" && !fr.eigen_preds.count(r.witness))
        fr.eigen_preds.emplace(r.witness, r.parity < 0 ? 0 : r.parity);
      if (r.tag == "AllI") fr.eigen_consts.insert(r.witness);
    }
    if (r.tag == "AllE" && r.term.kind == TermKind::Const &&
        is_reserved_name(r.term.name))
      fr.eigen_consts.insert(r.term.name);
  }

  SimulationBase sim(sys, std::move(fr));
  sim.base = std::move(base);
  for (auto& [a, f] : entries) sim.map.adopt(a, f);

  for (std::size_t i = 0; i < raw.size(); ++i) {
    RawRow& r = raw[i];
    SimRule row;
    row.rule = sim.base.rules[i];
    auto need = [&](std::size_t k) -> FormulaRef {
      if (r.formulas.size() <= k)
        throw ParseError("row " + r.tag + " is missing a formula slot", 0, 0);
      return r.formulas[k];
    };
    if (r.tag == "K" || r.tag == "NegI" || r.tag == "EFQ") {
      row.row = r.tag == "K" ? SimRow::AxK
                             : (r.tag == "NegI" ? SimRow::AxNegI
                                                : SimRow::AxEFQ);
      row.ax = r.tag == "K" ? ax_k(need(0), need(1))
                            : (r.tag == "NegI" ? ax_negi(need(0), need(1))
                                               : ax_efq(need(0), need(1)));
    } else if (r.tag == "S") {
      row.row = SimRow::AxS;
      row.ax = ax_s(need(0), need(1), need(2));
    } else if (r.tag == "DNE") {
      row.row = SimRow::AxDNE;
      row.ax = ax_dne(need(0));
    } else if (r.tag == "AllE") {
      row.row = SimRow::AxAllE;
      row.ax = ax_alle(need(0), r.var, r.term);
    } else if (r.tag == "PiE") {
      row.row = SimRow::AxPiE;
      row.ax = ax_pie(need(0), r.var, r.parity < 0 ? 0 : r.parity, r.witness);
    } else if (r.tag == "Mp") {
      row.row = SimRow::Mp;
      row.ant = need(0);
      row.cons = need(1);
    } else if (r.tag == "AllI") {
      row.row = SimRow::AllI;
      row.ant = need(0);
      row.cons = need(1);
      row.var = r.var;
      row.eigen = r.witness;
    } else if (r.tag == "PiI") {
      row.row = SimRow::PiI;
      row.ant = need(0);
      row.cons = need(1);
      row.var = r.var;
      row.eigen = r.witness;
      row.parity = r.parity < 0 ? 0 : r.parity;
    } else {
      throw ParseError("unknown row tag " + r.tag, 0, 0);
    }
    sim.rows.push_back(std::move(row));
  }
  return sim;
}

}  // namespace bes
