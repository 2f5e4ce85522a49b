#pragma once

// Seeded random generators for property tests. All choices go through the
// raw engine output (never uniform_int_distribution) so streams are stable
// across standard libraries.

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "bes/atomic.hpp"
#include "bes/support.hpp"
#include "bes/syntax.hpp"

namespace bes {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int below(int n) {
    return n <= 1 ? 0 : static_cast<int>(rng_() % static_cast<std::uint64_t>(n));
  }
  bool coin(int percent = 50) { return below(100) < percent; }
  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

struct GenFormulaOptions {
  int depth = 3;
  bool allow_free = false;  // free individual/predicate variables in leaves
  bool sugar = true;        // defined connectives alongside the core ones
};

namespace detail {

struct Vocab {
  // fixed arities keep any one sample self-consistent
  static const std::vector<std::pair<std::string, int>>& pconsts() {
    static const std::vector<std::pair<std::string, int>> v = {
        {"A", 0}, {"B", 0}, {"C", 0}, {"D", 0}, {"P", 1}, {"Q", 1}, {"R", 2}};
    return v;
  }
  static const std::vector<std::pair<std::string, int>>& pvars() {
    static const std::vector<std::pair<std::string, int>> v = {
        {"X", 0}, {"Y", 1}, {"Z", 2}, {"W", 0}};
    return v;
  }
  static const std::vector<std::string>& iconsts() {
    static const std::vector<std::string> v = {"a", "b", "c"};
    return v;
  }
  static const std::vector<std::string>& ivars() {
    static const std::vector<std::string> v = {"x", "y", "z", "u", "w"};
    return v;
  }
};

inline Term gen_term(Gen& g, const std::vector<std::string>& bound,
                     bool allow_free) {
  int choices = static_cast<int>(Vocab::iconsts().size());
  int nb = static_cast<int>(bound.size());
  int total = choices + nb + (allow_free ? 2 : 0);
  int k = g.below(total);
  if (k < choices) return t_const(Vocab::iconsts()[k]);
  k -= choices;
  if (k < nb) return t_var(bound[k]);
  k -= nb;
  return t_var(k == 0 ? "x" : "y");  // deliberately free
}

inline FormulaRef gen_formula_rec(Gen& g, const GenFormulaOptions& o, int d,
                                  std::vector<std::string>& iv,
                                  std::vector<std::string>& pv) {
  auto atom = [&]() -> FormulaRef {
    bool use_pvar =
        (!pv.empty() || o.allow_free) && g.coin(pv.empty() ? 15 : 35);
    std::string name;
    int ar;
    bool pvar = false;
    if (use_pvar) {
      pvar = true;
      if (!pv.empty() && (!o.allow_free || g.coin(70))) {
        name = pv[static_cast<std::size_t>(g.below(static_cast<int>(pv.size())))];
      } else {
        name = Vocab::pvars()[static_cast<std::size_t>(
                                  g.below(static_cast<int>(Vocab::pvars().size())))]
                   .first;
      }
      ar = 0;
      for (auto& [n, a] : Vocab::pvars())
        if (n == name) ar = a;
    } else {
      auto& pc = Vocab::pconsts()[static_cast<std::size_t>(
          g.below(static_cast<int>(Vocab::pconsts().size())))];
      name = pc.first;
      ar = pc.second;
    }
    std::vector<Term> args;
    for (int i = 0; i < ar; ++i) args.push_back(gen_term(g, iv, o.allow_free));
    if (pvar) return f_pvar_atom(name, ar, std::move(args));
    return f_atom(PredSym{PredKind::Const, name, ar}, std::move(args));
  };

  if (d <= 0 || g.coin(20)) {
    if (o.sugar && g.coin(10)) return f_bot();
    return atom();
  }
  int n_kinds = o.sugar ? 8 : 3;
  switch (g.below(n_kinds)) {
    case 0: {
      FormulaRef l = gen_formula_rec(g, o, d - 1, iv, pv);
      FormulaRef r = gen_formula_rec(g, o, d - 1, iv, pv);
      return f_imp(l, r);
    }
    case 1: {
      std::string x = Vocab::ivars()[static_cast<std::size_t>(
          g.below(static_cast<int>(Vocab::ivars().size())))];
      iv.push_back(x);
      FormulaRef b = gen_formula_rec(g, o, d - 1, iv, pv);
      iv.pop_back();
      return f_all(x, b);
    }
    case 2: {
      auto& [X, ar] = Vocab::pvars()[static_cast<std::size_t>(
          g.below(static_cast<int>(Vocab::pvars().size())))];
      pv.push_back(X);
      FormulaRef b = gen_formula_rec(g, o, d - 1, iv, pv);
      pv.pop_back();
      return f_pi(X, ar, b);
    }
    case 3:
      return f_not(gen_formula_rec(g, o, d - 1, iv, pv));
    case 4: {
      FormulaRef l = gen_formula_rec(g, o, d - 1, iv, pv);
      FormulaRef r = gen_formula_rec(g, o, d - 1, iv, pv);
      return f_and(l, r);
    }
    case 5: {
      FormulaRef l = gen_formula_rec(g, o, d - 1, iv, pv);
      FormulaRef r = gen_formula_rec(g, o, d - 1, iv, pv);
      return f_or(l, r);
    }
    case 6: {
      std::string x = Vocab::ivars()[static_cast<std::size_t>(
          g.below(static_cast<int>(Vocab::ivars().size())))];
      iv.push_back(x);
      FormulaRef b = gen_formula_rec(g, o, d - 1, iv, pv);
      iv.pop_back();
      return f_ex(x, b);
    }
    default: {
      auto& [X, ar] = Vocab::pvars()[static_cast<std::size_t>(
          g.below(static_cast<int>(Vocab::pvars().size())))];
      pv.push_back(X);
      FormulaRef b = gen_formula_rec(g, o, d - 1, iv, pv);
      pv.pop_back();
      return f_ex2(X, ar, b);
    }
  }
}

}  // namespace detail

inline FormulaRef gen_formula(Gen& g, const GenFormulaOptions& o = {}) {
  std::vector<std::string> iv, pv;
  return detail::gen_formula_rec(g, o, o.depth, iv, pv);
}

// --- random atomic bases -----------------------------------------------------

struct GenBaseOptions {
  int max_rules = 8;
  int max_level = 2;  // 1: definite clauses only, 2: allow hypothetical premises
};

namespace detail {

inline std::vector<GroundAtom> atom_pool() {
  std::vector<GroundAtom> pool;
  for (const char* p : {"A", "B", "C", "D"}) pool.push_back({p, {}});
  for (const char* p : {"P", "Q"})
    for (const char* c : {"a", "b"})
      pool.push_back({p, {std::string(c)}});
  return pool;
}

}  // namespace detail

inline Base gen_base(Gen& g, const GenBaseOptions& o = {}) {
  const std::vector<GroundAtom> pool = detail::atom_pool();
  auto pick = [&]() {
    return pool[static_cast<std::size_t>(g.below(static_cast<int>(pool.size())))];
  };
  Base b;
  b.name = "b";
  int n = 1 + g.below(o.max_rules);
  for (int i = 0; i < n; ++i) {
    AtomicRule r;
    r.concl = pick();
    int np = g.below(4);  // 0..3 premises
    for (int j = 0; j < np; ++j) {
      Premise p;
      if (o.max_level >= 2 && g.coin(30)) {
        int nh = 1 + g.below(2);
        for (int k = 0; k < nh; ++k) p.hyps.insert(pick());
      }
      p.concl = pick();
      r.premises.push_back(std::move(p));
    }
    b.rules.push_back(std::move(r));
  }
  b.normalize();
  return b;
}

// --- random support universes --------------------------------------------------

// Kept deliberately small: the support evaluator enumerates base extensions,
// so every extra admissible rule doubles its work.
inline SupportUniverse gen_universe(Gen& g, BasisPolicy policy) {
  const std::vector<GroundAtom> pool = {
      {"A", {}}, {"B", {}}, {"C", {}}, {"P", {"a"}}};
  auto pick = [&]() {
    return pool[static_cast<std::size_t>(g.below(static_cast<int>(pool.size())))];
  };
  SupportUniverse u;
  u.name = "u";
  u.pool.name = "u";
  int n = 1 + g.below(3);
  for (int i = 0; i < n; ++i) {
    AtomicRule r;
    r.concl = pick();
    int np = g.below(3);  // 0..2 premises
    for (int j = 0; j < np; ++j) {
      Premise p;
      if (policy == BasisPolicy::I && g.coin(25)) p.hyps.insert(pick());
      p.concl = pick();
      r.premises.push_back(std::move(p));
    }
    u.pool.rules.push_back(std::move(r));
  }
  u.pool.normalize();
  if (g.coin(25)) {
    TemplateRule t;
    Premise p;
    p.concl = pick();
    t.premises.push_back(std::move(p));
    u.pool.templates.push_back(std::move(t));
  }
  u.slice_consts = {"a"};
  u.slice_preds = {{"A", 0}, {"B", 0}, {"C", 0}, {"P", 1}};
  u.budget = 1;
  u.policy = policy;
  u.depth = 8;
  return u;
}

// Small closed operand over the universe vocabulary; `fv` optionally allows
// one distinguished free variable for quantified operands.
namespace detail {

inline FormulaRef gen_operand(Gen& g, const std::string& fv = "") {
  auto leaf = [&]() -> FormulaRef {
    int k = g.below(fv.empty() ? 4 : 5);
    switch (k) {
      case 0: return f_atom0("A");
      case 1: return f_atom0("B");
      case 2: return f_atom0("C");
      case 3:
        return f_atom(PredSym{PredKind::Const, "P", 1}, {t_const("a")});
      default: return f_atom(PredSym{PredKind::Const, "P", 1}, {t_var(fv)});
    }
  };
  FormulaRef f = leaf();
  if (g.coin(35)) f = f_imp(leaf(), f);
  return f;
}

}  // namespace detail

// A defined-connective query: the sugar node itself plus its tag.
inline std::pair<DefinedConn, FormulaRef> gen_defined_query(Gen& g) {
  switch (g.below(5)) {
    case 0: return {DefinedConn::Bot, f_bot()};
    case 1:
      return {DefinedConn::And,
              f_and(detail::gen_operand(g), detail::gen_operand(g))};
    case 2:
      return {DefinedConn::Or,
              f_or(detail::gen_operand(g), detail::gen_operand(g))};
    case 3: return {DefinedConn::Ex, f_ex("x", detail::gen_operand(g, "x"))};
    default: {
      FormulaRef body =
          g.coin() ? f_imp(f_pvar_atom("X", 0), detail::gen_operand(g))
                   : f_imp(detail::gen_operand(g), f_pvar_atom("X", 0));
      return {DefinedConn::Ex2, f_ex2("X", 0, body)};
    }
  }
}

}  // namespace bes
