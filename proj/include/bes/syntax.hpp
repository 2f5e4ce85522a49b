#pragma once

// Second-order formulas over a first-order term language: atoms, implication,
// first-order universal quantification, and universal quantification over
// n-ary predicate variables. Conjunction, disjunction, negation, absurdity and
// the two existentials are kept as sugar nodes until expand() is called.

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bes/errors.hpp"

namespace bes {

// Names starting with '$' are reserved (eigen constants $e<n>, eigen
// predicates $E<n>, flattening atoms $f<n>); the parser only accepts them
// when explicitly allowed.
inline bool is_reserved_name(const std::string& n) {
  return !n.empty() && n[0] == '$';
}

enum class TermKind { Const, Var };

struct Term {
  TermKind kind;
  std::string name;  // variables stored without the '?' sigil

  bool operator==(const Term& o) const {
    return kind == o.kind && name == o.name;
  }
  bool operator!=(const Term& o) const { return !(*this == o); }
  bool operator<(const Term& o) const {
    if (kind != o.kind) return kind < o.kind;
    return name < o.name;
  }
};

inline Term t_const(std::string n) { return {TermKind::Const, std::move(n)}; }
inline Term t_var(std::string n) { return {TermKind::Var, std::move(n)}; }

enum class PredKind { Const, Var };

struct PredSym {
  PredKind kind;
  std::string name;
  int arity = 0;

  bool operator==(const PredSym& o) const {
    return kind == o.kind && name == o.name && arity == o.arity;
  }
  bool operator!=(const PredSym& o) const { return !(*this == o); }
};

enum class Fk { Atom, Imp, All, Pi, Bot, Not, And, Or, Ex, Ex2 };

class Formula;
using FormulaRef = std::shared_ptr<const Formula>;

class Formula {
 public:
  Fk kind;
  PredSym pred;            // Atom
  std::vector<Term> args;  // Atom
  FormulaRef lhs, rhs;     // Imp/And/Or: both; Not: lhs; quantifiers: lhs=body
  std::string var;         // All/Ex: individual var; Pi/Ex2: predicate var
  int parity = 0;          // Pi/Ex2: bound predicate arity
  std::size_t hash = 0;

  Formula() = default;
};

namespace detail {
inline void hcomb(std::size_t& h, std::size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
}
inline std::size_t hstr(const std::string& s) {
  return std::hash<std::string>{}(s);
}
}  // namespace detail

inline FormulaRef f_atom(PredSym p, std::vector<Term> ts) {
  if ((int)ts.size() != p.arity)
    throw ArityMismatch("atom " + p.name + " built with " +
                        std::to_string(ts.size()) + " args, arity " +
                        std::to_string(p.arity));
  auto f = std::make_shared<Formula>();
  f->kind = Fk::Atom;
  f->pred = std::move(p);
  f->args = std::move(ts);
  std::size_t h = 17;
  detail::hcomb(h, (std::size_t)Fk::Atom);
  detail::hcomb(h, (std::size_t)f->pred.kind);
  detail::hcomb(h, detail::hstr(f->pred.name));
  for (auto& t : f->args) {
    detail::hcomb(h, (std::size_t)t.kind);
    detail::hcomb(h, detail::hstr(t.name));
  }
  f->hash = h;
  return f;
}

inline FormulaRef f_atom0(const std::string& pconst) {
  return f_atom({PredKind::Const, pconst, 0}, {});
}

inline FormulaRef f_pvar_atom(const std::string& pvar, int arity,
                              std::vector<Term> ts = {}) {
  return f_atom({PredKind::Var, pvar, arity}, std::move(ts));
}

namespace detail {
inline FormulaRef node2(Fk k, FormulaRef a, FormulaRef b) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->lhs = std::move(a);
  f->rhs = std::move(b);
  std::size_t h = 23;
  hcomb(h, (std::size_t)k);
  hcomb(h, f->lhs->hash);
  if (f->rhs) hcomb(h, f->rhs->hash);
  f->hash = h;
  return f;
}
inline FormulaRef quant(Fk k, std::string v, int arity, FormulaRef body) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->var = std::move(v);
  f->parity = arity;
  f->lhs = std::move(body);
  std::size_t h = 29;
  hcomb(h, (std::size_t)k);
  hcomb(h, hstr(f->var));
  hcomb(h, (std::size_t)arity);
  hcomb(h, f->lhs->hash);
  f->hash = h;
  return f;
}
}  // namespace detail

inline FormulaRef f_imp(FormulaRef a, FormulaRef b) {
  return detail::node2(Fk::Imp, std::move(a), std::move(b));
}
inline FormulaRef f_and(FormulaRef a, FormulaRef b) {
  return detail::node2(Fk::And, std::move(a), std::move(b));
}
inline FormulaRef f_or(FormulaRef a, FormulaRef b) {
  return detail::node2(Fk::Or, std::move(a), std::move(b));
}
inline FormulaRef f_not(FormulaRef a) {
  return detail::node2(Fk::Not, std::move(a), nullptr);
}
inline FormulaRef f_bot() {
  auto f = std::make_shared<Formula>();
  f->kind = Fk::Bot;
  f->hash = 31;
  return f;
}
inline FormulaRef f_all(std::string x, FormulaRef body) {
  return detail::quant(Fk::All, std::move(x), 0, std::move(body));
}
inline FormulaRef f_ex(std::string x, FormulaRef body) {
  return detail::quant(Fk::Ex, std::move(x), 0, std::move(body));
}
inline FormulaRef f_pi(std::string X, int arity, FormulaRef body) {
  return detail::quant(Fk::Pi, std::move(X), arity, std::move(body));
}
inline FormulaRef f_ex2(std::string X, int arity, FormulaRef body) {
  return detail::quant(Fk::Ex2, std::move(X), arity, std::move(body));
}

inline bool eq(const FormulaRef& a, const FormulaRef& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->hash != b->hash || a->kind != b->kind) return false;
  switch (a->kind) {
    case Fk::Atom:
      return a->pred == b->pred && a->args == b->args;
    case Fk::Bot:
      return true;
    case Fk::Not:
      return eq(a->lhs, b->lhs);
    case Fk::Imp:
    case Fk::And:
    case Fk::Or:
      return eq(a->lhs, b->lhs) && eq(a->rhs, b->rhs);
    case Fk::All:
    case Fk::Ex:
    case Fk::Pi:
    case Fk::Ex2:
      return a->var == b->var && a->parity == b->parity && eq(a->lhs, b->lhs);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Printing. Canonical and reparseable: parse(print(f)) == f, except that the
// canonical second-order bottom displays as "bot" and reparses as the sugar
// node (expand restores it). Nested implications keep their parentheses.

namespace detail {
inline int prec(const Formula& f) {
  switch (f.kind) {
    case Fk::All:
    case Fk::Ex:
    case Fk::Pi:
    case Fk::Ex2:
      return 0;
    case Fk::Imp:
      return 1;
    case Fk::Or:
      return 2;
    case Fk::And:
      return 3;
    case Fk::Not:
      return 4;
    default:
      return 5;
  }
}
}  // namespace detail

inline std::string print_term(const Term& t) {
  return t.kind == TermKind::Var ? "?" + t.name : t.name;
}

inline void print_formula_to(const Formula& f, int min_prec, std::string& out) {
  bool paren = detail::prec(f) < min_prec;
  if (paren) out += '(';
  switch (f.kind) {
    case Fk::Atom: {
      if (f.pred.kind == PredKind::Var) out += '?';
      out += f.pred.name;
      if (!f.args.empty()) {
        out += '(';
        for (std::size_t i = 0; i < f.args.size(); ++i) {
          if (i) out += ", ";
          out += print_term(f.args[i]);
        }
        out += ')';
      }
      break;
    }
    case Fk::Bot:
      out += "bot";
      break;
    case Fk::Not:
      out += '~';
      print_formula_to(*f.lhs, 4, out);
      break;
    case Fk::Imp:
      print_formula_to(*f.lhs, 2, out);
      out += " -> ";
      print_formula_to(*f.rhs, 2, out);
      break;
    case Fk::Or:
      print_formula_to(*f.lhs, 2, out);
      out += " | ";
      print_formula_to(*f.rhs, 3, out);
      break;
    case Fk::And:
      print_formula_to(*f.lhs, 3, out);
      out += " & ";
      print_formula_to(*f.rhs, 4, out);
      break;
    case Fk::All:
      out += "all ?" + f.var + ". ";
      print_formula_to(*f.lhs, 0, out);
      break;
    case Fk::Ex:
      out += "ex ?" + f.var + ". ";
      print_formula_to(*f.lhs, 0, out);
      break;
    case Fk::Pi:
      // the canonical second-order bottom displays under its own name
      if (f.parity == 0 && f.var == "X0" && f.lhs->kind == Fk::Atom &&
          f.lhs->pred.kind == PredKind::Var && f.lhs->pred.name == "X0") {
        if (paren) out.pop_back();
        out += "bot";
        return;
      }
      out += "ALL ?" + f.var + ":" + std::to_string(f.parity) + ". ";
      print_formula_to(*f.lhs, 0, out);
      break;
    case Fk::Ex2:
      out += "EX ?" + f.var + ":" + std::to_string(f.parity) + ". ";
      print_formula_to(*f.lhs, 0, out);
      break;
  }
  if (paren) out += ')';
}

inline std::string print_formula(const FormulaRef& f) {
  std::string out;
  print_formula_to(*f, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Free variables and symbol collection.

namespace detail {
template <class F>
void walk(const Formula& f, const F& fn) {
  fn(f);
  if (f.lhs) walk(*f.lhs, fn);
  if (f.rhs) walk(*f.rhs, fn);
}
}  // namespace detail

inline void free_ivars_into(const Formula& f, std::set<std::string>& bound,
                            std::set<std::string>& out) {
  switch (f.kind) {
    case Fk::Atom:
      for (auto& t : f.args)
        if (t.kind == TermKind::Var && !bound.count(t.name)) out.insert(t.name);
      break;
    case Fk::All:
    case Fk::Ex: {
      bool fresh = bound.insert(f.var).second;
      free_ivars_into(*f.lhs, bound, out);
      if (fresh) bound.erase(f.var);
      break;
    }
    default:
      if (f.lhs) free_ivars_into(*f.lhs, bound, out);
      if (f.rhs) free_ivars_into(*f.rhs, bound, out);
  }
}

inline std::set<std::string> free_ivars(const FormulaRef& f) {
  std::set<std::string> bound, out;
  free_ivars_into(*f, bound, out);
  return out;
}

inline void free_pvars_into(const Formula& f, std::set<std::string>& bound,
                            std::map<std::string, int>& out) {
  switch (f.kind) {
    case Fk::Atom:
      if (f.pred.kind == PredKind::Var && !bound.count(f.pred.name))
        out[f.pred.name] = f.pred.arity;
      break;
    case Fk::Pi:
    case Fk::Ex2: {
      bool fresh = bound.insert(f.var).second;
      free_pvars_into(*f.lhs, bound, out);
      if (fresh) bound.erase(f.var);
      break;
    }
    default:
      if (f.lhs) free_pvars_into(*f.lhs, bound, out);
      if (f.rhs) free_pvars_into(*f.rhs, bound, out);
  }
}

// Free predicate variables with their arities.
inline std::map<std::string, int> free_pvars(const FormulaRef& f) {
  std::set<std::string> bound;
  std::map<std::string, int> out;
  free_pvars_into(*f, bound, out);
  return out;
}

inline std::set<std::string> all_iconsts(const FormulaRef& f) {
  std::set<std::string> out;
  detail::walk(*f, [&](const Formula& g) {
    if (g.kind == Fk::Atom)
      for (auto& t : g.args)
        if (t.kind == TermKind::Const) out.insert(t.name);
  });
  return out;
}

inline std::map<std::string, int> all_pconsts(const FormulaRef& f) {
  std::map<std::string, int> out;
  detail::walk(*f, [&](const Formula& g) {
    if (g.kind == Fk::Atom && g.pred.kind == PredKind::Const)
      out[g.pred.name] = g.pred.arity;
  });
  return out;
}

// Every predicate-variable name in f, bound or free (used to pick fresh ones).
inline std::set<std::string> all_pvar_names(const FormulaRef& f) {
  std::set<std::string> out;
  detail::walk(*f, [&](const Formula& g) {
    if (g.kind == Fk::Atom && g.pred.kind == PredKind::Var)
      out.insert(g.pred.name);
    if (g.kind == Fk::Pi || g.kind == Fk::Ex2) out.insert(g.var);
  });
  return out;
}

inline std::set<std::string> all_ivar_names(const FormulaRef& f) {
  std::set<std::string> out;
  detail::walk(*f, [&](const Formula& g) {
    if (g.kind == Fk::Atom)
      for (auto& t : g.args)
        if (t.kind == TermKind::Var) out.insert(t.name);
    if (g.kind == Fk::All || g.kind == Fk::Ex) out.insert(g.var);
  });
  return out;
}

inline bool occurs_iconst(const FormulaRef& f, const std::string& c) {
  bool hit = false;
  detail::walk(*f, [&](const Formula& g) {
    if (g.kind == Fk::Atom)
      for (auto& t : g.args)
        if (t.kind == TermKind::Const && t.name == c) hit = true;
  });
  return hit;
}

inline bool occurs_pconst(const FormulaRef& f, const std::string& p) {
  bool hit = false;
  detail::walk(*f, [&](const Formula& g) {
    if (g.kind == Fk::Atom && g.pred.kind == PredKind::Const &&
        g.pred.name == p)
      hit = true;
  });
  return hit;
}

// Upper bound on quantifier nesting after expansion; sizes eigen pools.
inline int quant_depth(const FormulaRef& f) {
  switch (f->kind) {
    case Fk::Atom:
      return 0;
    case Fk::Bot:
      return 1;
    case Fk::All:
    case Fk::Pi:
      return 1 + quant_depth(f->lhs);
    case Fk::Ex:
    case Fk::Ex2:
      return 2 + quant_depth(f->lhs);
    case Fk::Not:
      return 1 + quant_depth(f->lhs);  // body -> bot, bot adds one Pi
    default: {
      int a = f->lhs ? quant_depth(f->lhs) : 0;
      int b = f->rhs ? quant_depth(f->rhs) : 0;
      // And adds one Pi around its operands, Or two.
      int self = (f->kind == Fk::Imp) ? 0 : 2;
      return self + (a > b ? a : b);
    }
  }
}

// ---------------------------------------------------------------------------
// Substitution.

// f[x := t]. Replaces free occurrences of the individual variable x by the
// term t. When t is a variable that would be captured by a binder, throws
// CaptureError (constants are never captured).
inline FormulaRef subst_ind(const FormulaRef& f, const std::string& x,
                            const Term& t) {
  switch (f->kind) {
    case Fk::Atom: {
      bool touched = false;
      for (auto& a : f->args)
        if (a.kind == TermKind::Var && a.name == x) touched = true;
      if (!touched) return f;
      std::vector<Term> args = f->args;
      for (auto& a : args)
        if (a.kind == TermKind::Var && a.name == x) a = t;
      return f_atom(f->pred, std::move(args));
    }
    case Fk::Bot:
      return f;
    case Fk::All:
    case Fk::Ex: {
      if (f->var == x) return f;  // bound, no free occurrences below
      if (t.kind == TermKind::Var && t.name == f->var &&
          free_ivars(f->lhs).count(x))
        throw CaptureError("substituting ?" + t.name + " for ?" + x +
                           " would be captured by a binder");
      auto body = subst_ind(f->lhs, x, t);
      if (body.get() == f->lhs.get()) return f;
      return detail::quant(f->kind, f->var, 0, std::move(body));
    }
    case Fk::Pi:
    case Fk::Ex2: {
      auto body = subst_ind(f->lhs, x, t);
      if (body.get() == f->lhs.get()) return f;
      return detail::quant(f->kind, f->var, f->parity, std::move(body));
    }
    case Fk::Not: {
      auto a = subst_ind(f->lhs, x, t);
      if (a.get() == f->lhs.get()) return f;
      return f_not(std::move(a));
    }
    default: {
      auto a = subst_ind(f->lhs, x, t);
      auto b = subst_ind(f->rhs, x, t);
      if (a.get() == f->lhs.get() && b.get() == f->rhs.get()) return f;
      return detail::node2(f->kind, std::move(a), std::move(b));
    }
  }
}

// f[X := P]. Replaces free occurrences of the n-ary predicate variable X by
// the predicate constant P (same arity; ArityMismatch otherwise).
inline FormulaRef subst_pred(const FormulaRef& f, const std::string& X,
                             int arity, const std::string& P) {
  switch (f->kind) {
    case Fk::Atom: {
      if (f->pred.kind != PredKind::Var || f->pred.name != X) return f;
      if (f->pred.arity != arity)
        throw ArityMismatch("?" + X + " occurs with arity " +
                            std::to_string(f->pred.arity) + ", substituting " +
                            "arity " + std::to_string(arity));
      return f_atom({PredKind::Const, P, arity}, f->args);
    }
    case Fk::Bot:
      return f;
    case Fk::Pi:
    case Fk::Ex2: {
      if (f->var == X) return f;
      auto body = subst_pred(f->lhs, X, arity, P);
      if (body.get() == f->lhs.get()) return f;
      return detail::quant(f->kind, f->var, f->parity, std::move(body));
    }
    case Fk::All:
    case Fk::Ex: {
      auto body = subst_pred(f->lhs, X, arity, P);
      if (body.get() == f->lhs.get()) return f;
      return detail::quant(f->kind, f->var, 0, std::move(body));
    }
    case Fk::Not: {
      auto a = subst_pred(f->lhs, X, arity, P);
      if (a.get() == f->lhs.get()) return f;
      return f_not(std::move(a));
    }
    default: {
      auto a = subst_pred(f->lhs, X, arity, P);
      auto b = subst_pred(f->rhs, X, arity, P);
      if (a.get() == f->lhs.get() && b.get() == f->rhs.get()) return f;
      return detail::node2(f->kind, std::move(a), std::move(b));
    }
  }
}

// f[c := x], the reverse renaming of an individual constant to a variable.
// Throws CaptureError if an occurrence of c sits under a binder of x.
inline FormulaRef rename_iconst(const FormulaRef& f, const std::string& c,
                                const std::string& x) {
  switch (f->kind) {
    case Fk::Atom: {
      bool touched = false;
      for (auto& a : f->args)
        if (a.kind == TermKind::Const && a.name == c) touched = true;
      if (!touched) return f;
      std::vector<Term> args = f->args;
      for (auto& a : args)
        if (a.kind == TermKind::Const && a.name == c) a = t_var(x);
      return f_atom(f->pred, std::move(args));
    }
    case Fk::Bot:
      return f;
    case Fk::All:
    case Fk::Ex: {
      if (f->var == x && occurs_iconst(f->lhs, c))
        throw CaptureError("renaming " + c + " to ?" + x +
                           " would be captured");
      auto body = rename_iconst(f->lhs, c, x);
      if (body.get() == f->lhs.get()) return f;
      return detail::quant(f->kind, f->var, 0, std::move(body));
    }
    case Fk::Pi:
    case Fk::Ex2: {
      auto body = rename_iconst(f->lhs, c, x);
      if (body.get() == f->lhs.get()) return f;
      return detail::quant(f->kind, f->var, f->parity, std::move(body));
    }
    case Fk::Not: {
      auto a = rename_iconst(f->lhs, c, x);
      if (a.get() == f->lhs.get()) return f;
      return f_not(std::move(a));
    }
    default: {
      auto a = rename_iconst(f->lhs, c, x);
      auto b = rename_iconst(f->rhs, c, x);
      if (a.get() == f->lhs.get() && b.get() == f->rhs.get()) return f;
      return detail::node2(f->kind, std::move(a), std::move(b));
    }
  }
}

// f[E := X], reverse renaming of a predicate constant to a predicate variable.
inline FormulaRef rename_pconst(const FormulaRef& f, const std::string& E,
                                const std::string& X) {
  switch (f->kind) {
    case Fk::Atom: {
      if (f->pred.kind != PredKind::Const || f->pred.name != E) return f;
      return f_atom({PredKind::Var, X, f->pred.arity}, f->args);
    }
    case Fk::Bot:
      return f;
    case Fk::Pi:
    case Fk::Ex2: {
      if (f->var == X && occurs_pconst(f->lhs, E))
        throw CaptureError("renaming " + E + " to ?" + X +
                           " would be captured");
      auto body = rename_pconst(f->lhs, E, X);
      if (body.get() == f->lhs.get()) return f;
      return detail::quant(f->kind, f->var, f->parity, std::move(body));
    }
    case Fk::All:
    case Fk::Ex: {
      auto body = rename_pconst(f->lhs, E, X);
      if (body.get() == f->lhs.get()) return f;
      return detail::quant(f->kind, f->var, 0, std::move(body));
    }
    case Fk::Not: {
      auto a = rename_pconst(f->lhs, E, X);
      if (a.get() == f->lhs.get()) return f;
      return f_not(std::move(a));
    }
    default: {
      auto a = rename_pconst(f->lhs, E, X);
      auto b = rename_pconst(f->rhs, E, X);
      if (a.get() == f->lhs.get() && b.get() == f->rhs.get()) return f;
      return detail::node2(f->kind, std::move(a), std::move(b));
    }
  }
}

// ---------------------------------------------------------------------------
// Sugar expansion.

struct ExpandOptions {
  // The primary first-order existential is Pi X ((all x body -> X) -> X).
  // With this flag the conventional Pi X (all x (body -> X) -> X) is produced
  // instead; likewise for the second-order existential.
  bool conventional_exists = false;
};

namespace detail {
// First ?X0, ?X1, ... whose name does not occur (bound or free) in any
// operand; avoiding bound names keeps arities of a name consistent inside one
// formula.
inline std::string fresh_pvar(const std::vector<FormulaRef>& operands,
                              const std::set<std::string>& extra = {}) {
  std::set<std::string> used = extra;
  for (auto& f : operands)
    for (auto& n : all_pvar_names(f)) used.insert(n);
  for (int i = 0;; ++i) {
    std::string cand = "X" + std::to_string(i);
    if (!used.count(cand)) return cand;
  }
}
}  // namespace detail

inline FormulaRef expand(const FormulaRef& f, ExpandOptions opt = {});

namespace detail {
inline FormulaRef expand_and(FormulaRef a, FormulaRef b) {
  std::string X = fresh_pvar({a, b});
  auto x = f_pvar_atom(X, 0);
  return f_pi(X, 0, f_imp(f_imp(a, f_imp(b, x)), x));
}
}  // namespace detail

inline FormulaRef expand(const FormulaRef& f, ExpandOptions opt) {
  switch (f->kind) {
    case Fk::Atom:
      return f;
    case Fk::Bot:
      return f_pi("X0", 0, f_pvar_atom("X0", 0));
    case Fk::Imp: {
      auto a = expand(f->lhs, opt), b = expand(f->rhs, opt);
      if (a.get() == f->lhs.get() && b.get() == f->rhs.get()) return f;
      return f_imp(std::move(a), std::move(b));
    }
    case Fk::All: {
      auto body = expand(f->lhs, opt);
      if (body.get() == f->lhs.get()) return f;
      return f_all(f->var, std::move(body));
    }
    case Fk::Pi: {
      auto body = expand(f->lhs, opt);
      if (body.get() == f->lhs.get()) return f;
      return f_pi(f->var, f->parity, std::move(body));
    }
    case Fk::Not:
      return f_imp(expand(f->lhs, opt), expand(f_bot(), opt));
    case Fk::And:
      return detail::expand_and(expand(f->lhs, opt), expand(f->rhs, opt));
    case Fk::Or: {
      auto a = expand(f->lhs, opt), b = expand(f->rhs, opt);
      std::string X = detail::fresh_pvar({a, b});
      auto x = f_pvar_atom(X, 0);
      auto inner = detail::expand_and(f_imp(a, x), f_imp(b, x));
      return f_pi(X, 0, f_imp(std::move(inner), x));
    }
    case Fk::Ex: {
      auto a = expand(f->lhs, opt);
      std::string X = detail::fresh_pvar({a});
      auto x = f_pvar_atom(X, 0);
      if (opt.conventional_exists)
        return f_pi(X, 0, f_imp(f_all(f->var, f_imp(a, x)), x));
      return f_pi(X, 0, f_imp(f_imp(f_all(f->var, a), x), x));
    }
    case Fk::Ex2: {
      auto a = expand(f->lhs, opt);
      std::string Y = detail::fresh_pvar({a}, {f->var});
      auto y = f_pvar_atom(Y, 0);
      if (opt.conventional_exists)
        return f_pi(Y, 0,
                    f_imp(f_pi(f->var, f->parity, f_imp(a, y)), y));
      return f_pi(Y, 0, f_imp(f_imp(f_pi(f->var, f->parity, a), y), y));
    }
  }
  return f;
}

inline bool is_core(const FormulaRef& f) {
  switch (f->kind) {
    case Fk::Atom:
      return true;
    case Fk::Imp:
      return is_core(f->lhs) && is_core(f->rhs);
    case Fk::All:
    case Fk::Pi:
      return is_core(f->lhs);
    default:
      return false;
  }
}

// bot fully expanded; the canonical false formula used by checkers.
inline FormulaRef bot_core() { return expand(f_bot()); }

// top := bot -> bot, a closed theorem; used as a vacuous antecedent.
inline FormulaRef top_core() { return f_imp(bot_core(), bot_core()); }

// ---------------------------------------------------------------------------
// Schema matching helpers: find the unique t (resp. P) with pattern[x:=t]
// == instance, if any.

namespace detail {
inline bool scan_term_diff(const Formula& pat, const Formula& ins,
                           const std::string& x, bool shadowed,
                           std::optional<Term>& cand) {
  if (pat.kind != ins.kind) return false;
  switch (pat.kind) {
    case Fk::Atom: {
      if (pat.pred != ins.pred || pat.args.size() != ins.args.size())
        return false;
      for (std::size_t i = 0; i < pat.args.size(); ++i) {
        const Term& a = pat.args[i];
        const Term& b = ins.args[i];
        if (!shadowed && a.kind == TermKind::Var && a.name == x) {
          if (cand && !(*cand == b)) return false;
          cand = b;
        } else if (a != b) {
          return false;
        }
      }
      return true;
    }
    case Fk::Bot:
      return true;
    case Fk::All:
    case Fk::Ex:
      if (pat.var != ins.var) return false;
      return scan_term_diff(*pat.lhs, *ins.lhs, x,
                            shadowed || pat.var == x, cand);
    case Fk::Pi:
    case Fk::Ex2:
      if (pat.var != ins.var || pat.parity != ins.parity) return false;
      return scan_term_diff(*pat.lhs, *ins.lhs, x, shadowed, cand);
    case Fk::Not:
      return scan_term_diff(*pat.lhs, *ins.lhs, x, shadowed, cand);
    default:
      return scan_term_diff(*pat.lhs, *ins.lhs, x, shadowed, cand) &&
             scan_term_diff(*pat.rhs, *ins.rhs, x, shadowed, cand);
  }
}
}  // namespace detail

inline std::optional<Term> find_subst_term(const FormulaRef& pattern,
                                           const FormulaRef& instance,
                                           const std::string& x) {
  std::optional<Term> cand;
  if (!detail::scan_term_diff(*pattern, *instance, x, false, cand))
    return std::nullopt;
  Term t = cand ? *cand : t_var(x);
  try {
    if (!eq(subst_ind(pattern, x, t), instance)) return std::nullopt;
  } catch (const CaptureError&) {
    return std::nullopt;
  }
  return t;
}

namespace detail {
inline bool scan_pred_diff(const Formula& pat, const Formula& ins,
                           const std::string& X, bool shadowed,
                           std::optional<std::string>& cand) {
  if (pat.kind != ins.kind) return false;
  switch (pat.kind) {
    case Fk::Atom: {
      if (pat.args != ins.args) return false;
      if (!shadowed && pat.pred.kind == PredKind::Var && pat.pred.name == X) {
        if (ins.pred.kind != PredKind::Const ||
            ins.pred.arity != pat.pred.arity)
          return false;
        if (cand && *cand != ins.pred.name) return false;
        cand = ins.pred.name;
        return true;
      }
      return pat.pred == ins.pred;
    }
    case Fk::Bot:
      return true;
    case Fk::Pi:
    case Fk::Ex2:
      if (pat.var != ins.var || pat.parity != ins.parity) return false;
      return scan_pred_diff(*pat.lhs, *ins.lhs, X,
                            shadowed || pat.var == X, cand);
    case Fk::All:
    case Fk::Ex:
      if (pat.var != ins.var) return false;
      return scan_pred_diff(*pat.lhs, *ins.lhs, X, shadowed, cand);
    case Fk::Not:
      return scan_pred_diff(*pat.lhs, *ins.lhs, X, shadowed, cand);
    default:
      return scan_pred_diff(*pat.lhs, *ins.lhs, X, shadowed, cand) &&
             scan_pred_diff(*pat.rhs, *ins.rhs, X, shadowed, cand);
  }
}
}  // namespace detail

// The P with pattern[X:=P] == instance, if one exists; when X is not free the
// match degenerates and any P works, reported as nullopt-with-match via the
// sentinel below (callers pass a fallback pool).
inline std::optional<std::string> find_subst_pred(const FormulaRef& pattern,
                                                  const FormulaRef& instance,
                                                  const std::string& X,
                                                  int arity) {
  std::optional<std::string> cand;
  if (!detail::scan_pred_diff(*pattern, *instance, X, false, cand))
    return std::nullopt;
  if (!cand) {
    // X not free: instance must equal pattern; any constant of the right
    // arity is a valid witness. Use a reserved placeholder.
    if (!eq(pattern, instance)) return std::nullopt;
    return std::string("$E0");
  }
  try {
    if (!eq(subst_pred(pattern, X, arity, *cand), instance))
      return std::nullopt;
  } catch (const ArityMismatch&) {
    return std::nullopt;
  }
  return cand;
}

inline void collect_subformulas(const FormulaRef& f,
                                std::vector<FormulaRef>& out) {
  out.push_back(f);
  if (f->lhs) collect_subformulas(f->lhs, out);
  if (f->rhs) collect_subformulas(f->rhs, out);
}

}  // namespace bes
