#pragma once

// Bounded evaluation of the support relation over a finite frame of atomic
// systems. All verdicts are honest about truncation: Holds is only reported
// when a closure argument covers the unbounded side (atoms, monotone
// consequents, vacuous quantifiers); a quantifier truncated to the finite
// slice yields at best BoundedHolds. Fails verdicts are relative to the frame
// and carry a witness that re-evaluates to Fails in the same universe.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "bes/atomic.hpp"
#include "bes/errors.hpp"
#include "bes/syntax.hpp"

namespace bes {

enum class BasisPolicy { C, I };

inline std::string policy_name(BasisPolicy p) {
  return p == BasisPolicy::C ? "C" : "I";
}

inline int policy_max_level(BasisPolicy p) {
  return p == BasisPolicy::C ? 1 : 2;
}

struct SupportUniverse {
  std::string name;
  Base pool;  // candidate rules; templates expand over the universe slice
  std::set<std::string> slice_consts;
  std::map<std::string, int> slice_preds;
  int budget = 1;  // fresh witnesses per quantifier site
  BasisPolicy policy = BasisPolicy::I;
  int depth = 8;   // quantifier-unfolding guard
};

struct SupportWitness {
  Base base;
  FormulaRef formula;
  // queries the refuting frame was sized for; replaying the witness needs
  // the same fresh-symbol pools
  std::vector<FormulaRef> frame;
};

enum class SupportKind { Holds, BoundedHolds, Fails };

inline std::string support_kind_name(SupportKind k) {
  switch (k) {
    case SupportKind::Holds: return "Holds";
    case SupportKind::BoundedHolds: return "BoundedHolds";
    case SupportKind::Fails: return "Fails";
  }
  return "?";
}

struct SupportResult {
  SupportKind kind;
  SupportWitness witness;  // set iff kind == Fails
};

// Closes an open formula by quantifying its free variables, then expands.
inline FormulaRef prepare_query(const FormulaRef& f, ExpandOptions opts = {}) {
  FormulaRef g = expand(f, opts);
  auto fiv = free_ivars(g);
  for (auto it = fiv.rbegin(); it != fiv.rend(); ++it) g = f_all(*it, g);
  auto fpv = free_pvars(g);
  for (auto it = fpv.rbegin(); it != fpv.rend(); ++it)
    g = f_pi(it->first, it->second, g);
  return g;
}

// ---------------------------------------------------------------------------

class SupportEngine {
 public:
  SupportEngine(const SupportUniverse& u, std::vector<FormulaRef> queries)
      : u_(u) {
    // Slice predicates include everything named by the pool's own rules.
    for (auto& a : pool_atoms_of(u_.pool)) {
      auto it = u_.slice_preds.find(a.pred);
      if (it == u_.slice_preds.end())
        u_.slice_preds.emplace(a.pred, static_cast<int>(a.args.size()));
      for (auto& c : a.args) u_.slice_consts.insert(c);
    }

    int need = u_.budget;
    std::set<int> arities{0};
    for (auto& q : queries) {
      need = std::max(need, u_.budget + quant_depth(q));
      collect_arities(q, arities);
    }
    long counter = 0;
    for (int n = 0; n < need; ++n)
      eigen_consts_.push_back("$w" + std::to_string(counter++));
    for (int ar : arities)
      for (int n = 0; n < need; ++n)
        eigen_preds_[ar].push_back("$W" + std::to_string(counter++));

    build_items();
  }

  const SupportUniverse& universe() const { return u_; }
  int item_count() const { return static_cast<int>(items_.size()); }

  long mask_of_base(const Base& b) const {
    long mask = 0;
    for (auto& r : b.rules) {
      bool found = false;
      for (std::size_t i = 0; i < items_.size(); ++i)
        if (items_[i] == r) {
          mask |= 1L << i;
          found = true;
          break;
        }
      if (!found)
        throw InadmissibleBase("rule not in the admissible universe: " +
                               print_rule(r));
    }
    for (auto& t : b.templates) {
      bool any = false;
      for (std::size_t ti = 0; ti < u_.pool.templates.size(); ++ti) {
        if (!(u_.pool.templates[ti] == t)) continue;
        for (std::size_t i = 0; i < items_.size(); ++i)
          if (item_template_[i] & (1u << ti)) {
            mask |= 1L << i;
            any = true;
          }
      }
      if (!any)
        throw InadmissibleBase(
            "template not in the admissible universe: " + print_template(t));
    }
    return mask;
  }

  Base base_of_mask(long mask) const {
    Base b;
    for (std::size_t i = 0; i < items_.size(); ++i)
      if (mask & (1L << i)) b.rules.push_back(items_[i]);
    return b;
  }

  struct Eval {
    bool truth = false;
    bool exact = false;
    long wit_mask = 0;
    FormulaRef wit_formula;  // set iff !truth
  };

  Eval eval(long mask, const FormulaRef& f) { return eval_at(mask, f, 0); }

  // In-frame reading of Gamma supported-consequence at a fixed base.
  Eval consequence_at(long mask, const std::vector<FormulaRef>& gamma,
                      const FormulaRef& f) {
    Eval out;
    out.truth = true;
    const long comp = full_mask() & ~mask;
    long s = 0;
    do {  // supersets of mask in ascending order
      long c = mask | s;
      s = (s - comp) & comp;
      bool all = true;
      for (auto& g : gamma)
        if (!eval(c, g).truth) {
          all = false;
          break;
        }
      if (!all) continue;
      Eval e = eval(c, f);
      if (!e.truth) {
        out.truth = false;
        out.wit_mask = e.wit_mask;
        out.wit_formula = e.wit_formula;
        return out;
      }
    } while (s != 0);
    return out;
  }

  FormulaRef prepare(const FormulaRef& f) const {
    return prepare_query(f, opts_);
  }

  // The 0-ary atoms standing in for "any P" in the defined-connective
  // clauses: slice predicates of arity 0 plus the fresh witnesses.
  std::vector<std::string> zero_ary_pool(const FormulaRef& avoid) const {
    return pred_pool(0, avoid);
  }
  std::vector<std::string> pred_pool(int arity, const FormulaRef& avoid) const {
    std::vector<std::string> out;
    for (auto& [name, ar] : u_.slice_preds)
      if (ar == arity) out.push_back(name);
    auto it = eigen_preds_.find(arity);
    int picked = 0;
    if (it != eigen_preds_.end())
      for (auto& e : it->second) {
        if (picked >= u_.budget) break;
        if (avoid && occurs_pconst(avoid, e)) continue;
        out.push_back(e);
        ++picked;
      }
    return out;
  }
  std::vector<std::string> term_pool(const FormulaRef& avoid) const {
    std::vector<std::string> out(u_.slice_consts.begin(),
                                 u_.slice_consts.end());
    int picked = 0;
    for (auto& e : eigen_consts_) {
      if (picked >= u_.budget) break;
      if (avoid && occurs_iconst(avoid, e)) continue;
      out.push_back(e);
      ++picked;
    }
    return out;
  }

  bool atom_derivable(long mask, const GroundAtom& a) {
    auto it = closure_.find(mask);
    if (it == closure_.end()) {
      // one saturation per base: the table already holds every derivable atom
      detail::SatTable T = detail::saturate(base_of_mask(mask), {}, a);
      it = closure_.emplace(mask, std::move(T.just[detail::Ctx{}])).first;
    }
    return it->second.count(a) != 0;
  }

  ExpandOptions expand_options() const { return opts_; }
  void set_expand_options(ExpandOptions o) { opts_ = o; }

 private:
  static std::vector<GroundAtom> pool_atoms_of(const Base& pool) {
    std::vector<GroundAtom> out;
    auto take_premises = [&](const std::vector<Premise>& ps) {
      for (auto& p : ps) {
        out.push_back(p.concl);
        for (auto& h : p.hyps) out.push_back(h);
      }
    };
    for (auto& r : pool.rules) {
      out.push_back(r.concl);
      take_premises(r.premises);
    }
    for (auto& t : pool.templates) take_premises(t.premises);
    return out;
  }

  static void collect_arities(const FormulaRef& f, std::set<int>& out) {
    if (f->kind == Fk::Pi || f->kind == Fk::Ex2) out.insert(f->parity);
    if (f->lhs) collect_arities(f->lhs, out);
    if (f->rhs) collect_arities(f->rhs, out);
  }

  void build_items() {
    // Atom slice for template expansion: pool atoms, slice predicates over
    // slice and fresh-witness constants, and the 0-ary fresh witnesses. The
    // fresh names must be covered or a wildcard base could not support a
    // quantifier instantiated at them.
    std::set<GroundAtom> slice;
    for (auto& a : pool_atoms_of(u_.pool)) slice.insert(a);
    std::vector<std::string> consts(u_.slice_consts.begin(),
                                    u_.slice_consts.end());
    consts.insert(consts.end(), eigen_consts_.begin(), eigen_consts_.end());
    for (auto& [name, ar] : u_.slice_preds) {
      if (ar == 0) {
        slice.insert(GroundAtom{name, {}});
        continue;
      }
      if (consts.empty()) continue;
      std::vector<std::size_t> idx(static_cast<std::size_t>(ar), 0);
      for (;;) {
        std::vector<std::string> args;
        for (auto k : idx) args.push_back(consts[k]);
        slice.insert(GroundAtom{name, std::move(args)});
        std::size_t pos = 0;
        while (pos < idx.size() && ++idx[pos] == consts.size())
          idx[pos++] = 0;
        if (pos == idx.size()) break;
      }
    }
    auto it0 = eigen_preds_.find(0);
    if (it0 != eigen_preds_.end())
      for (auto& e : it0->second) slice.insert(GroundAtom{e, {}});

    int maxlvl = policy_max_level(u_.policy);
    for (auto& r : u_.pool.rules) {
      if (rule_level(r.premises) > maxlvl) continue;
      push_item(r, -1);
    }
    for (std::size_t t = 0; t < u_.pool.templates.size(); ++t) {
      const TemplateRule& tp = u_.pool.templates[t];
      if (std::max(1, rule_level(tp.premises)) > maxlvl) continue;
      for (auto& a : slice)
        push_item(AtomicRule{tp.premises, a}, static_cast<int>(t));
    }
    if (items_.size() > 24)
      throw Error("support universe too large: " +
                  std::to_string(items_.size()) + " admissible rules");
  }

  void push_item(const AtomicRule& r, int tmpl) {
    // an instance may coincide with a plain pool rule or with an instance of
    // another template; the item answers for every spelling
    unsigned bit = tmpl < 0 ? 0u : 1u << tmpl;
    for (std::size_t i = 0; i < items_.size(); ++i)
      if (items_[i] == r) {
        item_template_[i] |= bit;
        return;
      }
    items_.push_back(r);
    item_template_.push_back(bit);
  }

  long full_mask() const { return (1L << items_.size()) - 1; }

  // Nodes are interned to small ids (structurally, via their printed form) so
  // the memo key is a cheap packed integer instead of a rebuilt string.
  int node_id(const FormulaRef& f) {
    auto it = node_ids_.find(f.get());
    if (it != node_ids_.end()) return it->second;
    auto [tit, fresh] =
        text_ids_.emplace(print_formula(f), (int)text_ids_.size());
    node_ids_.emplace(f.get(), tit->second);
    pinned_.push_back(f);  // keep the address alive so ids never alias
    return tit->second;
  }
  static std::uint64_t pack(long mask, int id) {
    return (std::uint64_t(id) << 25) | std::uint64_t(mask);
  }

  Eval eval_at(long mask, const FormulaRef& f, int qdepth) {
    if (qdepth > u_.depth)
      throw Error("quantifier unfolding exceeds the universe depth bound");
    auto key = pack(mask, node_id(f));
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    Eval out;
    switch (f->kind) {
      case Fk::Atom: {
        auto a = formula_to_atom(f);
        if (!a) throw Error("support query on a non-ground atom: " +
                            print_formula(f));
        out.truth = atom_derivable(mask, *a);
        out.exact = true;
        if (!out.truth) {
          out.wit_mask = mask;
          out.wit_formula = f;
        }
        break;
      }
      case Fk::Imp: {
        out.truth = true;
        const long comp = full_mask() & ~mask;
        long s = 0;
        do {  // supersets of mask in ascending order
          long c = mask | s;
          s = (s - comp) & comp;
          if (!eval_at(c, f->lhs, qdepth).truth) continue;
          Eval rhs = eval_at(c, f->rhs, qdepth);
          if (!rhs.truth) {
            out.truth = false;
            out.wit_mask = rhs.wit_mask;
            out.wit_formula = rhs.wit_formula;
            break;
          }
        } while (s != 0);
        if (out.truth) {
          Eval here = eval_at(mask, f->rhs, qdepth);
          out.exact = here.truth && here.exact;
        }
        break;
      }
      case Fk::All: {
        if (!free_ivars(f->lhs).count(f->var)) {
          out = eval_at(mask, f->lhs, qdepth);
          break;
        }
        out.truth = true;
        out.exact = false;
        for (auto& t : term_pool(f)) {
          Eval e = eval_at(mask, subst_ind(f->lhs, f->var, t_const(t)),
                           qdepth + 1);
          if (!e.truth) {
            out.truth = false;
            out.wit_mask = e.wit_mask;
            out.wit_formula = e.wit_formula;
            break;
          }
        }
        break;
      }
      case Fk::Pi: {
        if (!free_pvars(f->lhs).count(f->var)) {
          out = eval_at(mask, f->lhs, qdepth);
          break;
        }
        out.truth = true;
        out.exact = false;
        for (auto& P : pred_pool(f->parity, f)) {
          Eval e = eval_at(mask, subst_pred(f->lhs, f->var, f->parity, P),
                           qdepth + 1);
          if (!e.truth) {
            out.truth = false;
            out.wit_mask = e.wit_mask;
            out.wit_formula = e.wit_formula;
            break;
          }
        }
        break;
      }
      default:
        throw Error("support evaluation expects core formulas: " +
                    print_formula(f));
    }
    memo_.emplace(key, out);
    return out;
  }

  SupportUniverse u_;
  ExpandOptions opts_{};
  std::vector<AtomicRule> items_;
  std::vector<unsigned> item_template_;  // bitmask of covering templates
  std::vector<std::string> eigen_consts_;
  std::map<int, std::vector<std::string>> eigen_preds_;
  std::unordered_map<const Formula*, int> node_ids_;
  std::map<std::string, int> text_ids_;
  std::vector<FormulaRef> pinned_;
  std::unordered_map<std::uint64_t, Eval> memo_;
  std::unordered_map<long, std::map<GroundAtom, int>> closure_;
};

// ---------------------------------------------------------------------------

namespace detail {
inline SupportResult verdict_of(const SupportEngine& eng,
                                const SupportEngine::Eval& e,
                                std::vector<FormulaRef> frame) {
  SupportResult r;
  if (!e.truth) {
    r.kind = SupportKind::Fails;
    r.witness = {eng.base_of_mask(e.wit_mask), e.wit_formula,
                 std::move(frame)};
  } else {
    r.kind = e.exact ? SupportKind::Holds : SupportKind::BoundedHolds;
  }
  return r;
}
}  // namespace detail

inline SupportResult supports(const Base& b, const FormulaRef& f,
                              const SupportUniverse& u) {
  FormulaRef fx = prepare_query(f);
  SupportEngine eng(u, {fx});
  long mask = eng.mask_of_base(b);
  return detail::verdict_of(eng, eng.eval(mask, fx), {fx});
}

inline SupportResult supports_consequence(const std::vector<FormulaRef>& gamma,
                                          const FormulaRef& f,
                                          const SupportUniverse& u) {
  FormulaRef fx = prepare_query(f);
  std::vector<FormulaRef> gx;
  for (auto& g : gamma) gx.push_back(prepare_query(g));
  std::vector<FormulaRef> qs = gx;
  qs.push_back(fx);
  SupportEngine eng(u, qs);

  for (auto& g : gx)
    if (eq(g, fx)) return {SupportKind::Holds, {}};

  if (gx.empty()) {
    SupportEngine::Eval at_empty = eng.eval(0, fx);
    if (!at_empty.truth) return detail::verdict_of(eng, at_empty, qs);
    SupportEngine::Eval all = eng.consequence_at(0, gx, fx);
    if (!all.truth) return detail::verdict_of(eng, all, qs);
    return {at_empty.exact ? SupportKind::Holds : SupportKind::BoundedHolds,
            {}};
  }

  for (long b = 0; b < (1L << eng.item_count()); ++b) {
    SupportEngine::Eval e = eng.consequence_at(b, gx, fx);
    if (!e.truth) return detail::verdict_of(eng, e, qs);
  }
  return {SupportKind::BoundedHolds, {}};
}

// Compares the all-bases reading against the evaluation anchored at the
// empty base; true when they agree within the universe.
inline bool empty_base_reduction(const std::vector<FormulaRef>& gamma,
                                 const FormulaRef& f,
                                 const SupportUniverse& u) {
  FormulaRef fx = prepare_query(f);
  std::vector<FormulaRef> gx;
  for (auto& g : gamma) gx.push_back(prepare_query(g));
  std::vector<FormulaRef> qs = gx;
  qs.push_back(fx);
  SupportEngine eng(u, qs);

  bool general = true;
  for (long b = 0; general && b < (1L << eng.item_count()); ++b)
    general = eng.consequence_at(b, gx, fx).truth;
  bool at_empty = eng.consequence_at(0, gx, fx).truth;
  return general == at_empty;
}

inline bool check_witness(const SupportWitness& w, const SupportUniverse& u) {
  std::vector<FormulaRef> frame = w.frame;
  if (frame.empty()) frame.push_back(prepare_query(w.formula));
  SupportEngine eng(u, frame);
  long mask = eng.mask_of_base(w.base);
  return !eng.eval(mask, w.formula).truth;
}

// ---------------------------------------------------------------------------
// Defined connectives: the displayed clauses, read directly, against the
// evaluation of the second-order expansion.

enum class DefinedConn { Bot, And, Or, Ex, Ex2 };

inline bool derived_clause_check(const Base& b, DefinedConn conn,
                                 const FormulaRef& sugar,
                                 const SupportUniverse& u) {
  ExpandOptions opt;
  opt.conventional_exists = true;  // the displayed clauses quantify the
                                   // witness inside the consequence premise
  FormulaRef fx = expand(sugar, opt);
  SupportEngine eng(u, {fx});
  eng.set_expand_options(opt);
  long mask = eng.mask_of_base(b);

  bool via_expansion = eng.eval(mask, fx).truth;

  auto holds_all = [&](long c, const std::vector<FormulaRef>& gamma,
                       const FormulaRef& goal) {
    return eng.consequence_at(c, gamma, goal).truth;
  };

  bool direct = true;
  long n = eng.item_count();
  switch (conn) {
    case DefinedConn::Bot: {
      if (sugar->kind != Fk::Bot) throw Error("connective mismatch");
      for (auto& P : eng.zero_ary_pool(fx))
        if (!eng.atom_derivable(mask, GroundAtom{P, {}})) {
          direct = false;
          break;
        }
      break;
    }
    case DefinedConn::And: {
      if (sugar->kind != Fk::And) throw Error("connective mismatch");
      FormulaRef a = eng.prepare(sugar->lhs), c2 = eng.prepare(sugar->rhs);
      for (long c = 0; direct && c < (1L << n); ++c) {
        if ((c & mask) != mask) continue;
        for (auto& P : eng.zero_ary_pool(fx)) {
          FormulaRef goal = f_atom0(P);
          if (holds_all(c, {a, c2}, goal) && !eng.eval(c, goal).truth) {
            direct = false;
            break;
          }
        }
      }
      break;
    }
    case DefinedConn::Or: {
      if (sugar->kind != Fk::Or) throw Error("connective mismatch");
      FormulaRef a = eng.prepare(sugar->lhs), c2 = eng.prepare(sugar->rhs);
      for (long c = 0; direct && c < (1L << n); ++c) {
        if ((c & mask) != mask) continue;
        for (auto& P : eng.zero_ary_pool(fx)) {
          FormulaRef goal = f_atom0(P);
          if (holds_all(c, {a}, goal) && holds_all(c, {c2}, goal) &&
              !eng.eval(c, goal).truth) {
            direct = false;
            break;
          }
        }
      }
      break;
    }
    case DefinedConn::Ex: {
      if (sugar->kind != Fk::Ex) throw Error("connective mismatch");
      for (long c = 0; direct && c < (1L << n); ++c) {
        if ((c & mask) != mask) continue;
        for (auto& P : eng.zero_ary_pool(fx)) {
          FormulaRef goal = f_atom0(P);
          bool premise = true;
          for (auto& t : eng.term_pool(fx)) {
            FormulaRef inst = eng.prepare(
                subst_ind(sugar->lhs, sugar->var, t_const(t)));
            if (!holds_all(c, {inst}, goal)) {
              premise = false;
              break;
            }
          }
          if (premise && !eng.eval(c, goal).truth) {
            direct = false;
            break;
          }
        }
      }
      break;
    }
    case DefinedConn::Ex2: {
      if (sugar->kind != Fk::Ex2) throw Error("connective mismatch");
      for (long c = 0; direct && c < (1L << n); ++c) {
        if ((c & mask) != mask) continue;
        for (auto& P : eng.zero_ary_pool(fx)) {
          FormulaRef goal = f_atom0(P);
          bool premise = true;
          for (auto& Q : eng.pred_pool(sugar->parity, fx)) {
            FormulaRef inst = eng.prepare(
                subst_pred(sugar->lhs, sugar->var, sugar->parity, Q));
            if (!holds_all(c, {inst}, goal)) {
              premise = false;
              break;
            }
          }
          if (premise && !eng.eval(c, goal).truth) {
            direct = false;
            break;
          }
        }
      }
      break;
    }
  }
  return via_expansion == direct;
}

}  // namespace bes
