#pragma once

// Hilbert-style proofs for the intuitionistic (HI) and classical (HC)
// second-order systems: seven axiom schemas, modus ponens, and the two
// generalization rules that extend the consequent of an implication.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "bes/errors.hpp"
#include "bes/syntax.hpp"

namespace bes {

enum class SystemId { HI, HC };

inline std::string system_name(SystemId s) {
  return s == SystemId::HI ? "HI" : "HC";
}

enum class AxTag { K, S, AllE, PiE, NegI, EFQ, DNE };

inline std::string axtag_name(AxTag t) {
  switch (t) {
    case AxTag::K: return "K";
    case AxTag::S: return "S";
    case AxTag::AllE: return "AllE";
    case AxTag::PiE: return "PiE";
    case AxTag::NegI: return "NegI";
    case AxTag::EFQ: return "EFQ";
    case AxTag::DNE: return "DNE";
  }
  return "?";
}

// Slots are core (expanded) formulas.
struct AxiomInstance {
  AxTag tag;
  FormulaRef phi, psi, chi;  // K: phi,psi  S: phi,psi,chi  NegI/EFQ: phi,psi
  std::string var;           // AllE: bound variable
  Term term{TermKind::Const, ""};  // AllE: witness term
  std::string pvar;          // PiE: bound predicate variable
  int parity = 0;            // PiE
  std::string pconst;        // PiE: witness predicate constant
};

struct JHyp {};
struct JMP {
  std::size_t imp, ant;  // step proving X -> Y, step proving X
};
struct JGen1 {
  std::size_t from;
  std::string var;
};
struct JGen2 {
  std::size_t from;
  std::string pvar;
  int parity = 0;
};

using Justification = std::variant<AxiomInstance, JHyp, JMP, JGen1, JGen2>;

struct HilbertStep {
  FormulaRef formula;
  Justification just;
};

struct HilbertProof {
  SystemId system = SystemId::HI;
  std::vector<FormulaRef> hyps;
  std::vector<HilbertStep> steps;

  const FormulaRef& conclusion() const { return steps.back().formula; }
};

inline bool has_hyp(const std::vector<FormulaRef>& hyps, const FormulaRef& f) {
  for (auto& h : hyps)
    if (eq(h, f)) return true;
  return false;
}

inline FormulaRef instantiate_axiom(const AxiomInstance& ai) {
  auto bot = bot_core();
  switch (ai.tag) {
    case AxTag::K:
      return f_imp(ai.phi, f_imp(ai.psi, ai.phi));
    case AxTag::S:
      return f_imp(f_imp(ai.phi, f_imp(ai.psi, ai.chi)),
                   f_imp(f_imp(ai.phi, ai.psi), f_imp(ai.phi, ai.chi)));
    case AxTag::AllE:
      return f_imp(f_all(ai.var, ai.phi), subst_ind(ai.phi, ai.var, ai.term));
    case AxTag::PiE:
      return f_imp(f_pi(ai.pvar, ai.parity, ai.phi),
                   subst_pred(ai.phi, ai.pvar, ai.parity, ai.pconst));
    case AxTag::NegI:
      return f_imp(f_imp(ai.phi, ai.psi),
                   f_imp(f_imp(ai.phi, f_imp(ai.psi, bot)),
                         f_imp(ai.phi, bot)));
    case AxTag::EFQ:
      return f_imp(f_imp(ai.phi, bot), f_imp(ai.phi, ai.psi));
    case AxTag::DNE:
      return f_imp(f_imp(f_imp(ai.phi, bot), bot), ai.phi);
  }
  throw Error("bad axiom tag");
}

inline AxiomInstance ax_k(FormulaRef a, FormulaRef b) {
  AxiomInstance ai;
  ai.tag = AxTag::K;
  ai.phi = std::move(a);
  ai.psi = std::move(b);
  return ai;
}
inline AxiomInstance ax_s(FormulaRef a, FormulaRef b, FormulaRef c) {
  AxiomInstance ai;
  ai.tag = AxTag::S;
  ai.phi = std::move(a);
  ai.psi = std::move(b);
  ai.chi = std::move(c);
  return ai;
}
inline AxiomInstance ax_alle(FormulaRef body, std::string x, Term t) {
  AxiomInstance ai;
  ai.tag = AxTag::AllE;
  ai.phi = std::move(body);
  ai.var = std::move(x);
  ai.term = std::move(t);
  return ai;
}
inline AxiomInstance ax_pie(FormulaRef body, std::string X, int n,
                            std::string P) {
  AxiomInstance ai;
  ai.tag = AxTag::PiE;
  ai.phi = std::move(body);
  ai.pvar = std::move(X);
  ai.parity = n;
  ai.pconst = std::move(P);
  return ai;
}
inline AxiomInstance ax_negi(FormulaRef a, FormulaRef b) {
  AxiomInstance ai;
  ai.tag = AxTag::NegI;
  ai.phi = std::move(a);
  ai.psi = std::move(b);
  return ai;
}
inline AxiomInstance ax_efq(FormulaRef a, FormulaRef b) {
  AxiomInstance ai;
  ai.tag = AxTag::EFQ;
  ai.phi = std::move(a);
  ai.psi = std::move(b);
  return ai;
}
inline AxiomInstance ax_dne(FormulaRef a) {
  AxiomInstance ai;
  ai.tag = AxTag::DNE;
  ai.phi = std::move(a);
  return ai;
}

// ---------------------------------------------------------------------------
// Checking.

struct HilbertReport {
  struct Item {
    std::size_t step;
    std::string msg;
  };
  std::vector<Item> items;
  bool ok() const { return items.empty(); }
};

inline HilbertReport check_hilbert(SystemId sys, const HilbertProof& p) {
  HilbertReport rep;
  auto bad = [&](std::size_t k, const std::string& m) {
    rep.items.push_back({k, m});
  };
  for (std::size_t k = 0; k < p.steps.size(); ++k) {
    const HilbertStep& st = p.steps[k];
    if (auto* ai = std::get_if<AxiomInstance>(&st.just)) {
      if (ai->tag == AxTag::DNE && sys == SystemId::HI) {
        bad(k, "DNE is not an axiom of HI");
        continue;
      }
      try {
        if (!eq(instantiate_axiom(*ai), st.formula))
          bad(k, "formula is not the recorded " + axtag_name(ai->tag) +
                     " instance");
      } catch (const Error& e) {
        bad(k, std::string("axiom instantiation failed: ") + e.what());
      }
    } else if (std::get_if<JHyp>(&st.just)) {
      if (!has_hyp(p.hyps, st.formula))
        bad(k, "hypothesis not among the declared hypotheses");
    } else if (auto* m = std::get_if<JMP>(&st.just)) {
      if (m->imp >= k || m->ant >= k) {
        bad(k, "mp cites a step that is not earlier");
        continue;
      }
      const FormulaRef& fi = p.steps[m->imp].formula;
      if (fi->kind != Fk::Imp) {
        bad(k, "mp major premise is not an implication");
        continue;
      }
      if (!eq(p.steps[m->ant].formula, fi->lhs))
        bad(k, "mp minor premise does not match the antecedent");
      else if (!eq(st.formula, fi->rhs))
        bad(k, "mp conclusion does not match the consequent");
    } else if (auto* g = std::get_if<JGen1>(&st.just)) {
      if (g->from >= k) {
        bad(k, "gen1 cites a step that is not earlier");
        continue;
      }
      const FormulaRef& fi = p.steps[g->from].formula;
      if (fi->kind != Fk::Imp) {
        bad(k, "gen1 premise is not an implication");
        continue;
      }
      if (!eq(st.formula, f_imp(fi->lhs, f_all(g->var, fi->rhs)))) {
        bad(k, "gen1 conclusion malformed");
        continue;
      }
      if (free_ivars(fi->lhs).count(g->var))
        bad(k, "?" + g->var + " is free in the antecedent");
      for (auto& h : p.hyps)
        if (free_ivars(h).count(g->var))
          bad(k, "?" + g->var + " is free in a hypothesis");
    } else if (auto* g2 = std::get_if<JGen2>(&st.just)) {
      if (g2->from >= k) {
        bad(k, "gen2 cites a step that is not earlier");
        continue;
      }
      const FormulaRef& fi = p.steps[g2->from].formula;
      if (fi->kind != Fk::Imp) {
        bad(k, "gen2 premise is not an implication");
        continue;
      }
      if (!eq(st.formula,
              f_imp(fi->lhs, f_pi(g2->pvar, g2->parity, fi->rhs)))) {
        bad(k, "gen2 conclusion malformed");
        continue;
      }
      if (free_pvars(fi->lhs).count(g2->pvar))
        bad(k, "?" + g2->pvar + " is free in the antecedent");
      for (auto& h : p.hyps)
        if (free_pvars(h).count(g2->pvar))
          bad(k, "?" + g2->pvar + " is free in a hypothesis");
    }
  }
  if (p.steps.empty()) bad(0, "empty proof");
  return rep;
}

// ---------------------------------------------------------------------------
// Construction helpers.

struct ProofBuilder {
  HilbertProof p;

  explicit ProofBuilder(SystemId sys, std::vector<FormulaRef> hyps = {}) {
    p.system = sys;
    p.hyps = std::move(hyps);
  }

  std::size_t axiom(AxiomInstance ai) {
    FormulaRef f = instantiate_axiom(ai);
    p.steps.push_back({std::move(f), std::move(ai)});
    return p.steps.size() - 1;
  }
  std::size_t hyp(const FormulaRef& f) {
    if (!has_hyp(p.hyps, f))
      throw TransformError("hyp step for a formula outside the hypotheses: " +
                           print_formula(f));
    p.steps.push_back({f, JHyp{}});
    return p.steps.size() - 1;
  }
  std::size_t mp(std::size_t imp, std::size_t ant) {
    const FormulaRef& fi = p.steps.at(imp).formula;
    if (fi->kind != Fk::Imp || !eq(p.steps.at(ant).formula, fi->lhs))
      throw TransformError("mp on mismatched steps");
    p.steps.push_back({fi->rhs, JMP{imp, ant}});
    return p.steps.size() - 1;
  }
  std::size_t gen1(std::size_t from, const std::string& x) {
    const FormulaRef& fi = p.steps.at(from).formula;
    if (fi->kind != Fk::Imp) throw TransformError("gen1 on non-implication");
    if (free_ivars(fi->lhs).count(x))
      throw TransformError("gen1 variable free in antecedent");
    for (auto& h : p.hyps)
      if (free_ivars(h).count(x))
        throw TransformError("gen1 variable free in a hypothesis");
    p.steps.push_back({f_imp(fi->lhs, f_all(x, fi->rhs)), JGen1{from, x}});
    return p.steps.size() - 1;
  }
  std::size_t gen2(std::size_t from, const std::string& X, int n) {
    const FormulaRef& fi = p.steps.at(from).formula;
    if (fi->kind != Fk::Imp) throw TransformError("gen2 on non-implication");
    if (free_pvars(fi->lhs).count(X))
      throw TransformError("gen2 variable free in antecedent");
    for (auto& h : p.hyps)
      if (free_pvars(h).count(X))
        throw TransformError("gen2 variable free in a hypothesis");
    p.steps.push_back({f_imp(fi->lhs, f_pi(X, n, fi->rhs)), JGen2{from, X, n}});
    return p.steps.size() - 1;
  }

  // Appends all steps of sub (shifting its internal references) and merges
  // its hypotheses; returns the new index of sub's last step.
  std::size_t absorb(const HilbertProof& sub) {
    std::size_t off = p.steps.size();
    for (auto& h : sub.hyps)
      if (!has_hyp(p.hyps, h)) p.hyps.push_back(h);
    for (auto st : sub.steps) {
      if (auto* m = std::get_if<JMP>(&st.just))
        st.just = JMP{m->imp + off, m->ant + off};
      else if (auto* g = std::get_if<JGen1>(&st.just))
        st.just = JGen1{g->from + off, g->var};
      else if (auto* g2 = std::get_if<JGen2>(&st.just))
        st.just = JGen2{g2->from + off, g2->pvar, g2->parity};
      p.steps.push_back(std::move(st));
    }
    return p.steps.size() - 1;
  }

  // chi at index i becomes phi -> chi.
  std::size_t klift(std::size_t i, const FormulaRef& phi) {
    std::size_t k = axiom(ax_k(p.steps.at(i).formula, phi));
    return mp(k, i);
  }

  // From X -> Y at i and Y -> Z at j build X -> Z.
  std::size_t compose(std::size_t i, std::size_t j) {
    // copies, not references: the pushes below may reallocate the step vector
    FormulaRef xy = p.steps.at(i).formula;
    FormulaRef yz = p.steps.at(j).formula;
    if (xy->kind != Fk::Imp || yz->kind != Fk::Imp ||
        !eq(xy->rhs, yz->lhs))
      throw TransformError("compose on mismatched implications");
    std::size_t lifted = klift(j, xy->lhs);  // X -> (Y -> Z)
    std::size_t s = axiom(ax_s(xy->lhs, xy->rhs, yz->rhs));
    std::size_t t = mp(s, lifted);  // (X -> Y) -> (X -> Z)
    return mp(t, i);
  }

  // From A -> (B -> C) at i build B -> (A -> C).
  std::size_t swap_antecedents(std::size_t i) {
    const FormulaRef& f = p.steps.at(i).formula;
    if (f->kind != Fk::Imp || f->rhs->kind != Fk::Imp)
      throw TransformError("swap on a non-nested implication");
    FormulaRef A = f->lhs, B = f->rhs->lhs, C = f->rhs->rhs;
    std::size_t s = axiom(ax_s(A, B, C));
    std::size_t d = mp(s, i);                 // (A -> B) -> (A -> C)
    std::size_t k = axiom(ax_k(B, A));        // B -> (A -> B)
    return compose(k, d);                     // B -> (A -> C)
  }
};

// |- phi -> phi.
inline HilbertProof derive_identity(SystemId sys, const FormulaRef& phi) {
  ProofBuilder b(sys);
  FormulaRef pp = f_imp(phi, phi);
  std::size_t k1 = b.axiom(ax_k(phi, pp));
  std::size_t s = b.axiom(ax_s(phi, pp, phi));
  std::size_t t = b.mp(s, k1);
  std::size_t k2 = b.axiom(ax_k(phi, phi));
  b.mp(t, k2);
  return b.p;
}

// |- bot -> bot, the closed theorem used as a vacuous antecedent.
inline HilbertProof derive_top(SystemId sys) {
  return derive_identity(sys, bot_core());
}

// ---------------------------------------------------------------------------
// Deduction theorem, both directions.

// From a proof of psi under hyps containing phi, a proof of phi -> psi
// without it. Gen1/Gen2 steps whose derivation does not touch phi are
// replayed as-is; a generalization inside the dependency cone of phi has no
// image in this calculus and raises TransformError.
inline HilbertProof deduction_intro(const HilbertProof& p,
                                    const FormulaRef& phi) {
  if (!has_hyp(p.hyps, phi))
    throw TransformError("deduction_intro: " + print_formula(phi) +
                         " is not a hypothesis");
  std::vector<FormulaRef> newhyps;
  for (auto& h : p.hyps)
    if (!eq(h, phi)) newhyps.push_back(h);

  std::size_t n = p.steps.size();
  std::vector<char> depends(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& j = p.steps[i].just;
    if (std::get_if<JHyp>(&j)) {
      depends[i] = eq(p.steps[i].formula, phi);
    } else if (auto* m = std::get_if<JMP>(&j)) {
      depends[i] = depends[m->imp] || depends[m->ant];
    } else if (auto* g = std::get_if<JGen1>(&j)) {
      depends[i] = depends[g->from];
    } else if (auto* g2 = std::get_if<JGen2>(&j)) {
      depends[i] = depends[g2->from];
    }
  }

  ProofBuilder b(p.system, newhyps);
  std::vector<std::optional<std::size_t>> plain(n), wrapped(n);

  auto ensure_plain = [&](auto&& self, std::size_t i) -> std::size_t {
    if (plain[i]) return *plain[i];
    const auto& st = p.steps[i];
    std::size_t idx;
    if (auto* ai = std::get_if<AxiomInstance>(&st.just)) {
      idx = b.axiom(*ai);
    } else if (std::get_if<JHyp>(&st.just)) {
      idx = b.hyp(st.formula);
    } else if (auto* m = std::get_if<JMP>(&st.just)) {
      std::size_t x = self(self, m->imp);
      std::size_t y = self(self, m->ant);
      idx = b.mp(x, y);
    } else if (auto* g = std::get_if<JGen1>(&st.just)) {
      idx = b.gen1(self(self, g->from), g->var);
    } else {
      auto* g2 = std::get_if<JGen2>(&st.just);
      idx = b.gen2(self(self, g2->from), g2->pvar, g2->parity);
    }
    plain[i] = idx;
    return idx;
  };

  auto ensure_wrapped = [&](auto&& self, std::size_t i) -> std::size_t {
    if (wrapped[i]) return *wrapped[i];
    const auto& st = p.steps[i];
    std::size_t idx;
    if (!depends[i]) {
      idx = b.klift(ensure_plain(ensure_plain, i), phi);
    } else if (std::get_if<JHyp>(&st.just)) {
      idx = b.absorb(derive_identity(p.system, phi));
    } else if (auto* m = std::get_if<JMP>(&st.just)) {
      const FormulaRef& fimp = p.steps[m->imp].formula;  // X -> Y
      std::size_t wx = self(self, m->imp);               // phi -> (X -> Y)
      std::size_t wy = self(self, m->ant);               // phi -> X
      std::size_t s = b.axiom(ax_s(phi, fimp->lhs, fimp->rhs));
      std::size_t t = b.mp(s, wx);
      idx = b.mp(t, wy);
    } else if (std::get_if<JGen1>(&st.just) || std::get_if<JGen2>(&st.just)) {
      throw TransformError(
          "deduction_intro: generalization at step " + std::to_string(i + 1) +
          " depends on the discharged hypothesis; the calculus has no image "
          "for this step");
    } else {
      throw TransformError("deduction_intro: axiom step marked dependent");
    }
    wrapped[i] = idx;
    return idx;
  };

  ensure_wrapped(ensure_wrapped, n - 1);
  return b.p;
}

// From a proof of phi -> psi, a proof of psi under the extra hypothesis phi.
inline HilbertProof deduction_elim(const HilbertProof& p) {
  const FormulaRef& c = p.conclusion();
  if (c->kind != Fk::Imp)
    throw TransformError("deduction_elim: conclusion is not an implication");
  ProofBuilder b(p.system, p.hyps);
  if (!has_hyp(b.p.hyps, c->lhs)) b.p.hyps.push_back(c->lhs);
  std::size_t i = b.absorb(p);
  std::size_t h = b.hyp(c->lhs);
  b.mp(i, h);
  return b.p;
}

// ---------------------------------------------------------------------------
// Eigen renaming.

namespace detail {
inline void require_checks(const HilbertProof& p, const std::string& what) {
  HilbertReport rep = check_hilbert(p.system, p);
  if (!rep.ok())
    throw TransformError(what + " produced a proof that fails checking: " +
                         rep.items.front().msg + " (step " +
                         std::to_string(rep.items.front().step + 1) + ")");
}
}  // namespace detail

// Replaces the individual constant e by the variable x across the proof.
// e must not occur in the hypotheses; occurrences under a binder of x raise
// CaptureError.
inline HilbertProof rename_eigen_ind(const HilbertProof& p,
                                     const std::string& e,
                                     const std::string& x) {
  for (auto& h : p.hyps)
    if (occurs_iconst(h, e))
      throw FreshnessError("eigen constant " + e + " occurs in a hypothesis");
  HilbertProof q;
  q.system = p.system;
  q.hyps = p.hyps;
  auto ren = [&](const FormulaRef& f) { return rename_iconst(f, e, x); };
  for (auto st : p.steps) {
    st.formula = ren(st.formula);
    if (auto* ai = std::get_if<AxiomInstance>(&st.just)) {
      AxiomInstance a2 = *ai;
      if (a2.phi) a2.phi = ren(a2.phi);
      if (a2.psi) a2.psi = ren(a2.psi);
      if (a2.chi) a2.chi = ren(a2.chi);
      if (a2.tag == AxTag::AllE && a2.term.kind == TermKind::Const &&
          a2.term.name == e)
        a2.term = t_var(x);
      st.just = a2;
    }
    q.steps.push_back(std::move(st));
  }
  detail::require_checks(q, "rename_eigen_ind");
  return q;
}

// Replaces the predicate constant E by the predicate variable X.
inline HilbertProof rename_eigen_pred(const HilbertProof& p,
                                      const std::string& E,
                                      const std::string& X) {
  for (auto& h : p.hyps)
    if (occurs_pconst(h, E))
      throw FreshnessError("eigen predicate " + E + " occurs in a hypothesis");
  HilbertProof q;
  q.system = p.system;
  q.hyps = p.hyps;
  auto ren = [&](const FormulaRef& f) { return rename_pconst(f, E, X); };
  for (auto st : p.steps) {
    st.formula = ren(st.formula);
    if (auto* ai = std::get_if<AxiomInstance>(&st.just)) {
      AxiomInstance a2 = *ai;
      if (a2.tag == AxTag::PiE && a2.pconst == E)
        throw TransformError(
            "rename_eigen_pred: " + E +
            " is the witness constant of a PiE step and cannot become a "
            "variable");
      if (a2.phi) a2.phi = ren(a2.phi);
      if (a2.psi) a2.psi = ren(a2.psi);
      if (a2.chi) a2.chi = ren(a2.chi);
      st.just = a2;
    }
    q.steps.push_back(std::move(st));
  }
  detail::require_checks(q, "rename_eigen_pred");
  return q;
}

// ---------------------------------------------------------------------------
// Axiom-instance recognition.

inline std::optional<AxiomInstance> match_axiom(AxTag tag,
                                                const FormulaRef& f) {
  auto verify = [&](AxiomInstance ai) -> std::optional<AxiomInstance> {
    try {
      if (eq(instantiate_axiom(ai), f)) return ai;
    } catch (const Error&) {
    }
    return std::nullopt;
  };
  if (f->kind != Fk::Imp) return std::nullopt;
  switch (tag) {
    case AxTag::K: {
      if (f->rhs->kind != Fk::Imp) return std::nullopt;
      return verify(ax_k(f->lhs, f->rhs->lhs));
    }
    case AxTag::S: {
      const FormulaRef& l = f->lhs;
      if (l->kind != Fk::Imp || l->rhs->kind != Fk::Imp) return std::nullopt;
      return verify(ax_s(l->lhs, l->rhs->lhs, l->rhs->rhs));
    }
    case AxTag::AllE: {
      if (f->lhs->kind != Fk::All) return std::nullopt;
      auto t = find_subst_term(f->lhs->lhs, f->rhs, f->lhs->var);
      if (!t) return std::nullopt;
      return verify(ax_alle(f->lhs->lhs, f->lhs->var, *t));
    }
    case AxTag::PiE: {
      if (f->lhs->kind != Fk::Pi) return std::nullopt;
      auto P = find_subst_pred(f->lhs->lhs, f->rhs, f->lhs->var,
                               f->lhs->parity);
      if (!P) return std::nullopt;
      return verify(ax_pie(f->lhs->lhs, f->lhs->var, f->lhs->parity, *P));
    }
    case AxTag::NegI: {
      if (f->lhs->kind != Fk::Imp) return std::nullopt;
      return verify(ax_negi(f->lhs->lhs, f->lhs->rhs));
    }
    case AxTag::EFQ: {
      if (f->rhs->kind != Fk::Imp || f->lhs->kind != Fk::Imp)
        return std::nullopt;
      return verify(ax_efq(f->rhs->lhs, f->rhs->rhs));
    }
    case AxTag::DNE:
      return verify(ax_dne(f->rhs));
  }
  return std::nullopt;
}

inline std::optional<AxiomInstance> match_any_axiom(SystemId sys,
                                                    const FormulaRef& f) {
  static const AxTag order[] = {AxTag::K,    AxTag::S,   AxTag::AllE,
                                AxTag::PiE,  AxTag::NegI, AxTag::EFQ,
                                AxTag::DNE};
  for (AxTag t : order) {
    if (t == AxTag::DNE && sys == SystemId::HI) continue;
    if (auto m = match_axiom(t, f)) return m;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Bounded backward search.

struct SearchResult {
  std::optional<HilbertProof> proof;
  int depth_found = -1;
  long nodes = 0;
  bool budget_hit = false;
};

namespace detail {

struct Searcher {
  SystemId sys;
  std::vector<FormulaRef> hyps;
  std::vector<FormulaRef> pool;  // MP antecedent candidates, sorted
  std::map<std::string, int> failed_at;  // formula key -> depth that failed
  long nodes = 0;
  long budget;
  bool budget_hit = false;

  std::optional<HilbertProof> prove(const FormulaRef& g, int d) {
    if (budget_hit) return std::nullopt;
    if (++nodes > budget) {
      budget_hit = true;
      return std::nullopt;
    }
    for (auto& h : hyps)
      if (eq(h, g)) {
        ProofBuilder b(sys, hyps);
        b.hyp(g);
        return b.p;
      }
    if (auto ai = match_any_axiom(sys, g)) {
      ProofBuilder b(sys, hyps);
      b.axiom(*ai);
      return b.p;
    }
    if (d <= 0) return std::nullopt;
    std::string key = print_formula(g);
    auto it = failed_at.find(key);
    if (it != failed_at.end() && it->second >= d) return std::nullopt;

    // Backward generalization.
    if (g->kind == Fk::Imp && g->rhs->kind == Fk::All) {
      const std::string& x = g->rhs->var;
      bool ok = !free_ivars(g->lhs).count(x);
      for (auto& h : hyps)
        if (free_ivars(h).count(x)) ok = false;
      if (ok) {
        if (auto sub = prove(f_imp(g->lhs, g->rhs->lhs), d - 1)) {
          ProofBuilder b(sys, hyps);
          b.gen1(b.absorb(*sub), x);
          return b.p;
        }
      }
    }
    if (g->kind == Fk::Imp && g->rhs->kind == Fk::Pi) {
      const std::string& X = g->rhs->var;
      bool ok = !free_pvars(g->lhs).count(X);
      for (auto& h : hyps)
        if (free_pvars(h).count(X)) ok = false;
      if (ok) {
        if (auto sub = prove(f_imp(g->lhs, g->rhs->lhs), d - 1)) {
          ProofBuilder b(sys, hyps);
          b.gen2(b.absorb(*sub), X, g->rhs->parity);
          return b.p;
        }
      }
    }

    // Backward modus ponens over the candidate pool.
    for (auto& c : pool) {
      if (budget_hit) break;
      if (auto pimp = prove(f_imp(c, g), d - 1)) {
        if (auto pant = prove(c, d - 1)) {
          ProofBuilder b(sys, hyps);
          std::size_t i = b.absorb(*pimp);
          std::size_t j = b.absorb(*pant);
          b.mp(i, j);
          return b.p;
        }
      }
    }
    int& rec = failed_at[key];
    if (rec < d) rec = d;
    return std::nullopt;
  }
};

}  // namespace detail

inline SearchResult search(SystemId sys, const std::vector<FormulaRef>& hyps,
                           const FormulaRef& goal, int max_depth,
                           long budget = 500000) {
  detail::Searcher s;
  s.sys = sys;
  s.budget = budget;
  for (auto& h : hyps) s.hyps.push_back(expand(h));
  FormulaRef g = expand(goal);

  std::vector<FormulaRef> subs;
  collect_subformulas(g, subs);
  for (auto& h : s.hyps) collect_subformulas(h, subs);
  subs.push_back(bot_core());
  subs.push_back(top_core());
  std::map<std::string, FormulaRef> uniq;
  for (auto& f : subs) uniq.emplace(print_formula(f), f);
  for (auto& kv : uniq) s.pool.push_back(kv.second);

  SearchResult res;
  for (int d = 0; d <= max_depth; ++d) {
    s.failed_at.clear();
    if (auto p = s.prove(g, d)) {
      res.proof = std::move(p);
      res.depth_found = d;
      res.nodes = s.nodes;
      return res;
    }
    if (s.budget_hit) break;
  }
  res.nodes = s.nodes;
  res.budget_hit = s.budget_hit;
  return res;
}

// ---------------------------------------------------------------------------
// Script printing (parsing lives in parser.hpp).

inline std::string print_hilbert(const HilbertProof& p) {
  std::string s = "hilbert " + system_name(p.system) + " proof of \"" +
                  print_formula(p.conclusion()) + "\"";
  if (!p.hyps.empty()) {
    s += " from \"";
    for (std::size_t i = 0; i < p.hyps.size(); ++i) {
      if (i) s += ", ";
      s += print_formula(p.hyps[i]);
    }
    s += "\"";
  }
  s += "\n";
  for (std::size_t k = 0; k < p.steps.size(); ++k) {
    const auto& st = p.steps[k];
    s += std::to_string(k + 1) + ". ";
    if (auto* ai = std::get_if<AxiomInstance>(&st.just)) {
      s += "axiom " + axtag_name(ai->tag) + " \"" +
           print_formula(st.formula) + "\"";
    } else if (std::get_if<JHyp>(&st.just)) {
      s += "hyp \"" + print_formula(st.formula) + "\"";
    } else if (auto* m = std::get_if<JMP>(&st.just)) {
      s += "mp " + std::to_string(m->imp + 1) + " " +
           std::to_string(m->ant + 1);
    } else if (auto* g = std::get_if<JGen1>(&st.just)) {
      s += "gen1 " + std::to_string(g->from + 1) + " ?" + g->var;
    } else if (auto* g2 = std::get_if<JGen2>(&st.just)) {
      s += "gen2 " + std::to_string(g2->from + 1) + " ?" + g2->pvar + ":" +
           std::to_string(g2->parity);
    }
    s += "\n";
  }
  return s;
}

}  // namespace bes
