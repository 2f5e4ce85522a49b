#pragma once

// Natural deduction trees (NI / NC) and the translations to and from the
// Hilbert systems.

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "bes/errors.hpp"
#include "bes/hilbert.hpp"
#include "bes/syntax.hpp"

namespace bes {

enum class NDSystem { NI, NC };

inline std::string nd_system_name(NDSystem s) {
  return s == NDSystem::NI ? "NI" : "NC";
}

inline NDSystem nd_of_hilbert(SystemId s) {
  return s == SystemId::HI ? NDSystem::NI : NDSystem::NC;
}
inline SystemId hilbert_of_nd(NDSystem s) {
  return s == NDSystem::NI ? SystemId::HI : SystemId::HC;
}

enum class NDRule { Hyp, ImpI, ImpE, AllI, AllE, PiI, PiE, Efq, Dne };

struct NDNode;
using NDRef = std::shared_ptr<const NDNode>;

struct NDNode {
  NDRule rule;
  FormulaRef concl;
  std::string label;              // Hyp: its marker; ImpI: marker it binds
  std::string var;                // AllI eigenvariable, PiI eigen pvar
  int parity = 0;                 // PiI
  Term term{TermKind::Const, ""}; // AllE witness
  std::string pconst;             // PiE witness
  std::vector<NDRef> kids;
};

struct NDProof {
  NDSystem system = NDSystem::NI;
  NDRef root;
};

// --- node constructors ------------------------------------------------------

inline NDRef nd_hyp(std::string label, FormulaRef f) {
  auto n = std::make_shared<NDNode>();
  n->rule = NDRule::Hyp;
  n->label = std::move(label);
  n->concl = std::move(f);
  return n;
}
inline NDRef nd_impi(std::string label, FormulaRef antecedent, NDRef kid) {
  auto n = std::make_shared<NDNode>();
  n->rule = NDRule::ImpI;
  n->label = std::move(label);
  n->concl = f_imp(std::move(antecedent), kid->concl);
  n->kids = {std::move(kid)};
  return n;
}
inline NDRef nd_impe(NDRef major, NDRef minor) {
  if (major->concl->kind != Fk::Imp)
    throw TransformError("impE major premise is not an implication");
  if (!eq(major->concl->lhs, minor->concl))
    throw TransformError("impE minor premise does not match");
  auto n = std::make_shared<NDNode>();
  n->rule = NDRule::ImpE;
  n->concl = major->concl->rhs;
  n->kids = {std::move(major), std::move(minor)};
  return n;
}
inline NDRef nd_alli(std::string x, NDRef kid) {
  auto n = std::make_shared<NDNode>();
  n->rule = NDRule::AllI;
  n->var = x;
  n->concl = f_all(std::move(x), kid->concl);
  n->kids = {std::move(kid)};
  return n;
}
inline NDRef nd_alle(Term t, NDRef kid) {
  if (kid->concl->kind != Fk::All)
    throw TransformError("allE premise is not a universal");
  auto n = std::make_shared<NDNode>();
  n->rule = NDRule::AllE;
  n->term = t;
  n->concl = subst_ind(kid->concl->lhs, kid->concl->var, t);
  n->kids = {std::move(kid)};
  return n;
}
inline NDRef nd_pii(std::string X, int parity, NDRef kid) {
  auto n = std::make_shared<NDNode>();
  n->rule = NDRule::PiI;
  n->var = X;
  n->parity = parity;
  n->concl = f_pi(std::move(X), parity, kid->concl);
  n->kids = {std::move(kid)};
  return n;
}
inline NDRef nd_pie(std::string P, NDRef kid) {
  if (kid->concl->kind != Fk::Pi)
    throw TransformError("piE premise is not a second-order universal");
  auto n = std::make_shared<NDNode>();
  n->rule = NDRule::PiE;
  n->pconst = std::move(P);
  n->concl = subst_pred(kid->concl->lhs, kid->concl->var, kid->concl->parity,
                        n->pconst);
  n->kids = {std::move(kid)};
  return n;
}
inline NDRef nd_efq(FormulaRef f, NDRef kid) {
  auto n = std::make_shared<NDNode>();
  n->rule = NDRule::Efq;
  n->concl = std::move(f);
  n->kids = {std::move(kid)};
  return n;
}
inline NDRef nd_dne(NDRef kid) {
  const FormulaRef& c = kid->concl;
  auto bot = bot_core();
  if (c->kind != Fk::Imp || c->lhs->kind != Fk::Imp ||
      !eq(c->lhs->rhs, bot) || !eq(c->rhs, bot))
    throw TransformError("dne premise is not a double negation");
  auto n = std::make_shared<NDNode>();
  n->rule = NDRule::Dne;
  n->concl = c->lhs->lhs;
  n->kids = {std::move(kid)};
  return n;
}

// --- open hypotheses --------------------------------------------------------

namespace detail {
inline void collect_open(const NDRef& n, std::set<std::string>& bound,
                         std::vector<std::pair<std::string, FormulaRef>>& out) {
  if (n->rule == NDRule::Hyp) {
    if (n->label.empty() || !bound.count(n->label))
      out.push_back({n->label, n->concl});
    return;
  }
  bool added = false;
  if (n->rule == NDRule::ImpI && !n->label.empty() && !bound.count(n->label)) {
    bound.insert(n->label);
    added = true;
  }
  for (auto& k : n->kids) collect_open(k, bound, out);
  if (added) bound.erase(n->label);
}
}  // namespace detail

// Hypotheses of the subtree not discharged within it, in leaf order.
inline std::vector<std::pair<std::string, FormulaRef>> open_hyp_leaves(
    const NDRef& n) {
  std::set<std::string> bound;
  std::vector<std::pair<std::string, FormulaRef>> out;
  detail::collect_open(n, bound, out);
  return out;
}

inline std::vector<FormulaRef> open_hyps(const NDRef& n) {
  std::vector<FormulaRef> out;
  for (auto& [l, f] : open_hyp_leaves(n)) {
    bool seen = false;
    for (auto& g : out)
      if (eq(g, f)) seen = true;
    if (!seen) out.push_back(f);
  }
  return out;
}

// --- checking ---------------------------------------------------------------

struct NDReport {
  struct Item {
    std::string path;  // slash-separated kid indices from the root
    std::string msg;
  };
  std::vector<Item> items;
  bool ok() const { return items.empty(); }
};

namespace detail {

struct NDChecker {
  NDSystem sys;
  NDReport* rep;
  std::map<std::string, FormulaRef> active;

  void bad(const std::string& path, const std::string& m) {
    rep->items.push_back({path, m});
  }

  void walk(const NDRef& n, const std::string& path) {
    switch (n->rule) {
      case NDRule::Hyp: {
        if (!n->kids.empty()) bad(path, "hypothesis with premises");
        auto it = active.find(n->label);
        if (!n->label.empty() && it != active.end() &&
            !eq(it->second, n->concl))
          bad(path, "marker [" + n->label +
                        "] is bound to a different formula here");
        return;
      }
      case NDRule::ImpI: {
        if (n->kids.size() != 1 || n->concl->kind != Fk::Imp) {
          bad(path, "malformed impI");
          return;
        }
        if (!eq(n->kids[0]->concl, n->concl->rhs))
          bad(path, "impI premise does not match the consequent");
        bool added = false;
        if (!n->label.empty()) {
          if (active.count(n->label)) {
            bad(path, "marker [" + n->label + "] reused in a nested impI");
          } else {
            active.emplace(n->label, n->concl->lhs);
            added = true;
          }
        }
        walk(n->kids[0], path + "/0");
        if (added) active.erase(n->label);
        return;
      }
      case NDRule::ImpE: {
        if (n->kids.size() != 2) {
          bad(path, "impE needs two premises");
          return;
        }
        const FormulaRef& M = n->kids[0]->concl;
        if (M->kind != Fk::Imp)
          bad(path, "impE major premise is not an implication");
        else {
          if (!eq(n->kids[1]->concl, M->lhs))
            bad(path, "impE minor premise does not match the antecedent");
          if (!eq(n->concl, M->rhs))
            bad(path, "impE conclusion does not match the consequent");
        }
        walk(n->kids[0], path + "/0");
        walk(n->kids[1], path + "/1");
        return;
      }
      case NDRule::AllI: {
        if (n->kids.size() != 1 || n->concl->kind != Fk::All ||
            n->concl->var != n->var ||
            !eq(n->concl->lhs, n->kids[0]->concl)) {
          bad(path, "malformed allI");
        } else {
          for (auto& [l, h] : open_hyp_leaves(n->kids[0]))
            if (free_ivars(h).count(n->var)) {
              bad(path, "eigenvariable ?" + n->var +
                            " occurs free in an open hypothesis");
              break;
            }
        }
        walk(n->kids[0], path + "/0");
        return;
      }
      case NDRule::AllE: {
        if (n->kids.size() != 1 || n->kids[0]->concl->kind != Fk::All) {
          bad(path, "malformed allE");
          if (!n->kids.empty()) walk(n->kids[0], path + "/0");
          return;
        }
        try {
          FormulaRef want = subst_ind(n->kids[0]->concl->lhs,
                                      n->kids[0]->concl->var, n->term);
          if (!eq(n->concl, want))
            bad(path, "allE conclusion is not the instance at " +
                          print_term(n->term));
        } catch (const CaptureError& e) {
          bad(path, std::string("allE instantiation captures: ") + e.what());
        }
        walk(n->kids[0], path + "/0");
        return;
      }
      case NDRule::PiI: {
        if (n->kids.size() != 1 || n->concl->kind != Fk::Pi ||
            n->concl->var != n->var || n->concl->parity != n->parity ||
            !eq(n->concl->lhs, n->kids[0]->concl)) {
          bad(path, "malformed piI");
        } else {
          for (auto& [l, h] : open_hyp_leaves(n->kids[0]))
            if (free_pvars(h).count(n->var)) {
              bad(path, "eigenvariable ?" + n->var +
                            " occurs free in an open hypothesis");
              break;
            }
        }
        walk(n->kids[0], path + "/0");
        return;
      }
      case NDRule::PiE: {
        if (n->kids.size() != 1 || n->kids[0]->concl->kind != Fk::Pi) {
          bad(path, "malformed piE");
          if (!n->kids.empty()) walk(n->kids[0], path + "/0");
          return;
        }
        try {
          const FormulaRef& q = n->kids[0]->concl;
          FormulaRef want = subst_pred(q->lhs, q->var, q->parity, n->pconst);
          if (!eq(n->concl, want))
            bad(path, "piE conclusion is not the instance at " + n->pconst);
        } catch (const ArityMismatch& e) {
          bad(path, std::string("piE arity clash: ") + e.what());
        }
        walk(n->kids[0], path + "/0");
        return;
      }
      case NDRule::Efq: {
        if (n->kids.size() != 1 || !eq(n->kids[0]->concl, bot_core()))
          bad(path, "efq premise is not absurdity");
        if (!n->kids.empty()) walk(n->kids[0], path + "/0");
        return;
      }
      case NDRule::Dne: {
        if (sys != NDSystem::NC) bad(path, "dne is not available in NI");
        if (n->kids.size() != 1 ||
            !eq(n->kids[0]->concl,
                f_imp(f_imp(n->concl, bot_core()), bot_core())))
          bad(path, "dne premise is not the double negation");
        if (!n->kids.empty()) walk(n->kids[0], path + "/0");
        return;
      }
    }
  }
};

}  // namespace detail

inline NDReport check_nd(const NDProof& p) {
  NDReport rep;
  if (!p.root) {
    rep.items.push_back({"", "empty proof"});
    return rep;
  }
  detail::NDChecker c{p.system, &rep, {}};
  c.walk(p.root, "");
  return rep;
}

// --- Hilbert -> natural deduction -------------------------------------------

namespace detail {

struct H2N {
  long counter = 0;
  std::string fresh() { return "u" + std::to_string(++counter); }

  NDRef axiom(SystemId, const AxiomInstance& ai) {
    switch (ai.tag) {
      case AxTag::K: {
        std::string u = fresh(), v = fresh();
        return nd_impi(u, ai.phi, nd_impi(v, ai.psi, nd_hyp(u, ai.phi)));
      }
      case AxTag::S: {
        std::string f = fresh(), g = fresh(), x = fresh();
        FormulaRef tf = f_imp(ai.phi, f_imp(ai.psi, ai.chi));
        FormulaRef tg = f_imp(ai.phi, ai.psi);
        NDRef bc = nd_impe(nd_hyp(f, tf), nd_hyp(x, ai.phi));
        NDRef bb = nd_impe(nd_hyp(g, tg), nd_hyp(x, ai.phi));
        return nd_impi(f, tf,
                       nd_impi(g, tg, nd_impi(x, ai.phi, nd_impe(bc, bb))));
      }
      case AxTag::AllE: {
        std::string u = fresh();
        FormulaRef all = f_all(ai.var, ai.phi);
        return nd_impi(u, all, nd_alle(ai.term, nd_hyp(u, all)));
      }
      case AxTag::PiE: {
        std::string u = fresh();
        FormulaRef pi = f_pi(ai.pvar, ai.parity, ai.phi);
        return nd_impi(u, pi, nd_pie(ai.pconst, nd_hyp(u, pi)));
      }
      case AxTag::NegI: {
        auto bot = bot_core();
        std::string f = fresh(), g = fresh(), x = fresh();
        FormulaRef tf = f_imp(ai.phi, ai.psi);
        FormulaRef tg = f_imp(ai.phi, f_imp(ai.psi, bot));
        NDRef nb = nd_impe(nd_hyp(g, tg), nd_hyp(x, ai.phi));
        NDRef b = nd_impe(nd_hyp(f, tf), nd_hyp(x, ai.phi));
        return nd_impi(f, tf,
                       nd_impi(g, tg, nd_impi(x, ai.phi, nd_impe(nb, b))));
      }
      case AxTag::EFQ: {
        auto bot = bot_core();
        std::string f = fresh(), x = fresh();
        FormulaRef tf = f_imp(ai.phi, bot);
        NDRef fall = nd_impe(nd_hyp(f, tf), nd_hyp(x, ai.phi));
        return nd_impi(f, tf, nd_impi(x, ai.phi, nd_efq(ai.psi, fall)));
      }
      case AxTag::DNE: {
        auto bot = bot_core();
        std::string u = fresh();
        FormulaRef nn = f_imp(f_imp(ai.phi, bot), bot);
        return nd_impi(u, nn, nd_dne(nd_hyp(u, nn)));
      }
    }
    throw Error("bad axiom tag");
  }
};

}  // namespace detail

inline NDProof hilbert_to_nd(const HilbertProof& p) {
  detail::H2N h;
  NDProof out;
  out.system = nd_of_hilbert(p.system);
  std::vector<NDRef> nd(p.steps.size());
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    const auto& st = p.steps[i];
    if (auto* ai = std::get_if<AxiomInstance>(&st.just)) {
      nd[i] = h.axiom(p.system, *ai);
    } else if (std::get_if<JHyp>(&st.just)) {
      nd[i] = nd_hyp("", st.formula);
    } else if (auto* m = std::get_if<JMP>(&st.just)) {
      nd[i] = nd_impe(nd[m->imp], nd[m->ant]);
    } else if (auto* g = std::get_if<JGen1>(&st.just)) {
      const FormulaRef& psi = p.steps[g->from].formula->lhs;
      std::string u = h.fresh();
      nd[i] = nd_impi(u, psi,
                      nd_alli(g->var, nd_impe(nd[g->from], nd_hyp(u, psi))));
    } else {
      auto* g2 = std::get_if<JGen2>(&st.just);
      const FormulaRef& psi = p.steps[g2->from].formula->lhs;
      std::string u = h.fresh();
      nd[i] = nd_impi(u, psi,
                      nd_pii(g2->pvar, g2->parity,
                             nd_impe(nd[g2->from], nd_hyp(u, psi))));
    }
  }
  out.root = nd.back();
  return out;
}

// --- natural deduction -> Hilbert -------------------------------------------

namespace detail {

inline bool has_marker(const NDRef& n, const std::string& l) {
  if (n->rule == NDRule::Hyp) return n->label == l;
  for (auto& k : n->kids)
    if (has_marker(k, l)) return true;
  return false;
}

// Appends steps deriving phi from a step proving bot (index ib): lift to
// top -> bot, apply EFQ, discharge with the closed theorem top.
inline std::size_t efq_route(ProofBuilder& b, std::size_t ib,
                             const FormulaRef& phi) {
  FormulaRef top = top_core();
  std::size_t lifted = b.klift(ib, top);  // top -> bot
  std::size_t ax = b.axiom(ax_efq(top, phi));
  std::size_t tp = b.mp(ax, lifted);      // top -> phi
  std::size_t t = b.absorb(derive_top(b.p.system));
  return b.mp(tp, t);
}

struct N2H {
  SystemId sys;

  HilbertProof tr(const NDRef& n) {
    switch (n->rule) {
      case NDRule::Hyp: {
        HilbertProof q;
        q.system = sys;
        q.hyps = {n->concl};
        q.steps.push_back({n->concl, JHyp{}});
        return q;
      }
      case NDRule::ImpE: {
        ProofBuilder b(sys);
        std::size_t i = b.absorb(tr(n->kids[0]));
        std::size_t j = b.absorb(tr(n->kids[1]));
        b.mp(i, j);
        return b.p;
      }
      case NDRule::ImpI: {
        const FormulaRef& ant = n->concl->lhs;
        const NDRef& kid = n->kids[0];
        // A generalization gadget translates back to the primitive rule.
        if (!n->label.empty() && kid->rule == NDRule::AllI &&
            kid->kids[0]->rule == NDRule::ImpE) {
          const NDRef& body = kid->kids[0];
          const NDRef& minor = body->kids[1];
          if (minor->rule == NDRule::Hyp && minor->label == n->label &&
              eq(minor->concl, ant) && !has_marker(body->kids[0], n->label)) {
            ProofBuilder b(sys);
            std::size_t i = b.absorb(tr(body->kids[0]));
            std::size_t g = b.gen1(i, kid->var);
            if (eq(b.p.steps[g].formula, n->concl)) return b.p;
            b.p.steps.clear();  // shape coincidence without the right result
          }
        }
        if (!n->label.empty() && kid->rule == NDRule::PiI &&
            kid->kids[0]->rule == NDRule::ImpE) {
          const NDRef& body = kid->kids[0];
          const NDRef& minor = body->kids[1];
          if (minor->rule == NDRule::Hyp && minor->label == n->label &&
              eq(minor->concl, ant) && !has_marker(body->kids[0], n->label)) {
            ProofBuilder b(sys);
            std::size_t i = b.absorb(tr(body->kids[0]));
            std::size_t g = b.gen2(i, kid->var, kid->parity);
            if (eq(b.p.steps[g].formula, n->concl)) return b.p;
            b.p.steps.clear();
          }
        }
        if (n->label.empty() || !has_marker(kid, n->label)) {
          // Vacuous discharge: weaken with K.
          ProofBuilder b(sys);
          std::size_t i = b.absorb(tr(kid));
          b.klift(i, ant);
          return b.p;
        }
        return deduction_intro(tr(kid), ant);
      }
      case NDRule::AllI: {
        ProofBuilder b(sys);
        FormulaRef top = top_core();
        std::size_t i = b.absorb(tr(n->kids[0]));
        std::size_t lifted = b.klift(i, top);
        std::size_t g = b.gen1(lifted, n->var);
        std::size_t t = b.absorb(derive_top(sys));
        b.mp(g, t);
        return b.p;
      }
      case NDRule::PiI: {
        ProofBuilder b(sys);
        FormulaRef top = top_core();
        std::size_t i = b.absorb(tr(n->kids[0]));
        std::size_t lifted = b.klift(i, top);
        std::size_t g = b.gen2(lifted, n->var, n->parity);
        std::size_t t = b.absorb(derive_top(sys));
        b.mp(g, t);
        return b.p;
      }
      case NDRule::AllE: {
        ProofBuilder b(sys);
        std::size_t i = b.absorb(tr(n->kids[0]));
        const FormulaRef& q = n->kids[0]->concl;
        std::size_t ax = b.axiom(ax_alle(q->lhs, q->var, n->term));
        b.mp(ax, i);
        return b.p;
      }
      case NDRule::PiE: {
        ProofBuilder b(sys);
        std::size_t i = b.absorb(tr(n->kids[0]));
        const FormulaRef& q = n->kids[0]->concl;
        std::size_t ax = b.axiom(ax_pie(q->lhs, q->var, q->parity, n->pconst));
        b.mp(ax, i);
        return b.p;
      }
      case NDRule::Efq: {
        ProofBuilder b(sys);
        std::size_t i = b.absorb(tr(n->kids[0]));
        efq_route(b, i, n->concl);
        return b.p;
      }
      case NDRule::Dne: {
        if (sys != SystemId::HC)
          throw TransformError("dne has no image in HI");
        ProofBuilder b(sys);
        std::size_t i = b.absorb(tr(n->kids[0]));
        std::size_t ax = b.axiom(ax_dne(n->concl));
        b.mp(ax, i);
        return b.p;
      }
    }
    throw Error("bad rule");
  }
};

}  // namespace detail

inline HilbertProof nd_to_hilbert(const NDProof& p) {
  if (!p.root) throw TransformError("empty proof");
  detail::N2H t{hilbert_of_nd(p.system)};
  HilbertProof out = t.tr(p.root);
  // Declare exactly the open hypotheses; translation may have discharged
  // other occurrences of the same formula along the way.
  std::vector<FormulaRef> hyps = open_hyps(p.root);
  for (auto& h : out.hyps)
    if (!has_hyp(hyps, h)) hyps.push_back(h);
  out.hyps = std::move(hyps);
  return out;
}

// --- printing ---------------------------------------------------------------

namespace detail {
inline void print_nd_node(const NDRef& n, int indent, std::string& out) {
  std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  out += pad;
  switch (n->rule) {
    case NDRule::Hyp:
      out += "(hyp ";
      if (!n->label.empty()) out += n->label + " ";
      out += "\"" + print_formula(n->concl) + "\")";
      return;
    case NDRule::ImpI:
      out += "(impI ";
      if (!n->label.empty()) out += n->label + " ";
      out += "\"" + print_formula(n->concl) + "\"\n";
      print_nd_node(n->kids[0], indent + 1, out);
      out += ")";
      return;
    case NDRule::ImpE:
      out += "(impE\n";
      print_nd_node(n->kids[0], indent + 1, out);
      out += "\n";
      print_nd_node(n->kids[1], indent + 1, out);
      out += ")";
      return;
    case NDRule::AllI:
      out += "(allI ?" + n->var + "\n";
      print_nd_node(n->kids[0], indent + 1, out);
      out += ")";
      return;
    case NDRule::AllE:
      out += "(allE " + print_term(n->term) + "\n";
      print_nd_node(n->kids[0], indent + 1, out);
      out += ")";
      return;
    case NDRule::PiI:
      out += "(piI ?" + n->var + ":" + std::to_string(n->parity) + "\n";
      print_nd_node(n->kids[0], indent + 1, out);
      out += ")";
      return;
    case NDRule::PiE:
      out += "(piE " + n->pconst + "\n";
      print_nd_node(n->kids[0], indent + 1, out);
      out += ")";
      return;
    case NDRule::Efq:
      out += "(efq \"" + print_formula(n->concl) + "\"\n";
      print_nd_node(n->kids[0], indent + 1, out);
      out += ")";
      return;
    case NDRule::Dne:
      out += "(dne\n";
      print_nd_node(n->kids[0], indent + 1, out);
      out += ")";
      return;
  }
}
}  // namespace detail

inline std::string print_nd(const NDProof& p) {
  std::string out = "nd " + nd_system_name(p.system) + "\n";
  detail::print_nd_node(p.root, 0, out);
  out += "\n";
  return out;
}

}  // namespace bes
