#pragma once

// Flattening of closed second-order formulas into 0-ary atoms and the
// simulation bases that mirror Hilbert provability inside the atomic engine:
// compile a checked proof into an atomic derivation trace, extract a proof
// back out of any trace over the simulation rules.

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bes/atomic.hpp"
#include "bes/errors.hpp"
#include "bes/hilbert.hpp"
#include "bes/syntax.hpp"

namespace bes {

// The language a flat map is defined on: harvested predicates and constants
// plus the reserved eigen pools ($e…, $E…) that never occur in input data.
struct Fragment {
  std::map<std::string, int> preds;
  std::set<std::string> consts;
  std::set<std::string> eigen_consts;
  std::map<std::string, int> eigen_preds;

  void harvest(const FormulaRef& f) {
    for (auto& [name, ar] : all_pconsts(f)) {
      auto it = preds.find(name);
      if (it != preds.end() && it->second != ar)
        throw FragmentError("predicate " + name + " used at arities " +
                            std::to_string(it->second) + " and " +
                            std::to_string(ar));
      if (it == preds.end()) preds.emplace(name, ar);
    }
    for (auto& c : all_iconsts(f)) consts.insert(c);
  }

  std::string alloc_eigen_const() {
    for (long n = 0;; ++n) {
      std::string name = "$e" + std::to_string(n);
      if (!consts.count(name) && !eigen_consts.count(name)) {
        eigen_consts.insert(name);
        return name;
      }
    }
  }
  std::string alloc_eigen_pred(int arity) {
    for (long n = 0;; ++n) {
      std::string name = "$E" + std::to_string(n);
      if (!preds.count(name) && !eigen_preds.count(name)) {
        eigen_preds.emplace(name, arity);
        return name;
      }
    }
  }

  bool known_pred(const std::string& name, int arity) const {
    auto it = preds.find(name);
    if (it != preds.end()) return it->second == arity;
    auto jt = eigen_preds.find(name);
    return jt != eigen_preds.end() && jt->second == arity;
  }
  bool known_const(const std::string& name) const {
    return consts.count(name) || eigen_consts.count(name);
  }
};

namespace detail {
inline const char* fragment_reject(const Fragment& fr, const FormulaRef& f) {
  switch (f->kind) {
    case Fk::Atom:
      if (f->pred.kind == PredKind::Const &&
          !fr.known_pred(f->pred.name, f->pred.arity))
        return "predicate outside the fragment";
      for (auto& t : f->args)
        if (t.kind == TermKind::Const && !fr.known_const(t.name))
          return "constant outside the fragment";
      return nullptr;
    case Fk::Imp:
      if (auto* r = fragment_reject(fr, f->lhs)) return r;
      return fragment_reject(fr, f->rhs);
    case Fk::All:
    case Fk::Pi:
      return fragment_reject(fr, f->lhs);
    default:
      return "formula is not in the core connectives";
  }
}
}  // namespace detail

inline bool in_fragment(const Fragment& fr, const FormulaRef& f) {
  if (!free_ivars(f).empty() || !free_pvars(f).empty()) return false;
  return detail::fragment_reject(fr, f) == nullptr;
}

// Growable injective map from closed fragment formulas to 0-ary atoms.
// It is the identity on 0-ary atoms themselves; everything else gets a fresh
// $f name, stable across calls.
class FlatMap {
 public:
  Fragment frag;

  explicit FlatMap(Fragment fr) : frag(std::move(fr)) {}

  GroundAtom flat(const FormulaRef& f) {
    if (!free_ivars(f).empty() || !free_pvars(f).empty())
      throw FragmentError("flat of an open formula: " + print_formula(f));
    if (auto* why = detail::fragment_reject(frag, f))
      throw FragmentError(std::string(why) + ": " + print_formula(f));
    if (f->kind == Fk::Atom && f->pred.kind == PredKind::Const &&
        f->args.empty())
      return GroundAtom{f->pred.name, {}};
    std::string key = print_formula(f);
    auto it = table_.find(key);
    if (it != table_.end()) return it->second;
    std::string name;
    for (;;) {
      name = "$f" + std::to_string(next_++);
      if (!frag.preds.count(name) && !frag.eigen_preds.count(name) &&
          !inverse_.count(GroundAtom{name, {}}))
        break;
    }
    GroundAtom a{name, {}};
    table_.emplace(std::move(key), a);
    inverse_.emplace(a, f);
    return a;
  }

  FormulaRef nat(const GroundAtom& a) const {
    auto it = inverse_.find(a);
    if (it != inverse_.end()) return it->second;
    return atom_to_formula(a);
  }

  // Pre-registers a pair (used when reloading a serialized map).
  void adopt(const GroundAtom& a, const FormulaRef& f) {
    table_.emplace(print_formula(f), a);
    inverse_.emplace(a, f);
  }

  const std::map<GroundAtom, FormulaRef>& entries() const { return inverse_; }

 private:
  std::map<std::string, GroundAtom> table_;  // key: printed formula
  std::map<GroundAtom, FormulaRef> inverse_;
  long next_ = 0;
};

inline std::string print_flatmap(const FlatMap& m) {
  std::string s;
  for (auto& [a, f] : m.entries())
    s += print_atom(a) + "\t" + print_formula(f) + "\n";
  return s;
}

// ---------------------------------------------------------------------------
// Simulation bases.

enum class SimRow {
  AxK,
  AxS,
  AxAllE,
  AxPiE,
  AxNegI,
  AxEFQ,
  AxDNE,
  Mp,
  AllI,
  PiI
};

inline std::string simrow_name(SimRow r) {
  switch (r) {
    case SimRow::AxK: return "K";
    case SimRow::AxS: return "S";
    case SimRow::AxAllE: return "AllE";
    case SimRow::AxPiE: return "PiE";
    case SimRow::AxNegI: return "NegI";
    case SimRow::AxEFQ: return "EFQ";
    case SimRow::AxDNE: return "DNE";
    case SimRow::Mp: return "Mp";
    case SimRow::AllI: return "AllI";
    case SimRow::PiI: return "PiI";
  }
  return "?";
}

struct SimRule {
  SimRow row;
  AtomicRule rule;
  AxiomInstance ax{};   // axiom rows
  FormulaRef ant, cons; // Mp: premise/consequent; AllI/PiI: antecedent, body
  std::string var;      // AllI: x; PiI: X
  std::string eigen;    // AllI: e; PiI: E
  int parity = 0;       // PiI
};

struct SimulationBase {
  SystemId source = SystemId::HI;
  FlatMap map;
  Base base;
  std::vector<SimRule> rows;  // rows[i] describes base.rules[i]

  SimulationBase(SystemId s, Fragment fr) : source(s), map(std::move(fr)) {
    base.name = s == SystemId::HI ? "J" : "K";
  }

  bool add_row(SimRule r) {
    for (auto& existing : rows)
      if (existing.rule == r.rule) return false;
    base.rules.push_back(r.rule);
    rows.push_back(std::move(r));
    return true;
  }

  const SimRule* find_row(const AtomicRule& r) const {
    for (auto& row : rows)
      if (row.rule == r) return &row;
    return nullptr;
  }
};

namespace detail {

inline SimRow simrow_of_axtag(AxTag t) {
  switch (t) {
    case AxTag::K: return SimRow::AxK;
    case AxTag::S: return SimRow::AxS;
    case AxTag::AllE: return SimRow::AxAllE;
    case AxTag::PiE: return SimRow::AxPiE;
    case AxTag::NegI: return SimRow::AxNegI;
    case AxTag::EFQ: return SimRow::AxEFQ;
    case AxTag::DNE: return SimRow::AxDNE;
  }
  throw Error("bad axiom tag");
}

}  // namespace detail

// Adds, for each schema row, every instance whose slots come from `needed`
// (terms and witness predicates drawn from the fragment's pools).
inline void instantiate_rules(SimulationBase& sim,
                              const std::vector<FormulaRef>& needed) {
  Fragment& fr = sim.map.frag;

  auto add_axiom = [&](AxiomInstance ai) {
    SimRule r;
    r.row = detail::simrow_of_axtag(ai.tag);
    r.ax = ai;
    r.rule = AtomicRule{{}, sim.map.flat(instantiate_axiom(ai))};
    sim.add_row(std::move(r));
  };

  for (auto& a : needed)
    for (auto& b : needed) {
      add_axiom(ax_k(a, b));
      add_axiom(ax_negi(a, b));
      add_axiom(ax_efq(a, b));
      for (auto& c : needed) add_axiom(ax_s(a, b, c));
    }
  if (sim.source == SystemId::HC)
    for (auto& a : needed) add_axiom(ax_dne(a));

  std::vector<std::string> term_pool(fr.consts.begin(), fr.consts.end());
  term_pool.insert(term_pool.end(), fr.eigen_consts.begin(),
                   fr.eigen_consts.end());
  if (term_pool.empty()) term_pool.push_back(fr.alloc_eigen_const());
  for (auto& u : needed) {
    if (u->kind != Fk::All) continue;
    for (auto& t : term_pool)
      add_axiom(ax_alle(u->lhs, u->var, t_const(t)));
  }
  for (auto& u : needed) {
    if (u->kind != Fk::Pi) continue;
    std::vector<std::string> ppool;
    for (auto& [name, ar] : fr.preds)
      if (ar == u->parity) ppool.push_back(name);
    for (auto& [name, ar] : fr.eigen_preds)
      if (ar == u->parity) ppool.push_back(name);
    if (ppool.empty()) ppool.push_back(fr.alloc_eigen_pred(u->parity));
    for (auto& P : ppool) add_axiom(ax_pie(u->lhs, u->var, u->parity, P));
  }

  for (auto& a : needed)
    for (auto& b : needed) {
      SimRule r;
      r.row = SimRow::Mp;
      r.ant = a;
      r.cons = b;
      r.rule = AtomicRule{{Premise{{}, sim.map.flat(a)},
                           Premise{{}, sim.map.flat(f_imp(a, b))}},
                          sim.map.flat(b)};
      sim.add_row(std::move(r));
    }

  std::set<std::string> xs, Xs;
  for (auto& f : needed) {
    auto xv = all_ivar_names(f);
    xs.insert(xv.begin(), xv.end());
    auto Xv = all_pvar_names(f);
    Xs.insert(Xv.begin(), Xv.end());
  }
  if (xs.empty()) xs.insert("x0");
  if (Xs.empty()) Xs.insert("X0");
  if (fr.eigen_consts.empty()) fr.alloc_eigen_const();
  if (fr.eigen_preds.empty()) fr.alloc_eigen_pred(0);

  for (auto& ant : needed)
    for (auto& body : needed) {
      std::set<std::string> epool;
      for (auto& c : all_iconsts(body))
        if (fr.eigen_consts.count(c)) epool.insert(c);
      epool.insert(*fr.eigen_consts.begin());
      for (auto& e : epool) {
        if (occurs_iconst(ant, e)) continue;
        for (auto& x : xs) {
          if (free_ivars(ant).count(x)) continue;
          FormulaRef renamed;
          try {
            renamed = rename_iconst(body, e, x);
          } catch (const CaptureError&) {
            continue;
          }
          SimRule r;
          r.row = SimRow::AllI;
          r.ant = ant;
          r.cons = body;
          r.var = x;
          r.eigen = e;
          r.rule = AtomicRule{{Premise{{}, sim.map.flat(f_imp(ant, body))}},
                              sim.map.flat(f_imp(ant, f_all(x, renamed)))};
          sim.add_row(std::move(r));
        }
      }
      std::set<std::string> Epool;
      for (auto& [name, ar] : all_pconsts(body))
        if (fr.eigen_preds.count(name)) Epool.insert(name);
      Epool.insert(fr.eigen_preds.begin()->first);
      for (auto& E : Epool) {
        if (occurs_pconst(ant, E)) continue;
        int ar = fr.eigen_preds.at(E);
        for (auto& X : Xs) {
          if (free_pvars(ant).count(X)) continue;
          FormulaRef renamed;
          try {
            renamed = rename_pconst(body, E, X);
          } catch (const CaptureError&) {
            continue;
          } catch (const ArityMismatch&) {
            continue;
          }
          SimRule r;
          r.row = SimRow::PiI;
          r.ant = ant;
          r.cons = body;
          r.var = X;
          r.eigen = E;
          r.parity = ar;
          r.rule = AtomicRule{{Premise{{}, sim.map.flat(f_imp(ant, body))}},
                              sim.map.flat(f_imp(ant, f_pi(X, ar, renamed)))};
          sim.add_row(std::move(r));
        }
      }
    }
}

// ---------------------------------------------------------------------------
// Compilation of a checked Hilbert proof into an atomic derivation.

struct CompileResult {
  SimulationBase sim;
  std::set<GroundAtom> hyp_atoms;
  GroundAtom goal;
  TraceRef trace;
};

inline CompileResult compile_hilbert_to_base(const HilbertProof& p) {
  HilbertReport rep = check_hilbert(p.system, p);
  if (!rep.ok())
    throw TransformError("compile of a proof that fails checking: " +
                         rep.items.front().msg);
  for (auto& h : p.hyps)
    if (!free_ivars(h).empty() || !free_pvars(h).empty())
      throw TransformError("compile requires closed hypotheses");
  {
    const FormulaRef& c = p.conclusion();
    if (!free_ivars(c).empty() || !free_pvars(c).empty())
      throw TransformError("compile requires a closed conclusion");
  }

  Fragment fr;
  for (auto& h : p.hyps) fr.harvest(h);
  for (auto& st : p.steps) fr.harvest(st.formula);

  CompileResult out{SimulationBase(p.system, std::move(fr)),
                    {},
                    GroundAtom{},
                    nullptr};
  SimulationBase& S = out.sim;
  Fragment& frag = S.map.frag;

  std::map<std::string, std::string> sig_ind;
  std::map<std::string, std::pair<std::string, int>> sig_pred;
  auto eigen_of_ind = [&](const std::string& x) -> const std::string& {
    auto it = sig_ind.find(x);
    if (it == sig_ind.end())
      it = sig_ind.emplace(x, frag.alloc_eigen_const()).first;
    return it->second;
  };
  auto eigen_of_pred = [&](const std::string& X,
                           int ar) -> const std::string& {
    auto it = sig_pred.find(X);
    if (it == sig_pred.end())
      it = sig_pred.emplace(X, std::make_pair(frag.alloc_eigen_pred(ar), ar))
               .first;
    return it->second.first;
  };
  auto sigma = [&](FormulaRef f) {
    for (auto& x : free_ivars(f)) f = subst_ind(f, x, t_const(eigen_of_ind(x)));
    for (auto& [X, ar] : free_pvars(f))
      f = subst_pred(f, X, ar, eigen_of_pred(X, ar));
    return f;
  };
  auto sigma_term = [&](const Term& t) {
    return t.kind == TermKind::Var ? t_const(eigen_of_ind(t.name)) : t;
  };

  for (auto& h : p.hyps) out.hyp_atoms.insert(S.map.flat(h));

  std::size_t n = p.steps.size();
  std::vector<FormulaRef> sf(n);
  std::vector<TraceRef> tr(n);
  for (std::size_t i = 0; i < n; ++i) {
    const HilbertStep& st = p.steps[i];
    sf[i] = sigma(st.formula);
    if (std::get_if<JHyp>(&st.just)) {
      auto node = std::make_shared<TraceNode>();
      node->hyps = out.hyp_atoms;
      node->goal = S.map.flat(sf[i]);
      node->is_ref = true;
      tr[i] = node;
      continue;
    }
    SimRule row;
    std::vector<TraceRef> kids;
    if (auto* ai = std::get_if<AxiomInstance>(&st.just)) {
      AxiomInstance a2 = *ai;
      switch (a2.tag) {
        case AxTag::AllE:
          a2.phi = sf[i]->lhs->lhs;
          a2.term = sigma_term(a2.term);
          break;
        case AxTag::PiE:
          a2.phi = sf[i]->lhs->lhs;
          break;
        default:
          if (a2.phi) a2.phi = sigma(a2.phi);
          if (a2.psi) a2.psi = sigma(a2.psi);
          if (a2.chi) a2.chi = sigma(a2.chi);
          break;
      }
      if (!eq(instantiate_axiom(a2), sf[i]))
        throw TransformError("axiom slots do not survive eigen renaming");
      row.row = detail::simrow_of_axtag(a2.tag);
      row.ax = a2;
      row.rule = AtomicRule{{}, S.map.flat(sf[i])};
    } else if (auto* m = std::get_if<JMP>(&st.just)) {
      row.row = SimRow::Mp;
      row.ant = sf[m->ant];
      row.cons = sf[i];
      row.rule = AtomicRule{{Premise{{}, S.map.flat(sf[m->ant])},
                             Premise{{}, S.map.flat(sf[m->imp])}},
                            S.map.flat(sf[i])};
      kids = {tr[m->ant], tr[m->imp]};
    } else if (auto* g = std::get_if<JGen1>(&st.just)) {
      row.row = SimRow::AllI;
      row.ant = sf[g->from]->lhs;
      row.cons = sf[g->from]->rhs;
      row.var = g->var;
      row.eigen = eigen_of_ind(g->var);
      row.rule = AtomicRule{{Premise{{}, S.map.flat(sf[g->from])}},
                            S.map.flat(sf[i])};
      kids = {tr[g->from]};
    } else {
      auto* g2 = std::get_if<JGen2>(&st.just);
      row.row = SimRow::PiI;
      row.ant = sf[g2->from]->lhs;
      row.cons = sf[g2->from]->rhs;
      row.var = g2->pvar;
      row.eigen = eigen_of_pred(g2->pvar, g2->parity);
      row.parity = g2->parity;
      row.rule = AtomicRule{{Premise{{}, S.map.flat(sf[g2->from])}},
                            S.map.flat(sf[i])};
      kids = {tr[g2->from]};
    }
    auto node = std::make_shared<TraceNode>();
    node->hyps = out.hyp_atoms;
    node->goal = row.rule.concl;
    node->rule = row.rule;
    node->kids = std::move(kids);
    S.add_row(std::move(row));
    tr[i] = node;
  }

  out.goal = S.map.flat(sf[n - 1]);
  out.trace = tr[n - 1];
  return out;
}

// ---------------------------------------------------------------------------
// Extraction: any checking trace over the simulation rules folds back into a
// Hilbert proof of the unflattened goal from the unflattened context.

namespace detail {

struct Extractor {
  const SimulationBase& sim;
  std::map<const TraceNode*, std::shared_ptr<const HilbertProof>> memo;

  std::shared_ptr<const HilbertProof> go(const TraceRef& t) {
    auto it = memo.find(t.get());
    if (it != memo.end()) return it->second;
    HilbertProof q;
    q.system = sim.source;
    if (t->is_ref) {
      FormulaRef f = sim.map.nat(t->goal);
      q.hyps = {f};
      q.steps.push_back({f, JHyp{}});
    } else {
      const SimRule* row = sim.find_row(t->rule);
      if (!row)
        throw UnknownRule("trace applies a rule outside the simulation base: " +
                          print_rule(t->rule));
      switch (row->row) {
        case SimRow::Mp: {
          if (t->kids.size() != 2)
            throw TransformError("mp trace node needs two children");
          auto pa = go(t->kids[0]);
          auto pi = go(t->kids[1]);
          ProofBuilder b(sim.source);
          std::size_t ia = b.absorb(*pa);
          std::size_t ii = b.absorb(*pi);
          const FormulaRef& fi = b.p.steps[ii].formula;
          if (fi->kind == Fk::Imp && eq(fi->lhs, b.p.steps[ia].formula))
            b.mp(ii, ia);
          else
            b.mp(ia, ii);  // tolerate swapped premise order
          q = b.p;
          break;
        }
        case SimRow::AllI: {
          if (t->kids.size() != 1)
            throw TransformError("forall trace node needs one child");
          HilbertProof sub = *go(t->kids[0]);
          sub = rename_eigen_ind(sub, row->eigen, row->var);
          ProofBuilder b(sim.source);
          b.gen1(b.absorb(sub), row->var);
          q = b.p;
          break;
        }
        case SimRow::PiI: {
          if (t->kids.size() != 1)
            throw TransformError("pi trace node needs one child");
          HilbertProof sub = *go(t->kids[0]);
          sub = rename_eigen_pred(sub, row->eigen, row->var);
          ProofBuilder b(sim.source);
          b.gen2(b.absorb(sub), row->var, row->parity);
          q = b.p;
          break;
        }
        default: {  // flattened axiom rows
          q.steps.push_back({instantiate_axiom(row->ax), row->ax});
          break;
        }
      }
    }
    auto sp = std::make_shared<const HilbertProof>(std::move(q));
    memo.emplace(t.get(), sp);
    return sp;
  }
};

}  // namespace detail

inline HilbertProof extract_hilbert_from_base(const SimulationBase& sim,
                                              const TraceRef& trace) {
  if (!trace) throw TransformError("empty trace");
  detail::Extractor ex{sim, {}};
  HilbertProof p = *ex.go(trace);
  std::vector<FormulaRef> hyps;
  for (auto& a : trace->hyps) hyps.push_back(sim.map.nat(a));
  for (auto& h : p.hyps)
    if (!has_hyp(hyps, h)) hyps.push_back(h);
  p.hyps = std::move(hyps);
  return p;
}

// ---------------------------------------------------------------------------
// Independent recheck of the recorded side conditions and row shapes.

struct AuditReport {
  std::vector<std::string> items;
  bool ok() const { return items.empty(); }
};

inline AuditReport audit_sim(const SimulationBase& sim) {
  AuditReport rep;
  auto bad = [&](std::size_t i, const std::string& m) {
    rep.items.push_back("row " + std::to_string(i + 1) + " (" +
                        simrow_name(sim.rows[i].row) + "): " + m);
  };
  for (std::size_t i = 0; i < sim.rows.size(); ++i) {
    const SimRule& r = sim.rows[i];
    switch (r.row) {
      case SimRow::AxDNE:
        if (sim.source == SystemId::HI)
          bad(i, "classical row in the intuitionistic base");
        [[fallthrough]];
      case SimRow::AxK:
      case SimRow::AxS:
      case SimRow::AxAllE:
      case SimRow::AxPiE:
      case SimRow::AxNegI:
      case SimRow::AxEFQ: {
        if (!r.rule.premises.empty()) {
          bad(i, "axiom row with premises");
          break;
        }
        try {
          if (!eq(sim.map.nat(r.rule.concl), instantiate_axiom(r.ax)))
            bad(i, "conclusion atom does not name the recorded instance");
        } catch (const Error& e) {
          bad(i, std::string("slots do not instantiate: ") + e.what());
        }
        break;
      }
      case SimRow::Mp: {
        if (r.rule.premises.size() != 2 ||
            !eq(sim.map.nat(r.rule.premises[0].concl), r.ant) ||
            !eq(sim.map.nat(r.rule.premises[1].concl),
                f_imp(r.ant, r.cons)) ||
            !eq(sim.map.nat(r.rule.concl), r.cons))
          bad(i, "premises do not spell modus ponens");
        break;
      }
      case SimRow::AllI: {
        if (free_ivars(r.ant).count(r.var)) {
          bad(i, "bound variable free in the antecedent");
          break;
        }
        if (occurs_iconst(r.ant, r.eigen)) {
          bad(i, "eigen constant occurs in the antecedent");
          break;
        }
        try {
          FormulaRef renamed = rename_iconst(r.cons, r.eigen, r.var);
          if (r.rule.premises.size() != 1 ||
              !eq(sim.map.nat(r.rule.premises[0].concl),
                  f_imp(r.ant, r.cons)) ||
              !eq(sim.map.nat(r.rule.concl),
                  f_imp(r.ant, f_all(r.var, renamed))))
            bad(i, "rule shape does not match the recorded slots");
        } catch (const CaptureError&) {
          bad(i, "eigen renaming captures");
        }
        break;
      }
      case SimRow::PiI: {
        if (free_pvars(r.ant).count(r.var)) {
          bad(i, "bound variable free in the antecedent");
          break;
        }
        if (occurs_pconst(r.ant, r.eigen)) {
          bad(i, "eigen predicate occurs in the antecedent");
          break;
        }
        try {
          FormulaRef renamed = rename_pconst(r.cons, r.eigen, r.var);
          if (r.rule.premises.size() != 1 ||
              !eq(sim.map.nat(r.rule.premises[0].concl),
                  f_imp(r.ant, r.cons)) ||
              !eq(sim.map.nat(r.rule.concl),
                  f_imp(r.ant, f_pi(r.var, r.parity, renamed))))
            bad(i, "rule shape does not match the recorded slots");
        } catch (const CaptureError&) {
          bad(i, "eigen renaming captures");
        } catch (const ArityMismatch&) {
          bad(i, "eigen renaming changes arity");
        }
        break;
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Serialization. parse_simbase lives with the other parsers.

inline std::string print_simrow(const SimRule& r) {
  std::string s = simrow_name(r.row);
  auto q = [](const FormulaRef& f) { return " \"" + print_formula(f) + "\""; };
  switch (r.row) {
    case SimRow::AxK:
    case SimRow::AxNegI:
    case SimRow::AxEFQ:
      return s + q(r.ax.phi) + q(r.ax.psi);
    case SimRow::AxS:
      return s + q(r.ax.phi) + q(r.ax.psi) + q(r.ax.chi);
    case SimRow::AxAllE:
      return s + q(r.ax.phi) + " ?" + r.ax.var + " " + print_term(r.ax.term);
    case SimRow::AxPiE:
      return s + q(r.ax.phi) + " ?" + r.ax.pvar + ":" +
             std::to_string(r.ax.parity) + " " + r.ax.pconst;
    case SimRow::AxDNE:
      return s + q(r.ax.phi);
    case SimRow::Mp:
      return s + q(r.ant) + q(r.cons);
    case SimRow::AllI:
      return s + q(r.ant) + q(r.cons) + " ?" + r.var + " " + r.eigen;
    case SimRow::PiI:
      return s + q(r.ant) + q(r.cons) + " ?" + r.var + ":" +
             std::to_string(r.parity) + " " + r.eigen;
  }
  return s;
}

inline std::string print_simbase(const SimulationBase& sim) {
  std::string s = "sim " + sim.base.name + "\n";
  s += print_base(sim.base);
  s += "rows {\n";
  for (auto& r : sim.rows) s += "  " + print_simrow(r) + "\n";
  s += "}\n";
  s += "flatmap {\n";
  for (auto& [a, f] : sim.map.entries())
    s += "  " + print_atom(a) + " \"" + print_formula(f) + "\"\n";
  s += "}\n";
  return s;
}

}  // namespace bes
