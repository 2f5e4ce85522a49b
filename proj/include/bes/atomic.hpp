#pragma once

// Atomic systems: bases of zero/first/second-level rules over closed atoms,
// derivability with hypotheses, derivation traces. Two engines: exact
// least-fixpoint saturation over the finite context lattice, and a
// trace-producing top-down search with loop detection.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bes/errors.hpp"
#include "bes/syntax.hpp"

namespace bes {

struct GroundAtom {
  std::string pred;
  std::vector<std::string> args;

  bool operator==(const GroundAtom& o) const {
    return pred == o.pred && args == o.args;
  }
  bool operator!=(const GroundAtom& o) const { return !(*this == o); }
  bool operator<(const GroundAtom& o) const {
    if (pred != o.pred) return pred < o.pred;
    return args < o.args;
  }
};

inline std::string print_atom(const GroundAtom& a) {
  if (a.args.empty()) return a.pred;
  std::string s = a.pred + "(";
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) s += ", ";
    s += a.args[i];
  }
  return s + ")";
}

inline FormulaRef atom_to_formula(const GroundAtom& a) {
  std::vector<Term> ts;
  ts.reserve(a.args.size());
  for (auto& c : a.args) ts.push_back(t_const(c));
  return f_atom({PredKind::Const, a.pred, (int)a.args.size()}, std::move(ts));
}

// The closed constant-headed atoms are exactly the formulas an atomic system
// talks about.
inline std::optional<GroundAtom> formula_to_atom(const FormulaRef& f) {
  if (f->kind != Fk::Atom || f->pred.kind != PredKind::Const)
    return std::nullopt;
  GroundAtom a{f->pred.name, {}};
  for (auto& t : f->args) {
    if (t.kind != TermKind::Const) return std::nullopt;
    a.args.push_back(t.name);
  }
  return a;
}

// A premise is an atom derived under extra hypotheses; empty hyps is a plain
// first-level premise.
struct Premise {
  std::set<GroundAtom> hyps;
  GroundAtom concl;

  bool operator==(const Premise& o) const {
    return hyps == o.hyps && concl == o.concl;
  }
  bool operator<(const Premise& o) const {
    if (hyps != o.hyps) return hyps < o.hyps;
    return concl < o.concl;
  }
};

struct AtomicRule {
  std::vector<Premise> premises;
  GroundAtom concl;

  bool operator==(const AtomicRule& o) const {
    return premises == o.premises && concl == o.concl;
  }
  bool operator<(const AtomicRule& o) const {
    if (!(premises == o.premises)) return premises < o.premises;
    return concl < o.concl;
  }
};

// Rule with a wildcard conclusion ("premises => *"): stands for one concrete
// rule per atom of the ambient slice.
struct TemplateRule {
  std::vector<Premise> premises;

  bool operator==(const TemplateRule& o) const {
    return premises == o.premises;
  }
  bool operator<(const TemplateRule& o) const { return premises < o.premises; }
};

inline int rule_level(const std::vector<Premise>& premises) {
  if (premises.empty()) return 0;
  int lvl = 1;
  for (auto& p : premises)
    if (!p.hyps.empty()) lvl = 2;
  return lvl;
}

struct Base {
  std::string name;
  std::vector<AtomicRule> rules;
  std::vector<TemplateRule> templates;

  void normalize() {
    std::sort(rules.begin(), rules.end());
    rules.erase(std::unique(rules.begin(), rules.end()), rules.end());
    std::sort(templates.begin(), templates.end());
    templates.erase(std::unique(templates.begin(), templates.end()),
                    templates.end());
  }
  int level() const {
    int lvl = 0;
    for (auto& r : rules) lvl = std::max(lvl, rule_level(r.premises));
    for (auto& t : templates)
      lvl = std::max(lvl, std::max(1, rule_level(t.premises)));
    return lvl;
  }
  bool operator==(const Base& o) const {
    return rules == o.rules && templates == o.templates;
  }
};

inline std::string print_rule(const AtomicRule& r) {
  std::string s;
  for (std::size_t i = 0; i < r.premises.size(); ++i) {
    if (i) s += ", ";
    const Premise& p = r.premises[i];
    if (p.hyps.empty()) {
      s += print_atom(p.concl);
    } else {
      s += "([";
      bool first = true;
      for (auto& h : p.hyps) {
        if (!first) s += ", ";
        first = false;
        s += print_atom(h);
      }
      s += "] => " + print_atom(p.concl) + ")";
    }
  }
  if (!r.premises.empty()) s += " ";
  s += "=> " + print_atom(r.concl);
  return s;
}

inline std::string print_template(const TemplateRule& t) {
  AtomicRule fake{t.premises, GroundAtom{"*", {}}};
  std::string s = print_rule(fake);
  return s;  // conclusion prints as the wildcard atom "*"
}

inline std::string print_base(const Base& b) {
  std::string s = "base " + (b.name.empty() ? std::string("b") : b.name) +
                  " {\n";
  for (auto& r : b.rules) s += "  " + print_rule(r) + "\n";
  for (auto& t : b.templates) s += "  " + print_template(t) + "\n";
  s += "}\n";
  return s;
}

// ---------------------------------------------------------------------------
// Derivability.

enum class DeriveMode { Saturate, TopDown };

struct TraceNode;
using TraceRef = std::shared_ptr<const TraceNode>;

struct TraceNode {
  std::set<GroundAtom> hyps;
  GroundAtom goal;
  bool is_ref = false;      // (Ref): goal is a hypothesis
  AtomicRule rule;          // (App): the rule applied, premise order preserved
  std::vector<TraceRef> kids;
};

struct Verdict {
  enum Kind { Derivable, NotDerivable, Unknown } kind;
  TraceRef trace;  // set iff Derivable
};

// Every atom in sight: base rules, template premises, hypotheses, goal.
inline std::set<GroundAtom> atom_slice(const Base& b,
                                       const std::set<GroundAtom>& hyps,
                                       const GroundAtom& goal) {
  std::set<GroundAtom> s = hyps;
  s.insert(goal);
  for (auto& r : b.rules) {
    s.insert(r.concl);
    for (auto& p : r.premises) {
      s.insert(p.concl);
      s.insert(p.hyps.begin(), p.hyps.end());
    }
  }
  for (auto& t : b.templates)
    for (auto& p : t.premises) {
      s.insert(p.concl);
      s.insert(p.hyps.begin(), p.hyps.end());
    }
  return s;
}

namespace detail {

inline std::vector<AtomicRule> expanded_rules(const Base& b,
                                              const std::set<GroundAtom>& slice) {
  std::vector<AtomicRule> rs = b.rules;
  for (auto& t : b.templates)
    for (auto& a : slice) rs.push_back(AtomicRule{t.premises, a});
  return rs;
}

using Ctx = std::set<GroundAtom>;

struct SatTable {
  // justification: rule index into the expanded rule list, or -1 for (Ref)
  std::map<Ctx, std::map<GroundAtom, int>> just;
  std::vector<AtomicRule> rules;
  std::vector<Ctx> ctxs;
};

inline SatTable saturate(const Base& b, const Ctx& hyps,
                         const GroundAtom& goal) {
  SatTable T;
  std::set<GroundAtom> slice = atom_slice(b, hyps, goal);
  T.rules = expanded_rules(b, slice);

  // Context lattice: hyps unioned with hypothesis sets of premises.
  std::set<Ctx> seen;
  std::vector<Ctx> work{hyps};
  seen.insert(hyps);
  std::vector<Ctx> hsets;
  for (auto& r : T.rules)
    for (auto& p : r.premises)
      if (!p.hyps.empty()) hsets.push_back(p.hyps);
  std::sort(hsets.begin(), hsets.end());
  hsets.erase(std::unique(hsets.begin(), hsets.end()), hsets.end());
  while (!work.empty()) {
    Ctx c = work.back();
    work.pop_back();
    T.ctxs.push_back(c);
    for (auto& h : hsets) {
      Ctx u = c;
      u.insert(h.begin(), h.end());
      if (seen.insert(u).second) {
        if (seen.size() > 20000)
          throw Error("context lattice exceeds 20000 contexts");
        work.push_back(u);
      }
    }
  }

  for (auto& c : T.ctxs) {
    auto& row = T.just[c];
    for (auto& a : c) row.emplace(a, -1);
  }

  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& c : T.ctxs) {
      auto& row = T.just[c];
      for (std::size_t ri = 0; ri < T.rules.size(); ++ri) {
        const AtomicRule& r = T.rules[ri];
        if (row.count(r.concl)) continue;
        bool ok = true;
        for (auto& p : r.premises) {
          Ctx u = c;
          u.insert(p.hyps.begin(), p.hyps.end());
          auto it = T.just.find(u);
          if (it == T.just.end() || !it->second.count(p.concl)) {
            ok = false;
            break;
          }
        }
        if (ok) {
          row.emplace(r.concl, (int)ri);
          changed = true;
        }
      }
    }
  }
  return T;
}

inline TraceRef build_trace(const SatTable& T, const Ctx& c,
                            const GroundAtom& a,
                            std::map<std::pair<Ctx, GroundAtom>, TraceRef>& memo) {
  auto key = std::make_pair(c, a);
  auto mit = memo.find(key);
  if (mit != memo.end()) return mit->second;
  auto node = std::make_shared<TraceNode>();
  node->hyps = c;
  node->goal = a;
  int ri = T.just.at(c).at(a);
  if (ri < 0) {
    node->is_ref = true;
  } else {
    node->rule = T.rules[ri];
    for (auto& p : node->rule.premises) {
      Ctx u = c;
      u.insert(p.hyps.begin(), p.hyps.end());
      node->kids.push_back(build_trace(T, u, p.concl, memo));
    }
  }
  TraceRef r = node;
  memo.emplace(key, r);
  return r;
}

struct TopDown {
  std::vector<AtomicRule> rules;
  std::map<std::pair<Ctx, GroundAtom>, TraceRef> success;
  std::set<std::pair<Ctx, GroundAtom>> pure_fail;
  std::set<std::pair<Ctx, GroundAtom>> path;

  // Returns the trace or null; *tainted reports whether failure may be an
  // artifact of loop blocking or the depth bound (such failures are not
  // memoized).
  TraceRef dfs(const Ctx& c, const GroundAtom& a, int depth, bool* tainted) {
    auto key = std::make_pair(c, a);
    if (c.count(a)) {
      auto n = std::make_shared<TraceNode>();
      n->hyps = c;
      n->goal = a;
      n->is_ref = true;
      return n;
    }
    auto sit = success.find(key);
    if (sit != success.end()) return sit->second;
    if (pure_fail.count(key)) return nullptr;
    if (path.count(key)) {
      *tainted = true;
      return nullptr;
    }
    if (depth == 0) {
      *tainted = true;
      return nullptr;
    }
    path.insert(key);
    bool any_taint = false;
    TraceRef out;
    for (auto& r : rules) {
      if (!(r.concl == a)) continue;
      std::vector<TraceRef> kids;
      bool ok = true;
      for (auto& p : r.premises) {
        Ctx u = c;
        u.insert(p.hyps.begin(), p.hyps.end());
        bool t = false;
        TraceRef k = dfs(u, p.concl, depth < 0 ? depth : depth - 1, &t);
        if (t) any_taint = true;
        if (!k) {
          ok = false;
          break;
        }
        kids.push_back(std::move(k));
      }
      if (ok) {
        auto n = std::make_shared<TraceNode>();
        n->hyps = c;
        n->goal = a;
        n->rule = r;
        n->kids = std::move(kids);
        out = n;
        break;
      }
    }
    path.erase(key);
    if (out) {
      success.emplace(key, out);
      return out;
    }
    if (!any_taint)
      pure_fail.insert(key);
    else
      *tainted = true;
    return nullptr;
  }
};

}  // namespace detail

// depth < 0 means unbounded (loop detection still terminates the search).
inline Verdict derive(const Base& b, const std::set<GroundAtom>& hyps,
                      const GroundAtom& goal, DeriveMode mode,
                      int depth = -1) {
  if (mode == DeriveMode::Saturate) {
    detail::SatTable T = detail::saturate(b, hyps, goal);
    auto it = T.just.at(hyps).find(goal);
    if (it == T.just.at(hyps).end()) return {Verdict::NotDerivable, nullptr};
    std::map<std::pair<detail::Ctx, GroundAtom>, TraceRef> memo;
    return {Verdict::Derivable, detail::build_trace(T, hyps, goal, memo)};
  }
  detail::TopDown td;
  std::set<GroundAtom> slice = atom_slice(b, hyps, goal);
  td.rules = detail::expanded_rules(b, slice);
  bool tainted = false;
  TraceRef t = td.dfs(hyps, goal, depth, &tainted);
  if (t) return {Verdict::Derivable, t};
  // NotDerivable is reserved for the complete saturation engine.
  return {Verdict::Unknown, nullptr};
}

inline bool check_trace(const Base& b, const TraceRef& trace,
                        std::string* why = nullptr) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  if (!trace) return fail("null trace");
  if (trace->is_ref) {
    if (!trace->hyps.count(trace->goal))
      return fail("ref node for " + print_atom(trace->goal) +
                  " not among hypotheses");
    if (!trace->kids.empty()) return fail("ref node with children");
    return true;
  }
  const AtomicRule& r = trace->rule;
  if (!(r.concl == trace->goal))
    return fail("rule concludes " + print_atom(r.concl) + ", node wants " +
                print_atom(trace->goal));
  bool known = false;
  for (auto& br : b.rules)
    if (br == r) known = true;
  if (!known)
    for (auto& t : b.templates)
      if (t.premises == r.premises) known = true;  // template instance
  if (!known) return fail("rule not in base: " + print_rule(r));
  if (trace->kids.size() != r.premises.size())
    return fail("premise/child count mismatch");
  for (std::size_t i = 0; i < r.premises.size(); ++i) {
    const Premise& p = r.premises[i];
    const TraceRef& k = trace->kids[i];
    std::set<GroundAtom> want = trace->hyps;
    want.insert(p.hyps.begin(), p.hyps.end());
    if (k->hyps != want) return fail("child context mismatch");
    if (!(k->goal == p.concl))
      return fail("child for premise " + print_atom(p.concl) + " proves " +
                  print_atom(k->goal));
    if (!check_trace(b, k, why)) return false;
  }
  return true;
}

inline void print_trace_to(const TraceRef& t, int indent, std::string& out) {
  out.append(indent * 2, ' ');
  out += "[";
  bool first = true;
  for (auto& h : t->hyps) {
    if (!first) out += ", ";
    first = false;
    out += print_atom(h);
  }
  out += "] |- " + print_atom(t->goal);
  if (t->is_ref) {
    out += " by ref\n";
  } else {
    out += " by rule " + print_rule(t->rule) + "\n";
    for (auto& k : t->kids) print_trace_to(k, indent + 1, out);
  }
}

inline std::string print_trace(const TraceRef& t) {
  std::string out;
  print_trace_to(t, 0, out);
  return out;
}

}  // namespace bes
