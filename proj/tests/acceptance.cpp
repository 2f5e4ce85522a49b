// End-to-end acceptance checks. Each numbered block prints exactly one
// PASS/FAIL line; the process exits nonzero if any block fails. Time budgets
// are pinned below next to the criterion they guard.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "bes/generate.hpp"
#include "bes/parser.hpp"
#include "../tests/corpus.hpp"

using namespace bes;

namespace {

constexpr double kBudget1 = 0.1;   // aristotle fixture
constexpr double kBudget2 = 0.1;   // vixen fixture
constexpr double kBudget3 = 5.0;   // refutation universe
constexpr double kBudget4 = 60.0;  // calculi separation search
constexpr double kBudget7 = 30.0;  // translation soundness
constexpr double kBudget8 = 60.0;  // compile/extract round trip

int failures = 0;

void report(int n, bool ok, const std::string& what, double secs,
            double budget) {
  std::string timing;
  char buf[64];
  if (budget > 0) {
    std::snprintf(buf, sizeof buf, " (%.2fs of %.1fs)", secs, budget);
    timing = buf;
  } else {
    std::snprintf(buf, sizeof buf, " (%.2fs)", secs);
    timing = buf;
  }
  std::printf("[%2d/11] %s %s%s\n", n, ok ? "PASS" : "FAIL", what.c_str(),
              timing.c_str());
  if (!ok) ++failures;
}

void run(int n, const std::string& what, double budget,
         const std::function<bool(std::string&)>& body) {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  std::string note;
  try {
    ok = body(note);
  } catch (const std::exception& e) {
    note = e.what();
    ok = false;
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              t0)
                    .count();
  if (budget > 0 && secs > budget) {
    ok = false;
    note += (note.empty() ? "" : "; ") + std::string("over time budget");
  }
  report(n, ok, what + (note.empty() ? "" : " [" + note + "]"), secs, budget);
}

FormulaRef F(const std::string& s) {
  Signature sig;
  return parse_formula(s, sig);
}
Base B(const std::string& s) {
  Signature sig;
  return parse_base(s, sig);
}
GroundAtom at(const std::string& s) {
  Signature sig;
  detail::Lexer lx(s);
  return detail::parse_atom_tokens(lx, sig, {});
}

SupportUniverse refutation_universe(BasisPolicy pol) {
  SupportUniverse u;
  u.name = "u";
  Signature sig;
  u.pool = parse_base(
      "base pool { ([A] => B) => B\n=> A\nB => *\nA => * }", sig);
  u.slice_preds = {{"A", 0}, {"B", 0}, {"C", 0}};
  u.budget = 1;
  u.depth = 8;
  u.policy = pol;
  return u;
}

}  // namespace

int main() {
  run(1, "aristotle base derives its conclusion with a checked trace",
      kBudget1, [](std::string&) {
        Base b = B("base a { => H(s)\nH(s) => M(s) }");
        auto v = derive(b, {}, at("M(s)"), DeriveMode::Saturate);
        return v.kind == Verdict::Derivable && v.trace &&
               check_trace(b, v.trace, nullptr);
      });

  run(2, "vixen rules derive both directions", kBudget2, [](std::string&) {
    Base b = B(
        "base vixen { V(t) => Fo(t)\nV(t) => Fe(t)\nFe(t), Fo(t) => V(t) }");
    auto r1 = derive(b, {at("V(t)")}, at("Fe(t)"), DeriveMode::Saturate);
    auto r2 = derive(b, {at("Fe(t)"), at("Fo(t)")}, at("V(t)"),
                     DeriveMode::Saturate);
    return r1.kind == Verdict::Derivable && r2.kind == Verdict::Derivable;
  });

  run(3, "double negation elimination is refuted at the second level only",
      kBudget3, [](std::string& note) {
        Base a = B("base a { ([A] => B) => B\nB => * }");
        if (derive(a, {}, at("A"), DeriveMode::Saturate).kind !=
            Verdict::NotDerivable) {
          note = "A unexpectedly derivable";
          return false;
        }
        if (derive(a, {}, at("B"), DeriveMode::Saturate).kind !=
            Verdict::NotDerivable) {
          note = "B unexpectedly derivable";
          return false;
        }
        auto ui = refutation_universe(BasisPolicy::I);
        auto ri = supports_consequence({}, F("~~A -> A"), ui);
        if (ri.kind != SupportKind::Fails) {
          note = "no refutation under the second level policy";
          return false;
        }
        if (!check_witness(ri.witness, ui)) {
          note = "witness does not replay";
          return false;
        }
        auto uc = refutation_universe(BasisPolicy::C);
        auto rc = supports_consequence({}, F("~~A -> A"), uc);
        if (rc.kind == SupportKind::Fails) {
          note = "refuted under the first level policy";
          return false;
        }
        note = "policy I " + support_kind_name(ri.kind) + ", policy C " +
               support_kind_name(rc.kind);
        return true;
      });

  run(4, "the classical law separates the two calculi in bounded search",
      kBudget4, [](std::string& note) {
        auto hc = search(SystemId::HC, {}, F("~~P -> P"), 2);
        if (!hc.proof || hc.depth_found > 2 ||
            !check_hilbert(SystemId::HC, *hc.proof).ok()) {
          note = "HC proof missing at depth 2";
          return false;
        }
        auto hi = search(SystemId::HI, {}, F("~~P -> P"), 8);
        if (hi.proof) {
          note = "HI unexpectedly proved it";
          return false;
        }
        note = "HC found at depth " + std::to_string(hc.depth_found) +
               "; HI NotFound " +
               (hi.budget_hit ? "(bounded evidence: node budget exhausted)"
                              : "(bounded evidence: depth 8 exhausted)");
        return true;
      });

  run(5, "substitution laws hold on 1000 seeded formulas", 0,
      [](std::string& note) {
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
          Gen g(seed);
          GenFormulaOptions o;
          o.allow_free = true;
          FormulaRef f = expand(gen_formula(g, o));
          FormulaRef once = subst_ind(f, "x", t_const("e"));
          FormulaRef back = rename_iconst(once, "e", "x");
          if (!eq(back, f)) {
            note = "rename failed at seed " + std::to_string(seed);
            return false;
          }
          Term t = g.coin() ? t_const("a") : t_var("z");
          auto fiv = free_ivars(f);
          for (auto* v : {"x", "y", "z", "u", "w"})
            if (!fiv.count(v) && !eq(subst_ind(f, v, t), f)) {
              note = "vacuous substitution changed seed " +
                     std::to_string(seed);
              return false;
            }
        }
        return true;
      });

  run(6, "flattening laws hold on 10000 seeded formulas", 0,
      [](std::string& note) {
        Fragment fr;
        fr.preds = {{"A", 0}, {"B", 0}, {"C", 0}, {"D", 0},
                    {"P", 1}, {"Q", 1}, {"R", 2}};
        fr.consts = {"a", "b", "c"};
        FlatMap m(fr);
        for (auto& [name, ar] : fr.preds)
          if (ar == 0 && !(m.flat(f_atom0(name)) == GroundAtom{name, {}})) {
            note = "not the identity on " + name;
            return false;
          }
        Gen g(0);
        for (int i = 0; i < 10000; ++i) {
          FormulaRef f = expand(gen_formula(g));
          if (!eq(m.nat(m.flat(f)), f)) {
            note = "round trip failed at i=" + std::to_string(i);
            return false;
          }
        }
        std::set<std::string> atoms, fmls;
        for (auto& [a, f] : m.entries())
          if (!atoms.emplace(print_atom(a)).second ||
              !fmls.emplace(print_formula(f)).second) {
            note = "mapping is not a bijection";
            return false;
          }
        return true;
      });

  run(7, "corpus translations check in both directions", kBudget7,
      [](std::string& note) {
        auto his = corpus::hi_entries();
        auto hcs = corpus::hc_entries();
        if (his.size() < 20 || hcs.size() < 5) {
          note = "corpus too small";
          return false;
        }
        std::set<std::string> seen;
        for (auto& e : his)
          for (auto& st : e.proof.steps) {
            if (auto* ai = std::get_if<AxiomInstance>(&st.just))
              seen.insert(axtag_name(ai->tag));
            else if (std::get_if<JGen1>(&st.just))
              seen.insert("Gen1");
            else if (std::get_if<JGen2>(&st.just))
              seen.insert("Gen2");
          }
        for (auto* need : {"K", "S", "AllE", "PiE", "NegI", "EFQ", "Gen1",
                           "Gen2"})
          if (!seen.count(need)) {
            note = std::string("corpus misses ") + need;
            return false;
          }
        for (auto& e : corpus::all_entries()) {
          SystemId sys = e.proof.system;
          NDProof nd = hilbert_to_nd(e.proof);
          if (!check_nd(nd).ok()) {
            note = e.name + " fails the tree checker";
            return false;
          }
          HilbertProof back = nd_to_hilbert(nd);
          if (!check_hilbert(sys, back).ok() ||
              !eq(back.conclusion(), e.proof.conclusion())) {
            note = e.name + " fails the way back";
            return false;
          }
        }
        return true;
      });

  run(8, "corpus proofs survive the compile and extract round trip", kBudget8,
      [](std::string& note) {
        for (auto& e : corpus::all_entries()) {
          CompileResult cr = compile_hilbert_to_base(e.proof);
          std::string why;
          if (!check_trace(cr.sim.base, cr.trace, &why)) {
            note = e.name + ": " + why;
            return false;
          }
          if (!audit_sim(cr.sim).ok()) {
            note = e.name + " fails the base audit";
            return false;
          }
          HilbertProof back = extract_hilbert_from_base(cr.sim, cr.trace);
          if (!check_hilbert(e.proof.system, back).ok() ||
              !eq(back.conclusion(), e.proof.conclusion())) {
            note = e.name + " extraction mismatch";
            return false;
          }
        }
        return true;
      });

  run(9, "saturation and backward search agree on 500 random bases", 0,
      [](std::string& note) {
        auto pool = detail::atom_pool();
        for (std::uint64_t seed = 0; seed < 500; ++seed) {
          Gen g(seed);
          GenBaseOptions o;
          o.max_rules = 20;
          o.max_level = 2;
          Base b = gen_base(g, o);
          std::set<GroundAtom> hyps;
          if (g.coin(40)) hyps.insert(pool[g.below((int)pool.size())]);
          GroundAtom goal = pool[g.below((int)pool.size())];
          auto s = derive(b, hyps, goal, DeriveMode::Saturate);
          auto t = derive(b, hyps, goal, DeriveMode::TopDown, -1);
          bool agree =
              (s.kind == Verdict::Derivable && t.kind == Verdict::Derivable &&
               check_trace(b, s.trace, nullptr) &&
               check_trace(b, t.trace, nullptr)) ||
              (s.kind == Verdict::NotDerivable && t.kind == Verdict::Unknown);
          if (!agree) {
            note = "disagreement at seed " + std::to_string(seed);
            return false;
          }
        }
        return true;
      });

  run(10, "displayed clauses agree with expansions on 100 seeded universes", 0,
      [](std::string& note) {
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
          Gen g(seed);
          SupportUniverse u = gen_universe(g, BasisPolicy::I);
          std::vector<std::pair<DefinedConn, FormulaRef>> queries = {
              {DefinedConn::Bot, f_bot()},
              {DefinedConn::And, f_and(bes::detail::gen_operand(g),
                                       bes::detail::gen_operand(g))},
              {DefinedConn::Or, f_or(bes::detail::gen_operand(g),
                                     bes::detail::gen_operand(g))},
              {DefinedConn::Ex,
               f_ex("x", bes::detail::gen_operand(g, "x"))}};
          for (auto& [conn, sugar] : queries)
            if (!derived_clause_check(Base{}, conn, sugar, u)) {
              note = "seed " + std::to_string(seed) + " on " +
                     print_formula(sugar);
              return false;
            }
        }
        return true;
      });

  run(11, "printing and parsing are mutually inverse", 0,
      [](std::string& note) {
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
          Gen g(seed);
          FormulaRef f = gen_formula(g);
          Signature sig;
          if (!eq(parse_formula(print_formula(f), sig), f)) {
            note = "formula seed " + std::to_string(seed);
            return false;
          }
        }
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
          Gen g(seed ^ 0x9e3779b9u);
          Base b = gen_base(g);
          Signature sig;
          if (!(parse_base(print_base(b), sig) == b)) {
            note = "base seed " + std::to_string(seed);
            return false;
          }
        }
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
          Gen g(seed);
          GenFormulaOptions o;
          o.depth = 2;
          FormulaRef f = expand(gen_formula(g, o));
          HilbertProof p;
          switch (seed % 3) {
            case 0: p = derive_identity(SystemId::HI, f); break;
            case 1: {
              ProofBuilder b(SystemId::HI);
              std::size_t i = b.absorb(derive_identity(SystemId::HI, f));
              b.klift(i, expand(gen_formula(g, o)));
              p = b.p;
              break;
            }
            default: {
              ProofBuilder b(SystemId::HI);
              std::size_t i =
                  b.axiom(ax_k(f, expand(gen_formula(g, o))));
              b.swap_antecedents(i);
              p = b.p;
              break;
            }
          }
          std::string text = print_hilbert(p);
          Signature sig;
          HilbertProof q = parse_hilbert(text, sig);
          if (print_hilbert(q) != text || !check_hilbert(q.system, q).ok()) {
            note = "script seed " + std::to_string(seed);
            return false;
          }
        }
        return true;
      });

  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures ? 1 : 0;
}
