#pragma once

// Committed proof corpus shared by the translation and compilation tests:
// axiom instances for every axiom, both generalization rules, and a few
// derivations from hypotheses.

#include <string>
#include <vector>

#include "bes/hilbert.hpp"
#include "bes/parser.hpp"

namespace corpus {

struct Entry {
  std::string name;
  bes::HilbertProof proof;
};

inline bes::FormulaRef fml(const std::string& s) {
  bes::Signature sig;
  return bes::expand(bes::parse_formula(s, sig));
}

inline std::vector<Entry> hi_entries() {
  using namespace bes;
  std::vector<Entry> out;
  auto add = [&](std::string name, const ProofBuilder& b) {
    out.push_back({std::move(name), b.p});
  };

  auto A = fml("A"), B = fml("B"), C = fml("C");

  {
    ProofBuilder b(SystemId::HI);
    b.axiom(ax_k(A, B));
    add("ax-k", b);
  }
  {
    ProofBuilder b(SystemId::HI);
    b.axiom(ax_s(A, B, C));
    add("ax-s", b);
  }
  {
    ProofBuilder b(SystemId::HI);
    b.axiom(ax_alle(fml("P(?x)"), "x", t_const("a")));
    add("ax-alle", b);
  }
  {
    ProofBuilder b(SystemId::HI);
    b.axiom(ax_pie(f_imp(f_pvar_atom("X", 0), A), "X", 0, "B"));
    add("ax-pie", b);
  }
  {
    ProofBuilder b(SystemId::HI);
    b.axiom(ax_negi(A, B));
    add("ax-negi", b);
  }
  {
    ProofBuilder b(SystemId::HI);
    b.axiom(ax_efq(A, B));
    add("ax-efq", b);
  }
  {
    ProofBuilder b(SystemId::HI);
    b.absorb(derive_identity(SystemId::HI, fml("A")));
    add("identity", b);
  }
  {
    ProofBuilder b(SystemId::HI);
    std::size_t i = b.axiom(ax_alle(fml("P(?x)"), "x", t_var("y")));
    b.gen1(i, "y");
    add("gen1-rename", b);
  }
  {
    ProofBuilder b(SystemId::HI);
    std::size_t i = b.axiom(ax_k(A, f_pvar_atom("X", 0)));
    b.gen2(i, "X", 0);
    add("gen2-k", b);
  }
  {
    // forall x forall y R(x,y) -> forall v forall u R(u,v)
    ProofBuilder b(SystemId::HI);
    auto Rxy = fml("R(?x, ?y)");
    std::size_t i = b.axiom(ax_alle(f_all("y", Rxy), "x", t_var("u")));
    std::size_t j = b.axiom(ax_alle(subst_ind(Rxy, "x", t_var("u")), "y",
                                    t_var("v")));
    std::size_t k = b.compose(i, j);
    std::size_t m = b.gen1(k, "u");
    b.gen1(m, "v");
    add("quant-swap", b);
  }
  {
    ProofBuilder b(SystemId::HI);
    b.absorb(derive_top(SystemId::HI));
    add("top", b);
  }
  {
    ProofBuilder b(SystemId::HI);
    std::size_t i = b.absorb(derive_identity(SystemId::HI, B));
    b.klift(i, A);
    add("weakened-identity", b);
  }
  {
    ProofBuilder b(SystemId::HI);
    std::size_t i = b.axiom(ax_k(A, B));
    b.swap_antecedents(i);
    add("swapped-k", b);
  }
  {
    ProofBuilder b(SystemId::HI);
    std::size_t i = b.axiom(ax_k(A, B));
    std::size_t j =
        b.absorb(derive_identity(SystemId::HI, f_imp(B, A)));
    b.compose(i, j);
    add("composed-k", b);
  }
  {
    // top-device generalization: forall u (P(u) -> P(u))
    ProofBuilder b(SystemId::HI);
    FormulaRef top = top_core();
    std::size_t t = b.absorb(derive_top(SystemId::HI));
    std::size_t i = b.absorb(derive_identity(SystemId::HI, fml("P(?u)")));
    std::size_t k = b.klift(i, top);
    std::size_t g = b.gen1(k, "u");
    b.mp(g, t);
    add("all-identity", b);
  }
  {
    // same device one order up: Pi X:1 (X(a) -> X(a))
    ProofBuilder b(SystemId::HI);
    FormulaRef top = top_core();
    FormulaRef xa = f_pvar_atom("X", 1, {t_const("a")});
    std::size_t t = b.absorb(derive_top(SystemId::HI));
    std::size_t i = b.absorb(derive_identity(SystemId::HI, xa));
    std::size_t k = b.klift(i, top);
    std::size_t g = b.gen2(k, "X", 1);
    b.mp(g, t);
    add("pi-identity", b);
  }
  {
    // A -> ~~A, by swapping the antecedents of the ~A identity
    ProofBuilder b(SystemId::HI);
    std::size_t i = b.absorb(derive_identity(SystemId::HI, fml("~A")));
    b.swap_antecedents(i);
    add("double-negation-intro", b);
  }
  {
    // bot -> A
    ProofBuilder b(SystemId::HI);
    std::size_t i = b.axiom(ax_efq(bot_core(), A));
    std::size_t j = b.absorb(derive_identity(SystemId::HI, bot_core()));
    b.mp(i, j);
    add("explosion", b);
  }
  {
    ProofBuilder b(SystemId::HI, {A, f_imp(A, B)});
    std::size_t i = b.hyp(f_imp(A, B));
    std::size_t j = b.hyp(A);
    b.mp(i, j);
    add("hyp-mp", b);
  }
  {
    ProofBuilder b(SystemId::HI, {A});
    std::size_t i = b.hyp(A);
    b.klift(i, B);
    add("hyp-weaken", b);
  }
  {
    ProofBuilder b(SystemId::HI, {fml("all ?x. P(?x)")});
    std::size_t i = b.axiom(ax_alle(fml("P(?x)"), "x", t_const("a")));
    std::size_t j = b.hyp(fml("all ?x. P(?x)"));
    b.mp(i, j);
    add("hyp-instantiate", b);
  }
  {
    ProofBuilder b(SystemId::HI, {fml("ALL ?X. ?X -> A")});
    std::size_t i = b.axiom(
        ax_pie(f_imp(f_pvar_atom("X", 0), A), "X", 0, "B"));
    std::size_t j = b.hyp(fml("ALL ?X. ?X -> A"));
    b.mp(i, j);
    add("hyp-instantiate2", b);
  }
  {
    ProofBuilder b(SystemId::HI, {A, fml("~A")});
    std::size_t i = b.hyp(fml("~A"));
    std::size_t j = b.hyp(A);
    b.mp(i, j);
    add("hyp-clash", b);
  }
  return out;
}

inline std::vector<Entry> hc_entries() {
  using namespace bes;
  std::vector<Entry> out;
  auto add = [&](std::string name, const ProofBuilder& b) {
    out.push_back({std::move(name), b.p});
  };

  {
    ProofBuilder b(SystemId::HC);
    b.axiom(ax_dne(fml("A")));
    add("dne-atom", b);
  }
  {
    ProofBuilder b(SystemId::HC);
    b.axiom(ax_dne(fml("A -> B")));
    add("dne-imp", b);
  }
  {
    ProofBuilder b(SystemId::HC);
    b.axiom(ax_dne(fml("all ?x. P(?x)")));
    add("dne-all", b);
  }
  {
    ProofBuilder b(SystemId::HC);
    b.axiom(ax_dne(bot_core()));
    add("dne-bot", b);
  }
  {
    ProofBuilder b(SystemId::HC, {fml("~~A")});
    std::size_t i = b.axiom(ax_dne(fml("A")));
    std::size_t j = b.hyp(fml("~~A"));
    b.mp(i, j);
    add("dne-hyp", b);
  }
  return out;
}

inline std::vector<Entry> all_entries() {
  auto v = hi_entries();
  auto w = hc_entries();
  v.insert(v.end(), w.begin(), w.end());
  return v;
}

}  // namespace corpus
