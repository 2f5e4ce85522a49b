#include <catch2/catch_amalgamated.hpp>

#include "corpus.hpp"

using namespace bes;

static FormulaRef F(const std::string& s) {
  Signature sig;
  return expand(parse_formula(s, sig));
}

TEST_CASE("axiom instances print as expected") {
  CHECK(print_formula(instantiate_axiom(ax_k(F("A"), F("B")))) ==
        "A -> (B -> A)");
  CHECK(print_formula(instantiate_axiom(ax_alle(F("P(?x)"), "x",
                                                t_const("a")))) ==
        "(all ?x. P(?x)) -> P(a)");
  CHECK(print_formula(instantiate_axiom(
            ax_pie(f_imp(f_pvar_atom("X", 0), F("A")), "X", 0, "B"))) ==
        "(ALL ?X:0. ?X -> A) -> (B -> A)");
  CHECK(print_formula(instantiate_axiom(ax_dne(F("A")))) ==
        "((A -> bot) -> bot) -> A");
}

TEST_CASE("whole corpus checks in its own system") {
  for (auto& e : corpus::hi_entries()) {
    auto rep = check_hilbert(SystemId::HI, e.proof);
    INFO(e.name << (rep.ok() ? "" : ": " + rep.items.front().msg));
    CHECK(rep.ok());
    // HI proofs remain valid when the stronger axiom set is allowed
    CHECK(check_hilbert(SystemId::HC, e.proof).ok());
  }
  for (auto& e : corpus::hc_entries()) {
    auto rep = check_hilbert(SystemId::HC, e.proof);
    INFO(e.name << (rep.ok() ? "" : ": " + rep.items.front().msg));
    CHECK(rep.ok());
  }
}

TEST_CASE("checker flags classical steps under HI") {
  for (auto& e : corpus::hc_entries()) {
    auto rep = check_hilbert(SystemId::HI, e.proof);
    INFO(e.name);
    CHECK_FALSE(rep.ok());
  }
}

TEST_CASE("checker rejects malformed citations") {
  HilbertProof p;
  p.system = SystemId::HI;
  p.steps.push_back({instantiate_axiom(ax_k(F("A"), F("B"))),
                     ax_k(F("A"), F("B"))});
  p.steps.push_back({F("B -> A"), JMP{0, 0}});  // minor premise is wrong
  CHECK_FALSE(check_hilbert(SystemId::HI, p).ok());

  HilbertProof fwd;
  fwd.system = SystemId::HI;
  fwd.steps.push_back({F("B"), JMP{1, 1}});  // cites a later step
  fwd.steps.push_back({F("A -> B"), ax_k(F("A"), F("B"))});
  CHECK_FALSE(check_hilbert(SystemId::HI, fwd).ok());

  HilbertProof gv;  // generalized variable free in a hypothesis
  gv.system = SystemId::HI;
  gv.hyps = {F("P(?x)")};
  gv.steps.push_back({instantiate_axiom(ax_k(F("P(?x)"), F("A"))),
                      ax_k(F("P(?x)"), F("A"))});
  gv.steps.push_back({F("P(?x) -> all ?x. A -> P(?x)"), JGen1{0, "x"}});
  CHECK_FALSE(check_hilbert(SystemId::HI, gv).ok());
}

TEST_CASE("builder validates as it goes") {
  ProofBuilder b(SystemId::HI);
  CHECK_THROWS_AS(b.hyp(F("A")), TransformError);
  std::size_t k = b.axiom(ax_k(F("A"), F("B")));
  CHECK_THROWS_AS(b.mp(k, k), TransformError);  // A -> (B -> A) is no A

  ProofBuilder c(SystemId::HI);
  std::size_t i = c.axiom(ax_k(F("P(?y)"), F("A")));
  CHECK_THROWS_AS(c.gen1(i, "y"), TransformError);  // y free in antecedent
  CHECK_NOTHROW(c.gen1(i, "z"));

  ProofBuilder d(SystemId::HI, {F("P(?y)")});
  std::size_t j = d.axiom(ax_k(F("A"), F("B")));
  CHECK_THROWS_AS(d.gen1(j, "y"), TransformError);  // y free in a hypothesis
}

TEST_CASE("identity and top derivations") {
  auto idp = derive_identity(SystemId::HI, F("Q(a)"));
  CHECK(check_hilbert(SystemId::HI, idp).ok());
  CHECK(print_formula(idp.conclusion()) == "Q(a) -> Q(a)");
  auto top = derive_top(SystemId::HI);
  CHECK(check_hilbert(SystemId::HI, top).ok());
  CHECK(eq(top.conclusion(), top_core()));
}

TEST_CASE("deduction theorem round trip") {
  // {A, A -> B} |- B
  ProofBuilder b(SystemId::HI, {F("A"), F("A -> B")});
  std::size_t i = b.hyp(F("A -> B"));
  std::size_t j = b.hyp(F("A"));
  b.mp(i, j);
  auto p1 = deduction_intro(b.p, F("A"));
  CHECK(check_hilbert(SystemId::HI, p1).ok());
  CHECK(print_formula(p1.conclusion()) == "A -> B");
  REQUIRE(p1.hyps.size() == 1);
  CHECK(eq(p1.hyps[0], F("A -> B")));

  auto p2 = deduction_intro(p1, F("A -> B"));
  CHECK(p2.hyps.empty());
  CHECK(print_formula(p2.conclusion()) == "(A -> B) -> (A -> B)");
  CHECK(check_hilbert(SystemId::HI, p2).ok());

  auto back = deduction_elim(p2);
  CHECK(check_hilbert(SystemId::HI, back).ok());
  CHECK(print_formula(back.conclusion()) == "A -> B");
  auto back2 = deduction_elim(back);
  CHECK(check_hilbert(SystemId::HI, back2).ok());
  CHECK(print_formula(back2.conclusion()) == "B");
  CHECK(back2.hyps.size() == 2);
}

TEST_CASE("discharge refuses generalizations inside the dependency cone") {
  // From hyp B derive C -> B, then gen1 x (legitimate: x free nowhere).
  ProofBuilder b(SystemId::HI, {F("B")});
  std::size_t h = b.hyp(F("B"));
  std::size_t lifted = b.klift(h, F("C"));        // C -> B, depends on B
  b.gen1(lifted, "x");                            // C -> all ?x. B
  CHECK(check_hilbert(SystemId::HI, b.p).ok());
  CHECK_THROWS_AS(deduction_intro(b.p, F("B")), TransformError);
}

TEST_CASE("discharge replays generalizations outside the cone") {
  ProofBuilder b(SystemId::HI, {F("A")});
  std::size_t i = b.axiom(ax_alle(F("P(?x)"), "x", t_const("a")));
  std::size_t g = b.gen1(i, "y");      // (all ?x. P(?x)) -> all ?y. P(a)
  std::size_t lift = b.klift(g, F("A"));  // A -> (that implication)
  std::size_t h = b.hyp(F("A"));
  b.mp(lift, h);  // conclusion depends on A, the gen step does not
  auto q = deduction_intro(b.p, F("A"));
  CHECK(q.hyps.empty());
  CHECK(check_hilbert(SystemId::HI, q).ok());
  CHECK(eq(q.conclusion(), f_imp(F("A"), b.p.steps[g].formula)));
}

TEST_CASE("eigen renaming") {
  auto p = derive_identity(SystemId::HI, F("P(e)"));
  auto q = rename_eigen_ind(p, "e", "x");
  CHECK(check_hilbert(SystemId::HI, q).ok());
  CHECK(print_formula(q.conclusion()) == "P(?x) -> P(?x)");

  // hypothesis mentions the constant: refuse
  ProofBuilder b(SystemId::HI, {F("P(e)")});
  b.hyp(F("P(e)"));
  CHECK_THROWS_AS(rename_eigen_ind(b.p, "e", "x"), FreshnessError);

  // renaming under a binder of the target variable captures
  auto cap = derive_identity(SystemId::HI, F("all ?x. P(e)"));
  CHECK_THROWS_AS(rename_eigen_ind(cap, "e", "x"), CaptureError);

  auto pp = derive_identity(SystemId::HI, F("E -> A"));
  auto qq = rename_eigen_pred(pp, "E", "X");
  CHECK(check_hilbert(SystemId::HI, qq).ok());
  CHECK(print_formula(qq.conclusion()) == "(?X -> A) -> (?X -> A)");
}

TEST_CASE("axiom recognition") {
  CHECK(match_axiom(AxTag::K, F("A -> (B -> A)")));
  CHECK_FALSE(match_axiom(AxTag::K, F("A -> (B -> B)")));
  CHECK(match_axiom(AxTag::AllE, F("(all ?x. P(?x)) -> P(a)")));
  CHECK(match_axiom(AxTag::AllE, F("(all ?x. A) -> A")));  // vacuous witness
  CHECK_FALSE(match_axiom(AxTag::AllE, F("(all ?x. P(?x)) -> Q(a)")));
  CHECK(match_axiom(AxTag::PiE, F("(ALL ?X:0. ?X -> A) -> (B -> A)")));
  CHECK(match_axiom(AxTag::DNE, F("~~A -> A")));
  CHECK_FALSE(match_any_axiom(SystemId::HI, F("~~A -> A")));
  REQUIRE(match_any_axiom(SystemId::HC, F("~~A -> A")));
  CHECK(match_any_axiom(SystemId::HC, F("~~A -> A"))->tag == AxTag::DNE);
  CHECK(match_axiom(AxTag::EFQ, F("~A -> (A -> B)")));
  CHECK(match_axiom(AxTag::NegI,
                    F("(A -> B) -> ((A -> ~B) -> ~A)")));
}

TEST_CASE("bounded search") {
  auto hit = search(SystemId::HC, {}, F("~~P(a) -> P(a)"), 2);
  REQUIRE(hit.proof);
  CHECK(hit.depth_found == 0);
  CHECK(check_hilbert(SystemId::HC, *hit.proof).ok());

  auto mp = search(SystemId::HI, {F("A"), F("A -> B")}, F("B"), 2);
  REQUIRE(mp.proof);
  CHECK(mp.depth_found == 1);
  CHECK(check_hilbert(SystemId::HI, *mp.proof).ok());

  auto gen = search(SystemId::HI, {}, F("A -> all ?x. B -> A"), 2);
  REQUIRE(gen.proof);
  CHECK(check_hilbert(SystemId::HI, *gen.proof).ok());

  auto gen2 = search(SystemId::HI, {}, F("A -> ALL ?X:0. ?X -> A"), 2);
  REQUIRE(gen2.proof);
  CHECK(check_hilbert(SystemId::HI, *gen2.proof).ok());

  auto miss = search(SystemId::HI, {}, F("~~A -> A"), 3, 20000);
  CHECK_FALSE(miss.proof);

  auto broke = search(SystemId::HI, {}, F("B -> B"), 6, 1);
  CHECK_FALSE(broke.proof);
  CHECK(broke.budget_hit);
}
