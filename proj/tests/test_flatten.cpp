#include <catch2/catch_amalgamated.hpp>

#include "bes/generate.hpp"
#include "corpus.hpp"

using namespace bes;

static FormulaRef F(const std::string& s) {
  Signature sig;
  return expand(parse_formula(s, sig));
}

static Fragment small_fragment() {
  Fragment fr;
  fr.harvest(F("P(a) -> (Q(b) -> (A -> B))"));
  return fr;
}

TEST_CASE("fragments collect and police the vocabulary") {
  Fragment fr = small_fragment();
  CHECK(fr.preds.at("P") == 1);
  CHECK(fr.preds.at("A") == 0);
  CHECK(fr.consts.count("a"));
  CHECK_THROWS_AS(fr.harvest(F("P(a, b)")), FragmentError);

  CHECK(in_fragment(fr, F("P(a) -> A")));
  CHECK(in_fragment(fr, F("all ?x. P(?x)")));
  CHECK_FALSE(in_fragment(fr, F("P(?x)")));       // open
  CHECK_FALSE(in_fragment(fr, F("R(a) -> A")));   // foreign predicate
  CHECK_FALSE(in_fragment(fr, F("P(c)")));        // foreign constant

  std::string e0 = fr.alloc_eigen_const();
  std::string e1 = fr.alloc_eigen_const();
  CHECK(e0 != e1);
  CHECK(fr.known_const(e0));
  std::string E0 = fr.alloc_eigen_pred(1);
  CHECK(fr.known_pred(E0, 1));
  CHECK_FALSE(fr.known_pred(E0, 0));
}

TEST_CASE("flattening is the identity on plain atoms and injective elsewhere") {
  FlatMap m(small_fragment());
  CHECK(m.flat(F("A")) == GroundAtom{"A", {}});
  GroundAtom pa = m.flat(F("P(a)"));  // not 0-ary, so it gets a fresh name
  CHECK(pa.pred.substr(0, 2) == "$f");
  CHECK(eq(m.nat(pa), F("P(a)")));
  GroundAtom i1 = m.flat(F("A -> B"));
  GroundAtom i2 = m.flat(F("B -> A"));
  CHECK(i1.pred.substr(0, 2) == "$f");
  CHECK(!(i1 == i2));
  CHECK(m.flat(F("A -> B")) == i1);  // stable
  CHECK(eq(m.nat(i1), F("A -> B")));
  CHECK(eq(m.nat(GroundAtom{"Q", {"b"}}), F("Q(b)")));
  CHECK_THROWS_AS(m.flat(F("P(?x)")), FragmentError);
  CHECK_THROWS_AS(m.flat(F("R(a)")), FragmentError);
}

TEST_CASE("seeded flatten round trips") {
  Fragment fr;
  fr.preds = {{"A", 0}, {"B", 0}, {"C", 0}, {"D", 0},
              {"P", 1}, {"Q", 1}, {"R", 2}};
  fr.consts = {"a", "b", "c"};
  FlatMap m(fr);
  Gen g(7);
  for (int i = 0; i < 1000; ++i) {
    FormulaRef f = expand(gen_formula(g));
    GroundAtom a = m.flat(f);
    CHECK(eq(m.nat(a), f));
  }
  // injectivity: the stored relation is a bijection
  std::set<std::string> atoms, fmls;
  for (auto& [a, f] : m.entries()) {
    CHECK(atoms.emplace(print_atom(a)).second);
    CHECK(fmls.emplace(print_formula(f)).second);
  }
}

TEST_CASE("compilation yields a checking trace over the simulation base") {
  for (auto& e : corpus::all_entries()) {
    SystemId sys = e.proof.system;
    CompileResult cr = compile_hilbert_to_base(e.proof);
    INFO(e.name);
    std::string why;
    bool traced = check_trace(cr.sim.base, cr.trace, &why);
    INFO(why);
    CHECK(traced);
    CHECK(cr.trace->goal == cr.goal);
    auto audit = audit_sim(cr.sim);
    if (!audit.ok()) INFO(audit.items.front());
    CHECK(audit.ok());

    HilbertProof back = extract_hilbert_from_base(cr.sim, cr.trace);
    CHECK(back.system == sys);
    auto rep = check_hilbert(sys, back);
    if (!rep.ok()) INFO(rep.items.front().msg);
    CHECK(rep.ok());
    CHECK(eq(back.conclusion(), e.proof.conclusion()));
    for (auto& h : back.hyps) CHECK(has_hyp(e.proof.hyps, h));
  }
}

TEST_CASE("compilation refuses open endpoints") {
  ProofBuilder b(SystemId::HI, {F("P(?x)")});
  b.hyp(F("P(?x)"));
  CHECK_THROWS_AS(compile_hilbert_to_base(b.p), TransformError);
}

TEST_CASE("foreign rules are rejected at extraction") {
  CompileResult cr = compile_hilbert_to_base(derive_identity(SystemId::HI,
                                                             F("A")));
  auto alien = std::make_shared<TraceNode>();
  alien->goal = GroundAtom{"Z", {}};
  alien->rule = AtomicRule{{}, GroundAtom{"Z", {}}};
  CHECK_THROWS_AS(extract_hilbert_from_base(cr.sim, TraceRef(alien)),
                  UnknownRule);
}

TEST_CASE("audit notices doctored rows") {
  CompileResult cr = compile_hilbert_to_base(derive_identity(SystemId::HI,
                                                             F("A")));
  REQUIRE(audit_sim(cr.sim).ok());
  SimulationBase& s = cr.sim;
  REQUIRE(!s.rows.empty());
  s.rows[0].ax.phi = F("B -> B");  // no longer what the atom names
  CHECK_FALSE(audit_sim(s).ok());
}

TEST_CASE("simulation bases survive serialization") {
  const char* names[] = {"all-identity", "pi-identity", "quant-swap",
                         "hyp-mp", "dne-hyp"};
  for (auto& e : corpus::all_entries()) {
    bool pick = false;
    for (auto* n : names) pick = pick || e.name == n;
    if (!pick) continue;
    CompileResult cr = compile_hilbert_to_base(e.proof);
    std::string text = print_simbase(cr.sim);
    SimulationBase rt = parse_simbase(text);
    INFO(e.name);
    CHECK(print_simbase(rt) == text);
    CHECK(rt.source == cr.sim.source);
    CHECK(audit_sim(rt).ok());

    // the reloaded base still checks and extracts the same theorem
    std::string why;
    CHECK(check_trace(rt.base, cr.trace, &why));
    HilbertProof back = extract_hilbert_from_base(rt, cr.trace);
    CHECK(check_hilbert(back.system, back).ok());
    CHECK(eq(back.conclusion(), e.proof.conclusion()));
  }
}
