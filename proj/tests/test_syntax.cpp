#include <catch2/catch_amalgamated.hpp>

#include "bes/syntax.hpp"

using namespace bes;

TEST_CASE("structural equality ignores sharing") {
  auto a = f_atom0("A");
  auto b = f_atom0("A");
  CHECK(eq(a, b));
  CHECK(eq(f_imp(a, b), f_imp(b, a)));
  CHECK_FALSE(eq(a, f_atom0("B")));
  CHECK_FALSE(eq(f_all("x", a), f_all("y", a)));  // no alpha identification
}

TEST_CASE("printing is canonical and reparseable") {
  auto A = f_atom0("A"), B = f_atom0("B"), C = f_atom0("C");
  CHECK(print_formula(f_imp(A, f_imp(B, C))) == "A -> (B -> C)");
  CHECK(print_formula(f_imp(f_imp(A, B), C)) == "(A -> B) -> C");
  CHECK(print_formula(f_or(f_and(A, B), C)) == "A & B | C");
  CHECK(print_formula(f_and(f_or(A, B), C)) == "(A | B) & C");
  CHECK(print_formula(f_not(f_and(A, B))) == "~(A & B)");
  CHECK(print_formula(f_pi("X", 0, f_pvar_atom("X", 0))) == "ALL ?X:0. ?X");
  CHECK(print_formula(f_all("x", f_atom({PredKind::Const, "P", 1},
                                        {t_var("x")}))) == "all ?x. P(?x)");
}

TEST_CASE("free variable computation respects binders") {
  auto px = f_atom({PredKind::Const, "P", 1}, {t_var("x")});
  CHECK(free_ivars(px) == std::set<std::string>{"x"});
  CHECK(free_ivars(f_all("x", px)).empty());
  auto shadow = f_all("x", f_imp(px, f_all("x", px)));
  CHECK(free_ivars(shadow).empty());

  auto xa = f_pvar_atom("X", 1, {t_const("a")});
  CHECK(free_pvars(xa) == std::map<std::string, int>{{"X", 1}});
  CHECK(free_pvars(f_pi("X", 1, xa)).empty());
}

TEST_CASE("individual substitution is capture checked") {
  auto rxy = f_atom({PredKind::Const, "R", 2}, {t_var("x"), t_var("y")});
  auto f = f_all("y", rxy);  // all y. R(x, y)
  CHECK_THROWS_AS(subst_ind(f, "x", t_var("y")), CaptureError);
  auto ok = subst_ind(f, "x", t_const("a"));
  CHECK(print_formula(ok) == "all ?y. R(a, ?y)");
  // no-op substitution returns the same tree
  CHECK(subst_ind(f, "z", t_const("a")).get() == f.get());
}

TEST_CASE("predicate substitution checks arity") {
  auto body = f_imp(f_pvar_atom("X", 0), f_atom0("A"));
  auto g = subst_pred(body, "X", 0, "B");
  CHECK(print_formula(g) == "B -> A");
  CHECK_THROWS_AS(subst_pred(body, "X", 1, "B"), ArityMismatch);

  auto unary = f_pvar_atom("Y", 1, {t_const("a")});
  auto h = subst_pred(unary, "Y", 1, "P");
  CHECK(print_formula(h) == "P(a)");
}

TEST_CASE("constant/variable renaming round trips") {
  auto pa = f_atom({PredKind::Const, "P", 1}, {t_const("e")});
  auto opened = rename_iconst(pa, "e", "x");
  CHECK(print_formula(opened) == "P(?x)");
  CHECK(eq(subst_ind(opened, "x", t_const("e")), pa));
  // renaming refuses to move a constant under a binder of the same name
  auto trap = f_all("x", f_imp(pa, pa));
  CHECK_THROWS_AS(rename_iconst(trap, "e", "x"), CaptureError);

  auto xe = f_pvar_atom("E", 0);
  auto back = rename_pconst(f_atom0("E"), "E", "X");
  CHECK(eq(back, f_pvar_atom("X", 0)));
  (void)xe;
}

TEST_CASE("sugar expansion produces core formulas") {
  auto A = f_atom0("A"), B = f_atom0("B");
  CHECK(expand(f_bot())->kind == Fk::Pi);
  CHECK(print_formula(expand(f_bot())) == "bot");  // display keeps the name
  CHECK(is_core(expand(f_not(A))));
  CHECK(is_core(expand(f_and(A, B))));
  CHECK(is_core(expand(f_or(A, B))));
  auto px = f_atom({PredKind::Const, "P", 1}, {t_var("x")});
  auto exf = expand(f_ex("x", px));
  CHECK(is_core(exf));
  CHECK(print_formula(exf) ==
        "ALL ?X0:0. ((all ?x. P(?x)) -> ?X0) -> ?X0");
  ExpandOptions conv;
  conv.conventional_exists = true;
  CHECK(print_formula(expand(f_ex("x", px), conv)) ==
        "ALL ?X0:0. (all ?x. P(?x) -> ?X0) -> ?X0");
  // expansion is idempotent on core formulas
  auto core = expand(f_and(A, f_or(B, A)));
  CHECK(expand(core).get() == core.get());
}

TEST_CASE("fresh bound predicates avoid operand names") {
  auto body = f_imp(f_pvar_atom("X0", 0), f_pvar_atom("X1", 0));
  auto e = expand(f_and(body, body));
  CHECK(is_core(e));
  // the chosen binder must not collide with X0/X1
  CHECK(e->kind == Fk::Pi);
  CHECK(e->var == "X2");
}

TEST_CASE("quantifier depth bounds instance nesting") {
  auto A = f_atom0("A");
  auto px = f_atom({PredKind::Const, "P", 1}, {t_var("x")});
  CHECK(quant_depth(A) == 0);
  CHECK(quant_depth(f_all("x", px)) == 1);
  CHECK(quant_depth(f_bot()) == 1);
  CHECK(quant_depth(expand(f_bot())) == 1);
  CHECK(quant_depth(f_ex("x", px)) == 2);
  CHECK(quant_depth(expand(f_ex("x", px))) == 2);
  CHECK(quant_depth(f_and(A, A)) == 2);
  CHECK(quant_depth(expand(f_and(A, A))) <= quant_depth(f_and(A, A)));
}

TEST_CASE("matching recovers substitution slots") {
  auto px = f_atom({PredKind::Const, "P", 1}, {t_var("x")});
  auto pa = f_atom({PredKind::Const, "P", 1}, {t_const("a")});
  auto t = find_subst_term(px, pa, "x");
  REQUIRE(t.has_value());
  CHECK(*t == t_const("a"));
  // x not occurring: any instance equal to the pattern, witness is ?x itself
  auto n = find_subst_term(f_atom0("A"), f_atom0("A"), "x");
  REQUIRE(n.has_value());
  CHECK(*n == t_var("x"));
  CHECK_FALSE(find_subst_term(px, f_atom0("A"), "x").has_value());

  auto body = f_imp(f_pvar_atom("X", 0), f_atom0("A"));
  auto inst = f_imp(f_atom0("B"), f_atom0("A"));
  auto p = find_subst_pred(body, inst, "X", 0);
  REQUIRE(p.has_value());
  CHECK(*p == "B");
  CHECK_FALSE(find_subst_pred(body, f_atom0("A"), "X", 0).has_value());
}

TEST_CASE("reserved names are recognized") {
  CHECK(is_reserved_name("$e0"));
  CHECK(is_reserved_name("$W3"));
  CHECK_FALSE(is_reserved_name("e0"));
  CHECK_FALSE(is_reserved_name(""));
}
