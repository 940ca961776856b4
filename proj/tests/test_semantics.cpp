#include "pdiff/semantics.hpp"

#include "pdiff/canon.hpp"

#include "gen.hpp"

#include <doctest.h>

using namespace pdiff;

namespace {
Expr P(const char* s) { return parse_expr(s); }
}

TEST_CASE("evaluation clauses") {
    FnEnv none;
    CHECK(eval(P("D[x](x*x)"), none, VarEnv({{"x", Rat(3)}})) == Rat(6));

    FnEnv fenv;
    fenv.set(FnVar("f", 1), Poly::parse("x0^2 + 1"));
    CHECK(eval(P("f(2)"), fenv, VarEnv()) == Rat(5));

    FnEnv cube;
    cube.set(FnVar("f", 1), Poly::parse("x0^3"));
    CHECK(eval(P("D[x](f(x); 1)"), cube, VarEnv()) == Rat(3));

    // Unbound entries default to the zero polynomial, missing variables to 0.
    CHECK(eval(P("g(x, y) + x"), none, VarEnv({{"x", Rat(2)}})) == Rat(2));
    CHECK(eval(P("D[x](g(x))"), none, VarEnv({{"x", Rat(2)}})) == Rat(0));
}

TEST_CASE("symbolic evaluation") {
    FnEnv none;
    CHECK(eval_sym(P("D[x](x*y; x)"), none) == Poly::parse("y"));
    CHECK(eval_sym(P("x"), none) == Poly::parse("x"));
    FnEnv fenv;
    fenv.set(FnVar("f", 1), Poly::parse("x0"));
    CHECK(eval_sym(P("f(x) + f(x)"), fenv) == Poly::parse("2*x"));
    CHECK_THROWS_AS(eval_sym(P("g(1)"), none), UnboundFunctionError);
}

TEST_CASE("environment files") {
    auto [fenv, venv] = parse_env("# comment\nf/2 := x0*x1 + 3\n\nx := 5/2\n");
    CHECK(*fenv.find(FnVar("f", 2)) == Poly::parse("x0*x1 + 3"));
    CHECK(venv.get("x") == Rat(BigInt(5), BigInt(2)));
    CHECK(venv.get("unbound") == Rat(0));
    auto [fenv2, venv2] = parse_env(print_env(fenv, venv));
    CHECK(*fenv2.find(FnVar("f", 2)) == *fenv.find(FnVar("f", 2)));
    CHECK(venv2.get("x") == venv.get("x"));
    CHECK_THROWS_AS(parse_env("f/1 = x0"), ParseError);
    CHECK_THROWS_AS(parse_env("f/1 := y0"), ParseError);  // parameter outside x0..
    CHECK_THROWS_AS(parse_env("x := x + 1"), ParseError);
}

TEST_CASE("generic environments") {
    Expr e = P("f(x)");
    FnEnv g1 = generic_env(e, 1);
    const Poly* p = g1.find(FnVar("f", 1));
    REQUIRE(p != nullptr);
    // A fully generic degree-1 polynomial: a0 + a1*x0.
    CHECK(p->variables().size() == 3);  // x0 and two coefficient variables
    CHECK(p->total_degree() == 2);      // a1*x0 is the top monomial

    // The oracle validates the commutativity axiom ...
    Expr lhs = P("D[y](D[x](f(x, y)))");
    Expr rhs = P("D[x](D[y](f(x, y)))");
    FnEnv g3 = generic_env(Expr::sum(lhs, rhs), 3);
    CHECK(eval_sym(lhs, g3) == eval_sym(rhs, g3));

    // ... and refutes a non-theorem already at degree 1.
    Expr l2 = P("D[x](f(x))");
    Expr r2 = P("f(x)");
    FnEnv gd = generic_env(Expr::sum(l2, r2), 1);
    CHECK(eval_sym(l2, gd) != eval_sym(r2, gd));
}

TEST_CASE("substitution lemma, variable part") {
    gen::Gen g(23);
    for (int i = 0; i < 150; ++i) {
        Expr e = g.corpus_expr();
        Expr e0 = g.expr(4, {"x", "y"}, {FnVar("f", 1)});
        auto [fenv, venv] = g.sample_env(Expr::sum(e, e0));
        Rat lhs = eval(subst_vars(e, {{"y", e0}}), fenv, venv);
        VarEnv updated = venv;
        updated.set("y", eval(e0, fenv, venv));
        CHECK(lhs == eval(e, fenv, updated));
    }
}

TEST_CASE("substitution lemma, function-variable part") {
    gen::Gen g(29);
    for (int i = 0; i < 150; ++i) {
        Expr e = g.corpus_expr();
        if (!e.fn_arities().count("f")) continue;
        // Substitute an abstract whose body is itself a polynomial.
        Expr body = g.poly({"p"}, 3).to_expr();
        Abstract abs({"p"}, body);
        auto [fenv, venv] = g.sample_env(e);
        // The updated environment entry is the polynomial of the body.
        FnEnv updated = fenv;
        updated.set(FnVar("f", 1), Poly::from_expr(body).subst({{"p", Poly::variable(fn_param(0))}}));
        Rat lhs = eval(subst_fnvars(e, {{"f", abs}}), fenv, venv);
        CHECK(lhs == eval(e, updated, venv));
    }
}

TEST_CASE("eval agrees with symbolic evaluation followed by evaluation") {
    gen::Gen g(31);
    for (int i = 0; i < 200; ++i) {
        Expr e = g.corpus_expr();
        auto [fenv, venv] = g.sample_env(e);
        std::map<VarName, Rat> pt;
        for (const auto& x : e.free_vars()) pt.emplace(x, venv.get(x));
        CHECK(eval(e, fenv, venv) == eval_sym(e, fenv).eval(pt));
    }
}

TEST_CASE("consistency: provably equal expressions evaluate equally") {
    gen::Gen g(37);
    int tested = 0;
    for (int i = 0; i < 120; ++i) {
        Expr e = g.corpus_expr();
        Expr e2 = to_expr(canonicalize(e));
        REQUIRE(decide(e, e2));
        for (int s = 0; s < 5; ++s) {
            auto [fenv, venv] = g.sample_env(e);
            CHECK(eval(e, fenv, venv) == eval(e2, fenv, venv));
            ++tested;
        }
    }
    CHECK(tested >= 500);
}
