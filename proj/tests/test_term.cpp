#include "pdiff/term.hpp"

#include "gen.hpp"

#include <doctest.h>

using namespace pdiff;

namespace {
Expr P(const char* s) { return parse_expr(s); }
}

TEST_CASE("parsing the concrete grammar") {
    // D[x](e) abbreviates D[x](e; x).
    CHECK(P("D[x](x*x)") == Expr::pdiff("x", P("x*x"), P("x")));
    CHECK(P("1/2 + x*y") == Expr::sum(Expr::constant(Rat(BigInt(1), BigInt(2))),
                                      Expr::product(P("x"), P("y"))));
    CHECK(P("a - b") == Expr::sum(P("a"), Expr::product(Expr::constant(Rat(-1)), P("b"))));
    CHECK(P("-x") == Expr::product(Expr::constant(Rat(-1)), P("x")));
    CHECK(P("-3/4") == Expr::constant(Rat(BigInt(-3), BigInt(4))));
    CHECK(P("h()") == Expr::apply(FnVar("h", 0), {}));
    CHECK(P("f(x, y)").fn().arity == 2);
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(P("1.5"), ParseError);
    CHECK_THROWS_AS(P("x +"), ParseError);
    CHECK_THROWS_AS(P("(x"), ParseError);
    CHECK_THROWS_AS(P("x ^ 2"), ParseError);  // powers only in polynomial files
    CHECK(parse_expr("x^2", true) == P("x*x"));
    // Arity conflicts are input errors, not repaired.
    CHECK_THROWS_AS(P("f(x) + f(x, y)"), ArityError);
    CHECK_THROWS_AS(P("f(x, g()) + f(x)"), ArityError);
}

TEST_CASE("alpha-equivalence is structural") {
    CHECK(P("D[x](f(x); y)") == P("D[z](f(z); y)"));
    // The evaluation point stays free.
    CHECK(P("D[x](f(x); x)") == P("D[z](f(z); x)"));
    CHECK(P("D[x](f(x); x)") != P("D[x](f(x); y)"));
    CHECK(alpha_eq(P("D[x](x*y)"), P("D[w](w*y; x)")));
}

TEST_CASE("printing renames binders canonically") {
    CHECK(print_expr(Expr::pdiff("y", P("y*y"), P("x"))) == "D[v0](v0*v0; x)");
    CHECK(print_expr(Expr::constant(Rat(BigInt(-3), BigInt(4)))) == "-3/4");
    // A free variable named v0 is not captured by the scheme.
    Expr tricky = Expr::pdiff("w", Expr::product(P("w"), P("v0")), P("v0"));
    CHECK(P(print_expr(tricky).c_str()) == tricky);
}

TEST_CASE("free variables and function variables") {
    CHECK(P("D[x](x*y; x)").free_vars() == std::set<VarName>{"x", "y"});
    CHECK(P("D[x](x*y; 3)").free_vars() == std::set<VarName>{"y"});
    CHECK(fn_vars(P("f(g(x))")) == std::set<FnVar>{FnVar("f", 1), FnVar("g", 1)});
}

TEST_CASE("variable substitution") {
    CHECK(subst_vars(P("x + y"), {{"y", P("x*x")}}) == P("x + x*x"));
    // Capture avoidance: the binder is renamed away from the incoming x.
    CHECK(subst_vars(P("D[x](x*y; x)"), {{"y", P("x")}}) == P("D[w](w*x; x)"));
    CHECK(subst_vars(P("D[x](x*y; x)"), {}) == P("D[x](x*y; x)"));
    // Simultaneous, not sequential.
    CHECK(subst_vars(P("x + y"), {{"x", P("y")}, {"y", P("x")}}) == P("y + x"));
}

TEST_CASE("function variable substitution") {
    CHECK(subst_fnvars(P("f(3)"), {{"f", Abstract({"z"}, P("z*z"))}}) == P("3*3"));
    CHECK(subst_fnvars(P("D[x](f(x); y)"), {{"f", Abstract({"z"}, P("z + x"))}}) ==
          P("D[w](w + x; y)"));
    CHECK(subst_fnvars(P("g(f(1))"), {{"f", Abstract({"z"}, P("z + 1"))}}) == P("g(1 + 1)"));
    CHECK_THROWS_AS(subst_fnvars(P("f(3)"), {{"f", Abstract({"a", "b"}, P("a"))}}), ArityError);
}

TEST_CASE("round trip on a generated corpus") {
    gen::Gen g(2024);
    for (int i = 0; i < 10000; ++i) {
        Expr e = g.corpus_expr();
        CAPTURE(print_expr(e));
        REQUIRE(parse_expr(print_expr(e)) == e);
    }
}

TEST_CASE("parser rejects garbage without surprises") {
    gen::Gen g(87);
    const std::string alphabet = "xyzfgD()[];,+*-/0123456789 ^.";
    int accepted = 0;
    for (int i = 0; i < 2000; ++i) {
        std::string text;
        int len = 1 + g.pick(24);
        for (int k = 0; k < len; ++k)
            text += alphabet[static_cast<size_t>(g.pick(static_cast<int>(alphabet.size())))];
        try {
            Expr e = parse_expr(text);
            ++accepted;
            CHECK(parse_expr(print_expr(e)) == e);
        } catch (const ParseError&) {
        } catch (const ArityError&) {
        }
    }
    CHECK(accepted >= 1);
}

TEST_CASE("substitution properties on generated terms") {
    gen::Gen g(77);
    for (int i = 0; i < 400; ++i) {
        Expr e = g.corpus_expr();
        Expr v = g.expr(4, {"x", "q"}, {});
        Expr sub = subst_vars(e, {{"y", v}});
        // FV(e[v/y]) is contained in (FV(e) \ {y}) united with FV(v).
        std::set<VarName> bound = e.free_vars();
        bound.erase("y");
        if (e.free_vars().count("y"))
            bound.insert(v.free_vars().begin(), v.free_vars().end());
        for (const auto& x : sub.free_vars()) CHECK(bound.count(x));
        // Composition with disjoint domains and capture-free ranges.
        Expr w = g.expr(3, {"q"}, {});
        Expr lhs = subst_vars(subst_vars(e, {{"y", v}}), {{"z", w}});
        Expr rhs = subst_vars(e, {{"y", subst_vars(v, {{"z", w}})}, {"z", w}});
        CHECK(lhs == rhs);
    }
}

TEST_CASE("substitutions respect alpha-equivalence") {
    // Alpha-equal inputs are identical trees here, so the property reduces to
    // printing round trips; spot-check one renamed pair explicitly. Note the
    // evaluation point stays free, so it must coincide on both sides.
    Expr a = Expr::pdiff("u", P("u + y"), P("q"));
    Expr b = Expr::pdiff("v", P("v + y"), P("q"));
    REQUIRE(a == b);
    CHECK(subst_vars(a, {{"y", P("q")}}) == subst_vars(b, {{"y", P("q")}}));
}
