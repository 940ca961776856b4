#include "pdiff/proof.hpp"

#include "pdiff/canon.hpp"
#include "pdiff/semantics.hpp"

#include "gen.hpp"

#include <doctest.h>

using namespace pdiff;

namespace {
Expr P(const char* s) { return parse_expr(s); }
}

TEST_CASE("axiom conclusions") {
    Equation diff_add = check(Proof::axiom(DiffAxiom::DiffAdd));
    CHECK(diff_add.lhs == P("D[x](x + y)"));
    CHECK(diff_add.rhs == P("1"));

    Equation table = check(Proof::axiom(ConstTable{'+', Rat(BigInt(1), BigInt(2)),
                                                   Rat(BigInt(1), BigInt(3)),
                                                   Rat(BigInt(5), BigInt(6))}));
    CHECK(table.lhs == P("1/2 + 1/3"));
    CHECK(table.rhs == P("5/6"));
    CHECK_THROWS_AS(check(Proof::axiom(ConstTable{'+', Rat(1), Rat(1), Rat(3)})), CheckError);
}

TEST_CASE("equality rules") {
    Proof commute = Proof::axiom(DiffAxiom::Commute);
    Equation round = check(Proof::trans(Proof::sym(commute), commute));
    CHECK(round.lhs == round.rhs);  // reflexive equation on the second derivative

    Proof bad = Proof::trans(Proof::axiom(DiffAxiom::DiffAdd), Proof::axiom(DiffAxiom::DiffMul));
    CHECK_THROWS_AS(check(bad), CheckError);
}

TEST_CASE("substitution rules") {
    Proof z = Proof::subst_var(Proof::axiom(DiffAxiom::DiffMul), {{"y", P("0")}});
    Equation eq = check(z);
    CHECK(eq.lhs == P("D[x](0*x)"));
    CHECK(eq.rhs == P("0"));

    Proof fn = Proof::subst_fn(Proof::refl(P("f(3)")), {{FnVar("f", 1), Abstract({"z"}, P("z*z"))}});
    CHECK(check(fn).lhs == P("3*3"));

    Proof bad = Proof::subst_fn(Proof::refl(P("f(3)")), {{FnVar("f", 2), Abstract({"a", "b"}, P("a"))}});
    CHECK_THROWS_AS(check(bad), CheckError);
}

TEST_CASE("congruence rules") {
    Proof p = Proof::cong_pdiff("x", Proof::axiom(RingAxiom::AddComm), Proof::refl(P("q")));
    Equation eq = check(p);
    CHECK(eq.lhs == P("D[x](x + y; q)"));
    CHECK(eq.rhs == P("D[x](y + x; q)"));

    Proof app = Proof::cong_app(FnVar("f", 2), {Proof::refl(P("1")), Proof::axiom(RingAxiom::AddComm)});
    CHECK(check(app).lhs == P("f(1, x + y)"));
}

TEST_CASE("rtc mode restricts the differentiation axioms") {
    Proof commute = Proof::axiom(DiffAxiom::Commute);
    CHECK_NOTHROW(check(commute, true));
    CHECK_NOTHROW(check(Proof::axiom(RingAxiom::MulAssoc), true));
    CHECK_THROWS_AS(check(Proof::axiom(DiffAxiom::DiffAdd), true), CheckError);
    CHECK_THROWS_AS(check(Proof::trans(Proof::sym(commute),
                                       Proof::trans(commute, Proof::sym(Proof::axiom(DiffAxiom::Chain2)))),
                          true),
                    CheckError);
}

TEST_CASE("certificate core examples") {
    CHECK(certify_canonicalize(P("x")) == Proof::refl(P("x")));

    Proof dx = certify_canonicalize(P("D[x](x)"));
    Equation eq = check(dx);
    CHECK(eq.lhs == P("D[x](x)"));
    CHECK(eq.rhs == P("1"));

    Proof chain = certify_canonicalize(P("D[x](f(g(x)))"));
    Equation ceq = check(chain);
    CHECK(ceq.lhs == P("D[x](f(g(x)))"));
    CHECK(ceq.rhs == to_expr(canonicalize(P("D[x](f(g(x)))"))));
}

TEST_CASE("certificates reorder derivative towers with the commutativity axiom") {
    // These force bubble swaps, including swaps under outer derivative layers.
    for (const char* s : {"D[y](D[x](g(x, y)))", "D[y](D[x](D[x](g(x, y))))",
                          "D[z](D[y](D[x](f3(x, y, z))))",
                          "D[w](D[y](D[x](D[x](f3(x, y, w)))))"}) {
        Expr e = P(s);
        Equation eq = check(certify_canonicalize(e));
        CHECK(eq.lhs == e);
        CHECK(eq.rhs == to_expr(canonicalize(e)));
    }
}

TEST_CASE("certificates check on a generated corpus") {
    gen::Gen g(73);
    for (int i = 0; i < 120; ++i) {
        Expr e = g.corpus_expr();
        Proof cert = certify_canonicalize(e);
        Equation eq = check(cert);
        CHECK(eq.lhs == e);
        CHECK(eq.rhs == to_expr(canonicalize(e)));
    }
}

TEST_CASE("soundness bridge: accepted proofs are decided and evaluate equally") {
    gen::Gen g(79);
    for (int i = 0; i < 80; ++i) {
        Proof p = g.random_proof();
        Equation eq;
        try {
            eq = check(p);
        } catch (const CheckError&) {
            continue;  // the generator may produce mismatched trans nodes
        }
        REQUIRE(decide(eq.lhs, eq.rhs));
        for (int s = 0; s < 3; ++s) {
            auto [fenv, venv] = g.sample_env(Expr::sum(eq.lhs, eq.rhs));
            CHECK(eval(eq.lhs, fenv, venv) == eval(eq.rhs, fenv, venv));
        }
    }
}

TEST_CASE("certificate files round trip") {
    gen::Gen g(83);
    for (int i = 0; i < 60; ++i) {
        Proof p = g.random_proof();
        Proof q = parse_proof(print_proof(p));
        CHECK(p == q);
    }
    Proof cert = certify_canonicalize(P("D[x](f(x*x); y)"));
    CHECK(parse_proof(print_proof(cert)) == cert);
}

TEST_CASE("certificate parsing errors") {
    CHECK_THROWS_AS(parse_proof("(axiom nonsense)"), ParseError);
    CHECK_THROWS_AS(parse_proof("(trans (axiom add-comm))"), ParseError);
    CHECK_THROWS_AS(parse_proof("(refl \"x +\")"), ParseError);
    CHECK_THROWS_AS(parse_proof("(sym"), ParseError);
    CHECK_THROWS_AS(parse_proof("(cong-app f/2 (refl \"x\"))"), ParseError);
}

TEST_CASE("mutated certificates are rejected cleanly") {
    gen::Gen g(91);
    std::string base = print_proof(certify_canonicalize(P("D[x](f(x*x) + g(x, y))")));
    const std::string alphabet = "()\"xyfg01/+*- abcdehlmnorstuv";
    int parsed = 0, checked = 0;
    for (int i = 0; i < 300; ++i) {
        std::string text = base;
        int edits = 1 + g.pick(3);
        for (int k = 0; k < edits; ++k) {
            size_t pos = static_cast<size_t>(g.pick(static_cast<int>(text.size())));
            text[pos] = alphabet[static_cast<size_t>(g.pick(static_cast<int>(alphabet.size())))];
        }
        try {
            Proof p = parse_proof(text);
            ++parsed;
            Equation eq = check(p);
            ++checked;
            // A mutation that still checks must still be a theorem.
            CHECK(decide(eq.lhs, eq.rhs));
        } catch (const ParseError&) {
        } catch (const CheckError&) {
        } catch (const ArityError&) {
        } catch (const std::invalid_argument&) {
        }
    }
    CHECK(parsed >= 1);  // single-character edits often stay well formed
    (void)checked;
}

TEST_CASE("hand-written rtc certificate for a commutativity instance") {
    // f_[0,1](x, y) expanded on both orders of differentiation.
    const char* text =
        "(subst-var (axiom commute) (x \"x\") (y \"y\"))";
    Proof p = parse_proof(text);
    Equation eq = check(p, true);
    CHECK(decide(eq.lhs, eq.rhs));
    CHECK(eq.lhs == P("D[y](D[x](f(x, y)))"));
}
