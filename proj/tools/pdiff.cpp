#include "pdiff/canon.hpp"
#include "pdiff/poly.hpp"
#include "pdiff/proof.hpp"
#include "pdiff/semantics.hpp"
#include "pdiff/separate.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace pdiff;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cmd_canon(const std::string& text) {
    std::cout << canonicalize(parse_expr(text)).str() << "\n";
    return 0;
}

int cmd_decide(const std::string& a, const std::string& b) {
    bool equal = decide(parse_expr(a), parse_expr(b));
    std::cout << (equal ? "equal" : "not-equal") << "\n";
    return equal ? 0 : 1;
}

int cmd_eval(const std::string& text, const std::string& env_path) {
    Expr e = parse_expr(text);
    FnEnv fenv;
    VarEnv venv;
    if (!env_path.empty()) std::tie(fenv, venv) = parse_env(read_file(env_path));
    std::cout << eval(e, fenv, venv).str() << "\n";
    return 0;
}

int cmd_derive(const std::string& var, const std::string& text) {
    if (!is_identifier(var)) throw ParseError("bad variable name '" + var + "'", 0);
    Expr e = Expr::pdiff_at_var(var, parse_expr(text));
    std::cout << canonicalize(e).str() << "\n";
    return 0;
}

int cmd_counterexample(const std::string& a, const std::string& b, bool json, long budget) {
    Expr e1 = parse_expr(a);
    Expr e2 = parse_expr(b);
    std::optional<Counterexample> cx = counterexample(e1, e2);
    if (cx && budget > 0) {
        // Prefer a small witness when the brute-force search finds one fast.
        EnumOutcome en = enum_counterexample(e1, e2, budget);
        if (en.witness) cx = en.witness;
    }
    if (!cx) {
        if (json) {
            std::cout << nlohmann::json{{"result", "equal"}}.dump() << "\n";
        } else {
            std::cout << "equal\n";
        }
        return 0;
    }
    if (json) {
        nlohmann::json out;
        out["result"] = "not-equal";
        for (const auto& [f, p] : cx->fn_assign) out[f.str()] = p.str();
        for (const auto& [x, r] : cx->var_assign) out[x] = r.str();
        out["lhs"] = cx->lhs_value.str();
        out["rhs"] = cx->rhs_value.str();
        std::cout << out.dump() << "\n";
    } else {
        for (const auto& [f, p] : cx->fn_assign)
            std::cout << f.str() << " := " << p.str() << "\n";
        for (const auto& [x, r] : cx->var_assign) std::cout << x << " := " << r.str() << "\n";
        std::cout << "lhs = " << cx->lhs_value.str() << ", rhs = " << cx->rhs_value.str() << "\n";
    }
    return 1;
}

int cmd_check_proof(const std::string& path, bool rtc) {
    Proof p = parse_proof(read_file(path));
    try {
        Equation eq = check(p, rtc);
        std::cout << "accepted: " << eq.lhs.str() << " = " << eq.rhs.str() << "\n";
        return 0;
    } catch (const CheckError& ex) {
        std::cerr << ex.what() << "\n";
        std::cout << "rejected\n";
        return 1;
    }
}

int cmd_oracle_decide(const std::string& a, const std::string& b, int degree) {
    Expr e1 = parse_expr(a);
    Expr e2 = parse_expr(b);
    FnEnv generic = generic_env(Expr::sum(e1, e2), degree);
    bool same = eval_sym(e1, generic) == eval_sym(e2, generic);
    std::cout << (same ? "equal" : "not-equal") << "\n";
    return same ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Decision procedure for the equational theory of partial differentiation\n"
        "(rational constants): canonical forms, exact evaluation, natural-number\n"
        "counterexamples, and proof-certificate checking."};
    app.require_subcommand(1);

    std::string expr1, expr2, var, env_path, proof_path;
    bool json = false, rtc = false;
    long budget = 2000;
    int degree = 3;

    auto* canon_cmd = app.add_subcommand("canon", "Print the canonical form of an expression");
    canon_cmd->add_option("expr", expr1, "expression")->required();

    auto* decide_cmd = app.add_subcommand("decide", "Decide provable equality of two expressions");
    decide_cmd->add_option("lhs", expr1, "left expression")->required();
    decide_cmd->add_option("rhs", expr2, "right expression")->required();

    auto* eval_cmd = app.add_subcommand("eval", "Evaluate an expression exactly");
    eval_cmd->add_option("expr", expr1, "expression")->required();
    eval_cmd->add_option("--env", env_path, "environment file (f/2 := x0*x1, x := 5/2)");

    auto* derive_cmd = app.add_subcommand("derive", "Print the canonical form of D[var](expr)");
    derive_cmd->add_option("var", var, "differentiation variable")->required();
    derive_cmd->add_option("expr", expr1, "expression")->required();

    auto* cx_cmd = app.add_subcommand(
        "counterexample", "Synthesize a natural-number counterexample to a non-theorem");
    cx_cmd->add_option("lhs", expr1, "left expression")->required();
    cx_cmd->add_option("rhs", expr2, "right expression")->required();
    cx_cmd->add_flag("--json", json, "machine-readable flat key-value output");
    cx_cmd->add_option("--budget", budget,
                       "brute-force retry budget for preferring small witnesses (0 disables)");

    auto* proof_cmd = app.add_subcommand("check-proof", "Check an equational proof certificate");
    proof_cmd->add_option("file", proof_path, "certificate file")->required();
    proof_cmd->add_flag("--rtc", rtc, "restrict to ring axioms, tables, and commutativity");

    auto* oracle_cmd = app.add_subcommand(
        "oracle-decide",
        "Generic-coefficient oracle: 'not-equal' refutes provability; 'equal' is not a proof");
    oracle_cmd->add_option("lhs", expr1, "left expression")->required();
    oracle_cmd->add_option("rhs", expr2, "right expression")->required();
    oracle_cmd->add_option("--degree", degree, "total degree of the generic polynomials");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (canon_cmd->parsed()) return cmd_canon(expr1);
        if (decide_cmd->parsed()) return cmd_decide(expr1, expr2);
        if (eval_cmd->parsed()) return cmd_eval(expr1, env_path);
        if (derive_cmd->parsed()) return cmd_derive(var, expr1);
        if (cx_cmd->parsed()) return cmd_counterexample(expr1, expr2, json, budget);
        if (proof_cmd->parsed()) return cmd_check_proof(proof_path, rtc);
        if (oracle_cmd->parsed()) return cmd_oracle_decide(expr1, expr2, degree);
    } catch (const pdiff::ParseError& ex) {
        std::cerr << "parse error at position " << ex.position << ": " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
    return 2;
}
