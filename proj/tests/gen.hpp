#pragma once

// Deterministic random generators shared by the property tests and the
// acceptance suite.

#include "pdiff/canon.hpp"
#include "pdiff/poly.hpp"
#include "pdiff/proof.hpp"
#include "pdiff/semantics.hpp"
#include "pdiff/separate.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace pdiff::gen {

class Gen {
public:
    explicit Gen(unsigned seed) : rng_(seed) {}

    int pick(int n) { return static_cast<int>(rng_() % static_cast<unsigned>(n)); }
    bool chance(int percent) { return pick(100) < percent; }

    Rat small_rat(bool allow_fraction = true) {
        int num = pick(9) - 4;
        if (allow_fraction && chance(25)) return Rat(BigInt(num), BigInt(pick(3) + 1));
        return Rat(num);
    }

    Rat small_nat() { return Rat(pick(4)); }

    /// Expression of at most `budget` nodes over the given variables and
    /// function variables (arity <= 2 pools by default).
    Expr expr(int budget, const std::vector<VarName>& vars, const std::vector<FnVar>& fns,
              int depth = 0) {
        if (budget <= 1 || depth > 6) {
            if (!vars.empty() && chance(65)) return Expr::variable(vars[static_cast<size_t>(pick(static_cast<int>(vars.size())))]);
            return Expr::constant(small_rat());
        }
        switch (pick(10)) {
            case 0:
            case 1: return Expr::sum(expr(budget / 2, vars, fns, depth + 1),
                                     expr(budget / 2, vars, fns, depth + 1));
            case 2:
            case 3: return Expr::product(expr(budget / 2, vars, fns, depth + 1),
                                         expr(budget / 2, vars, fns, depth + 1));
            case 4:
            case 5: {
                if (fns.empty()) return Expr::constant(small_rat());
                const FnVar& f = fns[static_cast<size_t>(pick(static_cast<int>(fns.size())))];
                std::vector<Expr> args;
                for (int i = 0; i < f.arity; ++i)
                    args.push_back(expr((budget - 1) / std::max(1, f.arity), vars, fns, depth + 1));
                return Expr::apply(f, std::move(args));
            }
            case 6:
            case 7: {
                // Differentiation: bind one of the variables (or a fresh one).
                VarName x = vars.empty() || chance(30)
                                ? "b" + std::to_string(pick(3))
                                : vars[static_cast<size_t>(pick(static_cast<int>(vars.size())))];
                std::vector<VarName> inner = vars;
                if (std::find(inner.begin(), inner.end(), x) == inner.end()) inner.push_back(x);
                Expr body = expr(budget / 2, inner, fns, depth + 1);
                if (chance(50)) return Expr::pdiff_at_var(x, body);
                return Expr::pdiff(x, body, expr(budget / 3, vars, fns, depth + 1));
            }
            default:
                if (!vars.empty() && chance(65)) return Expr::variable(vars[static_cast<size_t>(pick(static_cast<int>(vars.size())))]);
                return Expr::constant(small_rat());
        }
    }

    /// The default corpus shape used across the test suites: size <= 8,
    /// at most two function variables, arity <= 2.
    Expr corpus_expr() {
        return expr(8, {"x", "y", "z"}, {FnVar("f", 1), FnVar("g", 2)});
    }

    Poly poly(const std::vector<VarName>& vars, int degree, bool natural = false) {
        Poly p;
        int terms = pick(4) + 1;
        for (int t = 0; t < terms; ++t) {
            Poly mono = Poly::constant(natural ? small_nat() : small_rat());
            int deg = pick(degree + 1);
            for (int d = 0; d < deg; ++d)
                mono = mono * Poly::variable(vars[static_cast<size_t>(pick(static_cast<int>(vars.size())))]);
            p = p + mono;
        }
        return p;
    }

    /// Polynomial environment of degree <= 3 covering the expression's
    /// function variables, plus rational values for its free variables.
    std::pair<FnEnv, VarEnv> sample_env(const Expr& e, bool natural = false) {
        FnEnv fenv;
        for (const auto& f : e.fn_vars()) {
            std::vector<VarName> params;
            for (int i = 0; i < f.arity; ++i) params.push_back(fn_param(i));
            if (params.empty())
                fenv.set(f, Poly::constant(natural ? small_nat() : small_rat()));
            else
                fenv.set(f, poly(params, 3, natural));
        }
        VarEnv venv;
        for (const auto& x : e.free_vars()) venv.set(x, natural ? small_nat() : small_rat());
        return {std::move(fenv), std::move(venv)};
    }

    /// Random consistent Hermite problem: dim <= 3, <= 4 nodes, order <= 2.
    HermiteProblem hermite_problem() {
        HermiteProblem prob;
        prob.dim = pick(3) + 1;
        int nnodes = pick(4) + 1;
        std::vector<std::vector<Rat>> points;
        while (static_cast<int>(points.size()) < nnodes) {
            std::vector<Rat> pt;
            for (int i = 0; i < prob.dim; ++i) pt.push_back(Rat(pick(5) - 2));
            if (std::find(points.begin(), points.end(), pt) == points.end()) points.push_back(pt);
        }
        for (auto& pt : points) {
            HermiteNode node;
            node.point = pt;
            int nconds = pick(3) + 1;
            for (int c = 0; c < nconds; ++c) {
                std::vector<int> m;
                int order = pick(3);
                for (int k = 0; k < order; ++k) m.push_back(pick(prob.dim));
                DerivIndex idx(std::move(m), prob.dim);
                bool dup = false;
                for (const auto& other : node.conditions)
                    if (other.m == idx) dup = true;
                if (!dup) node.conditions.push_back({idx, small_rat()});
            }
            prob.nodes.push_back(std::move(node));
        }
        return prob;
    }

    /// Closed expression (no free variables, no function variables).
    Expr closed_expr(int budget, int depth = 0) {
        if (budget <= 1 || depth > 5) return Expr::constant(small_rat());
        switch (pick(7)) {
            case 0:
            case 1: return Expr::sum(closed_expr(budget / 2, depth + 1), closed_expr(budget / 2, depth + 1));
            case 2:
            case 3: return Expr::product(closed_expr(budget / 2, depth + 1), closed_expr(budget / 2, depth + 1));
            case 4:
            case 5: {
                // D[x](body; point) with x free only inside the body.
                VarName x = "t" + std::to_string(pick(2));
                Expr body = open_body(budget / 2, x, depth + 1);
                return Expr::pdiff(x, body, closed_expr(budget / 3, depth + 1));
            }
            default: return Expr::constant(small_rat());
        }
    }

    /// Random valid proof, used by the soundness-bridge tests.
    Proof random_proof(int depth = 0) {
        if (depth > 3 || chance(35)) {
            switch (pick(6)) {
                case 0: return Proof::axiom(RingAxiom::AddComm);
                case 1: return Proof::axiom(RingAxiom::DistribLeft);
                case 2: return Proof::axiom(DiffAxiom::DiffAdd);
                case 3: return Proof::axiom(DiffAxiom::Commute);
                case 4: {
                    Rat a = small_rat(), b = small_rat();
                    return chance(50) ? Proof::axiom(ConstTable{'+', a, b, a + b})
                                      : Proof::axiom(ConstTable{'*', a, b, a * b});
                }
                default: return Proof::refl(corpus_expr());
            }
        }
        switch (pick(6)) {
            case 0: return Proof::sym(random_proof(depth + 1));
            case 1: {
                Proof p = random_proof(depth + 1);
                return Proof::trans(p, Proof::sym(Proof::sym(p)));
            }
            case 2: return Proof::cong_sum(random_proof(depth + 1), random_proof(depth + 1));
            case 3: return Proof::cong_prod(random_proof(depth + 1), random_proof(depth + 1));
            case 4: {
                std::vector<std::pair<VarName, Expr>> bs;
                bs.emplace_back("x", corpus_expr());
                if (chance(50)) bs.emplace_back("y", corpus_expr());
                return Proof::subst_var(random_proof(depth + 1), std::move(bs));
            }
            default: {
                VarName x = chance(50) ? "x" : "u0";
                return Proof::cong_pdiff(x, random_proof(depth + 1), random_proof(depth + 1));
            }
        }
    }

private:
    Expr open_body(int budget, const VarName& x, int depth) {
        if (budget <= 1 || depth > 5) return chance(60) ? Expr::variable(x) : Expr::constant(small_rat());
        switch (pick(5)) {
            case 0: return Expr::sum(open_body(budget / 2, x, depth + 1), open_body(budget / 2, x, depth + 1));
            case 1:
            case 2: return Expr::product(open_body(budget / 2, x, depth + 1), open_body(budget / 2, x, depth + 1));
            default: return chance(60) ? Expr::variable(x) : Expr::constant(small_rat());
        }
    }

    std::mt19937 rng_;
};

}  // namespace pdiff::gen
