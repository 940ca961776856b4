#include "pdiff/separate.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

namespace pdiff {

// ---------------------------------------------------------------------------
// Hermite interpolation
// ---------------------------------------------------------------------------

void HermiteProblem::validate() const {
    for (const auto& node : nodes)
        if (static_cast<int>(node.point.size()) != dim)
            throw InconsistentProblemError("node dimension differs from problem dimension");
    for (size_t i = 0; i < nodes.size(); ++i)
        for (size_t j = i + 1; j < nodes.size(); ++j)
            if (nodes[i].point == nodes[j].point)
                throw InconsistentProblemError("duplicate interpolation node");
    for (const auto& node : nodes) {
        for (size_t i = 0; i < node.conditions.size(); ++i) {
            for (size_t j = i + 1; j < node.conditions.size(); ++j) {
                if (node.conditions[i].m == node.conditions[j].m &&
                    !(node.conditions[i].value == node.conditions[j].value))
                    throw InconsistentProblemError(
                        "conflicting values for permutation-equal derivative orders at one node");
            }
        }
    }
}

int HermiteProblem::max_order() const {
    int k = 0;
    for (const auto& node : nodes)
        for (const auto& cond : node.conditions) k = std::max(k, cond.m.order());
    return k;
}

int HermiteProblem::degree_bound() const {
    return static_cast<int>(nodes.size()) * (max_order() + 1) - 1;
}

namespace {

/// All exponent vectors over `dim` positions with total degree <= bound.
std::vector<std::vector<int>> monomials_up_to(int dim, int bound) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<size_t>(dim), 0);
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == dim) {
            out.push_back(cur);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            cur[pos] = k;
            rec(pos + 1, left - k);
        }
        cur[pos] = 0;
    };
    if (bound < 0) return out;
    rec(0, bound);
    return out;
}

/// Value at `point` of D_m(monomial): falling factorials times the remaining
/// powers; zero when some exponent drops below its derivative multiplicity.
Rat deriv_monomial_at(const std::vector<int>& exps, const DerivIndex& m,
                      const std::vector<Rat>& point) {
    std::vector<int> mult(exps.size(), 0);
    for (int i : m.positions()) mult[i] += 1;
    Rat coeff(1);
    for (size_t i = 0; i < exps.size(); ++i) {
        if (exps[i] < mult[i]) return Rat(0);
        for (int k = 0; k < mult[i]; ++k) coeff *= Rat(exps[i] - k);
        int rest = exps[i] - mult[i];
        for (int k = 0; k < rest; ++k) coeff *= point[i];
    }
    return coeff;
}

}  // namespace

Poly hermite_solve(const HermiteProblem& prob) {
    prob.validate();
    if (prob.nodes.empty()) return Poly();
    int bound = prob.degree_bound();
    std::vector<std::vector<int>> monos = monomials_up_to(prob.dim, bound);

    struct Row {
        std::vector<Rat> a;
        Rat rhs;
    };
    std::vector<Row> rows;
    for (const auto& node : prob.nodes) {
        for (const auto& cond : node.conditions) {
            Row row;
            row.a.reserve(monos.size());
            for (const auto& mono : monos) row.a.push_back(deriv_monomial_at(mono, cond.m, node.point));
            row.rhs = cond.value;
            rows.push_back(std::move(row));
        }
    }

    // Exact Gaussian elimination; free columns stay zero.
    size_t ncols = monos.size();
    std::vector<int> pivot_col;
    size_t r = 0;
    for (size_t c = 0; c < ncols && r < rows.size(); ++c) {
        size_t sel = r;
        while (sel < rows.size() && rows[sel].a[c].is_zero()) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[r], rows[sel]);
        Rat inv = Rat(1) / rows[r].a[c];
        for (size_t k = c; k < ncols; ++k) rows[r].a[k] *= inv;
        rows[r].rhs *= inv;
        for (size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i].a[c].is_zero()) continue;
            Rat factor = rows[i].a[c];
            for (size_t k = c; k < ncols; ++k) rows[i].a[k] -= factor * rows[r].a[k];
            rows[i].rhs -= factor * rows[r].rhs;
        }
        pivot_col.push_back(static_cast<int>(c));
        ++r;
    }
    for (size_t i = r; i < rows.size(); ++i)
        if (!rows[i].rhs.is_zero())
            throw InfeasibleError("consistent Hermite problem infeasible within the Severi bound");

    Poly solution;
    for (size_t i = 0; i < pivot_col.size(); ++i) {
        if (rows[i].rhs.is_zero()) continue;
        const auto& exps = monos[static_cast<size_t>(pivot_col[i])];
        Poly mono = Poly::constant(rows[i].rhs);
        for (size_t j = 0; j < exps.size(); ++j)
            for (int k = 0; k < exps[j]; ++k) mono = mono * Poly::variable(fn_param(static_cast<int>(j)));
        solution = solution + mono;
    }

    // Contract check: exact satisfaction of every condition.
    for (const auto& node : prob.nodes) {
        for (const auto& cond : node.conditions) {
            std::vector<VarName> seq;
            for (int i : cond.m.positions()) seq.push_back(fn_param(i));
            std::map<VarName, Rat> point;
            for (int i = 0; i < prob.dim; ++i) point[fn_param(i)] = node.point[static_cast<size_t>(i)];
            if (!(solution.derive_seq(seq).eval(point) == cond.value))
                throw InfeasibleError("Hermite solution fails a condition");
        }
    }
    return solution;
}

// ---------------------------------------------------------------------------
// Natural-point separation
// ---------------------------------------------------------------------------

namespace {

/// Depth-first walk of one shell (max coordinate == shell, except shell 0
/// which is the origin). Substituting chosen values as we descend lets whole
/// subtrees be skipped once two polynomials have become identical.
bool search_shell(const std::vector<VarName>& vars, size_t depth, int shell, bool seen_max,
                  std::vector<Poly>& ps, std::map<VarName, Rat>& acc) {
    if (depth == vars.size()) {
        if (!seen_max && shell != 0) return false;
        for (size_t i = 0; i < ps.size(); ++i)
            for (size_t j = i + 1; j < ps.size(); ++j)
                if (ps[i] == ps[j]) return false;
        return true;
    }
    for (int v = 0; v <= shell; ++v) {
        std::vector<Poly> next;
        next.reserve(ps.size());
        std::map<VarName, Poly> bind{{vars[depth], Poly::constant(Rat(v))}};
        for (const auto& p : ps) next.push_back(p.subst(bind));
        bool prune = false;
        for (size_t i = 0; i < next.size() && !prune; ++i)
            for (size_t j = i + 1; j < next.size(); ++j)
                if (next[i] == next[j]) { prune = true; break; }
        if (prune) continue;
        acc[vars[depth]] = Rat(v);
        if (search_shell(vars, depth + 1, shell, seen_max || v == shell, next, acc)) return true;
    }
    acc.erase(vars[depth]);
    return false;
}

}  // namespace

std::map<VarName, Rat> separate_polys(const std::vector<Poly>& ps) {
    for (size_t i = 0; i < ps.size(); ++i)
        for (size_t j = i + 1; j < ps.size(); ++j)
            if (ps[i] == ps[j])
                throw SeparationPreconditionError("separate_polys requires pairwise unequal polynomials");

    std::set<VarName> var_set;
    for (const auto& p : ps)
        for (const auto& v : p.variables()) var_set.insert(v);
    std::vector<VarName> vars(var_set.begin(), var_set.end());  // alphabetical

    std::map<VarName, Rat> point;
    if (vars.empty()) return point;  // constants are already pairwise distinct

    // The product of the pairwise differences has per-variable degree at most
    // C(t,2) * max_deg, and a nonzero polynomial cannot vanish on the whole
    // grid [0..s]^m once s exceeds its per-variable degree; the cap below can
    // therefore never be reached.
    int max_deg = 0;
    for (const auto& p : ps)
        for (const auto& [mono, c] : p.terms())
            for (const auto& [v, k] : mono) max_deg = std::max(max_deg, k);
    int t = static_cast<int>(ps.size());
    int shell_cap = std::max(1, max_deg * (t * (t - 1) / 2) + 1);

    for (int shell = 0; shell <= shell_cap; ++shell) {
        std::vector<Poly> work = ps;
        if (search_shell(vars, 0, shell, false, work, point)) return point;
        point.clear();
    }
    throw std::logic_error("separate_polys: no separating point within the degree shell cap");
}

// ---------------------------------------------------------------------------
// Separating environments (Theorem "sep" construction)
// ---------------------------------------------------------------------------

std::pair<FnEnv, VarEnv> build_separation(const std::vector<Canon>& set) {
    std::vector<Canon> sat = saturate(set);

    std::vector<Canon> atoms;
    for (const auto& c : sat)
        if (c.is_atom()) atoms.push_back(c);
    SepAssign w = SepAssign::build(atoms);

    // One node polynomial per equivalence class; separate the classes.
    std::vector<Poly> reps;
    std::vector<Poly> polys;  // node polynomial of each member of sat
    for (const auto& c : sat) {
        Poly p = node_poly(c, w);
        polys.push_back(p);
        bool dup = false;
        for (const auto& q : reps)
            if (p == q) { dup = true; break; }
        if (!dup) reps.push_back(std::move(p));
    }
    std::map<VarName, Rat> assignment = separate_polys(reps);
    // Separation variables not mentioned by any representative cannot occur.
    auto value_of = [&](const Poly& p) {
        std::map<VarName, Rat> pt;
        for (const auto& v : p.variables()) {
            auto it = assignment.find(v);
            if (it == assignment.end()) throw std::logic_error("separation variable without a value");
            pt.emplace(v, it->second);
        }
        return p.eval(pt);
    };

    std::vector<Rat> values;
    values.reserve(sat.size());
    for (const auto& p : polys) values.push_back(value_of(p));
    auto class_value = [&](const Canon& c) {
        for (size_t i = 0; i < sat.size(); ++i)
            if (sat[i] == c) return values[i];
        throw std::logic_error("canonical form missing from saturated set");
    };

    VarEnv venv;
    for (size_t i = 0; i < sat.size(); ++i)
        if (sat[i].tag() == Canon::Tag::Var) venv.set(sat[i].var_name(), values[i]);

    // Hermite problem per function variable: a node per argument-value tuple,
    // a condition per derivative index.
    std::map<std::string, int> fn_arity;
    for (const auto& c : sat)
        if (c.tag() == Canon::Tag::FApp) {
            auto [it, fresh] = fn_arity.emplace(c.fn().name, c.fn().arity);
            if (!fresh && it->second != c.fn().arity)
                throw ArityError("function variable '" + c.fn().name + "' used with two arities");
        }

    FnEnv fenv;
    for (const auto& [fname, arity] : fn_arity) {
        HermiteProblem prob;
        prob.dim = arity;
        for (size_t i = 0; i < sat.size(); ++i) {
            const Canon& c = sat[i];
            if (c.tag() != Canon::Tag::FApp || c.fn().name != fname) continue;
            std::vector<Rat> node_pt;
            for (const auto& arg : c.args()) node_pt.push_back(class_value(arg));
            HermiteCondition cond{c.deriv_index(), values[i]};
            bool merged = false;
            for (auto& node : prob.nodes) {
                if (node.point == node_pt) {
                    bool have = false;
                    for (const auto& other : node.conditions)
                        if (other.m == cond.m) {
                            if (!(other.value == cond.value))
                                throw std::logic_error("separation produced an inconsistent Hermite problem");
                            have = true;
                        }
                    if (!have) node.conditions.push_back(cond);
                    merged = true;
                    break;
                }
            }
            if (!merged) prob.nodes.push_back(HermiteNode{std::move(node_pt), {cond}});
        }
        fenv.set(FnVar(fname, arity), hermite_solve(prob));
    }
    return {std::move(fenv), std::move(venv)};
}

// ---------------------------------------------------------------------------
// Natural-number counterexamples
// ---------------------------------------------------------------------------

namespace {

void merge_pair_arities(std::map<std::string, int>& into, const std::map<std::string, int>& from) {
    for (const auto& [name, arity] : from) {
        auto [it, fresh] = into.emplace(name, arity);
        if (!fresh && it->second != arity)
            throw ArityError("function variable '" + name + "' used with arities " +
                             std::to_string(it->second) + " and " + std::to_string(arity) +
                             " across the two sides");
    }
}

Counterexample assemble(const Expr& e1, const Expr& e2, const FnEnv& fenv, const VarEnv& venv) {
    Counterexample cx;
    std::map<std::string, int> fns = e1.fn_arities();
    merge_pair_arities(fns, e2.fn_arities());
    for (const auto& [name, arity] : fns) {
        FnVar f(name, arity);
        cx.fn_assign.emplace_back(f, fenv.get_or_zero(f));
    }
    std::set<VarName> vars = e1.free_vars();
    vars.insert(e2.free_vars().begin(), e2.free_vars().end());
    for (const auto& x : vars) cx.var_assign.emplace_back(x, venv.get(x));
    cx.lhs_value = eval(e1, fenv, venv);
    cx.rhs_value = eval(e2, fenv, venv);
    return cx;
}

}  // namespace

Counterexample naturalize(const Expr& e1, const Expr& e2, const FnEnv& fenv, const VarEnv& venv) {
    if (eval(e1, fenv, venv) == eval(e2, fenv, venv))
        throw SeparationPreconditionError("naturalize requires environments that distinguish the sides");

    if (fenv.is_natural() && venv.is_natural()) return assemble(e1, e2, fenv, venv);

    // Abstract each non-natural coefficient value into a fresh variable,
    // shared across occurrences, turning every entry into a natural-number
    // polynomial over the parameters and the new variables.
    std::set<std::string> blocked = e1.free_vars();
    blocked.insert(e2.free_vars().begin(), e2.free_vars().end());
    for (const auto& [name, entry] : fenv.entries())
        for (int i = 0; i < entry.first; ++i) blocked.insert(fn_param(i));
    NamePool pool("y", std::move(blocked));

    std::vector<std::pair<Rat, VarName>> abstracted;
    auto var_for = [&](const Rat& r) -> VarName {
        for (const auto& [value, name] : abstracted)
            if (value == r) return name;
        abstracted.emplace_back(r, pool.fresh());
        return abstracted.back().second;
    };

    std::map<std::string, Abstract> substitution;
    for (const auto& [name, entry] : fenv.entries()) {
        const auto& [arity, poly] = entry;
        Poly q;
        for (const auto& [mono, coeff] : poly.terms()) {
            Poly term = coeff.is_natural() ? Poly::constant(coeff) : Poly::variable(var_for(coeff));
            for (const auto& [v, k] : mono)
                for (int i = 0; i < k; ++i) term = term * Poly::variable(v);
            q = q + term;
        }
        std::vector<VarName> params;
        for (int i = 0; i < arity; ++i) params.push_back(fn_param(i));
        substitution.emplace(name, Abstract(std::move(params), q.to_expr()));
    }

    FnEnv empty;
    Poly d1 = eval_sym(subst_fnvars(e1, substitution), empty);
    Poly d2 = eval_sym(subst_fnvars(e2, substitution), empty);
    std::map<VarName, Rat> point = separate_polys({d1, d2});

    // Instantiate the abstracted coefficients and the term variables.
    std::map<VarName, Poly> coeff_values;
    for (const auto& [value, name] : abstracted) {
        auto it = point.find(name);
        Rat v = it == point.end() ? Rat(0) : it->second;
        coeff_values.emplace(name, Poly::constant(v));
    }
    FnEnv nat_fenv;
    for (const auto& [name, entry] : fenv.entries()) {
        const Abstract& abs = substitution.at(name);
        Poly q = Poly::from_expr(abs.body()).subst(coeff_values);
        nat_fenv.set(FnVar(name, entry.first), q);
    }
    VarEnv nat_venv;
    std::set<VarName> vars = e1.free_vars();
    vars.insert(e2.free_vars().begin(), e2.free_vars().end());
    for (const auto& x : vars) {
        auto it = point.find(x);
        nat_venv.set(x, it == point.end() ? Rat(0) : it->second);
    }
    return assemble(e1, e2, nat_fenv, nat_venv);
}

std::optional<Counterexample> counterexample(const Expr& e1, const Expr& e2) {
    {
        std::map<std::string, int> fns = e1.fn_arities();
        merge_pair_arities(fns, e2.fn_arities());
    }
    Canon c1 = canonicalize(e1);
    Canon c2 = canonicalize(e2);
    if (canon_equiv(c1, c2)) return std::nullopt;
    auto [fenv, venv] = build_separation({c1, c2});
    Counterexample cx = naturalize(e1, e2, fenv, venv);
    if (cx.lhs_value == cx.rhs_value)
        throw std::logic_error("counterexample failed to separate the sides");
    return cx;
}

EnumOutcome enum_counterexample(const Expr& e1, const Expr& e2, long budget) {
    std::vector<FnVar> fns;
    {
        std::map<std::string, int> m = e1.fn_arities();
        merge_pair_arities(m, e2.fn_arities());
        for (const auto& [name, arity] : m) fns.emplace_back(name, arity);
    }
    std::set<VarName> var_set = e1.free_vars();
    var_set.insert(e2.free_vars().begin(), e2.free_vars().end());
    std::vector<VarName> vars(var_set.begin(), var_set.end());

    long used = 0;
    // Levels grow degree, coefficient bound and point bound together; tuples
    // re-tested at a later level just consume budget.
    for (int level = 0;; ++level) {
        int degree = std::min(level, 3);
        std::vector<std::vector<std::vector<int>>> layouts;
        size_t slots = vars.size();
        for (const auto& f : fns) {
            layouts.push_back(monomials_up_to(f.arity, degree));
            slots += layouts.back().size();
        }

        auto env_of = [&](const std::vector<int>& tuple) {
            FnEnv fenv;
            size_t k = 0;
            for (size_t fi = 0; fi < fns.size(); ++fi) {
                Poly p;
                for (const auto& mono : layouts[fi]) {
                    Rat coeff = Rat(tuple[k++]);
                    if (coeff.is_zero()) continue;
                    Poly term = Poly::constant(coeff);
                    for (size_t j = 0; j < mono.size(); ++j)
                        for (int q = 0; q < mono[j]; ++q)
                            term = term * Poly::variable(fn_param(static_cast<int>(j)));
                    p = p + term;
                }
                fenv.set(fns[fi], p);
            }
            VarEnv venv;
            for (size_t vi = 0; vi < vars.size(); ++vi) venv.set(vars[vi], Rat(tuple[k++]));
            return std::pair{std::move(fenv), std::move(venv)};
        };

        std::vector<int> tuple(slots, 0);
        for (;;) {
            if (++used > budget) return {std::nullopt, true};
            auto [fenv, venv] = env_of(tuple);
            if (!(eval(e1, fenv, venv) == eval(e2, fenv, venv)))
                return {assemble(e1, e2, fenv, venv), false};
            // Odometer step, lexicographic over values 0..level.
            size_t pos = slots;
            while (pos > 0) {
                --pos;
                if (tuple[pos] < level) {
                    ++tuple[pos];
                    std::fill(tuple.begin() + static_cast<long>(pos) + 1, tuple.end(), 0);
                    break;
                }
                if (pos == 0) { pos = slots; break; }
            }
            if (pos == slots || slots == 0) break;  // level exhausted
        }
    }
}

}  // namespace pdiff
