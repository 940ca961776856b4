#include "pdiff/canon.hpp"
#include "pdiff/proof.hpp"
#include "pdiff/semantics.hpp"

#include <algorithm>
#include <cassert>

namespace pdiff {

namespace {

/// A proof together with its (incrementally tracked) conclusion. The
/// combinators below recompute conclusions exactly as the checker does, and
/// trans fails fast on any internal mismatch.
struct PF {
    Proof p;
    Expr l, r;
};

Expr zero_expr() { return Expr::constant(Rat(0)); }
Expr one_expr() { return Expr::constant(Rat(1)); }
Expr neg_expr(const Expr& e) { return Expr::product(Expr::constant(Rat(-1)), e); }

/// Derivative tower over f(x0,...,x_{n-1}) for an explicit (possibly
/// unsorted) index sequence; the head of the sequence is the outermost
/// derivative.
Expr tower_params(const FnVar& f, const std::vector<int>& seq) {
    std::vector<Expr> params;
    for (int i = 0; i < f.arity; ++i) params.push_back(Expr::variable(fn_param(i)));
    Expr t = Expr::apply(f, params);
    for (auto it = seq.rbegin(); it != seq.rend(); ++it)
        t = Expr::pdiff_at_var(fn_param(*it), t);
    return t;
}

std::vector<Expr> unfold_left_sum(const Expr& e) {
    std::vector<Expr> out;
    Expr cur = e;
    while (cur.tag() == Expr::Tag::Sum) {
        out.push_back(cur.rhs());
        cur = cur.lhs();
    }
    out.push_back(cur);
    std::reverse(out.begin(), out.end());
    return out;
}

class Certifier {
public:
    explicit Certifier(const Expr& input)
        : vars_("w", blocked_vars(input)), fns_("q", blocked_fns(input)) {}

    std::pair<PF, Canon> canon_cert(const Expr& e);

private:
    static std::set<std::string> blocked_vars(const Expr& input) {
        std::set<std::string> out = input.free_vars();
        out.insert({"x", "y", "z", "x0", "x1"});
        for (const auto& [name, arity] : input.fn_arities())
            for (int i = 0; i < arity; ++i) out.insert(fn_param(i));
        return out;
    }
    static std::set<std::string> blocked_fns(const Expr& input) {
        std::set<std::string> out = {"f", "g0", "g1"};
        for (const auto& [name, arity] : input.fn_arities()) out.insert(name);
        return out;
    }

    FnVar fresh_fn(int arity) { return FnVar(fns_.fresh(), arity); }

    // -- combinators ------------------------------------------------------

    PF axiom(AxiomId id) {
        Equation eq = axiom_equation(id);
        return {Proof::axiom(std::move(id)), eq.lhs, eq.rhs};
    }
    PF refl(Expr e) { return {Proof::refl(e), e, e}; }
    PF sym(PF a) { return {Proof::sym(a.p), a.r, a.l}; }
    PF trans(PF a, PF b) {
        if (!(a.r == b.l))
            throw std::logic_error("certificate construction: trans mismatch between '" +
                                   a.r.str() + "' and '" + b.l.str() + "'");
        return {Proof::trans(a.p, b.p), a.l, b.r};
    }
    PF cong_sum(PF a, PF b) {
        return {Proof::cong_sum(a.p, b.p), Expr::sum(a.l, b.l), Expr::sum(a.r, b.r)};
    }
    PF cong_prod(PF a, PF b) {
        return {Proof::cong_prod(a.p, b.p), Expr::product(a.l, b.l), Expr::product(a.r, b.r)};
    }
    PF cong_app(const FnVar& f, std::vector<PF> kids) {
        std::vector<Proof> ps;
        std::vector<Expr> ls, rs;
        for (auto& k : kids) {
            ps.push_back(k.p);
            ls.push_back(k.l);
            rs.push_back(k.r);
        }
        return {Proof::cong_app(f, std::move(ps)), Expr::apply(f, std::move(ls)),
                Expr::apply(f, std::move(rs))};
    }
    PF cong_pdiff(const VarName& x, PF body, PF at) {
        return {Proof::cong_pdiff(x, body.p, at.p), Expr::pdiff(x, body.l, at.l),
                Expr::pdiff(x, body.r, at.r)};
    }
    PF subst_var(PF a, const std::map<VarName, Expr>& m) {
        std::vector<std::pair<VarName, Expr>> bs(m.begin(), m.end());
        return {Proof::subst_var(a.p, std::move(bs)), subst_vars(a.l, m), subst_vars(a.r, m)};
    }
    PF subst_fn(PF a, const std::vector<std::pair<FnVar, Abstract>>& bs) {
        std::map<std::string, Abstract> m;
        for (const auto& [f, abs] : bs) m.emplace(f.name, abs);
        return {Proof::subst_fn(a.p, bs), subst_fnvars(a.l, m), subst_fnvars(a.r, m)};
    }

    // -- small ring lemmas -------------------------------------------------

    /// 0*t = 0
    PF zero_mul(const Expr& t) {
        Expr u = Expr::product(zero_expr(), t);
        PF p1 = sym(subst_var(axiom(RingAxiom::AddZero), {{"x", u}}));
        PF p2 = sym(subst_var(axiom(RingAxiom::AddInverse), {{"x", u}}));
        PF p3 = cong_sum(refl(u), p2);
        PF p4 = sym(subst_var(axiom(RingAxiom::AddAssoc), {{"x", u}, {"y", u}, {"z", neg_expr(u)}}));
        PF p5 = sym(subst_var(axiom(RingAxiom::DistribRight),
                              {{"x", zero_expr()}, {"y", zero_expr()}, {"z", t}}));
        PF p6 = axiom(ConstTable{'+', Rat(0), Rat(0), Rat(0)});
        PF p7 = cong_prod(p6, refl(t));
        PF p8 = trans(p5, p7);
        PF p9 = cong_sum(p8, refl(neg_expr(u)));
        PF p10 = subst_var(axiom(RingAxiom::AddInverse), {{"x", u}});
        return trans(p1, trans(p3, trans(p4, trans(p9, p10))));
    }

    /// t*0 = 0
    PF mul_zero(const Expr& t) {
        PF mc = subst_var(axiom(RingAxiom::MulComm), {{"x", t}, {"y", zero_expr()}});
        return trans(mc, zero_mul(t));
    }

    /// 1*t = t
    PF one_mul(const Expr& t) {
        PF mc = subst_var(axiom(RingAxiom::MulComm), {{"x", one_expr()}, {"y", t}});
        return trans(mc, subst_var(axiom(RingAxiom::MulOne), {{"x", t}}));
    }

    /// head + (t1 + ... left-folded) = left fold of head::ts
    PF reassoc(const Expr& head, const std::vector<Expr>& ts) {
        assert(!ts.empty());
        if (ts.size() == 1) return refl(Expr::sum(head, ts[0]));
        std::vector<Expr> front(ts.begin(), ts.end() - 1);
        Expr lf_front = front[0];
        for (size_t i = 1; i < front.size(); ++i) lf_front = Expr::sum(lf_front, front[i]);
        const Expr& last = ts.back();
        PF p1 = sym(subst_var(axiom(RingAxiom::AddAssoc), {{"x", head}, {"y", lf_front}, {"z", last}}));
        PF p2 = cong_sum(reassoc(head, front), refl(last));
        return trans(p1, p2);
    }

    // -- derivative lemmas --------------------------------------------------

    /// PDiff(x. x, x) = 1, over the axioms' variable x.
    PF dxx() {
        PF w = cong_pdiff("x", sym(axiom(RingAxiom::AddZero)), refl(Expr::variable("x")));
        return trans(w, subst_var(axiom(DiffAxiom::DiffAdd), {{"y", zero_expr()}}));
    }

    /// PDiff(x. 0, x) = 0, over the axioms' variable x.
    PF d_const_zero() {
        PF m0 = subst_var(axiom(DiffAxiom::DiffMul), {{"y", zero_expr()}});
        PF w = cong_pdiff("x", sym(zero_mul(Expr::variable("x"))), refl(Expr::variable("x")));
        return trans(w, m0);
    }

    /// PDiff(x. e, at) = 0 whenever x does not occur free in e.
    PF d_closed(const Expr& e, const Expr& at) {
        auto [lemma, h] = facts4_0();
        VarName xi = vars_.fresh();
        PF renamed = subst_var(lemma, {{"x", Expr::variable(xi)}});
        PF inst = subst_fn(renamed, {{h, Abstract({}, e)}});
        return subst_var(inst, {{xi, at}});
    }

    /// PDiff(x. x, at) = 1.
    PF d_var_same(const Expr& at) { return subst_var(dxx(), {{"x", at}}); }

    /// Chain rule, nullary case: PDiff(x. H(), x) = 0 over a fresh H.
    std::pair<PF, FnVar> facts4_0() {
        FnVar h = fresh_fn(0);
        VarName pa = vars_.fresh(), pb = vars_.fresh(), pz = vars_.fresh();
        PF s1 = subst_fn(axiom(DiffAxiom::Chain2),
                         {{FnVar("f", 2), Abstract({pa, pb}, Expr::apply(h, {}))},
                          {FnVar("g0", 1), Abstract({pz}, zero_expr())},
                          {FnVar("g1", 1), Abstract({pz}, zero_expr())}});
        Expr a = s1.r.lhs().lhs();  // PDiff(_. H(), 0)
        PF q0 = d_const_zero();
        PF t1 = trans(cong_prod(refl(a), q0), mul_zero(a));
        PF s2 = cong_sum(t1, t1);
        PF s3 = trans(s2, axiom(ConstTable{'+', Rat(0), Rat(0), Rat(0)}));
        return {trans(s1, s3), h};
    }

    /// n-ary chain rule over fresh function variables, at the axioms' x:
    ///   PDiff(x. F(G0(x),...), x)
    ///     = sum_i PDiff(u. F(G0(x),..,u,..), G_i(x)) * PDiff(x. G_i(x), x)
    struct ChainRule {
        PF pf;
        FnVar f;
        std::vector<FnVar> gs;
    };

    ChainRule facts4(int n) {
        assert(n >= 1);
        if (n == 1) {
            FnVar h = fresh_fn(1), g0 = fresh_fn(1);
            VarName pa = vars_.fresh(), pb = vars_.fresh(), pz = vars_.fresh();
            PF s = subst_fn(axiom(DiffAxiom::Chain2),
                            {{FnVar("f", 2), Abstract({pa, pb}, Expr::apply(h, {Expr::variable(pa)}))},
                             {FnVar("g0", 1), Abstract({pz}, Expr::apply(g0, {Expr::variable(pz)}))},
                             {FnVar("g1", 1), Abstract({pz}, zero_expr())}});
            Expr t0 = s.r.lhs();
            Expr b = s.r.rhs().lhs();
            PF t2 = trans(cong_prod(refl(b), d_const_zero()), mul_zero(b));
            PF s2 = cong_sum(refl(t0), t2);
            PF az = subst_var(axiom(RingAxiom::AddZero), {{"x", t0}});
            return {trans(s, trans(s2, az)), h, {g0}};
        }
        if (n == 2) {
            FnVar f = fresh_fn(2), g0 = fresh_fn(1), g1 = fresh_fn(1);
            VarName pa = vars_.fresh(), pb = vars_.fresh(), pz = vars_.fresh();
            PF s = subst_fn(
                axiom(DiffAxiom::Chain2),
                {{FnVar("f", 2),
                  Abstract({pa, pb}, Expr::apply(f, {Expr::variable(pa), Expr::variable(pb)}))},
                 {FnVar("g0", 1), Abstract({pz}, Expr::apply(g0, {Expr::variable(pz)}))},
                 {FnVar("g1", 1), Abstract({pz}, Expr::apply(g1, {Expr::variable(pz)}))}});
            return {s, f, {g0, g1}};
        }

        // Induction step, following the lemma's proof: diagonalise the binary
        // chain rule, then expand the two slots with the unary rule and the
        // induction hypothesis.
        FnVar h = fresh_fn(n);
        std::vector<FnVar> gs;
        for (int i = 0; i < n; ++i) gs.push_back(fresh_fn(1));

        VarName pz = vars_.fresh();
        PF a = subst_fn(axiom(DiffAxiom::Chain2),
                        {{FnVar("g0", 1), Abstract({pz}, Expr::variable(pz))},
                         {FnVar("g1", 1), Abstract({pz}, Expr::variable(pz))}});
        Expr p1 = a.r.lhs().lhs();
        Expr p2 = a.r.rhs().lhs();
        PF dx = dxx();
        PF u1 = trans(cong_prod(refl(p1), dx), subst_var(axiom(RingAxiom::MulOne), {{"x", p1}}));
        PF u2 = trans(cong_prod(refl(p2), dx), subst_var(axiom(RingAxiom::MulOne), {{"x", p2}}));
        PF a2 = trans(a, cong_sum(u1, u2));
        // a2: PDiff(x. f(x,x), x) = PDiff(u. f(u,x), x) + PDiff(u. f(x,u), x)

        VarName pp = vars_.fresh(), pq = vars_.fresh();
        std::vector<Expr> diag_args;
        diag_args.push_back(Expr::apply(gs[0], {Expr::variable(pp)}));
        for (int i = 1; i < n; ++i) diag_args.push_back(Expr::apply(gs[i], {Expr::variable(pq)}));
        PF b = subst_fn(a2, {{FnVar("f", 2), Abstract({pp, pq}, Expr::apply(h, diag_args))}});

        // First slot via the unary rule.
        ChainRule un = facts4(1);
        VarName pw = vars_.fresh();
        std::vector<Expr> first_args;
        first_args.push_back(Expr::variable(pw));
        for (int i = 1; i < n; ++i)
            first_args.push_back(Expr::apply(gs[i], {Expr::variable("x")}));
        PF c = subst_fn(un.pf,
                        {{un.f, Abstract({pw}, Expr::apply(h, first_args))},
                         {un.gs[0], Abstract({pz}, Expr::apply(gs[0], {Expr::variable(pz)}))}});

        // Remaining slots via the induction hypothesis.
        ChainRule ih = facts4(n - 1);
        std::vector<VarName> ws;
        for (int i = 1; i < n; ++i) ws.push_back(vars_.fresh());
        std::vector<Expr> rest_args;
        rest_args.push_back(Expr::apply(gs[0], {Expr::variable("x")}));
        for (const auto& w : ws) rest_args.push_back(Expr::variable(w));
        std::vector<std::pair<FnVar, Abstract>> ih_bind;
        ih_bind.emplace_back(ih.f, Abstract(ws, Expr::apply(h, rest_args)));
        for (int j = 1; j < n; ++j)
            ih_bind.emplace_back(ih.gs[static_cast<size_t>(j - 1)],
                                 Abstract({pz}, Expr::apply(gs[j], {Expr::variable(pz)})));
        PF d = subst_fn(ih.pf, ih_bind);

        PF e1 = trans(b, cong_sum(c, d));
        std::vector<Expr> tail = unfold_left_sum(d.r);
        PF rs = reassoc(c.r, tail);
        return {trans(e1, rs), h, gs};
    }

    // -- sorting derivative towers with the commutativity axiom -------------

    /// tower(seq) = tower(seq with positions j, j+1 swapped), with the
    /// tower's parameters free.
    PF swap_tower(const FnVar& f, const std::vector<int>& seq, size_t j) {
        int a = seq[j], b = seq[j + 1];
        std::vector<int> rest(seq.begin() + static_cast<long>(j) + 2, seq.end());
        Expr t = tower_params(f, rest);
        VarName pu = vars_.fresh(), pv = vars_.fresh();
        Expr body = subst_vars(t, {{fn_param(b), Expr::variable(pu)}, {fn_param(a), Expr::variable(pv)}});
        PF s = subst_fn(axiom(DiffAxiom::Commute), {{FnVar("f", 2), Abstract({pu, pv}, body)}});
        PF core = subst_var(s, {{"x", Expr::variable(fn_param(b))}, {"y", Expr::variable(fn_param(a))}});
        PF pf = core;
        for (size_t layer = j; layer-- > 0;) {
            VarName xs = fn_param(seq[layer]);
            pf = cong_pdiff(xs, pf, refl(Expr::variable(xs)));
        }
        return pf;
    }

    /// tower(seq) = tower(sorted seq), over free parameters.
    PF sort_tower(const FnVar& f, std::vector<int> seq) {
        PF pf = refl(tower_params(f, seq));
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t j = 0; j + 1 < seq.size(); ++j) {
                if (seq[j] > seq[j + 1]) {
                    PF sw = swap_tower(f, seq, j);
                    std::swap(seq[j], seq[j + 1]);
                    pf = trans(pf, sw);
                    changed = true;
                }
            }
        }
        return pf;
    }

    // -- derivative certificates --------------------------------------------

    /// PDiff(x. to_expr(c), to_expr(at)) = to_expr(deriv_at(c, x, at)).
    PF deriv_cert(const Canon& c, const VarName& x, const Canon& at) {
        Expr ate = to_expr(at);
        if (!c.free_vars().count(x)) return d_closed(to_expr(c), ate);
        switch (c.tag()) {
            case Canon::Tag::Var:
                return d_var_same(ate);
            case Canon::Tag::Sum: {
                PF recA = deriv_cert(c.lhs(), x, at);
                PF recB = deriv_cert(c.rhs(), x, at);
                BinLemma f2 = facts2();
                PF pf = rename_to(f2.pf, x);
                PF inst = subst_fn(pf, {{f2.g0, Abstract({x}, to_expr(c.lhs()))},
                                        {f2.g1, Abstract({x}, to_expr(c.rhs()))}});
                PF ev = subst_var(inst, {{x, ate}});
                Canon da = deriv_at(c.lhs(), x, at), db = deriv_at(c.rhs(), x, at);
                return trans(ev, fold_sum_step(cong_sum(recA, recB), da, db));
            }
            case Canon::Tag::Prod: {
                PF recA = deriv_cert(c.lhs(), x, at);
                PF recB = deriv_cert(c.rhs(), x, at);
                BinLemma f3 = facts3();
                PF pf = rename_to(f3.pf, x);
                PF inst = subst_fn(pf, {{f3.g0, Abstract({x}, to_expr(c.lhs()))},
                                        {f3.g1, Abstract({x}, to_expr(c.rhs()))}});
                PF ev = subst_var(inst, {{x, ate}});
                Canon da = deriv_at(c.lhs(), x, at), db = deriv_at(c.rhs(), x, at);
                Canon bs0 = canon_subst(c.rhs(), x, at), as0 = canon_subst(c.lhs(), x, at);
                Canon bs = fold_constants(bs0), as = fold_constants(as0);
                PF left = fold_prod_step(cong_prod(spine_fold_cert(bs0), recA), bs, da);
                PF right = fold_prod_step(cong_prod(spine_fold_cert(as0), recB), as, db);
                PF rhs = fold_sum_step(cong_sum(left, right), folded_prod(bs, da), folded_prod(as, db));
                return trans(ev, rhs);
            }
            case Canon::Tag::FApp: {
                int n = c.fn().arity;
                ChainRule cr = facts4(n);
                PF pf = rename_to(cr.pf, x);
                std::vector<std::pair<FnVar, Abstract>> gbind;
                for (int i = 0; i < n; ++i)
                    gbind.emplace_back(cr.gs[static_cast<size_t>(i)],
                                       Abstract({x}, to_expr(c.args()[static_cast<size_t>(i)])));
                PF s1 = subst_fn(pf, gbind);
                PF s2 = subst_fn(s1, {{cr.f, tower_abstract(c.fn(), c.deriv_index())}});
                PF s3 = subst_var(s2, {{x, ate}});

                std::vector<Canon> sub_args;
                for (const auto& argc : c.args()) sub_args.push_back(canon_subst(argc, x, at));
                std::vector<Expr> sub_arg_exprs;
                for (const auto& sc : sub_args) sub_arg_exprs.push_back(to_expr(sc));

                std::vector<PF> summands;
                for (int i = 0; i < n; ++i) {
                    std::vector<int> seq = c.deriv_index().positions();
                    seq.insert(seq.begin(), i);
                    PF sorted = sort_tower(c.fn(), seq);
                    std::map<VarName, Expr> inst;
                    for (int k = 0; k < n; ++k)
                        inst.emplace(fn_param(k), sub_arg_exprs[static_cast<size_t>(k)]);
                    PF first = subst_var(sorted, inst);
                    PF rec = deriv_cert(c.args()[static_cast<size_t>(i)], x, at);
                    summands.push_back(cong_prod(first, rec));
                }
                PF fold = summands[0];
                for (size_t i = 1; i < summands.size(); ++i) fold = cong_sum(fold, summands[i]);
                return trans(s3, fold);
            }
            default:
                throw std::logic_error("deriv_cert: constant with free variables");
        }
    }

    Abstract tower_abstract(const FnVar& f, const DerivIndex& m) {
        std::vector<VarName> params;
        for (int i = 0; i < f.arity; ++i) params.push_back(fn_param(i));
        return Abstract(std::move(params), tower_params(f, m.positions()));
    }

    /// Lemmas are stated over the axioms' variable x; this moves a whole
    /// statement to the differentiation variable actually in use.
    PF rename_to(PF pf, const VarName& x) {
        if (x == "x") return pf;
        return subst_var(std::move(pf), {{"x", Expr::variable(x)}});
    }

    // Canonicalization folds constant sums and products; the matching
    // certificate step is a constant-table instance.
    PF fold_sum_step(PF pf, const Canon& a, const Canon& b) {
        if (a.tag() != Canon::Tag::Const || b.tag() != Canon::Tag::Const) return pf;
        Rat x = a.const_value(), y = b.const_value();
        return trans(std::move(pf), axiom(ConstTable{'+', x, y, x + y}));
    }
    PF fold_prod_step(PF pf, const Canon& a, const Canon& b) {
        if (a.tag() != Canon::Tag::Const || b.tag() != Canon::Tag::Const) return pf;
        Rat x = a.const_value(), y = b.const_value();
        return trans(std::move(pf), axiom(ConstTable{'*', x, y, x * y}));
    }
    static Canon folded_sum(const Canon& a, const Canon& b) {
        if (a.tag() == Canon::Tag::Const && b.tag() == Canon::Tag::Const)
            return Canon::constant(a.const_value() + b.const_value());
        return Canon::sum(a, b);
    }
    static Canon folded_prod(const Canon& a, const Canon& b) {
        if (a.tag() == Canon::Tag::Const && b.tag() == Canon::Tag::Const)
            return Canon::constant(a.const_value() * b.const_value());
        return Canon::product(a, b);
    }

    /// to_expr(c) = to_expr(fold_constants(c)), by constant-table steps along
    /// the sum/product spine.
    PF spine_fold_cert(const Canon& c) {
        switch (c.tag()) {
            case Canon::Tag::Sum: {
                PF pa = spine_fold_cert(c.lhs());
                PF pb = spine_fold_cert(c.rhs());
                return fold_sum_step(cong_sum(pa, pb), fold_constants(c.lhs()),
                                     fold_constants(c.rhs()));
            }
            case Canon::Tag::Prod: {
                PF pa = spine_fold_cert(c.lhs());
                PF pb = spine_fold_cert(c.rhs());
                return fold_prod_step(cong_prod(pa, pb), fold_constants(c.lhs()),
                                      fold_constants(c.rhs()));
            }
            default: return refl(to_expr(c));
        }
    }

    struct BinLemma {
        PF pf;
        FnVar g0, g1;
    };

    /// PDiff(x. G0(x) + G1(x), x) = PDiff(x. G0(x), x) + PDiff(x. G1(x), x)
    BinLemma facts2() {
        FnVar g0 = fresh_fn(1), g1 = fresh_fn(1);
        VarName pa = vars_.fresh(), pb = vars_.fresh(), pz = vars_.fresh();
        Expr vx = Expr::variable("x");
        Expr g0x = Expr::apply(g0, {vx});
        Expr g1x = Expr::apply(g1, {vx});
        PF c2 = subst_fn(axiom(DiffAxiom::Chain2),
                         {{FnVar("f", 2), Abstract({pa, pb}, Expr::sum(Expr::variable(pa), Expr::variable(pb)))},
                          {FnVar("g0", 1), Abstract({pz}, Expr::apply(g0, {Expr::variable(pz)}))},
                          {FnVar("g1", 1), Abstract({pz}, Expr::apply(g1, {Expr::variable(pz)}))}});
        PF f1 = subst_var(axiom(DiffAxiom::DiffAdd), {{"x", g0x}, {"y", g1x}});
        PF cc = subst_var(axiom(RingAxiom::AddComm), {{"x", Expr::variable("y")}, {"y", vx}});
        PF cp = cong_pdiff("x", cc, refl(vx));
        PF q2 = trans(cp, axiom(DiffAxiom::DiffAdd));
        PF f2 = subst_var(q2, {{"y", g0x}, {"x", g1x}});
        Expr d0 = Expr::pdiff_at_var("x", g0x);
        Expr d1 = Expr::pdiff_at_var("x", g1x);
        PF t1 = trans(cong_prod(f1, refl(d0)), one_mul(d0));
        PF t2 = trans(cong_prod(f2, refl(d1)), one_mul(d1));
        return {trans(c2, cong_sum(t1, t2)), g0, g1};
    }

    /// PDiff(x. G0(x)*G1(x), x) = G1(x)*PDiff(x. G0(x), x) + G0(x)*PDiff(x. G1(x), x)
    BinLemma facts3() {
        FnVar g0 = fresh_fn(1), g1 = fresh_fn(1);
        VarName pa = vars_.fresh(), pb = vars_.fresh(), pz = vars_.fresh();
        Expr vx = Expr::variable("x");
        Expr g0x = Expr::apply(g0, {vx});
        Expr g1x = Expr::apply(g1, {vx});
        PF c2 = subst_fn(
            axiom(DiffAxiom::Chain2),
            {{FnVar("f", 2), Abstract({pa, pb}, Expr::product(Expr::variable(pa), Expr::variable(pb)))},
             {FnVar("g0", 1), Abstract({pz}, Expr::apply(g0, {Expr::variable(pz)}))},
             {FnVar("g1", 1), Abstract({pz}, Expr::apply(g1, {Expr::variable(pz)}))}});
        PF cp = cong_pdiff("x", axiom(RingAxiom::MulComm), refl(vx));
        PF q1 = trans(cp, axiom(DiffAxiom::DiffMul));
        PF f1 = subst_var(q1, {{"x", g0x}, {"y", g1x}});
        PF f2 = subst_var(axiom(DiffAxiom::DiffMul), {{"y", g0x}, {"x", g1x}});
        Expr d0 = Expr::pdiff_at_var("x", g0x);
        Expr d1 = Expr::pdiff_at_var("x", g1x);
        PF t1 = cong_prod(f1, refl(d0));
        PF t2 = cong_prod(f2, refl(d1));
        return {trans(c2, cong_sum(t1, t2)), g0, g1};
    }

    NamePool vars_;
    NamePool fns_;
};

std::pair<PF, Canon> Certifier::canon_cert(const Expr& e) {
    switch (e.tag()) {
        case Expr::Tag::Const:
            return {refl(e), Canon::constant(e.const_value())};
        case Expr::Tag::Var:
            return {refl(e), Canon::variable(e.var_name())};
        case Expr::Tag::Sum: {
            auto [pa, ca] = canon_cert(e.lhs());
            auto [pb, cb] = canon_cert(e.rhs());
            return {fold_sum_step(cong_sum(pa, pb), ca, cb), folded_sum(ca, cb)};
        }
        case Expr::Tag::Prod: {
            auto [pa, ca] = canon_cert(e.lhs());
            auto [pb, cb] = canon_cert(e.rhs());
            return {fold_prod_step(cong_prod(pa, pb), ca, cb), folded_prod(ca, cb)};
        }
        case Expr::Tag::App: {
            std::vector<PF> kid_pfs;
            std::vector<Canon> kid_canons;
            for (const auto& a : e.args()) {
                auto [pf, c] = canon_cert(a);
                kid_pfs.push_back(pf);
                kid_canons.push_back(c);
            }
            return {cong_app(e.fn(), std::move(kid_pfs)),
                    Canon::fapp(e.fn(), DerivIndex({}, e.fn().arity), std::move(kid_canons))};
        }
        case Expr::Tag::Diff: {
            VarName x = vars_.fresh();
            auto [p0, c0] = canon_cert(e.diff_open(x));
            auto [p1, c1] = canon_cert(e.diff_at());
            PF step1 = cong_pdiff(x, p0, p1);
            PF step2 = deriv_cert(c0, x, c1);
            return {trans(step1, step2), deriv_at(c0, x, c1)};
        }
        default:
            throw std::logic_error("canon_cert: malformed expression");
    }
}

}  // namespace

Proof certify_canonicalize(const Expr& e) {
    Certifier certifier(e);
    auto [pf, cf] = certifier.canon_cert(e);
    if (!(pf.l == e) || !(pf.r == to_expr(cf)))
        throw std::logic_error("certify_canonicalize: conclusion does not match the input");
    return pf.p;
}

}  // namespace pdiff
