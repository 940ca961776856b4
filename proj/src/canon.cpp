#include "pdiff/canon.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

namespace pdiff {

DerivIndex::DerivIndex(std::vector<int> positions, int arity) : pos_(std::move(positions)) {
    for (int i : pos_)
        if (i < 0 || i >= arity)
            throw std::invalid_argument("derivative position " + std::to_string(i) +
                                        " out of range for arity " + std::to_string(arity));
    std::sort(pos_.begin(), pos_.end());
}

DerivIndex DerivIndex::with(int i, int arity) const {
    std::vector<int> v = pos_;
    v.push_back(i);
    return DerivIndex(std::move(v), arity);
}

std::string DerivIndex::str() const {
    std::string out = "[";
    for (size_t i = 0; i < pos_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(pos_[i]);
    }
    return out + "]";
}

struct Canon::Node {
    Tag tag;
    Rat value;
    VarName var;
    FnVar fn;
    DerivIndex m;
    std::vector<Canon> args;
    Canon a, b;

    std::set<VarName> frees;
    std::map<std::string, int> fns;
    int size = 1;
};

namespace {
void merge_fns_checked(std::map<std::string, int>& into, const std::map<std::string, int>& from) {
    for (const auto& [name, arity] : from) {
        auto [it, fresh] = into.emplace(name, arity);
        if (!fresh && it->second != arity)
            throw ArityError("function variable '" + name + "' used with arities " +
                             std::to_string(it->second) + " and " + std::to_string(arity));
    }
}
}  // namespace

const Canon::Node& Canon::node() const {
    if (!node_) throw std::logic_error("use of empty Canon");
    return *node_;
}

Canon::Tag Canon::tag() const { return node().tag; }
const Rat& Canon::const_value() const { assert(tag() == Tag::Const); return node().value; }
const VarName& Canon::var_name() const { assert(tag() == Tag::Var); return node().var; }
const FnVar& Canon::fn() const { assert(tag() == Tag::FApp); return node().fn; }
const DerivIndex& Canon::deriv_index() const { assert(tag() == Tag::FApp); return node().m; }
const std::vector<Canon>& Canon::args() const { assert(tag() == Tag::FApp); return node().args; }
const Canon& Canon::lhs() const { assert(tag() == Tag::Sum || tag() == Tag::Prod); return node().a; }
const Canon& Canon::rhs() const { assert(tag() == Tag::Sum || tag() == Tag::Prod); return node().b; }
const std::set<VarName>& Canon::free_vars() const { return node().frees; }
const std::map<std::string, int>& Canon::fn_arities() const { return node().fns; }
int Canon::size() const { return node().size; }

Canon Canon::constant(Rat r) {
    auto n = std::make_shared<Node>();
    n->tag = Tag::Const;
    n->value = std::move(r);
    return Canon(std::move(n));
}

Canon Canon::variable(VarName x) {
    if (!is_identifier(x)) throw std::invalid_argument("bad variable name: '" + x + "'");
    auto n = std::make_shared<Node>();
    n->tag = Tag::Var;
    n->frees = {x};
    n->var = std::move(x);
    return Canon(std::move(n));
}

Canon Canon::fapp(FnVar f, DerivIndex m, std::vector<Canon> args) {
    if (static_cast<int>(args.size()) != f.arity)
        throw ArityError("'" + f.name + "' has arity " + std::to_string(f.arity) + " but got " +
                         std::to_string(args.size()) + " arguments");
    for (int i : m.positions())
        if (i >= f.arity)
            throw std::invalid_argument("derivative position out of range for " + f.str());
    auto n = std::make_shared<Node>();
    n->tag = Tag::FApp;
    n->fns[f.name] = f.arity;
    for (const auto& c : args) {
        n->frees.insert(c.free_vars().begin(), c.free_vars().end());
        merge_fns_checked(n->fns, c.fn_arities());
        n->size += c.size();
    }
    n->fn = std::move(f);
    n->m = std::move(m);
    n->args = std::move(args);
    return Canon(std::move(n));
}

Canon Canon::sum(Canon a, Canon b) { return make_pair_node(Tag::Sum, std::move(a), std::move(b)); }
Canon Canon::product(Canon a, Canon b) { return make_pair_node(Tag::Prod, std::move(a), std::move(b)); }

Canon Canon::make_pair_node(Tag tag, Canon a, Canon b) {
    auto n = std::make_shared<Node>();
    n->tag = tag;
    n->frees = a.free_vars();
    n->frees.insert(b.free_vars().begin(), b.free_vars().end());
    n->fns = a.fn_arities();
    merge_fns_checked(n->fns, b.fn_arities());
    n->size = 1 + a.size() + b.size();
    n->a = std::move(a);
    n->b = std::move(b);
    return Canon(std::move(n));
}

int Canon::compare(const Canon& a, const Canon& b) {
    if (a.node_ == b.node_) return 0;
    const Node& x = a.node();
    const Node& y = b.node();
    if (x.tag != y.tag) return static_cast<int>(x.tag) < static_cast<int>(y.tag) ? -1 : 1;
    switch (x.tag) {
        case Tag::Const: {
            auto c = x.value <=> y.value;
            return c < 0 ? -1 : (c > 0 ? 1 : 0);
        }
        case Tag::Var: return x.var < y.var ? -1 : (x.var == y.var ? 0 : 1);
        case Tag::FApp: {
            if (int c = x.fn.name.compare(y.fn.name)) return c < 0 ? -1 : 1;
            if (x.fn.arity != y.fn.arity) return x.fn.arity < y.fn.arity ? -1 : 1;
            if (x.m != y.m) return x.m < y.m ? -1 : 1;
            for (size_t i = 0; i < x.args.size(); ++i)
                if (int c = compare(x.args[i], y.args[i])) return c;
            return 0;
        }
        case Tag::Sum:
        case Tag::Prod: {
            if (int c = compare(x.a, y.a)) return c;
            return compare(x.b, y.b);
        }
    }
    return 0;
}

namespace {

void print_canon(const Canon& c, int prec, std::string& out) {
    switch (c.tag()) {
        case Canon::Tag::Const: out += c.const_value().str(); return;
        case Canon::Tag::Var: out += c.var_name(); return;
        case Canon::Tag::FApp: {
            out += c.fn().name;
            out += '_';
            out += c.deriv_index().str();
            out += '(';
            for (size_t i = 0; i < c.args().size(); ++i) {
                if (i) out += ',';
                print_canon(c.args()[i], 0, out);
            }
            out += ')';
            return;
        }
        case Canon::Tag::Sum: {
            bool parens = prec > 0;
            if (parens) out += '(';
            print_canon(c.lhs(), 0, out);
            out += " + ";
            print_canon(c.rhs(), 1, out);
            if (parens) out += ')';
            return;
        }
        case Canon::Tag::Prod: {
            bool parens = prec > 1;
            if (parens) out += '(';
            print_canon(c.lhs(), 1, out);
            out += '*';
            print_canon(c.rhs(), 2, out);
            if (parens) out += ')';
            return;
        }
    }
}

/// The fixed parameter sequence x0, x1, ... used by derivative towers.
VarName canonical_param(int i) { return "x" + std::to_string(i); }

}  // namespace

std::string Canon::str() const {
    std::string out;
    print_canon(*this, 0, out);
    return out;
}

Expr to_expr(const Canon& c) {
    switch (c.tag()) {
        case Canon::Tag::Const: return Expr::constant(c.const_value());
        case Canon::Tag::Var: return Expr::variable(c.var_name());
        case Canon::Tag::Sum: return Expr::sum(to_expr(c.lhs()), to_expr(c.rhs()));
        case Canon::Tag::Prod: return Expr::product(to_expr(c.lhs()), to_expr(c.rhs()));
        case Canon::Tag::FApp: {
            int n = c.fn().arity;
            std::vector<Expr> params;
            for (int i = 0; i < n; ++i) params.push_back(Expr::variable(canonical_param(i)));
            Expr tower = Expr::apply(c.fn(), params);
            // Rightmost index of m is the innermost derivative.
            const auto& m = c.deriv_index().positions();
            for (auto it = m.rbegin(); it != m.rend(); ++it)
                tower = Expr::pdiff_at_var(canonical_param(*it), tower);
            std::map<VarName, Expr> inst;
            for (int i = 0; i < n; ++i) inst.emplace(canonical_param(i), to_expr(c.args()[i]));
            return subst_vars(tower, inst);
        }
    }
    throw std::logic_error("to_expr: malformed canonical form");
}

std::vector<Canon> immediate_atoms(const Canon& c) {
    std::vector<Canon> out;
    auto push = [&](const Canon& a) {
        for (const auto& b : out)
            if (a == b) return;
        out.push_back(a);
    };
    std::function<void(const Canon&)> rec = [&](const Canon& x) {
        switch (x.tag()) {
            case Canon::Tag::Var:
            case Canon::Tag::FApp: push(x); return;
            case Canon::Tag::Const: return;
            case Canon::Tag::Sum:
            case Canon::Tag::Prod:
                rec(x.lhs());
                rec(x.rhs());
                return;
        }
    };
    rec(c);
    return out;
}

namespace {

// Canonicalization folds sums and products of two constants (a constant
// table step); anything else is left intact.
Canon fold_sum(Canon a, Canon b) {
    if (a.tag() == Canon::Tag::Const && b.tag() == Canon::Tag::Const)
        return Canon::constant(a.const_value() + b.const_value());
    return Canon::sum(std::move(a), std::move(b));
}

Canon fold_prod(Canon a, Canon b) {
    if (a.tag() == Canon::Tag::Const && b.tag() == Canon::Tag::Const)
        return Canon::constant(a.const_value() * b.const_value());
    return Canon::product(std::move(a), std::move(b));
}

}  // namespace

Canon canon_subst(const Canon& c, const VarName& x, const Canon& value) {
    if (!c.free_vars().count(x)) return c;
    switch (c.tag()) {
        case Canon::Tag::Var: return c.var_name() == x ? value : c;
        case Canon::Tag::Sum: return Canon::sum(canon_subst(c.lhs(), x, value), canon_subst(c.rhs(), x, value));
        case Canon::Tag::Prod:
            return Canon::product(canon_subst(c.lhs(), x, value), canon_subst(c.rhs(), x, value));
        case Canon::Tag::FApp: {
            std::vector<Canon> args;
            args.reserve(c.args().size());
            for (const auto& a : c.args()) args.push_back(canon_subst(a, x, value));
            return Canon::fapp(c.fn(), c.deriv_index(), std::move(args));
        }
        default: return c;
    }
}

Canon fold_constants(const Canon& c) {
    switch (c.tag()) {
        case Canon::Tag::Sum: return fold_sum(fold_constants(c.lhs()), fold_constants(c.rhs()));
        case Canon::Tag::Prod: return fold_prod(fold_constants(c.lhs()), fold_constants(c.rhs()));
        default: return c;
    }
}

Canon deriv_at(const Canon& c, const VarName& x, const Canon& at) {
    if (!c.free_vars().count(x)) return Canon::constant(Rat(0));
    switch (c.tag()) {
        case Canon::Tag::Var:
            return Canon::constant(Rat(1));  // c is exactly x here
        case Canon::Tag::Sum:
            return fold_sum(deriv_at(c.lhs(), x, at), deriv_at(c.rhs(), x, at));
        case Canon::Tag::Prod:
            // Leibniz, in the axioms' order: g * df + f * dg.
            return fold_sum(
                fold_prod(fold_constants(canon_subst(c.rhs(), x, at)), deriv_at(c.lhs(), x, at)),
                fold_prod(fold_constants(canon_subst(c.lhs(), x, at)), deriv_at(c.rhs(), x, at)));
        case Canon::Tag::FApp: {
            // Chain rule: sum over argument positions of f_{im}(args[at/x]) * d args_i.
            std::vector<Canon> sub_args;
            for (const auto& a : c.args()) sub_args.push_back(canon_subst(a, x, at));
            Canon total;
            int n = c.fn().arity;
            for (int i = 0; i < n; ++i) {
                Canon term = Canon::product(
                    Canon::fapp(c.fn(), c.deriv_index().with(i, n), sub_args),
                    deriv_at(c.args()[i], x, at));
                total = total.valid() ? Canon::sum(total, term) : term;
            }
            assert(total.valid());  // n = 0 cannot reach here: no free variables
            return total;
        }
        default:
            throw std::logic_error("deriv_at: constant with free variables");
    }
}

Canon canonicalize(const Expr& e) {
    switch (e.tag()) {
        case Expr::Tag::Const: return Canon::constant(e.const_value());
        case Expr::Tag::Var: return Canon::variable(e.var_name());
        case Expr::Tag::Sum: return fold_sum(canonicalize(e.lhs()), canonicalize(e.rhs()));
        case Expr::Tag::Prod: return fold_prod(canonicalize(e.lhs()), canonicalize(e.rhs()));
        case Expr::Tag::App: {
            std::vector<Canon> args;
            for (const auto& a : e.args()) args.push_back(canonicalize(a));
            return Canon::fapp(e.fn(), DerivIndex({}, e.fn().arity), std::move(args));
        }
        case Expr::Tag::Diff: {
            NamePool pool("u", e.free_vars());
            VarName x = pool.fresh();
            Canon body = canonicalize(e.diff_open(x));
            Canon at = canonicalize(e.diff_at());
            return deriv_at(body, x, at);
        }
        default:
            throw std::logic_error("canonicalize: malformed expression");
    }
}

bool atom_equiv(const Canon& a, const Canon& b) {
    if (a.tag() == Canon::Tag::Var && b.tag() == Canon::Tag::Var)
        return a.var_name() == b.var_name();
    if (a.tag() == Canon::Tag::FApp && b.tag() == Canon::Tag::FApp) {
        if (!(a.fn() == b.fn()) || !(a.deriv_index() == b.deriv_index())) return false;
        for (size_t i = 0; i < a.args().size(); ++i)
            if (!canon_equiv(a.args()[i], b.args()[i])) return false;
        return true;
    }
    return false;
}

SepAssign SepAssign::build(const std::vector<Canon>& atoms, const std::string& prefix) {
    SepAssign w;
    std::set<VarName> avoid;
    for (const auto& a : atoms) avoid.insert(a.free_vars().begin(), a.free_vars().end());
    NamePool pool(prefix, std::move(avoid));
    for (const auto& a : atoms) {
        if (!a.is_atom()) throw std::invalid_argument("SepAssign over a non-atomic canonical form");
        bool found = false;
        for (const auto& [rep, v] : w.classes_)
            if (atom_equiv(rep, a)) { found = true; break; }
        if (!found) w.classes_.emplace_back(a, pool.fresh());
    }
    return w;
}

std::optional<VarName> SepAssign::var_of(const Canon& atom) const {
    for (const auto& [rep, v] : classes_)
        if (atom_equiv(rep, atom)) return v;
    return std::nullopt;
}

Poly node_poly(const Canon& c, const SepAssign& w) {
    switch (c.tag()) {
        case Canon::Tag::Const: return Poly::constant(c.const_value());
        case Canon::Tag::Sum: return node_poly(c.lhs(), w) + node_poly(c.rhs(), w);
        case Canon::Tag::Prod: return node_poly(c.lhs(), w) * node_poly(c.rhs(), w);
        case Canon::Tag::Var:
        case Canon::Tag::FApp: {
            auto v = w.var_of(c);
            if (!v) throw std::invalid_argument("atom not covered by separation assignment: " + c.str());
            return Poly::variable(*v);
        }
    }
    throw std::logic_error("node_poly: malformed canonical form");
}

bool canon_equiv(const Canon& a, const Canon& b) {
    std::vector<Canon> atoms = immediate_atoms(a);
    for (const auto& x : immediate_atoms(b)) {
        bool dup = false;
        for (const auto& y : atoms)
            if (x == y) { dup = true; break; }
        if (!dup) atoms.push_back(x);
    }
    SepAssign w = SepAssign::build(atoms);
    return node_poly(a, w) == node_poly(b, w);
}

bool decide(const Expr& e1, const Expr& e2) {
    std::map<std::string, int> fns = e1.fn_arities();
    merge_fns_checked(fns, e2.fn_arities());
    return canon_equiv(canonicalize(e1), canonicalize(e2));
}

std::vector<Canon> saturate(std::vector<Canon> set) {
    auto contains = [](const std::vector<Canon>& v, const Canon& c) {
        for (const auto& x : v)
            if (x == c) return true;
        return false;
    };
    std::vector<Canon> out;
    std::vector<Canon> work = std::move(set);
    while (!work.empty()) {
        Canon c = work.back();
        work.pop_back();
        if (contains(out, c)) continue;
        out.push_back(c);
        for (const auto& a : immediate_atoms(c))
            if (!contains(out, a)) work.push_back(a);
        if (c.tag() == Canon::Tag::FApp)
            for (const auto& arg : c.args())
                if (!contains(out, arg)) work.push_back(arg);
    }
    std::sort(out.begin(), out.end(), [](const Canon& x, const Canon& y) { return Canon::compare(x, y) < 0; });
    return out;
}

}  // namespace pdiff
