#include "pdiff/semantics.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace pdiff {

VarName fn_param(int i) { return "x" + std::to_string(i); }

Rat VarEnv::get(const VarName& x) const {
    auto it = values_.find(x);
    return it == values_.end() ? Rat(0) : it->second;
}

bool VarEnv::is_natural() const {
    return std::all_of(values_.begin(), values_.end(),
                       [](const auto& kv) { return kv.second.is_natural(); });
}

void FnEnv::store(const FnVar& f, Poly p) {
    auto it = entries_.find(f.name);
    if (it != entries_.end() && it->second.first != f.arity)
        throw ArityError("function variable '" + f.name + "' bound at arities " +
                         std::to_string(it->second.first) + " and " + std::to_string(f.arity));
    entries_[f.name] = {f.arity, std::move(p)};
}

void FnEnv::set(const FnVar& f, Poly p) {
    for (const auto& v : p.variables()) {
        bool ok = false;
        for (int i = 0; i < f.arity; ++i)
            if (v == fn_param(i)) { ok = true; break; }
        if (!ok)
            throw std::invalid_argument("environment entry for " + f.str() +
                                        " uses variable '" + v + "' outside x0..x" +
                                        std::to_string(f.arity - 1));
    }
    store(f, std::move(p));
}

void FnEnv::set_symbolic(const FnVar& f, Poly p) { store(f, std::move(p)); }

const Poly* FnEnv::find(const FnVar& f) const {
    auto it = entries_.find(f.name);
    if (it == entries_.end()) return nullptr;
    if (it->second.first != f.arity)
        throw ArityError("environment binds '" + f.name + "' at arity " +
                         std::to_string(it->second.first) + ", used at " + std::to_string(f.arity));
    return &it->second.second;
}

Poly FnEnv::get_or_zero(const FnVar& f) const {
    const Poly* p = find(f);
    return p ? *p : Poly();
}

bool FnEnv::is_natural() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const auto& kv) { return kv.second.second.is_natural(); });
}

namespace {

Expr open_diff(const Expr& e, VarName& x) {
    NamePool pool("u", e.free_vars());
    x = pool.fresh();
    return e.diff_open(x);
}

Poly eval_sym_rec(const Expr& e, const FnEnv& fenv, bool default_zero) {
    switch (e.tag()) {
        case Expr::Tag::Const: return Poly::constant(e.const_value());
        case Expr::Tag::Var: return Poly::variable(e.var_name());
        case Expr::Tag::Sum:
            return eval_sym_rec(e.lhs(), fenv, default_zero) + eval_sym_rec(e.rhs(), fenv, default_zero);
        case Expr::Tag::Prod:
            return eval_sym_rec(e.lhs(), fenv, default_zero) * eval_sym_rec(e.rhs(), fenv, default_zero);
        case Expr::Tag::App: {
            const Poly* body = fenv.find(e.fn());
            Poly fn_poly;
            if (body) {
                fn_poly = *body;
            } else if (!default_zero) {
                throw UnboundFunctionError("no environment entry for " + e.fn().str());
            }
            std::map<VarName, Poly> inst;
            for (int i = 0; i < e.fn().arity; ++i)
                inst.emplace(fn_param(i), eval_sym_rec(e.args()[i], fenv, default_zero));
            return fn_poly.subst(inst);
        }
        case Expr::Tag::Diff: {
            VarName x;
            Expr body = open_diff(e, x);
            Poly p = eval_sym_rec(body, fenv, default_zero).derive(x);
            return p.subst({{x, eval_sym_rec(e.diff_at(), fenv, default_zero)}});
        }
        default:
            throw std::logic_error("eval_sym: malformed expression");
    }
}

}  // namespace

Poly eval_sym(const Expr& e, const FnEnv& fenv) {
    return eval_sym_rec(e, fenv, /*default_zero=*/false);
}

Rat eval(const Expr& e, const FnEnv& fenv, const VarEnv& venv) {
    switch (e.tag()) {
        case Expr::Tag::Const: return e.const_value();
        case Expr::Tag::Var: return venv.get(e.var_name());
        case Expr::Tag::Sum: return eval(e.lhs(), fenv, venv) + eval(e.rhs(), fenv, venv);
        case Expr::Tag::Prod: return eval(e.lhs(), fenv, venv) * eval(e.rhs(), fenv, venv);
        case Expr::Tag::App: {
            Poly body = fenv.get_or_zero(e.fn());
            std::map<VarName, Rat> point;
            for (int i = 0; i < e.fn().arity; ++i)
                point.emplace(fn_param(i), eval(e.args()[i], fenv, venv));
            return body.eval(point);
        }
        case Expr::Tag::Diff: {
            // D(r -> [[body]] rho[r/x]) at [[at]]: take the body symbolically
            // in x, derive, then evaluate.
            VarName x;
            Expr body = open_diff(e, x);
            Poly p = eval_sym_rec(body, fenv, /*default_zero=*/true).derive(x);
            std::map<VarName, Rat> point;
            for (const auto& v : p.variables()) point.emplace(v, venv.get(v));
            point[x] = eval(e.diff_at(), fenv, venv);
            return p.eval(point);
        }
        default:
            throw std::logic_error("eval: malformed expression");
    }
}

FnEnv generic_env(const Expr& e, int degree) {
    if (degree < 0) throw std::invalid_argument("generic_env: negative degree");
    std::set<std::string> blocked = e.free_vars();
    for (const auto& f : e.fn_vars())
        for (int i = 0; i < f.arity; ++i) blocked.insert(fn_param(i));
    NamePool coeffs("a", std::move(blocked));

    FnEnv env;
    for (const auto& f : e.fn_vars()) {
        // All monomials over x0..x_{n-1} of total degree <= degree, in a
        // fixed order (degree-major, then lexicographic positions).
        std::vector<ExpVec> monomials;
        std::vector<int> exps(static_cast<size_t>(f.arity), 0);
        std::function<void(int, int)> enumerate = [&](int pos, int left) {
            if (pos == f.arity) {
                ExpVec m;
                for (int i = 0; i < f.arity; ++i)
                    if (exps[i] > 0) m[fn_param(i)] = exps[i];
                monomials.push_back(std::move(m));
                return;
            }
            for (int k = 0; k <= left; ++k) {
                exps[pos] = k;
                enumerate(pos + 1, left - k);
            }
            exps[pos] = 0;
        };
        enumerate(0, degree);
        Poly p;
        for (const auto& m : monomials) {
            Poly mono = Poly::variable(coeffs.fresh());
            for (const auto& [v, k] : m)
                for (int i = 0; i < k; ++i) mono = mono * Poly::variable(v);
            p = p + mono;
        }
        env.set_symbolic(f, p);
    }
    return env;
}

std::pair<FnEnv, VarEnv> parse_env(std::string_view text) {
    FnEnv fenv;
    VarEnv venv;
    size_t lineno = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++lineno;
        size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        size_t sep = line.find(":=");
        if (sep == std::string::npos)
            throw ParseError("environment line " + std::to_string(lineno) + " has no ':='", 0);
        std::string lhs = line.substr(0, sep);
        std::string rhs = line.substr(sep + 2);
        lhs.erase(std::remove_if(lhs.begin(), lhs.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); }), lhs.end());
        size_t slash = lhs.find('/');
        try {
            if (slash != std::string::npos) {
                std::string name = lhs.substr(0, slash);
                int arity = std::stoi(lhs.substr(slash + 1));
                fenv.set(FnVar(name, arity), Poly::parse(rhs));
            } else {
                Poly p = Poly::parse(rhs);
                if (!p.is_constant())
                    throw ParseError("variable binding must be a rational constant", 0);
                venv.set(lhs, p.constant_value());
            }
        } catch (const std::exception& ex) {
            throw ParseError("environment line " + std::to_string(lineno) + ": " + ex.what(), 0);
        }
    }
    return {std::move(fenv), std::move(venv)};
}

std::string print_env(const FnEnv& fenv, const VarEnv& venv) {
    std::string out;
    for (const auto& [name, entry] : fenv.entries()) {
        out += name + "/" + std::to_string(entry.first) + " := " + entry.second.str() + "\n";
    }
    for (const auto& [x, r] : venv.entries()) {
        out += x + " := " + r.str() + "\n";
    }
    return out;
}

}  // namespace pdiff
