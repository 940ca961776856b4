#include "pdiff/poly.hpp"

#include <algorithm>

namespace pdiff {

void Poly::add_term(ExpVec m, Rat c) {
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(std::move(m), std::move(c));
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Poly Poly::constant(Rat r) {
    Poly p;
    p.add_term({}, std::move(r));
    return p;
}

Poly Poly::variable(const VarName& x) {
    if (!is_identifier(x)) throw std::invalid_argument("bad variable name: '" + x + "'");
    Poly p;
    p.add_term({{x, 1}}, Rat(1));
    return p;
}

Poly Poly::operator+(const Poly& o) const {
    Poly out = *this;
    for (const auto& [m, c] : o.terms_) out.add_term(m, c);
    return out;
}

Poly Poly::operator-() const {
    Poly out;
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
    return out;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
    Poly out;
    for (const auto& [m1, c1] : terms_) {
        for (const auto& [m2, c2] : o.terms_) {
            ExpVec m = m1;
            for (const auto& [v, k] : m2) m[v] += k;
            out.add_term(std::move(m), c1 * c2);
        }
    }
    return out;
}

bool Poly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Rat Poly::constant_value() const {
    if (terms_.empty()) return Rat(0);
    if (!is_constant()) throw std::logic_error("constant_value on non-constant polynomial");
    return terms_.begin()->second;
}

bool Poly::is_natural() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const auto& t) { return t.second.is_natural(); });
}

int Poly::total_degree() const {
    int deg = -1;
    for (const auto& [m, c] : terms_) {
        int d = 0;
        for (const auto& [v, k] : m) d += k;
        deg = std::max(deg, d);
    }
    return deg;
}

std::set<VarName> Poly::variables() const {
    std::set<VarName> out;
    for (const auto& [m, c] : terms_)
        for (const auto& [v, k] : m) out.insert(v);
    return out;
}

Rat Poly::eval(const std::map<VarName, Rat>& point) const {
    Rat total(0);
    for (const auto& [m, c] : terms_) {
        Rat val = c;
        for (const auto& [v, k] : m) {
            auto it = point.find(v);
            if (it == point.end()) throw MissingVariableError("no value for variable '" + v + "'");
            for (int i = 0; i < k; ++i) val *= it->second;
        }
        total += val;
    }
    return total;
}

Poly Poly::derive(const VarName& x) const {
    Poly out;
    for (const auto& [m, c] : terms_) {
        auto it = m.find(x);
        if (it == m.end()) continue;
        ExpVec dm = m;
        int k = it->second;
        if (k == 1) dm.erase(x); else dm[x] = k - 1;
        out.add_term(std::move(dm), c * Rat(k));
    }
    return out;
}

Poly Poly::derive_seq(const std::vector<VarName>& xs) const {
    Poly p = *this;
    for (const auto& x : xs) p = p.derive(x);
    return p;
}

Poly Poly::subst(const std::map<VarName, Poly>& bindings) const {
    std::map<VarName, std::vector<Poly>> powers;  // powers[v][k] = bindings[v]^k
    auto power_of = [&](const VarName& v, int k) -> const Poly& {
        auto& cache = powers[v];
        if (cache.empty()) cache.push_back(Poly::constant(Rat(1)));
        while (static_cast<int>(cache.size()) <= k) cache.push_back(cache.back() * bindings.at(v));
        return cache[static_cast<size_t>(k)];
    };
    Poly out;
    for (const auto& [m, c] : terms_) {
        // Unbound variables stay a single monomial; bound ones multiply in.
        ExpVec passthrough;
        Poly term;
        term.terms_.emplace(ExpVec{}, c);
        for (const auto& [v, k] : m) {
            if (bindings.count(v))
                term = term * power_of(v, k);
            else
                passthrough.emplace(v, k);
        }
        if (!passthrough.empty()) {
            Poly shifted;
            for (const auto& [tm, tc] : term.terms_) {
                ExpVec merged = tm;
                for (const auto& [v, k] : passthrough) merged[v] += k;
                shifted.terms_.emplace(std::move(merged), tc);
            }
            term = std::move(shifted);
        }
        for (const auto& [tm, tc] : term.terms_) out.add_term(tm, tc);
    }
    return out;
}

Poly Poly::from_expr(const Expr& e) {
    switch (e.tag()) {
        case Expr::Tag::Const: return Poly::constant(e.const_value());
        case Expr::Tag::Var: return Poly::variable(e.var_name());
        case Expr::Tag::Sum: return from_expr(e.lhs()) + from_expr(e.rhs());
        case Expr::Tag::Prod: return from_expr(e.lhs()) * from_expr(e.rhs());
        case Expr::Tag::App:
            throw NotPolynomialError("not a polynomial: contains function application '" + e.str() + "'");
        case Expr::Tag::Diff:
            throw NotPolynomialError("not a polynomial: contains differentiation '" + e.str() + "'");
        default:
            throw std::logic_error("from_expr on malformed expression");
    }
}

namespace {

// Graded-lex: higher total degree first; within a degree, the monomial whose
// exponent vector (variables alphabetically) is lexicographically larger comes first.
bool grlex_before(const ExpVec& a, const ExpVec& b) {
    int da = 0, db = 0;
    for (const auto& [v, k] : a) da += k;
    for (const auto& [v, k] : b) db += k;
    if (da != db) return da > db;
    auto ia = a.begin(), ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (ia->first != ib->first) return ia->first < ib->first;
        if (ia->second != ib->second) return ia->second > ib->second;
        ++ia; ++ib;
    }
    return ib == b.end() && ia != a.end();
}

}  // namespace

std::string Poly::str() const {
    if (terms_.empty()) return "0";
    std::vector<const std::pair<const ExpVec, Rat>*> order;
    for (const auto& t : terms_) order.push_back(&t);
    std::sort(order.begin(), order.end(),
              [](auto* a, auto* b) { return grlex_before(a->first, b->first); });
    std::string out;
    bool first = true;
    for (auto* t : order) {
        if (!first) out += " + ";
        first = false;
        const auto& [m, c] = *t;
        bool coeff_shown = m.empty() || !(c == Rat(1));
        if (coeff_shown) out += c.str();
        bool need_star = coeff_shown;
        for (const auto& [v, k] : m) {
            if (need_star) out += '*';
            need_star = true;
            out += v;
            if (k > 1) {
                out += '^';
                out += std::to_string(k);
            }
        }
    }
    return out;
}

Expr Poly::to_expr() const {
    if (terms_.empty()) return Expr::constant(Rat(0));
    std::vector<const std::pair<const ExpVec, Rat>*> order;
    for (const auto& t : terms_) order.push_back(&t);
    std::sort(order.begin(), order.end(),
              [](auto* a, auto* b) { return grlex_before(a->first, b->first); });
    Expr out;
    for (auto* t : order) {
        const auto& [m, c] = *t;
        Expr mono;
        if (m.empty() || !(c == Rat(1))) mono = Expr::constant(c);
        for (const auto& [v, k] : m) {
            for (int i = 0; i < k; ++i) {
                Expr x = Expr::variable(v);
                mono = mono.valid() ? Expr::product(mono, x) : x;
            }
        }
        out = out.valid() ? Expr::sum(out, mono) : mono;
    }
    return out;
}

Poly Poly::parse(std::string_view text) {
    return from_expr(parse_expr(text, /*allow_caret=*/true));
}

}  // namespace pdiff
