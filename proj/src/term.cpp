#include "pdiff/term.hpp"

#include <cassert>
#include <sstream>

namespace pdiff {

bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

FnVar::FnVar(std::string n, int a) : name(std::move(n)), arity(a) {
    if (!is_identifier(name)) throw std::invalid_argument("bad function variable name: '" + name + "'");
    if (arity < 0) throw std::invalid_argument("negative arity for " + name);
}

struct Expr::Node {
    Tag tag;
    Rat value;       // Const
    VarName var;     // Var
    int index = 0;   // Bound
    Expr a, b;       // Sum/Prod: lhs, rhs; Diff: body (raw), at
    FnVar fn;        // App
    std::vector<Expr> args;

    // caches
    std::set<VarName> frees;
    std::map<std::string, int> fns;
    int loose = 0;  // number of dangling de Bruijn levels; 0 = locally closed
    int size = 1;
};

namespace {

void merge_fns(std::map<std::string, int>& into, const std::map<std::string, int>& from) {
    for (const auto& [name, arity] : from) {
        auto [it, fresh] = into.emplace(name, arity);
        if (!fresh && it->second != arity)
            throw ArityError("function variable '" + name + "' used with arities " +
                             std::to_string(it->second) + " and " + std::to_string(arity));
    }
}

}  // namespace

const Expr::Node& Expr::node() const {
    if (!node_) throw std::logic_error("use of empty Expr");
    return *node_;
}

Expr::Tag Expr::tag() const { return node().tag; }
const Rat& Expr::const_value() const { assert(tag() == Tag::Const); return node().value; }
const VarName& Expr::var_name() const { assert(tag() == Tag::Var); return node().var; }
const Expr& Expr::lhs() const { assert(tag() == Tag::Sum || tag() == Tag::Prod); return node().a; }
const Expr& Expr::rhs() const { assert(tag() == Tag::Sum || tag() == Tag::Prod); return node().b; }
const FnVar& Expr::fn() const { assert(tag() == Tag::App); return node().fn; }
const std::vector<Expr>& Expr::args() const { assert(tag() == Tag::App); return node().args; }
const Expr& Expr::diff_at() const { assert(tag() == Tag::Diff); return node().b; }
const std::set<VarName>& Expr::free_vars() const { return node().frees; }
const std::map<std::string, int>& Expr::fn_arities() const { return node().fns; }
int Expr::size() const { return node().size; }

std::set<FnVar> Expr::fn_vars() const {
    std::set<FnVar> out;
    for (const auto& [name, arity] : node().fns) out.insert(FnVar(name, arity));
    return out;
}

Expr Expr::constant(Rat r) {
    auto n = std::make_shared<Node>();
    n->tag = Tag::Const;
    n->value = std::move(r);
    return Expr(std::move(n));
}

Expr Expr::variable(VarName x) {
    if (!is_identifier(x)) throw std::invalid_argument("bad variable name: '" + x + "'");
    auto n = std::make_shared<Node>();
    n->tag = Tag::Var;
    n->frees = {x};
    n->var = std::move(x);
    return Expr(std::move(n));
}

Expr Expr::bound(int index) {
    auto n = std::make_shared<Node>();
    n->tag = Tag::Bound;
    n->index = index;
    n->loose = index + 1;
    return Expr(std::move(n));
}

Expr Expr::sum(Expr a, Expr b) { return make_pair_node(Tag::Sum, std::move(a), std::move(b)); }
Expr Expr::product(Expr a, Expr b) { return make_pair_node(Tag::Prod, std::move(a), std::move(b)); }

Expr Expr::apply(FnVar f, std::vector<Expr> args) {
    if (static_cast<int>(args.size()) != f.arity)
        throw ArityError("'" + f.name + "' has arity " + std::to_string(f.arity) + " but got " +
                         std::to_string(args.size()) + " arguments");
    auto n = std::make_shared<Node>();
    n->tag = Tag::App;
    n->fns[f.name] = f.arity;
    for (const auto& e : args) {
        n->frees.insert(e.free_vars().begin(), e.free_vars().end());
        merge_fns(n->fns, e.fn_arities());
        n->loose = std::max(n->loose, e.node().loose);
        n->size += e.size();
    }
    n->fn = std::move(f);
    n->args = std::move(args);
    return Expr(std::move(n));
}

Expr Expr::diff_raw(Expr body, Expr at) {
    auto n = std::make_shared<Node>();
    n->tag = Tag::Diff;
    n->frees = body.free_vars();
    n->frees.insert(at.free_vars().begin(), at.free_vars().end());
    n->fns = body.fn_arities();
    merge_fns(n->fns, at.fn_arities());
    n->loose = std::max(body.node().loose - 1, at.node().loose);
    n->size = 1 + body.size() + at.size();
    n->a = std::move(body);
    n->b = std::move(at);
    return Expr(std::move(n));
}

Expr close_var(const Expr& e, const VarName& x, int depth) {
    const auto& n = e.node();
    if (!n.frees.count(x)) return e;
    switch (n.tag) {
        case Expr::Tag::Var: return Expr::bound(depth);
        case Expr::Tag::Sum: return Expr::sum(close_var(n.a, x, depth), close_var(n.b, x, depth));
        case Expr::Tag::Prod: return Expr::product(close_var(n.a, x, depth), close_var(n.b, x, depth));
        case Expr::Tag::App: {
            std::vector<Expr> args;
            args.reserve(n.args.size());
            for (const auto& a : n.args) args.push_back(close_var(a, x, depth));
            return Expr::apply(n.fn, std::move(args));
        }
        case Expr::Tag::Diff:
            return Expr::diff_raw(close_var(n.a, x, depth + 1), close_var(n.b, x, depth));
        default: return e;
    }
}

Expr open_var(const Expr& e, const VarName& x, int depth) {
    const auto& n = e.node();
    if (n.loose <= depth) return e;
    switch (n.tag) {
        case Expr::Tag::Bound: return n.index == depth ? Expr::variable(x) : e;
        case Expr::Tag::Sum: return Expr::sum(open_var(n.a, x, depth), open_var(n.b, x, depth));
        case Expr::Tag::Prod: return Expr::product(open_var(n.a, x, depth), open_var(n.b, x, depth));
        case Expr::Tag::App: {
            std::vector<Expr> args;
            args.reserve(n.args.size());
            for (const auto& a : n.args) args.push_back(open_var(a, x, depth));
            return Expr::apply(n.fn, std::move(args));
        }
        case Expr::Tag::Diff:
            return Expr::diff_raw(open_var(n.a, x, depth + 1), open_var(n.b, x, depth));
        default: return e;
    }
}

Expr Expr::make_pair_node(Tag tag, Expr a, Expr b) {
    auto n = std::make_shared<Node>();
    n->tag = tag;
    n->frees = a.free_vars();
    n->frees.insert(b.free_vars().begin(), b.free_vars().end());
    n->fns = a.fn_arities();
    merge_fns(n->fns, b.fn_arities());
    n->loose = std::max(a.node().loose, b.node().loose);
    n->size = 1 + a.size() + b.size();
    n->a = std::move(a);
    n->b = std::move(b);
    return Expr(std::move(n));
}

Expr Expr::pdiff(const VarName& x, const Expr& body, const Expr& at) {
    if (!is_identifier(x)) throw std::invalid_argument("bad variable name: '" + x + "'");
    if (body.node().loose != 0 || at.node().loose != 0)
        throw std::logic_error("pdiff on non-closed expression");
    return diff_raw(close_var(body, x, 0), at);
}

Expr Expr::pdiff_at_var(const VarName& x, const Expr& body) {
    return pdiff(x, body, Expr::variable(x));
}

Expr Expr::diff_open(const VarName& x) const {
    assert(tag() == Tag::Diff);
    const Expr& body = node().a;
    if (body.free_vars().count(x))
        throw std::logic_error("binder opened with a name already free in the body: " + x);
    return open_var(body, x, 0);
}

int Expr::compare(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return 0;
    const Node& x = a.node();
    const Node& y = b.node();
    if (x.tag != y.tag) return static_cast<int>(x.tag) < static_cast<int>(y.tag) ? -1 : 1;
    switch (x.tag) {
        case Tag::Const: {
            auto c = x.value <=> y.value;
            return c < 0 ? -1 : (c > 0 ? 1 : 0);
        }
        case Tag::Var: return x.var.compare(y.var) < 0 ? -1 : (x.var == y.var ? 0 : 1);
        case Tag::Bound: return x.index < y.index ? -1 : (x.index == y.index ? 0 : 1);
        case Tag::Sum:
        case Tag::Prod:
        case Tag::Diff: {
            if (int c = compare(x.a, y.a)) return c;
            return compare(x.b, y.b);
        }
        case Tag::App: {
            if (int c = x.fn.name.compare(y.fn.name)) return c < 0 ? -1 : 1;
            if (x.fn.arity != y.fn.arity) return x.fn.arity < y.fn.arity ? -1 : 1;
            for (size_t i = 0; i < x.args.size(); ++i)
                if (int c = compare(x.args[i], y.args[i])) return c;
            return 0;
        }
    }
    return 0;
}

std::set<VarName> free_vars(const Expr& e) { return e.free_vars(); }
std::set<FnVar> fn_vars(const Expr& e) { return e.fn_vars(); }
bool alpha_eq(const Expr& a, const Expr& b) { return a == b; }

Expr subst_vars(const Expr& e, const std::map<VarName, Expr>& bindings) {
    if (bindings.empty()) return e;
    for (const auto& [x, v] : bindings)
        if (v.node().loose != 0) throw std::logic_error("substitution range not closed");
    bool relevant = false;
    for (const auto& [x, v] : bindings)
        if (e.free_vars().count(x)) { relevant = true; break; }
    if (!relevant) return e;
    const auto& n = e.node();
    switch (n.tag) {
        case Expr::Tag::Var: {
            auto it = bindings.find(n.var);
            return it == bindings.end() ? e : it->second;
        }
        case Expr::Tag::Sum: return Expr::sum(subst_vars(n.a, bindings), subst_vars(n.b, bindings));
        case Expr::Tag::Prod: return Expr::product(subst_vars(n.a, bindings), subst_vars(n.b, bindings));
        case Expr::Tag::App: {
            std::vector<Expr> args;
            args.reserve(n.args.size());
            for (const auto& a : n.args) args.push_back(subst_vars(a, bindings));
            return Expr::apply(n.fn, std::move(args));
        }
        case Expr::Tag::Diff:
            // Bound occurrences are indices, free names in the ranges cannot
            // be captured, so the raw body can be rewritten in place.
            return Expr::diff_raw(subst_vars(n.a, bindings), subst_vars(n.b, bindings));
        default: return e;
    }
}

namespace {

Expr subst_fn_rec(const Expr& e, const std::map<std::string, Abstract>& bindings, NamePool& pool) {
    const auto& fns = e.fn_arities();
    bool relevant = false;
    for (const auto& [name, abs] : bindings)
        if (fns.count(name)) { relevant = true; break; }
    if (!relevant) return e;
    switch (e.tag()) {
        case Expr::Tag::Sum:
            return Expr::sum(subst_fn_rec(e.lhs(), bindings, pool), subst_fn_rec(e.rhs(), bindings, pool));
        case Expr::Tag::Prod:
            return Expr::product(subst_fn_rec(e.lhs(), bindings, pool), subst_fn_rec(e.rhs(), bindings, pool));
        case Expr::Tag::App: {
            std::vector<Expr> args;
            args.reserve(e.args().size());
            for (const auto& a : e.args()) args.push_back(subst_fn_rec(a, bindings, pool));
            auto it = bindings.find(e.fn().name);
            if (it == bindings.end()) return Expr::apply(e.fn(), std::move(args));
            return it->second.instantiate(args);
        }
        case Expr::Tag::Diff: {
            VarName x = pool.fresh();
            Expr body = subst_fn_rec(e.diff_open(x), bindings, pool);
            Expr at = subst_fn_rec(e.diff_at(), bindings, pool);
            return Expr::pdiff(x, body, at);
        }
        default: return e;
    }
}

}  // namespace

Expr subst_fnvars(const Expr& e, const std::map<std::string, Abstract>& bindings) {
    if (bindings.empty()) return e;
    for (const auto& [name, abs] : bindings) {
        auto it = e.fn_arities().find(name);
        if (it != e.fn_arities().end() && it->second != abs.arity())
            throw ArityError("abstract of arity " + std::to_string(abs.arity()) +
                             " substituted for '" + name + "' of arity " + std::to_string(it->second));
    }
    std::set<std::string> blocked = e.free_vars();
    for (const auto& [name, abs] : bindings) {
        auto fv = abs.body().free_vars();
        blocked.insert(fv.begin(), fv.end());
        blocked.insert(abs.params().begin(), abs.params().end());
    }
    NamePool pool("t", std::move(blocked));
    return subst_fn_rec(e, bindings, pool);
}

Abstract::Abstract(std::vector<VarName> params, Expr body)
    : params_(std::move(params)), body_(std::move(body)) {
    std::set<VarName> seen;
    for (const auto& p : params_) {
        if (!is_identifier(p)) throw std::invalid_argument("bad parameter name: '" + p + "'");
        if (!seen.insert(p).second)
            throw std::invalid_argument("duplicate abstract parameter: '" + p + "'");
    }
    if (!body_.valid()) throw std::logic_error("abstract with empty body");
}

Expr Abstract::instantiate(const std::vector<Expr>& args) const {
    if (args.size() != params_.size())
        throw ArityError("abstract of arity " + std::to_string(params_.size()) + " applied to " +
                         std::to_string(args.size()) + " arguments");
    std::map<VarName, Expr> m;
    for (size_t i = 0; i < args.size(); ++i) m.emplace(params_[i], args[i]);
    return subst_vars(body_, m);
}

std::set<VarName> Abstract::free_vars() const {
    std::set<VarName> out = body_.free_vars();
    for (const auto& p : params_) out.erase(p);
    return out;
}

bool Abstract::operator==(const Abstract& o) const {
    if (params_.size() != o.params_.size()) return false;
    std::set<std::string> blocked = body_.free_vars();
    auto fv = o.body_.free_vars();
    blocked.insert(fv.begin(), fv.end());
    NamePool pool("p", std::move(blocked));
    std::vector<Expr> canon;
    for (size_t i = 0; i < params_.size(); ++i) canon.push_back(Expr::variable(pool.fresh()));
    return instantiate(canon) == o.instantiate(canon);
}

void NamePool::block(const std::set<std::string>& names) {
    blocked_.insert(names.begin(), names.end());
}

VarName NamePool::fresh() {
    for (;;) {
        std::string cand = prefix_ + std::to_string(next_++);
        if (!blocked_.count(cand)) {
            blocked_.insert(cand);
            return cand;
        }
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

enum class Tok { Ident, Number, Plus, Minus, Star, Caret, LParen, RParen, LBracket, RBracket, Comma, Semi, End };

struct Token {
    Tok kind;
    std::string text;
    size_t pos;
};

class Lexer {
public:
    explicit Lexer(std::string_view s) : s_(s) { advance(); }
    const Token& peek() const { return cur_; }
    Token take() {
        Token t = cur_;
        advance();
        return t;
    }

private:
    void advance() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
        size_t start = i_;
        if (i_ >= s_.size()) { cur_ = {Tok::End, "", start}; return; }
        char c = s_[i_];
        if (std::isalpha(static_cast<unsigned char>(c))) {
            while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
            cur_ = {Tok::Ident, std::string(s_.substr(start, i_ - start)), start};
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            if (i_ < s_.size() && s_[i_] == '.')
                throw ParseError("decimal literals are not supported; use rationals like 3/2", i_);
            if (i_ + 1 < s_.size() && s_[i_] == '/' && std::isdigit(static_cast<unsigned char>(s_[i_ + 1]))) {
                ++i_;
                while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            }
            cur_ = {Tok::Number, std::string(s_.substr(start, i_ - start)), start};
            return;
        }
        ++i_;
        switch (c) {
            case '+': cur_ = {Tok::Plus, "+", start}; return;
            case '-': cur_ = {Tok::Minus, "-", start}; return;
            case '*': cur_ = {Tok::Star, "*", start}; return;
            case '^': cur_ = {Tok::Caret, "^", start}; return;
            case '(': cur_ = {Tok::LParen, "(", start}; return;
            case ')': cur_ = {Tok::RParen, ")", start}; return;
            case '[': cur_ = {Tok::LBracket, "[", start}; return;
            case ']': cur_ = {Tok::RBracket, "]", start}; return;
            case ',': cur_ = {Tok::Comma, ",", start}; return;
            case ';': cur_ = {Tok::Semi, ";", start}; return;
            default: throw ParseError(std::string("unexpected character '") + c + "'", start);
        }
    }

    std::string_view s_;
    size_t i_ = 0;
    Token cur_;
};

}  // namespace

class ExprParser {
public:
    ExprParser(std::string_view text, bool allow_caret) : lex_(text), caret_(allow_caret) {}

    Expr parse() {
        Expr e = expr();
        expect(Tok::End, "end of input");
        return e;
    }

private:
    Expr expr() {
        Expr e = term();
        for (;;) {
            if (lex_.peek().kind == Tok::Plus) {
                lex_.take();
                e = Expr::sum(e, term());
            } else if (lex_.peek().kind == Tok::Minus) {
                lex_.take();
                e = Expr::sum(e, Expr::product(Expr::constant(Rat(-1)), term()));
            } else {
                return e;
            }
        }
    }

    Expr term() {
        Expr e = factor();
        while (lex_.peek().kind == Tok::Star) {
            lex_.take();
            e = Expr::product(e, factor());
        }
        return e;
    }

    Expr factor() {
        const Token& t = lex_.peek();
        switch (t.kind) {
            case Tok::Minus: {
                lex_.take();
                if (lex_.peek().kind == Tok::Number) {
                    Token num = lex_.take();
                    Expr c = Expr::constant(-rat_token(num));
                    return maybe_power(c, num.pos);
                }
                return Expr::product(Expr::constant(Rat(-1)), factor());
            }
            case Tok::Number: {
                Token num = lex_.take();
                return maybe_power(Expr::constant(rat_token(num)), num.pos);
            }
            case Tok::LParen: {
                lex_.take();
                Expr e = expr();
                expect(Tok::RParen, "')'");
                return maybe_power(e, t.pos);
            }
            case Tok::Ident: {
                Token id = lex_.take();
                if (id.text == "D" && lex_.peek().kind == Tok::LBracket) return diff_form(id.pos);
                if (lex_.peek().kind == Tok::LParen) {
                    lex_.take();
                    std::vector<Expr> args;
                    if (lex_.peek().kind != Tok::RParen) {
                        args.push_back(expr());
                        while (lex_.peek().kind == Tok::Comma) {
                            lex_.take();
                            args.push_back(expr());
                        }
                    }
                    expect(Tok::RParen, "')'");
                    int arity = static_cast<int>(args.size());
                    return maybe_power(Expr::apply(FnVar(id.text, arity), std::move(args)), id.pos);
                }
                return maybe_power(Expr::variable(id.text), id.pos);
            }
            default:
                throw ParseError("expected an expression, found '" + t.text + "'", t.pos);
        }
    }

    Expr diff_form(size_t pos) {
        expect(Tok::LBracket, "'['");
        Token var = lex_.take();
        if (var.kind != Tok::Ident) throw ParseError("expected a variable in D[...]", var.pos);
        expect(Tok::RBracket, "']'");
        expect(Tok::LParen, "'('");
        Expr body = expr();
        Expr result;
        if (lex_.peek().kind == Tok::Semi) {
            lex_.take();
            Expr at = expr();
            result = Expr::pdiff(var.text, body, at);
        } else {
            result = Expr::pdiff_at_var(var.text, body);
        }
        expect(Tok::RParen, "')'");
        return maybe_power(result, pos);
    }

    static Rat rat_token(const Token& num) {
        try {
            return Rat::parse(num.text);
        } catch (const std::invalid_argument& ex) {
            throw ParseError(ex.what(), num.pos);
        }
    }

    Expr maybe_power(Expr base, size_t pos) {
        if (!caret_ || lex_.peek().kind != Tok::Caret) return base;
        lex_.take();
        Token num = lex_.take();
        if (num.kind != Tok::Number || num.text.find('/') != std::string::npos)
            throw ParseError("exponent must be a non-negative integer", num.pos);
        Rat k = Rat::parse(num.text);
        if (k.is_zero()) return Expr::constant(Rat(1));
        Expr e = base;
        for (Rat i(1); i < k; i += Rat(1)) e = Expr::product(e, base);
        (void)pos;
        return e;
    }

    void expect(Tok kind, const std::string& what) {
        const Token& t = lex_.peek();
        if (t.kind != kind) throw ParseError("expected " + what + ", found '" + (t.kind == Tok::End ? "end of input" : t.text) + "'", t.pos);
        if (kind != Tok::End) lex_.take();
    }

    Lexer lex_;
    bool caret_;
};

Expr parse_expr(std::string_view text, bool allow_caret) {
    return ExprParser(text, allow_caret).parse();
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

class ExprPrinter {
public:
    explicit ExprPrinter(const Expr& e) : avoid_(e.free_vars()) {}

    std::string print(const Expr& e) {
        std::string out;
        rec(e, 0, out);
        return out;
    }

private:
    VarName fresh_binder() {
        for (;;) {
            VarName cand = "v" + std::to_string(next_++);
            if (!avoid_.count(cand)) return cand;
        }
    }

    void rec(const Expr& e, int prec, std::string& out) {
        switch (e.tag()) {
            case Expr::Tag::Const: out += e.const_value().str(); return;
            case Expr::Tag::Var: out += e.var_name(); return;
            case Expr::Tag::Sum: {
                bool parens = prec > 0;
                if (parens) out += '(';
                rec(e.lhs(), 0, out);
                out += " + ";
                rec(e.rhs(), 1, out);
                if (parens) out += ')';
                return;
            }
            case Expr::Tag::Prod: {
                bool parens = prec > 1;
                if (parens) out += '(';
                rec(e.lhs(), 1, out);
                out += '*';
                rec(e.rhs(), 2, out);
                if (parens) out += ')';
                return;
            }
            case Expr::Tag::App: {
                out += e.fn().name;
                out += '(';
                for (size_t i = 0; i < e.args().size(); ++i) {
                    if (i) out += ", ";
                    rec(e.args()[i], 0, out);
                }
                out += ')';
                return;
            }
            case Expr::Tag::Diff: {
                VarName x = fresh_binder();
                out += "D[";
                out += x;
                out += "](";
                rec(e.diff_open(x), 0, out);
                out += "; ";
                rec(e.diff_at(), 0, out);
                out += ')';
                return;
            }
            case Expr::Tag::Bound:
                throw std::logic_error("printing a dangling bound variable");
        }
    }

    std::set<VarName> avoid_;
    int next_ = 0;
};

std::string print_expr(const Expr& e) { return ExprPrinter(e).print(e); }

std::string Expr::str() const { return print_expr(*this); }

}  // namespace pdiff
