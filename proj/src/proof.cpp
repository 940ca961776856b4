#include "pdiff/proof.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <optional>
#include <sstream>

namespace pdiff {

// ---------------------------------------------------------------------------
// Axioms
// ---------------------------------------------------------------------------

namespace {

Equation parse_axiom(const char* lhs, const char* rhs) {
    return Equation{parse_expr(lhs), parse_expr(rhs)};
}

}  // namespace

Equation axiom_equation(const AxiomId& id) {
    if (const auto* ring = std::get_if<RingAxiom>(&id)) {
        switch (*ring) {
            case RingAxiom::AddAssoc: return parse_axiom("(x + y) + z", "x + (y + z)");
            case RingAxiom::AddComm: return parse_axiom("x + y", "y + x");
            case RingAxiom::AddZero: return parse_axiom("x + 0", "x");
            case RingAxiom::AddInverse: return parse_axiom("x + -1*x", "0");
            case RingAxiom::MulAssoc: return parse_axiom("(x*y)*z", "x*(y*z)");
            case RingAxiom::MulComm: return parse_axiom("x*y", "y*x");
            case RingAxiom::MulOne: return parse_axiom("x*1", "x");
            case RingAxiom::DistribLeft: return parse_axiom("x*(y + z)", "x*y + x*z");
            case RingAxiom::DistribRight: return parse_axiom("(x + y)*z", "x*z + y*z");
        }
    }
    if (const auto* diff = std::get_if<DiffAxiom>(&id)) {
        switch (*diff) {
            case DiffAxiom::DiffAdd: return parse_axiom("D[x](x + y)", "1");
            case DiffAxiom::DiffMul: return parse_axiom("D[x](y*x)", "y");
            case DiffAxiom::Chain2:
                return parse_axiom(
                    "D[x](f(g0(x), g1(x)))",
                    "D[x0](f(x0, g1(x)); g0(x)) * D[x](g0(x)) + D[x1](f(g0(x), x1); g1(x)) * D[x](g1(x))");
            case DiffAxiom::Commute:
                return parse_axiom("D[y](D[x](f(x, y)))", "D[x](D[y](f(x, y)))");
        }
    }
    const auto& table = std::get<ConstTable>(id);
    if (table.op != '+' && table.op != '*')
        throw std::invalid_argument("constant table operator must be '+' or '*'");
    Rat expect = table.op == '+' ? table.a + table.b : table.a * table.b;
    if (!(expect == table.result))
        throw std::invalid_argument("constant table entry " + table.a.str() + " " + table.op + " " +
                                    table.b.str() + " = " + table.result.str() + " is false");
    Expr lhs = table.op == '+' ? Expr::sum(Expr::constant(table.a), Expr::constant(table.b))
                               : Expr::product(Expr::constant(table.a), Expr::constant(table.b));
    return Equation{lhs, Expr::constant(table.result)};
}

std::string axiom_name(const AxiomId& id) {
    if (const auto* ring = std::get_if<RingAxiom>(&id)) {
        switch (*ring) {
            case RingAxiom::AddAssoc: return "add-assoc";
            case RingAxiom::AddComm: return "add-comm";
            case RingAxiom::AddZero: return "add-zero";
            case RingAxiom::AddInverse: return "add-inverse";
            case RingAxiom::MulAssoc: return "mul-assoc";
            case RingAxiom::MulComm: return "mul-comm";
            case RingAxiom::MulOne: return "mul-one";
            case RingAxiom::DistribLeft: return "distrib-left";
            case RingAxiom::DistribRight: return "distrib-right";
        }
    }
    if (const auto* diff = std::get_if<DiffAxiom>(&id)) {
        switch (*diff) {
            case DiffAxiom::DiffAdd: return "diff-add";
            case DiffAxiom::DiffMul: return "diff-mul";
            case DiffAxiom::Chain2: return "chain2";
            case DiffAxiom::Commute: return "commute";
        }
    }
    return "const-table";
}

// ---------------------------------------------------------------------------
// Proof nodes
// ---------------------------------------------------------------------------

struct Proof::Node {
    Rule rule;
    AxiomId axiom{RingAxiom::AddAssoc};
    Expr expr;  // Refl
    std::vector<Proof> kids;
    FnVar fn;        // CongApp
    VarName binder;  // CongPDiff
    std::vector<std::pair<VarName, Expr>> var_bindings;
    std::vector<std::pair<FnVar, Abstract>> fn_bindings;
};

const Proof::Node& Proof::node() const {
    if (!node_) throw std::logic_error("use of empty Proof");
    return *node_;
}

Proof::Rule Proof::rule() const { return node().rule; }
const AxiomId& Proof::axiom_id() const { return node().axiom; }
const Expr& Proof::refl_expr() const { return node().expr; }
const std::vector<Proof>& Proof::children() const { return node().kids; }
const FnVar& Proof::app_fn() const { return node().fn; }
const VarName& Proof::binder() const { return node().binder; }
const std::vector<std::pair<VarName, Expr>>& Proof::var_bindings() const { return node().var_bindings; }
const std::vector<std::pair<FnVar, Abstract>>& Proof::fn_bindings() const { return node().fn_bindings; }

Proof Proof::axiom(AxiomId id) {
    auto n = std::make_shared<Node>();
    n->rule = Rule::Axiom;
    n->axiom = std::move(id);
    return Proof(std::move(n));
}

Proof Proof::refl(Expr e) {
    auto n = std::make_shared<Node>();
    n->rule = Rule::Refl;
    n->expr = std::move(e);
    return Proof(std::move(n));
}

Proof Proof::make(Rule rule, std::vector<Proof> kids) {
    auto n = std::make_shared<Node>();
    n->rule = rule;
    n->kids = std::move(kids);
    return Proof(std::move(n));
}

Proof Proof::sym(Proof p) { return make(Rule::Sym, {std::move(p)}); }
Proof Proof::trans(Proof a, Proof b) { return make(Rule::Trans, {std::move(a), std::move(b)}); }
Proof Proof::cong_sum(Proof a, Proof b) { return make(Rule::CongSum, {std::move(a), std::move(b)}); }
Proof Proof::cong_prod(Proof a, Proof b) { return make(Rule::CongProd, {std::move(a), std::move(b)}); }

Proof Proof::cong_app(FnVar f, std::vector<Proof> args) {
    auto n = std::make_shared<Node>();
    n->rule = Rule::CongApp;
    n->fn = std::move(f);
    n->kids = std::move(args);
    return Proof(std::move(n));
}

Proof Proof::cong_pdiff(VarName binder, Proof body, Proof at) {
    auto n = std::make_shared<Node>();
    n->rule = Rule::CongPDiff;
    n->binder = std::move(binder);
    n->kids = {std::move(body), std::move(at)};
    return Proof(std::move(n));
}

Proof Proof::subst_var(Proof p, std::vector<std::pair<VarName, Expr>> bindings) {
    auto n = std::make_shared<Node>();
    n->rule = Rule::SubstVar;
    n->kids = {std::move(p)};
    std::sort(bindings.begin(), bindings.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    n->var_bindings = std::move(bindings);
    return Proof(std::move(n));
}

Proof Proof::subst_fn(Proof p, std::vector<std::pair<FnVar, Abstract>> bindings) {
    auto n = std::make_shared<Node>();
    n->rule = Rule::SubstFn;
    n->kids = {std::move(p)};
    std::sort(bindings.begin(), bindings.end(),
              [](const auto& a, const auto& b) { return a.first.name < b.first.name; });
    n->fn_bindings = std::move(bindings);
    return Proof(std::move(n));
}

bool Proof::operator==(const Proof& o) const {
    if (node_ == o.node_) return true;
    const Node& a = node();
    const Node& b = o.node();
    if (a.rule != b.rule) return false;
    switch (a.rule) {
        case Rule::Axiom: return a.axiom == b.axiom;
        case Rule::Refl: return a.expr == b.expr;
        case Rule::CongApp:
            if (!(a.fn == b.fn)) return false;
            break;
        case Rule::CongPDiff:
            if (a.binder != b.binder) return false;
            break;
        case Rule::SubstVar:
            if (a.var_bindings != b.var_bindings) return false;
            break;
        case Rule::SubstFn:
            if (a.fn_bindings != b.fn_bindings) return false;
            break;
        default: break;
    }
    if (a.kids.size() != b.kids.size()) return false;
    for (size_t i = 0; i < a.kids.size(); ++i)
        if (!(a.kids[i] == b.kids[i])) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Checking
// ---------------------------------------------------------------------------

namespace {

Equation check_rec(const Proof& p, bool rtc, const std::string& path) {
    auto fail = [&](const std::string& msg) -> CheckError { return CheckError(path, msg); };
    try {
        switch (p.rule()) {
            case Proof::Rule::Axiom: {
                if (rtc) {
                    if (const auto* d = std::get_if<DiffAxiom>(&p.axiom_id())) {
                        if (*d != DiffAxiom::Commute)
                            throw fail("axiom " + axiom_name(p.axiom_id()) +
                                       " is outside the RTC fragment");
                    }
                }
                return axiom_equation(p.axiom_id());
            }
            case Proof::Rule::Refl: {
                Expr e = p.refl_expr();
                return {e, e};
            }
            case Proof::Rule::Sym: {
                Equation k = check_rec(p.children()[0], rtc, path + ".sym");
                return {k.rhs, k.lhs};
            }
            case Proof::Rule::Trans: {
                Equation k0 = check_rec(p.children()[0], rtc, path + ".trans[0]");
                Equation k1 = check_rec(p.children()[1], rtc, path + ".trans[1]");
                if (!(k0.rhs == k1.lhs))
                    throw fail("trans middle terms differ: '" + k0.rhs.str() + "' vs '" +
                               k1.lhs.str() + "'");
                return {k0.lhs, k1.rhs};
            }
            case Proof::Rule::CongSum: {
                Equation k0 = check_rec(p.children()[0], rtc, path + ".cong-sum[0]");
                Equation k1 = check_rec(p.children()[1], rtc, path + ".cong-sum[1]");
                return {Expr::sum(k0.lhs, k1.lhs), Expr::sum(k0.rhs, k1.rhs)};
            }
            case Proof::Rule::CongProd: {
                Equation k0 = check_rec(p.children()[0], rtc, path + ".cong-prod[0]");
                Equation k1 = check_rec(p.children()[1], rtc, path + ".cong-prod[1]");
                return {Expr::product(k0.lhs, k1.lhs), Expr::product(k0.rhs, k1.rhs)};
            }
            case Proof::Rule::CongApp: {
                std::vector<Expr> ls, rs;
                for (size_t i = 0; i < p.children().size(); ++i) {
                    Equation k = check_rec(p.children()[i], rtc,
                                           path + ".cong-app[" + std::to_string(i) + "]");
                    ls.push_back(k.lhs);
                    rs.push_back(k.rhs);
                }
                return {Expr::apply(p.app_fn(), std::move(ls)), Expr::apply(p.app_fn(), std::move(rs))};
            }
            case Proof::Rule::CongPDiff: {
                Equation kb = check_rec(p.children()[0], rtc, path + ".cong-pdiff[0]");
                Equation ka = check_rec(p.children()[1], rtc, path + ".cong-pdiff[1]");
                const VarName& x = p.binder();
                return {Expr::pdiff(x, kb.lhs, ka.lhs), Expr::pdiff(x, kb.rhs, ka.rhs)};
            }
            case Proof::Rule::SubstVar: {
                Equation k = check_rec(p.children()[0], rtc, path + ".subst-var");
                std::map<VarName, Expr> m;
                for (const auto& [x, e] : p.var_bindings()) {
                    if (!m.emplace(x, e).second) throw fail("duplicate binding for variable " + x);
                }
                return {subst_vars(k.lhs, m), subst_vars(k.rhs, m)};
            }
            case Proof::Rule::SubstFn: {
                Equation k = check_rec(p.children()[0], rtc, path + ".subst-fn");
                std::map<std::string, Abstract> m;
                for (const auto& [f, abs] : p.fn_bindings()) {
                    if (abs.arity() != f.arity)
                        throw fail("abstract arity " + std::to_string(abs.arity()) +
                                   " does not match " + f.str());
                    if (!m.emplace(f.name, abs).second)
                        throw fail("duplicate binding for function variable " + f.name);
                }
                return {subst_fnvars(k.lhs, m), subst_fnvars(k.rhs, m)};
            }
        }
        throw fail("malformed proof node");
    } catch (const CheckError&) {
        throw;
    } catch (const std::exception& ex) {
        throw fail(ex.what());
    }
}

}  // namespace

Equation check(const Proof& p, bool rtc) { return check_rec(p, rtc, "root"); }

// ---------------------------------------------------------------------------
// S-expression reading and writing
// ---------------------------------------------------------------------------

namespace {

struct SExpr {
    // Exactly one of: atom text, quoted string, or children.
    enum class Kind { Atom, String, List } kind;
    std::string text;
    std::vector<SExpr> items;
    size_t pos = 0;
};

class SExprReader {
public:
    explicit SExprReader(std::string_view s) : s_(s) {}

    SExpr read_all() {
        SExpr e = read();
        skip_ws();
        if (i_ < s_.size()) throw ParseError("trailing input after certificate", i_);
        return e;
    }

private:
    void skip_ws() {
        for (;;) {
            while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
            if (i_ < s_.size() && s_[i_] == ';') {  // comment to end of line
                while (i_ < s_.size() && s_[i_] != '\n') ++i_;
                continue;
            }
            return;
        }
    }

    SExpr read() {
        skip_ws();
        if (i_ >= s_.size()) throw ParseError("unexpected end of certificate", i_);
        size_t start = i_;
        if (s_[i_] == '(') {
            ++i_;
            SExpr list{SExpr::Kind::List, "", {}, start};
            for (;;) {
                skip_ws();
                if (i_ >= s_.size()) throw ParseError("unterminated '('", start);
                if (s_[i_] == ')') {
                    ++i_;
                    return list;
                }
                list.items.push_back(read());
            }
        }
        if (s_[i_] == '"') {
            ++i_;
            std::string text;
            while (i_ < s_.size() && s_[i_] != '"') {
                if (s_[i_] == '\\' && i_ + 1 < s_.size()) ++i_;
                text += s_[i_++];
            }
            if (i_ >= s_.size()) throw ParseError("unterminated string", start);
            ++i_;
            return SExpr{SExpr::Kind::String, std::move(text), {}, start};
        }
        std::string text;
        while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) && s_[i_] != '(' &&
               s_[i_] != ')' && s_[i_] != '"')
            text += s_[i_++];
        if (text.empty()) throw ParseError("unexpected character in certificate", start);
        return SExpr{SExpr::Kind::Atom, std::move(text), {}, start};
    }

    std::string_view s_;
    size_t i_ = 0;
};

const SExpr& item(const SExpr& e, size_t i, const char* what) {
    if (e.kind != SExpr::Kind::List || e.items.size() <= i)
        throw ParseError(std::string("expected ") + what, e.pos);
    return e.items[i];
}

std::string atom(const SExpr& e, const char* what) {
    if (e.kind != SExpr::Kind::Atom) throw ParseError(std::string("expected ") + what, e.pos);
    return e.text;
}

Expr quoted_expr(const SExpr& e) {
    if (e.kind != SExpr::Kind::String) throw ParseError("expected a quoted expression", e.pos);
    return parse_expr(e.text);
}

FnVar parse_fnvar_token(const std::string& text, size_t pos) {
    size_t slash = text.find('/');
    if (slash == std::string::npos)
        throw ParseError("expected name/arity, found '" + text + "'", pos);
    try {
        return FnVar(text.substr(0, slash), std::stoi(text.substr(slash + 1)));
    } catch (const std::exception& ex) {
        throw ParseError(std::string("bad function variable: ") + ex.what(), pos);
    }
}

std::optional<AxiomId> axiom_by_name(const std::string& name) {
    static const std::pair<const char*, AxiomId> table[] = {
        {"add-assoc", RingAxiom::AddAssoc},   {"add-comm", RingAxiom::AddComm},
        {"add-zero", RingAxiom::AddZero},     {"add-inverse", RingAxiom::AddInverse},
        {"mul-assoc", RingAxiom::MulAssoc},   {"mul-comm", RingAxiom::MulComm},
        {"mul-one", RingAxiom::MulOne},       {"distrib-left", RingAxiom::DistribLeft},
        {"distrib-right", RingAxiom::DistribRight},
        {"diff-add", DiffAxiom::DiffAdd},     {"diff-mul", DiffAxiom::DiffMul},
        {"chain2", DiffAxiom::Chain2},        {"commute", DiffAxiom::Commute},
    };
    for (const auto& [n, id] : table)
        if (name == n) return id;
    return std::nullopt;
}

Proof translate(const SExpr& e) {
    if (e.kind != SExpr::Kind::List || e.items.empty())
        throw ParseError("expected a certificate node '(...)'", e.pos);
    std::string head = atom(item(e, 0, "node head"), "node head");
    auto arity = [&](size_t n, const char* what) {
        if (e.items.size() != n + 1)
            throw ParseError(std::string(what) + " takes " + std::to_string(n) + " arguments", e.pos);
    };
    if (head == "axiom") {
        arity(1, "axiom");
        std::string name = atom(item(e, 1, "axiom name"), "axiom name");
        auto id = axiom_by_name(name);
        if (!id) throw ParseError("unknown axiom '" + name + "'", e.pos);
        return Proof::axiom(*id);
    }
    if (head == "const-table") {
        arity(4, "const-table");
        std::string op = atom(item(e, 1, "operator"), "operator");
        if (op != "+" && op != "*") throw ParseError("const-table operator must be + or *", e.pos);
        try {
            return Proof::axiom(ConstTable{op[0], Rat::parse(atom(item(e, 2, "rational"), "rational")),
                                           Rat::parse(atom(item(e, 3, "rational"), "rational")),
                                           Rat::parse(atom(item(e, 4, "rational"), "rational"))});
        } catch (const std::invalid_argument& ex) {
            throw ParseError(ex.what(), e.pos);
        }
    }
    if (head == "refl") {
        arity(1, "refl");
        return Proof::refl(quoted_expr(item(e, 1, "expression")));
    }
    if (head == "sym") {
        arity(1, "sym");
        return Proof::sym(translate(item(e, 1, "proof")));
    }
    if (head == "trans" || head == "cong-sum" || head == "cong-prod") {
        arity(2, head.c_str());
        Proof a = translate(item(e, 1, "proof"));
        Proof b = translate(item(e, 2, "proof"));
        if (head == "trans") return Proof::trans(std::move(a), std::move(b));
        if (head == "cong-sum") return Proof::cong_sum(std::move(a), std::move(b));
        return Proof::cong_prod(std::move(a), std::move(b));
    }
    if (head == "cong-app") {
        if (e.items.size() < 2) throw ParseError("cong-app takes a function variable and proofs", e.pos);
        FnVar f = parse_fnvar_token(atom(item(e, 1, "name/arity"), "name/arity"), e.pos);
        std::vector<Proof> kids;
        for (size_t i = 2; i < e.items.size(); ++i) kids.push_back(translate(e.items[i]));
        if (static_cast<int>(kids.size()) != f.arity)
            throw ParseError("cong-app for " + f.str() + " needs " + std::to_string(f.arity) + " proofs", e.pos);
        return Proof::cong_app(std::move(f), std::move(kids));
    }
    if (head == "cong-pdiff") {
        arity(3, "cong-pdiff");
        std::string x = atom(item(e, 1, "binder"), "binder");
        if (!is_identifier(x)) throw ParseError("bad binder name '" + x + "'", e.pos);
        return Proof::cong_pdiff(x, translate(item(e, 2, "proof")), translate(item(e, 3, "proof")));
    }
    if (head == "subst-var") {
        if (e.items.size() < 2) throw ParseError("subst-var takes a proof and bindings", e.pos);
        Proof base = translate(item(e, 1, "proof"));
        std::vector<std::pair<VarName, Expr>> bs;
        for (size_t i = 2; i < e.items.size(); ++i) {
            const SExpr& b = e.items[i];
            if (b.kind != SExpr::Kind::List || b.items.size() != 2)
                throw ParseError("binding must be (var \"expr\")", b.pos);
            std::string x = atom(b.items[0], "variable");
            if (!is_identifier(x)) throw ParseError("bad variable name '" + x + "'", b.pos);
            bs.emplace_back(x, quoted_expr(b.items[1]));
        }
        return Proof::subst_var(std::move(base), std::move(bs));
    }
    if (head == "subst-fn") {
        if (e.items.size() < 2) throw ParseError("subst-fn takes a proof and bindings", e.pos);
        Proof base = translate(item(e, 1, "proof"));
        std::vector<std::pair<FnVar, Abstract>> bs;
        for (size_t i = 2; i < e.items.size(); ++i) {
            const SExpr& b = e.items[i];
            if (b.kind != SExpr::Kind::List || b.items.size() != 3)
                throw ParseError("binding must be (f/n (params) \"expr\")", b.pos);
            FnVar f = parse_fnvar_token(atom(b.items[0], "name/arity"), b.pos);
            const SExpr& ps = b.items[1];
            if (ps.kind != SExpr::Kind::List) throw ParseError("expected parameter list", ps.pos);
            std::vector<VarName> params;
            for (const auto& pitem : ps.items) params.push_back(atom(pitem, "parameter"));
            try {
                bs.emplace_back(f, Abstract(std::move(params), quoted_expr(b.items[2])));
            } catch (const std::invalid_argument& ex) {
                throw ParseError(ex.what(), b.pos);
            }
        }
        return Proof::subst_fn(std::move(base), std::move(bs));
    }
    throw ParseError("unknown certificate node '" + head + "'", e.pos);
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

void print_rec(const Proof& p, int indent, std::string& out) {
    auto pad = [&]() { out.append(static_cast<size_t>(indent) * 2, ' '); };
    pad();
    switch (p.rule()) {
        case Proof::Rule::Axiom: {
            if (const auto* t = std::get_if<ConstTable>(&p.axiom_id())) {
                out += "(const-table " + std::string(1, t->op) + " " + t->a.str() + " " + t->b.str() +
                       " " + t->result.str() + ")";
            } else {
                out += "(axiom " + axiom_name(p.axiom_id()) + ")";
            }
            return;
        }
        case Proof::Rule::Refl:
            out += "(refl " + quote(print_expr(p.refl_expr())) + ")";
            return;
        case Proof::Rule::Sym:
        case Proof::Rule::Trans:
        case Proof::Rule::CongSum:
        case Proof::Rule::CongProd: {
            const char* head = p.rule() == Proof::Rule::Sym     ? "sym"
                               : p.rule() == Proof::Rule::Trans ? "trans"
                               : p.rule() == Proof::Rule::CongSum ? "cong-sum"
                                                                  : "cong-prod";
            out += "(";
            out += head;
            for (const auto& k : p.children()) {
                out += "\n";
                print_rec(k, indent + 1, out);
            }
            out += ")";
            return;
        }
        case Proof::Rule::CongApp: {
            out += "(cong-app " + p.app_fn().str();
            for (const auto& k : p.children()) {
                out += "\n";
                print_rec(k, indent + 1, out);
            }
            out += ")";
            return;
        }
        case Proof::Rule::CongPDiff: {
            out += "(cong-pdiff " + p.binder();
            for (const auto& k : p.children()) {
                out += "\n";
                print_rec(k, indent + 1, out);
            }
            out += ")";
            return;
        }
        case Proof::Rule::SubstVar: {
            out += "(subst-var\n";
            print_rec(p.children()[0], indent + 1, out);
            for (const auto& [x, e] : p.var_bindings()) {
                out += "\n";
                pad();
                out += "  (" + x + " " + quote(print_expr(e)) + ")";
            }
            out += ")";
            return;
        }
        case Proof::Rule::SubstFn: {
            out += "(subst-fn\n";
            print_rec(p.children()[0], indent + 1, out);
            for (const auto& [f, abs] : p.fn_bindings()) {
                out += "\n";
                pad();
                out += "  (" + f.str() + " (";
                for (size_t i = 0; i < abs.params().size(); ++i) {
                    if (i) out += ' ';
                    out += abs.params()[i];
                }
                out += ") " + quote(print_expr(abs.body())) + ")";
            }
            out += ")";
            return;
        }
    }
}

}  // namespace

Proof parse_proof(std::string_view text) {
    SExprReader reader(text);
    return translate(reader.read_all());
}

std::string print_proof(const Proof& p) {
    std::string out;
    print_rec(p, 0, out);
    out += "\n";
    return out;
}

}  // namespace pdiff
