#pragma once

#include "pdiff/rational.hpp"

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace pdiff {

/// Variable names are plain identifiers (letter, then letters/digits/underscore).
using VarName = std::string;

bool is_identifier(std::string_view s);

/// A function variable together with its fixed arity. Two occurrences with the
/// same name must carry the same arity wherever they meet in one expression.
struct FnVar {
    std::string name;
    int arity = 0;

    FnVar() = default;
    FnVar(std::string n, int a);

    bool operator==(const FnVar& o) const { return name == o.name && arity == o.arity; }
    auto operator<=>(const FnVar& o) const = default;
    std::string str() const { return name + "/" + std::to_string(arity); }
};

struct ParseError : std::runtime_error {
    size_t position;
    ParseError(std::string msg, size_t pos)
        : std::runtime_error(std::move(msg)), position(pos) {}
};

struct ArityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Expression of the theory: rational constants, variables, sums, products,
/// function-variable applications, and the binding form PDiff(x. body, at)
/// (derivative of body with respect to x, taken at `at`; x binds in body only).
///
/// Bound variables are stored as de Bruijn indices, so alpha-equivalent
/// expressions are structurally identical and operator== decides
/// alpha-equivalence. Values are immutable and freely shareable.
class Expr {
public:
    enum class Tag { Const, Var, Bound, Sum, Prod, App, Diff };

    Expr() = default;

    static Expr constant(Rat r);
    static Expr variable(VarName x);
    static Expr sum(Expr a, Expr b);
    static Expr product(Expr a, Expr b);
    static Expr apply(FnVar f, std::vector<Expr> args);
    /// PDiff(x. body, at): occurrences of x free in `body` become bound.
    static Expr pdiff(const VarName& x, const Expr& body, const Expr& at);
    /// The d/dx sugar: PDiff(x. body, x), evaluation point x left free.
    static Expr pdiff_at_var(const VarName& x, const Expr& body);

    bool valid() const { return node_ != nullptr; }
    Tag tag() const;

    const Rat& const_value() const;
    const VarName& var_name() const;
    const Expr& lhs() const;  // Sum/Prod
    const Expr& rhs() const;  // Sum/Prod
    const FnVar& fn() const;
    const std::vector<Expr>& args() const;
    const Expr& diff_at() const;
    /// Body of a Diff with the binder replaced by the free name x.
    /// x must not already occur free in the body.
    Expr diff_open(const VarName& x) const;

    const std::set<VarName>& free_vars() const;
    std::set<FnVar> fn_vars() const;
    const std::map<std::string, int>& fn_arities() const;
    int size() const;

    bool operator==(const Expr& o) const { return compare(*this, o) == 0; }
    /// Total order on expressions; consistent with alpha-equivalence.
    static int compare(const Expr& a, const Expr& b);

    std::string str() const;

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Expr bound(int index);
    static Expr diff_raw(Expr body, Expr at);
    static Expr make_pair_node(Tag tag, Expr a, Expr b);
    const Node& node() const;
    std::shared_ptr<const Node> node_;

    friend Expr close_var(const Expr&, const VarName&, int);
    friend Expr open_var(const Expr&, const VarName&, int);
    friend Expr subst_vars(const Expr&, const std::map<VarName, Expr>&);
    friend class ExprParser;
    friend class ExprPrinter;
};

/// An abstract (x0,...,x_{n-1}).body, the substitutable unit for function
/// variables. Parameters must be pairwise distinct; equality is
/// alpha-equivalence on the parameters.
class Abstract {
public:
    Abstract() = default;
    Abstract(std::vector<VarName> params, Expr body);

    int arity() const { return static_cast<int>(params_.size()); }
    const std::vector<VarName>& params() const { return params_; }
    const Expr& body() const { return body_; }

    /// body[args/params], simultaneous and capture-avoiding.
    Expr instantiate(const std::vector<Expr>& args) const;

    bool operator==(const Abstract& o) const;
    std::set<VarName> free_vars() const;

private:
    std::vector<VarName> params_;
    Expr body_;
};

std::set<VarName> free_vars(const Expr& e);
std::set<FnVar> fn_vars(const Expr& e);
bool alpha_eq(const Expr& a, const Expr& b);

/// Simultaneous capture-avoiding substitution of expressions for variables.
Expr subst_vars(const Expr& e, const std::map<VarName, Expr>& bindings);
/// Simultaneous substitution of abstracts for function variables.
/// Each abstract's parameter count must match its function variable's arity.
Expr subst_fnvars(const Expr& e, const std::map<std::string, Abstract>& bindings);

/// Parses the concrete grammar:
///   expr   := term (('+'|'-') term)*
///   term   := factor ('*' factor)*
///   factor := rational | var | fnvar '(' [expr (',' expr)*] ')'
///           | 'D' '[' var ']' '(' expr [';' expr] ')' | '(' expr ')' | '-' factor
/// D[x](e) abbreviates D[x](e; x). Binary '-' builds a + -1*b.
/// `allow_caret` additionally accepts f^k power sugar (used for polynomial
/// and environment files, not part of the core grammar).
Expr parse_expr(std::string_view text, bool allow_caret = false);

/// Deterministic printing; binders are renamed v0, v1, ... in traversal order
/// so alpha-equivalent expressions print identically, and
/// parse_expr(print) == the original expression.
std::string print_expr(const Expr& e);

/// Hands out identifiers "<prefix>0", "<prefix>1", ... skipping a blocked set.
class NamePool {
public:
    explicit NamePool(std::string prefix, std::set<std::string> blocked = {})
        : prefix_(std::move(prefix)), blocked_(std::move(blocked)) {}
    void block(const std::set<std::string>& names);
    VarName fresh();

private:
    std::string prefix_;
    std::set<std::string> blocked_;
    int next_ = 0;
};

}  // namespace pdiff
