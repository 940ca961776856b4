#pragma once

#include "pdiff/rational.hpp"
#include "pdiff/term.hpp"

#include <map>
#include <set>
#include <string>

namespace pdiff {

struct NotPolynomialError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MissingVariableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Monomial exponents: variable -> positive exponent. No zero entries.
using ExpVec = std::map<VarName, int>;

/// Exact multivariate polynomial over the rationals in canonical sparse form:
/// a map from monomials to nonzero coefficients. The representation is unique,
/// so operator== coincides with ring equality (~). Immutable in spirit: all
/// operations return new values.
class Poly {
public:
    Poly() = default;

    static Poly constant(Rat r);
    static Poly variable(const VarName& x);

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator-() const;
    bool operator==(const Poly& o) const { return terms_ == o.terms_; }

    bool is_zero() const { return terms_.empty(); }
    /// Present iff the polynomial is a single constant (or zero).
    bool is_constant() const;
    Rat constant_value() const;  // requires is_constant()
    /// True when every coefficient is a non-negative integer.
    bool is_natural() const;

    /// Total degree; the zero polynomial has degree -1.
    int total_degree() const;
    std::set<VarName> variables() const;
    const std::map<ExpVec, Rat>& terms() const { return terms_; }

    /// Exact evaluation. The point must cover every variable.
    Rat eval(const std::map<VarName, Rat>& point) const;
    /// Formal partial derivative.
    Poly derive(const VarName& x) const;
    /// Simultaneous composition; unmapped variables stay themselves.
    Poly subst(const std::map<VarName, Poly>& bindings) const;
    /// Repeated derivative along a sequence of variables.
    Poly derive_seq(const std::vector<VarName>& xs) const;

    /// Normal form of an expression with no function variables and no
    /// differentiation; rejects anything else, naming the offending subterm.
    static Poly from_expr(const Expr& e);
    Expr to_expr() const;

    /// Monomials in graded-lex order, e.g. "3*x^2*y + -1/2"; "0" when zero.
    std::string str() const;
    /// Expression grammar extended with '^' powers.
    static Poly parse(std::string_view text);

private:
    void add_term(ExpVec m, Rat c);
    std::map<ExpVec, Rat> terms_;
};

}  // namespace pdiff
