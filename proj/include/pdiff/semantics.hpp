#pragma once

#include "pdiff/poly.hpp"
#include "pdiff/term.hpp"

#include <map>
#include <string_view>

namespace pdiff {

struct UnboundFunctionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Total variable environment: finite map with default value 0.
class VarEnv {
public:
    VarEnv() = default;
    explicit VarEnv(std::map<VarName, Rat> values) : values_(std::move(values)) {}

    Rat get(const VarName& x) const;
    void set(const VarName& x, Rat value) { values_[x] = std::move(value); }
    const std::map<VarName, Rat>& entries() const { return values_; }
    /// True when every stored value is a natural number.
    bool is_natural() const;

private:
    std::map<VarName, Rat> values_;
};

/// Function environment: function variables to polynomials over the canonical
/// parameters x0..x_{n-1}; unbound function variables act as the zero
/// polynomial. Entries stored for test oracles (generic coefficients) may
/// mention additional variables; regular entries may not.
class FnEnv {
public:
    FnEnv() = default;

    /// Insists on parameters x0..x_{n-1} only.
    void set(const FnVar& f, Poly p);
    /// Permits extra (coefficient) variables in the polynomial.
    void set_symbolic(const FnVar& f, Poly p);

    const Poly* find(const FnVar& f) const;
    Poly get_or_zero(const FnVar& f) const;
    const std::map<std::string, std::pair<int, Poly>>& entries() const { return entries_; }
    bool is_natural() const;

private:
    void store(const FnVar& f, Poly p);
    std::map<std::string, std::pair<int, Poly>> entries_;  // name -> (arity, poly)
};

VarName fn_param(int i);  // "x0", "x1", ...

/// The denotation of e under φ and ρ, computed exactly. Differentiation is
/// evaluated symbolically: the body becomes a polynomial, is derived
/// formally, and is then evaluated at the point.
Rat eval(const Expr& e, const FnEnv& fenv, const VarEnv& venv);

/// The polynomial (in the free variables of e) that eval computes pointwise.
/// Every function variable of e must be bound.
Poly eval_sym(const Expr& e, const FnEnv& fenv);

/// Assigns each function variable of e a fully generic polynomial of total
/// degree <= degree whose coefficients are fresh variables. Two expressions
/// that are provably equal get ring-equal symbolic evaluations under this
/// environment; a difference refutes provability.
FnEnv generic_env(const Expr& e, int degree);

/// One binding per line: "f/2 := x0*x1 + 3" or "x := 5/2". Blank lines and
/// lines starting with '#' are skipped.
std::pair<FnEnv, VarEnv> parse_env(std::string_view text);
std::string print_env(const FnEnv& fenv, const VarEnv& venv);

}  // namespace pdiff
