#pragma once

#include "pdiff/canon.hpp"
#include "pdiff/poly.hpp"
#include "pdiff/semantics.hpp"
#include "pdiff/term.hpp"

#include <optional>
#include <vector>

namespace pdiff {

struct InconsistentProblemError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
/// Raised only when a consistent problem fails to solve within the Severi
/// degree bound, which indicates an implementation bug, not bad input.
struct InfeasibleError : std::logic_error {
    using std::logic_error::logic_error;
};
struct SeparationPreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct HermiteCondition {
    DerivIndex m;  // over the coordinate positions [0, dim)
    Rat value;
};

struct HermiteNode {
    std::vector<Rat> point;  // length dim
    std::vector<HermiteCondition> conditions;
};

/// Multivariate Hermite interpolation problem of dimension d >= 0: prescribed
/// values for derivatives D_m(h) at finitely many nodes. Consistent when no
/// node carries two permutation-equal derivative orders with different
/// values, and nodes are pairwise distinct.
struct HermiteProblem {
    int dim = 0;
    std::vector<HermiteNode> nodes;

    void validate() const;  // throws InconsistentProblemError
    int max_order() const;
    /// Severi's guarantee: solvable by a polynomial of degree
    /// k(max|m| + 1) - 1 where k is the node count.
    int degree_bound() const;
};

/// Exact solution over x0..x_{d-1} of total degree within the Severi bound;
/// free coefficients are set to zero.
Poly hermite_solve(const HermiteProblem& prob);

/// A natural-number point at which pairwise ring-unequal polynomials take
/// pairwise distinct values. Points are enumerated in non-decreasing
/// max-coordinate shells, lexicographically within a shell with variables in
/// alphabetical order, and the first separating point is returned. The result
/// covers exactly the variables of the inputs.
std::map<VarName, Rat> separate_polys(const std::vector<Poly>& ps);

/// Environments distinguishing the inequivalent members of a finite set of
/// canonical forms (the set is saturated internally). Every canonical form c
/// in the saturated set evaluates to its class value r_c.
std::pair<FnEnv, VarEnv> build_separation(const std::vector<Canon>& set);

/// Natural-number counterexample: natural-coefficient polynomials for the
/// function variables and natural values for the variables under which the
/// two sides evaluate to distinct constants.
struct Counterexample {
    std::vector<std::pair<FnVar, Poly>> fn_assign;
    std::vector<std::pair<VarName, Rat>> var_assign;
    Rat lhs_value;
    Rat rhs_value;
};

Counterexample naturalize(const Expr& e1, const Expr& e2, const FnEnv& fenv, const VarEnv& venv);

/// Empty exactly when the equation is a theorem; otherwise a validated
/// natural-number counterexample.
std::optional<Counterexample> counterexample(const Expr& e1, const Expr& e2);

struct EnumOutcome {
    std::optional<Counterexample> witness;
    bool budget_exhausted = false;
};

/// Brute-force search through natural-number environments by increasing
/// degree/coefficient/point bounds; an independent oracle for counterexample.
/// The budget caps the number of candidate environments evaluated.
EnumOutcome enum_counterexample(const Expr& e1, const Expr& e2, long budget);

}  // namespace pdiff
